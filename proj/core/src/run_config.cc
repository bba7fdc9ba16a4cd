// Copyright 2026 The spdadapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spdadapt/run_config.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "spdadapt/errors.h"
#include "spdadapt/matrix_io.h"

namespace spdadapt {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ToDouble(const std::string& v) {
  if (v == "inf" || v == "+inf") return INFINITY;
  size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

int ToInt(const std::string& v) {
  size_t used = 0;
  const long x = std::stol(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return static_cast<int>(x);
}

std::uint64_t ToU64(const std::string& v) {
  if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
  size_t used = 0;
  const unsigned long long x = std::stoull(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

std::string JoinDoubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += FormatDouble(v[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"task",
       [](RunConfig& c, const std::string& v) {
         if (v == "blobs") {
           c.task = Task::kBlobs;
         } else if (v == "denoise") {
           c.task = Task::kDenoise;
         } else {
           throw DomainError("task must be blobs or denoise");
         }
       }},
      {"out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
      {"seeds",
       [](RunConfig& c, const std::string& v) {
         c.seeds.clear();
         for (const auto& s : SplitList(v)) c.seeds.push_back(ToU64(s));
         if (c.seeds.empty()) throw DomainError("seeds list is empty");
       }},
      {"blobs.num_classes",
       [](RunConfig& c, const std::string& v) { c.blobs.num_classes = ToInt(v); }},
      {"blobs.samples_per_class",
       [](RunConfig& c, const std::string& v) {
         c.blobs.samples_per_class = ToInt(v);
       }},
      {"blobs.input_dim",
       [](RunConfig& c, const std::string& v) { c.blobs.input_dim = ToInt(v); }},
      {"blobs.radius",
       [](RunConfig& c, const std::string& v) { c.blobs.radius = ToDouble(v); }},
      {"blobs.cov_scale",
       [](RunConfig& c, const std::string& v) {
         c.blobs.cov_scale = ToDouble(v);
       }},
      {"blobs.rotation",
       [](RunConfig& c, const std::string& v) {
         c.blobs.target_rotation = ToDouble(v);
       }},
      {"blobs.translation",
       [](RunConfig& c, const std::string& v) {
         c.blobs.target_translation.clear();
         for (const auto& s : SplitList(v)) {
           c.blobs.target_translation.push_back(ToDouble(s));
         }
       }},
      {"denoise.signal_length",
       [](RunConfig& c, const std::string& v) {
         c.denoise.signal_length = ToInt(v);
       }},
      {"denoise.samples_per_domain",
       [](RunConfig& c, const std::string& v) {
         c.denoise.samples_per_domain = ToInt(v);
       }},
      {"denoise.noise_mean",
       [](RunConfig& c, const std::string& v) {
         c.denoise.noise_mean = ToDouble(v);
       }},
      {"denoise.noise_std",
       [](RunConfig& c, const std::string& v) {
         c.denoise.noise_std = ToDouble(v);
       }},
      {"model.encoder",
       [](RunConfig& c, const std::string& v) { c.model.encoder = ParseLayers(v); }},
      {"model.head",
       [](RunConfig& c, const std::string& v) {
         if (v == "classifier") {
           c.model.head.kind = HeadKind::kClassifier;
         } else if (v == "decoder") {
           c.model.head.kind = HeadKind::kDecoder;
         } else {
           throw DomainError("model.head must be classifier or decoder");
         }
       }},
      {"model.decoder",
       [](RunConfig& c, const std::string& v) {
         c.model.head.hidden = v == "none" ? std::vector<LayerSpec>{}
                                           : ParseLayers(v);
       }},
      {"train.dist_kind",
       [](RunConfig& c, const std::string& v) {
         c.train.dist_kind = ParseDistKind(v);
       }},
      {"train.beta",
       [](RunConfig& c, const std::string& v) { c.train.beta = ToDouble(v); }},
      {"train.eta",
       [](RunConfig& c, const std::string& v) { c.train.eta = ToDouble(v); }},
      {"train.epochs",
       [](RunConfig& c, const std::string& v) { c.train.epochs = ToInt(v); }},
      {"train.batch_source",
       [](RunConfig& c, const std::string& v) {
         c.train.batch_source = ToInt(v);
       }},
      {"train.batch_target",
       [](RunConfig& c, const std::string& v) {
         c.train.batch_target = ToInt(v);
       }},
      {"train.learn_rate",
       [](RunConfig& c, const std::string& v) {
         c.train.learn_rate = ToDouble(v);
       }},
      {"train.seed",
       [](RunConfig& c, const std::string& v) { c.train.seed = ToU64(v); }},
      {"train.optimizer",
       [](RunConfig& c, const std::string& v) {
         c.train.optimizer = ParseOptimizer(v);
       }},
      {"sweep.kinds",
       [](RunConfig& c, const std::string& v) {
         c.sweep_kinds.clear();
         for (const auto& s : SplitList(v)) {
           c.sweep_kinds.push_back(ParseDistKind(s));
         }
       }},
  };
  return kSetters;
}

}  // namespace

const char* TaskName(Task t) {
  return t == Task::kBlobs ? "blobs" : "denoise";
}

std::vector<LayerSpec> ParseLayers(const std::string& text) {
  std::vector<LayerSpec> layers;
  for (const auto& item : SplitList(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw DomainError("layer '" + item + "' must be <width>:<activation>");
    }
    LayerSpec l;
    try {
      l.width = ToInt(Trim(item.substr(0, colon)));
    } catch (const std::exception&) {
      throw DomainError("bad layer width in '" + item + "'");
    }
    l.activation = ParseActivation(Trim(item.substr(colon + 1)));
    layers.push_back(l);
  }
  if (layers.empty()) throw DomainError("empty layer list");
  return layers;
}

std::string FormatLayers(const std::vector<LayerSpec>& layers) {
  if (layers.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(layers[i].width) + ":" +
           ActivationName(layers[i].activation);
  }
  return out;
}

RunConfig RunConfig::Defaults(Task task) {
  RunConfig c;
  c.task = task;
  c.train.eta = 1e-8;
  c.train.optimizer = OptimizerKind::kAdam;
  c.train.batch_source = 128;
  c.train.batch_target = 128;
  if (task == Task::kBlobs) {
    c.blobs.target_rotation = std::numbers::pi / 3.0;
    c.blobs.target_translation = {1.0, -1.0, 2.0, 2.0};
    c.model.encoder = {{16, Activation::kRelu}, {2, Activation::kTanh}};
    c.model.head.kind = HeadKind::kClassifier;
    c.train.epochs = 30;
    c.train.learn_rate = 1e-2;
    c.train.beta = 1.0;
  } else {
    c.model.encoder = {{32, Activation::kRelu}, {2, Activation::kIdentity}};
    c.model.head.kind = HeadKind::kDecoder;
    c.model.head.hidden = {{32, Activation::kRelu}};
    c.train.epochs = 30;
    c.train.learn_rate = 2e-3;
    c.train.beta = 0.1;
  }
  c.seeds = {0};
  return c;
}

void RunConfig::Finalize() {
  if (task == Task::kBlobs) {
    blobs.Validate();
    model.input_dim = blobs.input_dim;
    model.head.output_dim = blobs.num_classes;
    if (model.head.kind != HeadKind::kClassifier) {
      throw DomainError("task blobs needs model.head = classifier");
    }
  } else {
    denoise.Validate();
    model.input_dim = denoise.signal_length;
    model.head.output_dim = denoise.signal_length;
    if (model.head.kind != HeadKind::kDecoder) {
      throw DomainError("task denoise needs model.head = decoder");
    }
  }
  model.Validate();
  if (seeds.empty()) seeds = {train.seed};
  if (sweep_kinds.empty()) sweep_kinds = {train.dist_kind};
}

RunConfig ParseRunConfig(std::istream& in, const std::string& source) {
  // The task line picks the defaults, so collect everything first.
  std::vector<std::pair<int, std::pair<std::string, std::string>>> entries;
  std::set<std::string> seen;
  Task task = Task::kBlobs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (Setters().count(key) == 0) {
      throw ParseError(source, line_no, "unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ParseError(source, line_no, "duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw ParseError(source, line_no, "missing value for '" + key + "'");
    }
    if (key == "task") {
      if (value == "denoise") {
        task = Task::kDenoise;
      } else if (value != "blobs") {
        throw ParseError(source, line_no, "task must be blobs or denoise");
      }
    }
    entries.push_back({line_no, {key, value}});
  }

  RunConfig cfg = RunConfig::Defaults(task);
  for (const auto& [at, kv] : entries) {
    try {
      Setters().at(kv.first)(cfg, kv.second);
    } catch (const std::exception& e) {
      throw ParseError(source, at,
                       "bad value for '" + kv.first + "': " + e.what());
    }
  }
  try {
    cfg.Finalize();
  } catch (const Error& e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

RunConfig ParseRunConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open config file");
  return ParseRunConfig(in, path);
}

std::string FormatRunConfig(const RunConfig& cfg) {
  std::ostringstream o;
  o << "task = " << TaskName(cfg.task) << "\n";
  o << "out_dir = " << cfg.out_dir << "\n";
  o << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    o << (i > 0 ? ", " : "") << cfg.seeds[i];
  }
  o << "\n";
  if (cfg.task == Task::kBlobs) {
    const BlobsConfig& b = cfg.blobs;
    o << "blobs.num_classes = " << b.num_classes << "\n"
      << "blobs.samples_per_class = " << b.samples_per_class << "\n"
      << "blobs.input_dim = " << b.input_dim << "\n"
      << "blobs.radius = " << FormatDouble(b.radius) << "\n"
      << "blobs.cov_scale = " << FormatDouble(b.cov_scale) << "\n"
      << "blobs.rotation = " << FormatDouble(b.target_rotation) << "\n";
    if (!b.target_translation.empty()) {
      o << "blobs.translation = " << JoinDoubles(b.target_translation) << "\n";
    }
  } else {
    const DenoiseConfig& d = cfg.denoise;
    o << "denoise.signal_length = " << d.signal_length << "\n"
      << "denoise.samples_per_domain = " << d.samples_per_domain << "\n"
      << "denoise.noise_mean = " << FormatDouble(d.noise_mean) << "\n"
      << "denoise.noise_std = " << FormatDouble(d.noise_std) << "\n";
  }
  o << "model.encoder = " << FormatLayers(cfg.model.encoder) << "\n"
    << "model.head = "
    << (cfg.model.head.kind == HeadKind::kClassifier ? "classifier"
                                                     : "decoder")
    << "\n"
    << "model.decoder = " << FormatLayers(cfg.model.head.hidden) << "\n";
  const TrainConfig& t = cfg.train;
  o << "train.dist_kind = " << DistKindName(t.dist_kind) << "\n"
    << "train.beta = " << FormatDouble(t.beta) << "\n"
    << "train.eta = " << (std::isinf(t.eta) ? "inf" : FormatDouble(t.eta))
    << "\n"
    << "train.epochs = " << t.epochs << "\n"
    << "train.batch_source = " << t.batch_source << "\n"
    << "train.batch_target = " << t.batch_target << "\n"
    << "train.learn_rate = " << FormatDouble(t.learn_rate) << "\n"
    << "train.seed = " << t.seed << "\n"
    << "train.optimizer = " << OptimizerName(t.optimizer) << "\n";
  if (!cfg.sweep_kinds.empty()) {
    o << "sweep.kinds = ";
    for (std::size_t i = 0; i < cfg.sweep_kinds.size(); ++i) {
      o << (i > 0 ? ", " : "") << DistKindName(cfg.sweep_kinds[i]);
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace spdadapt
