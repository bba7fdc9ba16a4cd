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

// Counter-based pseudo-random numbers.
//
// The i-th 64-bit output of stream `s` under seed `k` is
//
//   mix(key + (i + 1) * 0x9E3779B97F4A7C15),  key = mix(k ^ mix(s + 0xD1B54A32D192ED03))
//
// where mix is the SplitMix64 finalizer. Every draw is therefore a pure
// function of (seed, stream, counter); there is no hidden state beyond the
// counter. Normals use the Box-Muller transform.

#ifndef SPDADAPT_RANDOM_H_
#define SPDADAPT_RANDOM_H_

#include <cstdint>
#include <vector>

namespace spdadapt {

std::uint64_t SplitMix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi);
  // Standard normal.
  double Normal();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  // Fisher-Yates.
  void Shuffle(std::vector<int>& v);
  std::vector<int> Permutation(int n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Named stream ids, so independent consumers of one seed never overlap.
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kSourceBatches = 2;
inline constexpr std::uint64_t kTargetBatches = 3;
inline constexpr std::uint64_t kBlobsSource = 10;
inline constexpr std::uint64_t kBlobsTarget = 11;
inline constexpr std::uint64_t kBlobsTargetTest = 12;
inline constexpr std::uint64_t kBlobsLayout = 13;
inline constexpr std::uint64_t kDenoiseSource = 20;
inline constexpr std::uint64_t kDenoiseTarget = 21;
inline constexpr std::uint64_t kDenoiseNoise = 22;
inline constexpr std::uint64_t kDirichlet = 30;
inline constexpr std::uint64_t kGradcheck = 40;
}  // namespace streams

}  // namespace spdadapt

#endif  // SPDADAPT_RANDOM_H_
