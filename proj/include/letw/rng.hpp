// Copyright 2026 The LETW Authors.
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

#ifndef LETW_RNG_HPP_
#define LETW_RNG_HPP_

#include <cstdint>
#include <random>

namespace letw {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic generator for one simulation substream.
//
// Stream splitting rule: the engine for (seed, stream) is mt19937_64 seeded
// with splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9e3779b97f4a7c15)).
// Simulated session i always uses stream i, so runs that differ only in
// policy see the same draws for the same session. Variates are derived from
// raw 64-bit outputs here rather than through <random> distributions, whose
// algorithms are implementation-defined.
class SessionRng {
 public:
  SessionRng(std::uint64_t seed, std::uint64_t stream);

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() noexcept;
  // Unit-rate exponential; consumes exactly one uniform.
  double exponential() noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace letw

#endif  // LETW_RNG_HPP_
