// Copyright 2026 The dpswarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSWARM_RNG_HPP_
#define DPSWARM_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace dpswarm {

// Stream labels recognized by fork_stream.
inline constexpr std::string_view kDynamicsStream = "dynamics";
inline constexpr std::string_view kMechanismStream = "mechanism";
inline constexpr std::string_view kDataStream = "data";

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

// Mixes a master seed with an ordered list of integers into a child seed.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> parts);

// A sequential, seeded source of random draws.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard (the 10000th output of a default-seeded engine is
// 9981545732273789042), so draws are reproducible across platforms and can be
// matched by any other MT19937-64 implementation. The engine seed is
// splitmix64(seed ^ splitmix64(fnv1a64(label))).
//
// All derived draws are built from raw 64-bit outputs with fixed arithmetic;
// no std::*_distribution is used because their algorithms are
// implementation-defined. cursor() counts raw outputs consumed.
class RngStream {
 public:
  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double uniform();

  // lo + (hi - lo) * uniform().
  double uniform(double lo, double hi);

  // Uniform integer in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; consumes exactly two raw draws.
  double gaussian();

  std::uint64_t cursor() const { return cursor_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

 private:
  friend RngStream fork_stream(std::uint64_t seed, std::string_view label);
  RngStream(std::uint64_t seed, std::string_view label);

  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t cursor_ = 0;
};

// Returns the stream for (seed, label). Throws ConfigError for labels other
// than "dynamics", "mechanism" and "data".
RngStream fork_stream(std::uint64_t seed, std::string_view label);

}  // namespace dpswarm

#endif  // DPSWARM_RNG_HPP_
