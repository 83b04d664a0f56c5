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

#ifndef DPSWARM_TYPES_HPP_
#define DPSWARM_TYPES_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dpswarm {

// A candidate solution: one real weight per feature.
class PositionVector {
 public:
  PositionVector() = default;
  explicit PositionVector(std::size_t dim, double fill = 0.0)
      : coords_(dim, fill) {}
  PositionVector(std::initializer_list<double> coords) : coords_(coords) {}
  explicit PositionVector(std::vector<double> coords)
      : coords_(std::move(coords)) {}

  std::size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }

  double& operator[](std::size_t i) { return coords_[i]; }
  double operator[](std::size_t i) const { return coords_[i]; }

  auto begin() { return coords_.begin(); }
  auto end() { return coords_.end(); }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  std::span<const double> coords() const { return coords_; }
  std::span<double> coords() { return coords_; }

  friend bool operator==(const PositionVector&,
                         const PositionVector&) = default;

 private:
  std::vector<double> coords_;
};

// Symmetric search box [-w_max, w_max] applied to every coordinate.
class Bounds {
 public:
  Bounds() = default;
  // Throws ConfigError unless w_max is finite and positive.
  explicit Bounds(double w_max);

  double w_max() const { return w_max_; }
  bool contains(const PositionVector& p) const;

  friend bool operator==(const Bounds&, const Bounds&) = default;

 private:
  double w_max_ = 1.0;
};

// Projects every coordinate onto [-w_max, w_max]. Throws DomainError naming
// the first non-finite coordinate.
PositionVector clamp(const PositionVector& p, const Bounds& b);

}  // namespace dpswarm

#endif  // DPSWARM_TYPES_HPP_
