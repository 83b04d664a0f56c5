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

#include "dpswarm/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpswarm/errors.hpp"

namespace dpswarm {

Bounds::Bounds(double w_max) : w_max_(w_max) {
  if (!std::isfinite(w_max) || w_max <= 0.0) {
    throw ConfigError("bounds: w_max must be finite and positive, got " +
                      std::to_string(w_max));
  }
}

bool Bounds::contains(const PositionVector& p) const {
  return std::all_of(p.begin(), p.end(), [this](double c) {
    return c >= -w_max_ && c <= w_max_;
  });
}

PositionVector clamp(const PositionVector& p, const Bounds& b) {
  PositionVector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) {
      throw DomainError("clamp: coordinate " + std::to_string(i) +
                        " is not finite");
    }
    out[i] = std::min(std::max(p[i], -b.w_max()), b.w_max());
  }
  return out;
}

}  // namespace dpswarm
