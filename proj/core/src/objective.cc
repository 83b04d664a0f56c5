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

#include "dpswarm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

double dot(std::span<const double> x, const PositionVector& w) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

void check_dim(const Dataset& data, const PositionVector& w) {
  if (w.size() != data.d()) {
    throw DomainError("weight vector has " + std::to_string(w.size()) +
                      " coordinates, dataset has " + std::to_string(data.d()) +
                      " features");
  }
}

}  // namespace

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> xs,
                 std::vector<double> ys, double a)
    : n_(n), d_(d), xs_(std::move(xs)), ys_(std::move(ys)), a_(a) {
  if (n_ == 0 || d_ == 0) throw DomainError("dataset: n and d must be >= 1");
  if (!std::isfinite(a_) || a_ <= 0.0) {
    throw DomainError("dataset: attribute bound a must be positive");
  }
  if (xs_.size() != n_ * d_ || ys_.size() != n_) {
    throw DomainError("dataset: storage does not match n x d");
  }
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || std::abs(xs_[i]) > a_) {
      throw DomainError("dataset: feature at row " + std::to_string(i / d_) +
                        " column " + std::to_string(i % d_) +
                        " is outside [-a, a]");
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!std::isfinite(ys_[i]) || std::abs(ys_[i]) > a_) {
      throw DomainError("dataset: target at row " + std::to_string(i) +
                        " is outside [-a, a]");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(rows.size() * d_);
  ys.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n_) throw DomainError("dataset: subset row out of range");
    auto x = row(r);
    xs.insert(xs.end(), x.begin(), x.end());
    ys.push_back(ys_[r]);
  }
  return Dataset(rows.size(), d_, std::move(xs), std::move(ys), a_);
}

SensitivityBound::SensitivityBound(double delta_q) : delta_q_(delta_q) {
  if (!std::isfinite(delta_q) || delta_q <= 0.0) {
    throw DomainError("sensitivity bound must be finite and positive");
  }
}

FitnessValue mse_objective(const Dataset& data, const PositionVector& w) {
  check_dim(data, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double r = dot(data.row(i), w) - data.y(i);
    sum += r * r;
  }
  return sum / static_cast<double>(data.n());
}

double score(const Dataset& data, const PositionVector& w) {
  return -mse_objective(data, w);
}

SensitivityBound sensitivity_bound(std::span<const PositionVector> candidates,
                                   double a, SensitivityMode mode,
                                   const Bounds& bounds, std::size_t d_dim) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw DomainError("sensitivity: a must be positive");
  }
  if (mode == SensitivityMode::kGlobal) {
    if (d_dim == 0) throw DomainError("sensitivity: d must be >= 1");
    const double s = static_cast<double>(d_dim) * a * bounds.w_max() + a;
    return SensitivityBound(s * s);
  }
  if (candidates.empty()) {
    throw DomainError("sensitivity: per-pair mode needs candidates");
  }
  double worst = 0.0;
  for (const PositionVector& w : candidates) {
    double l1 = 0.0;
    for (double c : w) l1 += std::abs(c);
    const double s = a * l1 + a;
    worst = std::max(worst, s * s);
  }
  return SensitivityBound(worst);
}

std::vector<double> predict(const Dataset& data, const PositionVector& w) {
  check_dim(data, w);
  std::vector<double> out(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) out[i] = dot(data.row(i), w);
  return out;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw DomainError("rmse: inputs must be non-empty and of equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double r = predicted[i] - actual[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace dpswarm
