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

#ifndef DPSWARM_OBJECTIVE_HPP_
#define DPSWARM_OBJECTIVE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dpswarm/types.hpp"

namespace dpswarm {

// Regression records with every feature and target bounded by |v| <= a.
// Features are stored row-major.
class Dataset {
 public:
  // Throws DomainError when shapes disagree, n or d is zero, a value is
  // non-finite, or a value lies outside [-a, a].
  Dataset(std::size_t n, std::size_t d, std::vector<double> xs,
          std::vector<double> ys, double a = 1.0);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  double a() const { return a_; }

  std::span<const double> row(std::size_t i) const {
    return {xs_.data() + i * d_, d_};
  }
  double y(std::size_t i) const { return ys_[i]; }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }

  // Rows selected by index, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  double a_;
};

// Mean squared error; always >= 0.
using FitnessValue = double;

// Upper bound on |q(D,w) - q(D',w)| over neighboring datasets.
class SensitivityBound {
 public:
  // Throws DomainError unless delta_q is finite and positive.
  explicit SensitivityBound(double delta_q);
  double value() const { return delta_q_; }

 private:
  double delta_q_;
};

enum class SensitivityMode {
  kPerPair,  // max over the candidates actually being compared
  kGlobal,   // worst case over the whole bounds box
};

// (1/n) * sum_i (w.x_i - y_i)^2. Throws DomainError on dimension mismatch.
FitnessValue mse_objective(const Dataset& data, const PositionVector& w);

// Exponential-mechanism score, -mse_objective(data, w).
double score(const Dataset& data, const PositionVector& w);

// Sensitivity of the score under bounded (replace-one) neighbors.
//
// Per-pair: max over candidates of (a * sum_j |w_j| + a)^2.
// Global:   (d_dim * a * w_max + a)^2.
// Throws DomainError for an empty candidate set in per-pair mode or a
// non-positive a.
SensitivityBound sensitivity_bound(std::span<const PositionVector> candidates,
                                   double a, SensitivityMode mode,
                                   const Bounds& bounds, std::size_t d_dim);

// Predictions w.x_i for every row.
std::vector<double> predict(const Dataset& data, const PositionVector& w);

// sqrt(mean((predicted - actual)^2)). Throws DomainError for empty or
// mismatched inputs.
double rmse(std::span<const double> predicted, std::span<const double> actual);

}  // namespace dpswarm

#endif  // DPSWARM_OBJECTIVE_HPP_
