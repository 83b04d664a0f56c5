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

#include "dpswarm/privacy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "dpswarm/errors.hpp"

namespace dpswarm {

double allocate(double epsilon, int iterations, int population) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw ConfigError("privacy budget epsilon must be finite and positive");
  }
  if (iterations < 1 || population < 1) {
    throw ConfigError("iterations and population must be >= 1");
  }
  const double eps_r = epsilon / iterations;
  return eps_r / population;
}

BudgetLedger::BudgetLedger(double total_epsilon, int iterations,
                           int population)
    : total_epsilon_(total_epsilon),
      iterations_(iterations),
      population_(population),
      per_selection_(allocate(total_epsilon, iterations, population)) {}

void BudgetLedger::check(double epsilon) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("ledger: epsilon spent must be finite and >= 0");
  }
  if (log_.size() >= capacity()) {
    throw BudgetExhaustedError(
        "privacy budget exhausted: all " + std::to_string(capacity()) +
        " selections of epsilon " + std::to_string(total_epsilon_) +
        " already spent");
  }
  const double ulp =
      std::nextafter(total_epsilon_, std::numeric_limits<double>::infinity()) -
      total_epsilon_;
  const double slack = static_cast<double>(capacity()) * ulp;
  if (consumed_ + epsilon > total_epsilon_ + slack) {
    throw BudgetExhaustedError("privacy budget exhausted: spending " +
                               std::to_string(epsilon) + " would exceed " +
                               std::to_string(total_epsilon_));
  }
}

void BudgetLedger::record(int iteration, int individual, double epsilon,
                          int chosen_index) {
  check(epsilon);
  log_.push_back({iteration, individual, epsilon, chosen_index});
  consumed_ += epsilon;
}

void BudgetLedger::write_csv(std::ostream& out) const {
  out << "iteration,individual,epsilon_spent,chosen_index\n";
  const auto old = out.precision(17);
  for (const LedgerEntry& e : log_) {
    out << e.iteration << ',' << e.individual << ',' << e.epsilon_spent << ','
        << e.chosen_index << '\n';
  }
  out.precision(old);
}

double selection_probability(double q0, double q1, double delta_q,
                             double eps_m) {
  const double z = eps_m * (q0 - q1) / (2.0 * delta_q);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

SelectionOutcome exp_mech_select(double q0, double q1,
                                 const SensitivityBound& delta_q, double eps_m,
                                 RngStream& rng) {
  if (!std::isfinite(q0) || !std::isfinite(q1)) {
    throw DomainError("exponential mechanism: scores must be finite");
  }
  if (!std::isfinite(eps_m) || eps_m < 0.0) {
    throw DomainError("exponential mechanism: eps_m must be finite and >= 0");
  }
  const double p0 = selection_probability(q0, q1, delta_q.value(), eps_m);
  const double u = rng.uniform();
  return {u < p0 ? 0 : 1, p0, delta_q.value()};
}

std::vector<PositionVector> dp_update_pbest(
    const Dataset& data, std::span<const PositionVector> population,
    std::span<const PositionVector> pbest, double eps_r, RngStream& rng,
    BudgetLedger& ledger, int iteration, const SelectionPolicy& policy) {
  if (population.size() != pbest.size()) {
    throw DomainError("dp_update_pbest: population has " +
                      std::to_string(population.size()) + " entries, pbest " +
                      std::to_string(pbest.size()));
  }
  if (!std::isfinite(eps_r) || eps_r <= 0.0) {
    throw DomainError("dp_update_pbest: eps_r must be finite and positive");
  }
  const std::size_t m = population.size();
  const double eps_m = eps_r / static_cast<double>(m);
  std::vector<PositionVector> out(pbest.begin(), pbest.end());
  for (std::size_t i = 0; i < m; ++i) {
    ledger.check(eps_m);
    const std::array<PositionVector, 2> pair = {population[i], pbest[i]};
    const SensitivityBound dq = sensitivity_bound(
        pair, data.a(), policy.mode, policy.bounds, data.d());
    const double q0 = score(data, population[i]);
    const double q1 = score(data, pbest[i]);
    const SelectionOutcome o = exp_mech_select(q0, q1, dq, eps_m, rng);
    ledger.record(iteration, static_cast<int>(i), eps_m, o.chosen_index);
    if (o.chosen_index == 0) out[i] = population[i];
  }
  return out;
}

std::vector<PositionVector> greedy_update_pbest(
    const Dataset& data, std::span<const PositionVector> population,
    std::span<const PositionVector> pbest) {
  if (population.size() != pbest.size()) {
    throw DomainError("greedy_update_pbest: length mismatch");
  }
  std::vector<PositionVector> out(pbest.begin(), pbest.end());
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (mse_objective(data, population[i]) < mse_objective(data, pbest[i])) {
      out[i] = population[i];
    }
  }
  return out;
}

}  // namespace dpswarm
