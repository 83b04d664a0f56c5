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

#ifndef DPSWARM_PRIVACY_HPP_
#define DPSWARM_PRIVACY_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "dpswarm/objective.hpp"
#include "dpswarm/rng.hpp"
#include "dpswarm/types.hpp"

namespace dpswarm {

// Per-selection budget: (epsilon / r) / m, the per-iteration share split
// evenly over the population. Throws ConfigError for non-positive arguments.
double allocate(double epsilon, int iterations, int population);

struct LedgerEntry {
  int iteration;
  int individual;
  double epsilon_spent;
  int chosen_index;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// Append-only record of every exponential-mechanism invocation of a run.
//
// Capacity is exactly iterations * population selections of
// allocate(epsilon, iterations, population) each; record() refuses any
// selection that would exceed it.
class BudgetLedger {
 public:
  BudgetLedger(double total_epsilon, int iterations, int population);

  double total_epsilon() const { return total_epsilon_; }
  int iterations() const { return iterations_; }
  int population() const { return population_; }
  double per_iteration() const { return total_epsilon_ / iterations_; }
  double per_selection() const { return per_selection_; }

  double consumed() const { return consumed_; }
  const std::vector<LedgerEntry>& log() const { return log_; }
  std::size_t capacity() const {
    return static_cast<std::size_t>(iterations_) * population_;
  }

  // Throws BudgetExhaustedError if spending `epsilon` now would overdraw.
  void check(double epsilon) const;

  // check() followed by appending the entry.
  void record(int iteration, int individual, double epsilon, int chosen_index);

  // CSV: iteration,individual,epsilon_spent,chosen_index
  void write_csv(std::ostream& out) const;

 private:
  double total_epsilon_;
  int iterations_;
  int population_;
  double per_selection_;
  double consumed_ = 0.0;
  std::vector<LedgerEntry> log_;
};

struct SelectionOutcome {
  int chosen_index;
  double prob_of_index0;
  double delta_q_used;
};

// Probability that the two-candidate exponential mechanism returns index 0:
// 1 / (1 + exp(eps_m * (q1 - q0) / (2 * delta_q))), evaluated as a logistic
// that never overflows.
double selection_probability(double q0, double q1, double delta_q,
                             double eps_m);

// Draws one uniform u from `rng` and picks index 0 iff u < prob_of_index0.
// Throws DomainError for non-finite scores or negative eps_m.
SelectionOutcome exp_mech_select(double q0, double q1,
                                 const SensitivityBound& delta_q, double eps_m,
                                 RngStream& rng);

struct SelectionPolicy {
  SensitivityMode mode = SensitivityMode::kPerPair;
  Bounds bounds;
};

// Private personal-best update.
//
// For each individual i in order, scores population[i] (index 0) and
// pbest[i] (index 1) on `data`, bounds the sensitivity over that pair (or
// globally), charges eps_r / m to the ledger and keeps the mechanism's pick.
// The ledger is checked before every selection; on BudgetExhaustedError the
// caller's pbest is untouched.
std::vector<PositionVector> dp_update_pbest(
    const Dataset& data, std::span<const PositionVector> population,
    std::span<const PositionVector> pbest, double eps_r, RngStream& rng,
    BudgetLedger& ledger, int iteration, const SelectionPolicy& policy = {});

// Non-private counterpart: population[i] replaces pbest[i] only when its
// fitness is strictly lower.
std::vector<PositionVector> greedy_update_pbest(
    const Dataset& data, std::span<const PositionVector> population,
    std::span<const PositionVector> pbest);

}  // namespace dpswarm

#endif  // DPSWARM_PRIVACY_HPP_
