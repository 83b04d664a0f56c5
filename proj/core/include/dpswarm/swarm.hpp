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

#ifndef DPSWARM_SWARM_HPP_
#define DPSWARM_SWARM_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpswarm/objective.hpp"
#include "dpswarm/rng.hpp"
#include "dpswarm/types.hpp"

namespace dpswarm {

enum class BehaviorKind { kPSO, kCPSO, kSPSO, kGWO, kWOA, kSOA };

std::string_view to_string(BehaviorKind kind);
// Accepts "PSO", "cpso", ... (case-insensitive). Throws ConfigError.
BehaviorKind parse_behavior(std::string_view name);

// True for PSO, CPSO and SPSO, which carry velocities.
bool uses_velocity(BehaviorKind kind);

struct BehaviorSpec {
  BehaviorKind kind = BehaviorKind::kPSO;
  double pso_c1 = 2.0;
  double pso_c2 = 2.0;
  // Velocity limit as a fraction of the box width 2*w_max; 0 disables it.
  double pso_vmax_fraction = 0.2;
  double gwo_a0 = 2.0;
  double woa_b = 1.0;
  double soa_fc = 2.0;

  static BehaviorSpec defaults(BehaviorKind kind) {
    BehaviorSpec s;
    s.kind = kind;
    return s;
  }
};

// Population held by the outsourcer.
//
// `pbest_fitness` is empty when fitness values are not disclosed. `leaders`
// holds indices of the best pbest entries in ascending fitness order, as
// needed by GWO; it may be left empty when pbest_fitness is present.
struct SwarmState {
  std::vector<PositionVector> positions;
  std::vector<PositionVector> velocities;
  std::vector<PositionVector> pbest;
  std::vector<FitnessValue> pbest_fitness;
  std::vector<std::size_t> leaders;
  PositionVector gbest;
  FitnessValue gbest_fitness = 0.0;
  int iteration = 0;

  std::size_t size() const { return positions.size(); }
};

// Uniform positions in the box, zero velocities for the PSO family,
// pbest := positions, gbest := positions[0] placeholder. Draws m*d uniforms
// from `rng`, individual-major.
SwarmState init_swarm(std::size_t population, std::size_t dim,
                      BehaviorKind kind, const Bounds& bounds, RngStream& rng);

// Linear control schedule start * (1 - t / r_total); exact at both ends.
double linear_schedule(double start, int t, int r_total);

// One coordinate of the PSO-family velocity update,
//   v + cognitive * (pbest - p) + social * (gbest - p),
// where cognitive = c1*r1 and social = c2*r2 (zero drops the term).
double pso_velocity(double v, double p, double pbest, double gbest,
                    double cognitive, double social);

// PSO: for each individual draw r1 then r2 (scalars),
//   V += c1*r1*(Pbest - P) + c2*r2*(Gbest - P);  V clipped to +-vmax;
//   P = clamp(P + V).
SwarmState pso_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds);

// Cognition-only PSO: one draw r1, V += c1*r1*(Pbest - P). Ignores gbest.
SwarmState cpso_step(const SwarmState& s, const BehaviorSpec& spec,
                     RngStream& rng, const Bounds& bounds);

// Social-only PSO: one draw r2, V += c2*r2*(Gbest - P). Ignores pbest.
SwarmState spso_step(const SwarmState& s, const BehaviorSpec& spec,
                     RngStream& rng, const Bounds& bounds);

// Grey wolf optimizer (Mirjalili et al. 2014).
//
// a = gwo_a0 * (1 - t / r_total). Leaders alpha, beta, delta are the three
// best pbest entries. Draw order: individual, then dimension, then leader
// (alpha, beta, delta), each leader drawing u1 then u2:
//   A = 2*a*u1 - a;  C = 2*u2;  X_L = L - A * |C*L - P|.
// The new coordinate is X_a + ((X_b - X_a) + (X_d - X_a)) / 3, the mean of
// the three written so that equal leaders reproduce themselves exactly.
// Throws ConfigError with fewer than three individuals.
SwarmState gwo_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total);

// Whale optimization algorithm (Mirjalili & Lewis 2016).
//
// a = 2 * (1 - t / r_total). Per individual, draw p.
//   p < 0.5: draw r1, r2; A = 2*a*r1 - a, C = 2*r2 (scalars).
//     |A| < 1:  X_j = Gbest_j - A * |C*Gbest_j - P_j|
//     |A| >= 1: per dimension draw a random individual k = below(m),
//               X_j = P[k]_j - A * |C*P[k]_j - P_j|
//   p >= 0.5: draw l = 2u - 1 (uniform in [-1, 1]);
//     X_j = |Gbest_j - P_j| * exp(b*l) * cos(2*pi*l) + Gbest_j
// The random individual is taken from the positions before this step.
SwarmState woa_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total);

// Seagull optimization algorithm (Dhiman & Kumar 2019).
//
// A = fc * (1 - t / r_total). Per individual and dimension, draw rd then
// k' (k = 2*pi*k'):
//   Cs = A * P_j;  B = 2 * A^2 * rd;  Ms = B * (Gbest_j - P_j);
//   Ds = |Cs + Ms|;  r = u * exp(k*v) with u = v = 1;
//   x = r*cos(k), y = r*sin(k), z = r*k;
//   P_j = Ds * x * y * z + Gbest_j.
SwarmState soa_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total);

// Dispatches on spec.kind.
SwarmState behavior_step(const SwarmState& s, const BehaviorSpec& spec,
                         RngStream& rng, const Bounds& bounds, int r_total);

struct Incumbent {
  PositionVector position;
  FitnessValue fitness;
};

// Keeps `current` unless some pbest entry has strictly lower fitness; with no
// incumbent returns the best entry. Ties go to the lowest index.
Incumbent update_gbest(std::span<const PositionVector> pbest,
                       std::span<const FitnessValue> fitness,
                       const std::optional<Incumbent>& current);

// Indices of the `count` lowest-fitness entries, ascending by fitness then
// index.
std::vector<std::size_t> rank_best(std::span<const FitnessValue> fitness,
                                   std::size_t count);

}  // namespace dpswarm

#endif  // DPSWARM_SWARM_HPP_
