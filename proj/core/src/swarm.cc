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

#include "dpswarm/swarm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_shapes(const SwarmState& s, bool need_velocity) {
  const std::size_t m = s.positions.size();
  if (m == 0) throw StateError("swarm state has no individuals");
  if (s.pbest.size() != m) throw StateError("pbest size differs from m");
  if (need_velocity && s.velocities.size() != m) {
    throw StateError("velocities missing for a PSO-family step");
  }
  const std::size_t d = s.positions[0].size();
  if (s.gbest.size() != d) throw StateError("gbest dimension mismatch");
}

enum class PsoTerms { kBoth, kCognition, kSocial };

SwarmState pso_family_step(const SwarmState& s, const BehaviorSpec& spec,
                           RngStream& rng, const Bounds& bounds,
                           PsoTerms terms) {
  check_shapes(s, true);
  SwarmState next = s;
  const double vmax = spec.pso_vmax_fraction * 2.0 * bounds.w_max();
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r1 = 0.0;
    double r2 = 0.0;
    if (terms != PsoTerms::kSocial) r1 = rng.uniform();
    if (terms != PsoTerms::kCognition) r2 = rng.uniform();
    PositionVector& v = next.velocities[i];
    PositionVector& p = next.positions[i];
    const double cognitive = spec.pso_c1 * r1;
    const double social = spec.pso_c2 * r2;
    for (std::size_t j = 0; j < p.size(); ++j) {
      v[j] = pso_velocity(s.velocities[i][j], s.positions[i][j], s.pbest[i][j],
                          s.gbest[j], cognitive, social);
      if (vmax > 0.0) v[j] = std::clamp(v[j], -vmax, vmax);
      p[j] = s.positions[i][j] + v[j];
    }
    p = clamp(p, bounds);
  }
  return next;
}

std::vector<std::size_t> leaders_of(const SwarmState& s, std::size_t count) {
  if (s.leaders.size() >= count) {
    for (std::size_t k = 0; k < count; ++k) {
      if (s.leaders[k] >= s.size()) throw StateError("leader index out of range");
    }
    return {s.leaders.begin(), s.leaders.begin() + count};
  }
  if (s.pbest_fitness.size() != s.size()) {
    throw StateError("leaders need pbest fitness or a disclosed ranking");
  }
  return rank_best(s.pbest_fitness, count);
}

void check_schedule(int t, int r_total) {
  if (r_total < 1) throw ConfigError("schedule: r_total must be >= 1");
  if (t < 0 || t > r_total) throw StateError("iteration outside [0, r_total]");
}

}  // namespace

std::string_view to_string(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kPSO: return "PSO";
    case BehaviorKind::kCPSO: return "CPSO";
    case BehaviorKind::kSPSO: return "SPSO";
    case BehaviorKind::kGWO: return "GWO";
    case BehaviorKind::kWOA: return "WOA";
    case BehaviorKind::kSOA: return "SOA";
  }
  return "?";
}

BehaviorKind parse_behavior(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  for (BehaviorKind k : {BehaviorKind::kPSO, BehaviorKind::kCPSO,
                         BehaviorKind::kSPSO, BehaviorKind::kGWO,
                         BehaviorKind::kWOA, BehaviorKind::kSOA}) {
    if (upper == to_string(k)) return k;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

bool uses_velocity(BehaviorKind kind) {
  return kind == BehaviorKind::kPSO || kind == BehaviorKind::kCPSO ||
         kind == BehaviorKind::kSPSO;
}

SwarmState init_swarm(std::size_t population, std::size_t dim,
                      BehaviorKind kind, const Bounds& bounds, RngStream& rng) {
  if (population == 0 || dim == 0) {
    throw ConfigError("init_swarm: population and dimension must be >= 1");
  }
  SwarmState s;
  s.positions.reserve(population);
  for (std::size_t i = 0; i < population; ++i) {
    PositionVector p(dim);
    for (double& c : p) c = rng.uniform(-bounds.w_max(), bounds.w_max());
    s.positions.push_back(std::move(p));
  }
  if (uses_velocity(kind)) {
    s.velocities.assign(population, PositionVector(dim, 0.0));
  }
  s.pbest = s.positions;
  s.gbest = s.positions[0];
  s.gbest_fitness = std::numeric_limits<double>::infinity();
  return s;
}

double linear_schedule(double start, int t, int r_total) {
  check_schedule(t, r_total);
  return start * (1.0 - static_cast<double>(t) / r_total);
}

double pso_velocity(double v, double p, double pbest, double gbest,
                    double cognitive, double social) {
  double dv = 0.0;
  if (cognitive != 0.0) dv += cognitive * (pbest - p);
  if (social != 0.0) dv += social * (gbest - p);
  return v + dv;
}

SwarmState pso_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds) {
  return pso_family_step(s, spec, rng, bounds, PsoTerms::kBoth);
}

SwarmState cpso_step(const SwarmState& s, const BehaviorSpec& spec,
                     RngStream& rng, const Bounds& bounds) {
  return pso_family_step(s, spec, rng, bounds, PsoTerms::kCognition);
}

SwarmState spso_step(const SwarmState& s, const BehaviorSpec& spec,
                     RngStream& rng, const Bounds& bounds) {
  return pso_family_step(s, spec, rng, bounds, PsoTerms::kSocial);
}

SwarmState gwo_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total) {
  if (s.size() < 3) throw ConfigError("GWO needs at least 3 individuals");
  check_shapes(s, false);
  const double a = linear_schedule(spec.gwo_a0, s.iteration, r_total);
  const std::vector<std::size_t> lead = leaders_of(s, 3);
  SwarmState next = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const PositionVector& p = s.positions[i];
    PositionVector& out = next.positions[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      double x[3];
      for (int l = 0; l < 3; ++l) {
        const double leader = s.pbest[lead[l]][j];
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double big_a = 2.0 * a * u1 - a;
        const double big_c = 2.0 * u2;
        x[l] = leader - big_a * std::abs(big_c * leader - p[j]);
      }
      out[j] = x[0] + ((x[1] - x[0]) + (x[2] - x[0])) / 3.0;
    }
    out = clamp(out, bounds);
  }
  return next;
}

SwarmState woa_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total) {
  check_shapes(s, false);
  const double a = linear_schedule(2.0, s.iteration, r_total);
  const std::size_t m = s.size();
  SwarmState next = s;
  for (std::size_t i = 0; i < m; ++i) {
    const PositionVector& p = s.positions[i];
    PositionVector& out = next.positions[i];
    const double prob = rng.uniform();
    if (prob < 0.5) {
      const double r1 = rng.uniform();
      const double r2 = rng.uniform();
      const double big_a = 2.0 * a * r1 - a;
      const double big_c = 2.0 * r2;
      if (std::abs(big_a) < 1.0) {
        for (std::size_t j = 0; j < p.size(); ++j) {
          out[j] = s.gbest[j] - big_a * std::abs(big_c * s.gbest[j] - p[j]);
        }
      } else {
        for (std::size_t j = 0; j < p.size(); ++j) {
          const double rand_pos = s.positions[rng.below(m)][j];
          out[j] = rand_pos - big_a * std::abs(big_c * rand_pos - p[j]);
        }
      }
    } else {
      const double l = 2.0 * rng.uniform() - 1.0;
      const double radial = std::exp(spec.woa_b * l) * std::cos(kTwoPi * l);
      for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] = std::abs(s.gbest[j] - p[j]) * radial + s.gbest[j];
      }
    }
    out = clamp(out, bounds);
  }
  return next;
}

SwarmState soa_step(const SwarmState& s, const BehaviorSpec& spec,
                    RngStream& rng, const Bounds& bounds, int r_total) {
  check_shapes(s, false);
  const double big_a = linear_schedule(spec.soa_fc, s.iteration, r_total);
  constexpr double kU = 1.0;
  constexpr double kV = 1.0;
  SwarmState next = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const PositionVector& p = s.positions[i];
    PositionVector& out = next.positions[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double rd = rng.uniform();
      const double k = kTwoPi * rng.uniform();
      const double cs = big_a * p[j];
      const double big_b = 2.0 * big_a * big_a * rd;
      const double ms = big_b * (s.gbest[j] - p[j]);
      const double ds = std::abs(cs + ms);
      const double radius = kU * std::exp(k * kV);
      const double x = radius * std::cos(k);
      const double y = radius * std::sin(k);
      const double z = radius * k;
      out[j] = ds * x * y * z + s.gbest[j];
    }
    out = clamp(out, bounds);
  }
  return next;
}

SwarmState behavior_step(const SwarmState& s, const BehaviorSpec& spec,
                         RngStream& rng, const Bounds& bounds, int r_total) {
  switch (spec.kind) {
    case BehaviorKind::kPSO: return pso_step(s, spec, rng, bounds);
    case BehaviorKind::kCPSO: return cpso_step(s, spec, rng, bounds);
    case BehaviorKind::kSPSO: return spso_step(s, spec, rng, bounds);
    case BehaviorKind::kGWO: return gwo_step(s, spec, rng, bounds, r_total);
    case BehaviorKind::kWOA: return woa_step(s, spec, rng, bounds, r_total);
    case BehaviorKind::kSOA: return soa_step(s, spec, rng, bounds, r_total);
  }
  throw ConfigError("unknown behavior kind");
}

Incumbent update_gbest(std::span<const PositionVector> pbest,
                       std::span<const FitnessValue> fitness,
                       const std::optional<Incumbent>& current) {
  if (pbest.empty() || pbest.size() != fitness.size()) {
    throw DomainError("update_gbest: pbest and fitness must be non-empty and "
                      "of equal length");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < fitness.size(); ++i) {
    if (fitness[i] < fitness[best]) best = i;
  }
  if (current && !(fitness[best] < current->fitness)) return *current;
  return {pbest[best], fitness[best]};
}

std::vector<std::size_t> rank_best(std::span<const FitnessValue> fitness,
                                   std::size_t count) {
  std::vector<std::size_t> idx(fitness.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(),
                    [&](std::size_t x, std::size_t y) {
                      if (fitness[x] != fitness[y]) return fitness[x] < fitness[y];
                      return x < y;
                    });
  idx.resize(count);
  return idx;
}

}  // namespace dpswarm
