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

#include "dpswarm/protocol.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <string>

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

constexpr std::uint8_t kMagic[4] = {'D', 'P', 'S', 'W'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kTypeRequest = 1;
constexpr std::uint8_t kTypeReply = 2;
constexpr std::size_t kHeaderSize = 10;

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{bytes_[pos_++]} << (8 * k);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t{bytes_[pos_++]} << (8 * k);
    const double v = std::bit_cast<double>(bits);
    if (!std::isfinite(v)) throw ParseError("message carries a non-finite real");
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t count) const {
    if (remaining() < count) throw ParseError("message truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError(std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

std::size_t common_dim(const std::vector<PositionVector>& vs) {
  if (vs.empty()) throw DomainError("message must carry at least one position");
  const std::size_t d = vs[0].size();
  if (d == 0) throw DomainError("positions must have at least one coordinate");
  for (const PositionVector& v : vs) {
    if (v.size() != d) throw DomainError("positions have differing dimensions");
  }
  return d;
}

void write_positions(Writer& w, const std::vector<PositionVector>& vs) {
  for (const PositionVector& v : vs) {
    for (double c : v) {
      if (!std::isfinite(c)) throw DomainError("cannot serialize non-finite coordinate");
      w.f64(c);
    }
  }
}

std::vector<PositionVector> read_positions(Reader& r, std::uint32_t m,
                                           std::uint32_t d) {
  if (static_cast<std::uint64_t>(m) * d * 8 > r.remaining()) {
    throw ParseError("message truncated");
  }
  std::vector<PositionVector> out;
  out.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    PositionVector p(d);
    for (double& c : p) c = r.f64();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::uint8_t> frame(std::uint8_t type,
                                std::vector<std::uint8_t> payload) {
  Writer w;
  for (std::uint8_t b : kMagic) w.u8(b);
  w.u8(kVersion);
  w.u8(type);
  w.u32(checked_u32(payload.size(), "payload length"));
  auto& out = w.bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return std::move(out);
}

std::vector<std::uint8_t> encode(const EvaluationRequest& req) {
  Writer w;
  const std::size_t d = common_dim(req.positions);
  w.u32(req.iteration);
  w.u32(checked_u32(req.positions.size(), "population size"));
  w.u32(checked_u32(d, "dimension"));
  write_positions(w, req.positions);
  return frame(kTypeRequest, std::move(w.bytes()));
}

std::vector<std::uint8_t> encode(const EvaluationReply& rep) {
  Writer w;
  const std::size_t m = rep.pbest.size();
  const std::size_t d = common_dim(rep.pbest);
  w.u32(rep.iteration);
  w.u32(checked_u32(m, "population size"));
  w.u32(checked_u32(d, "dimension"));
  w.u8(static_cast<std::uint8_t>(rep.disclosure));
  write_positions(w, rep.pbest);
  if (rep.disclosure == Disclosure::kFaithful) {
    if (rep.fitness.size() != m) throw DomainError("reply needs one fitness per pbest");
    for (double f : rep.fitness) {
      if (!std::isfinite(f) || f < 0.0) throw DomainError("fitness must be finite and >= 0");
      w.f64(f);
    }
  } else {
    if (rep.ranking.empty()) throw DomainError("strict reply needs a ranking");
    w.u8(rep.improved ? 1 : 0);
    w.u32(checked_u32(rep.ranking.size(), "ranking size"));
    for (std::uint32_t idx : rep.ranking) {
      if (idx >= m) throw DomainError("ranking index out of range");
      w.u32(idx);
    }
  }
  return frame(kTypeReply, std::move(w.bytes()));
}

EvaluationRequest decode_request(Reader& r) {
  EvaluationRequest req;
  req.iteration = r.u32();
  const std::uint32_t m = r.u32();
  const std::uint32_t d = r.u32();
  if (m == 0) throw ParseError("request population is empty");
  if (d == 0) throw ParseError("request dimension is zero");
  req.positions = read_positions(r, m, d);
  return req;
}

EvaluationReply decode_reply(Reader& r) {
  EvaluationReply rep;
  rep.iteration = r.u32();
  const std::uint32_t m = r.u32();
  const std::uint32_t d = r.u32();
  if (m == 0) throw ParseError("reply population is empty");
  if (d == 0) throw ParseError("reply dimension is zero");
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw ParseError("unknown disclosure mode");
  rep.disclosure = static_cast<Disclosure>(mode);
  rep.pbest = read_positions(r, m, d);
  if (rep.disclosure == Disclosure::kFaithful) {
    rep.fitness.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i) {
      const double f = r.f64();
      if (f < 0.0) throw ParseError("negative fitness");
      rep.fitness.push_back(f);
    }
  } else {
    const std::uint8_t improved = r.u8();
    if (improved > 1) throw ParseError("improved flag must be 0 or 1");
    rep.improved = improved == 1;
    const std::uint32_t k = r.u32();
    if (k == 0 || k > m) throw ParseError("ranking length out of range");
    std::set<std::uint32_t> seen;
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint32_t idx = r.u32();
      if (idx >= m) throw ParseError("ranking index out of range");
      if (!seen.insert(idx).second) throw ParseError("ranking repeats an index");
      rep.ranking.push_back(idx);
    }
  }
  return rep;
}

void check_reply(const EvaluationReply& reply, const EvaluationRequest& req,
                 const std::vector<PositionVector>& prior_pbest,
                 const RunConfig& config) {
  const std::size_t m = req.positions.size();
  if (reply.iteration != req.iteration) {
    throw DomainError("reply answers iteration " +
                      std::to_string(reply.iteration) + ", expected " +
                      std::to_string(req.iteration));
  }
  if (reply.pbest.size() != m) throw DomainError("reply length differs from request");
  if (reply.disclosure != config.disclosure) {
    throw DomainError("reply uses a different disclosure mode");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(reply.pbest[i] == req.positions[i]) &&
        !(reply.pbest[i] == prior_pbest[i])) {
      throw DomainError("reply pbest " + std::to_string(i) +
                        " is neither the sent position nor the prior pbest");
    }
  }
  if (reply.disclosure == Disclosure::kFaithful) {
    if (reply.fitness.size() != m) throw DomainError("reply fitness length mismatch");
  } else {
    const std::size_t want =
        config.behavior.kind == BehaviorKind::kGWO ? 3 : 1;
    if (reply.ranking.size() < want) throw DomainError("reply ranking too short");
    for (std::uint32_t idx : reply.ranking) {
      if (idx >= m) throw DomainError("reply ranking index out of range");
    }
  }
}

// Prefixes errors with the iteration, keeping budget and parse failures
// distinguishable.
template <typename F>
void with_context(int iteration, F&& body) {
  const std::string where = "iteration " + std::to_string(iteration) + ": ";
  try {
    body();
  } catch (const BudgetExhaustedError& e) {
    throw BudgetExhaustedError(where + e.what());
  } catch (const ParseError& e) {
    throw ParseError(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (is_private && (!std::isfinite(epsilon) || epsilon <= 0.0)) {
    throw ConfigError("epsilon must be finite and positive");
  }
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (population_size < 1) throw ConfigError("population size must be >= 1");
  if (behavior.kind == BehaviorKind::kGWO && population_size < 3) {
    throw ConfigError("GWO needs a population of at least 3");
  }
  for (double v : {behavior.pso_c1, behavior.pso_c2, behavior.pso_vmax_fraction,
                   behavior.gwo_a0, behavior.woa_b, behavior.soa_fc}) {
    if (!std::isfinite(v)) throw ConfigError("behavior parameters must be finite");
  }
  if (behavior.pso_vmax_fraction < 0.0) {
    throw ConfigError("pso_vmax_fraction must be >= 0");
  }
}

std::vector<std::uint8_t> serialize_message(const Message& msg) {
  return std::visit([](const auto& m) { return encode(m); }, msg);
}

Message parse_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw ParseError("message truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError("bad magic");
  Reader header(bytes.subspan(4, kHeaderSize - 4));
  const std::uint8_t version = header.u8();
  if (version != kVersion) {
    throw ParseError("unsupported message version " + std::to_string(version));
  }
  const std::uint8_t type = header.u8();
  const std::uint32_t length = header.u32();
  const auto payload = bytes.subspan(kHeaderSize);
  if (payload.size() < length) throw ParseError("message truncated");
  if (payload.size() > length) throw ParseError("trailing bytes after message");
  Reader r(payload);
  Message out;
  switch (type) {
    case kTypeRequest: out = decode_request(r); break;
    case kTypeReply: out = decode_reply(r); break;
    default: throw ParseError("unknown message type " + std::to_string(type));
  }
  if (r.remaining() != 0) throw ParseError("payload length disagrees with contents");
  return out;
}

LocalUser::LocalUser(Dataset data, const RunConfig& config)
    : data_(std::move(data)),
      config_(config),
      mechanism_(fork_stream(config.seed, kMechanismStream)) {
  config_.validate();
  if (config_.is_private) {
    ledger_.emplace(config_.epsilon, config_.iterations,
                    config_.population_size);
  }
}

EvaluationReply LocalUser::handle(const EvaluationRequest& request) {
  const auto m = static_cast<std::size_t>(config_.population_size);
  if (request.positions.size() != m) {
    throw DomainError("request carries " +
                      std::to_string(request.positions.size()) +
                      " positions, expected " + std::to_string(m));
  }
  for (const PositionVector& p : request.positions) {
    if (p.size() != data_.d()) throw DomainError("request dimension mismatch");
  }
  if (pbest_.empty()) pbest_ = request.positions;

  const int iteration = static_cast<int>(request.iteration);
  if (ledger_) {
    const SelectionPolicy policy{config_.sensitivity, config_.bounds};
    pbest_ = dp_update_pbest(data_, request.positions, pbest_,
                             ledger_->per_iteration(), mechanism_, *ledger_,
                             iteration, policy);
  } else {
    pbest_ = greedy_update_pbest(data_, request.positions, pbest_);
  }

  std::vector<FitnessValue> fitness(m);
  for (std::size_t i = 0; i < m; ++i) fitness[i] = mse_objective(data_, pbest_[i]);

  EvaluationReply reply;
  reply.iteration = request.iteration;
  reply.disclosure = config_.disclosure;
  reply.pbest = pbest_;

  const std::size_t depth = config_.behavior.kind == BehaviorKind::kGWO ? 3 : 1;
  const std::vector<std::size_t> ranked = rank_best(fitness, depth);
  const bool improved = !incumbent_ || fitness[ranked[0]] < *incumbent_;
  if (improved) incumbent_ = fitness[ranked[0]];
  gbest_trace_.push_back(*incumbent_);

  if (config_.disclosure == Disclosure::kFaithful) {
    reply.fitness = std::move(fitness);
  } else {
    reply.improved = improved;
    for (std::size_t idx : ranked) reply.ranking.push_back(static_cast<std::uint32_t>(idx));
  }
  return reply;
}

EvaluationReply WireUser::handle(const EvaluationRequest& request) {
  const std::vector<std::uint8_t> answer =
      transport_(serialize_message(Message{request}));
  Message msg = parse_message(answer);
  if (!std::holds_alternative<EvaluationReply>(msg)) {
    throw ParseError("user answered with a non-reply message");
  }
  return std::get<EvaluationReply>(std::move(msg));
}

std::vector<std::uint8_t> serve_bytes(UserEndpoint& user,
                                      std::span<const std::uint8_t> request) {
  const Message msg = parse_message(request);
  if (!std::holds_alternative<EvaluationRequest>(msg)) {
    throw ParseError("user endpoint expects a request message");
  }
  return serialize_message(Message{user.handle(std::get<EvaluationRequest>(msg))});
}

RunResult run_outsourcer(const RunConfig& config, std::size_t dim,
                         UserEndpoint& user) {
  config.validate();
  const auto m = static_cast<std::size_t>(config.population_size);
  RngStream dynamics = fork_stream(config.seed, kDynamicsStream);
  SwarmState state =
      init_swarm(m, dim, config.behavior.kind, config.bounds, dynamics);
  std::optional<Incumbent> incumbent;
  RunResult result;

  for (int t = 0; t < config.iterations; ++t) {
    result.dynamics_cursor.push_back(dynamics.cursor());
    EvaluationRequest request{static_cast<std::uint32_t>(t), state.positions};
    EvaluationReply reply;
    with_context(t, [&] {
      reply = user.handle(request);
      check_reply(reply, request, state.pbest, config);
    });
    state.pbest = std::move(reply.pbest);
    if (config.disclosure == Disclosure::kFaithful) {
      state.pbest_fitness = std::move(reply.fitness);
      incumbent = update_gbest(state.pbest, state.pbest_fitness, incumbent);
      result.per_iteration_gbest_fitness.push_back(incumbent->fitness);
    } else {
      state.leaders.assign(reply.ranking.begin(), reply.ranking.end());
      if (reply.improved) {
        incumbent = Incumbent{state.pbest[reply.ranking[0]],
                              std::numeric_limits<double>::quiet_NaN()};
      }
      if (!incumbent) throw DomainError("strict reply never named a gbest");
    }
    state.gbest = incumbent->position;
    state.gbest_fitness = incumbent->fitness;
    state.iteration = t;
    with_context(t, [&] {
      state = behavior_step(state, config.behavior, dynamics, config.bounds,
                            config.iterations);
    });
  }
  result.dynamics_cursor.push_back(dynamics.cursor());
  result.gbest = incumbent->position;
  result.gbest_fitness = incumbent->fitness;
  return result;
}

namespace {

// Records the ledger level after each answered request.
class BudgetTracingUser final : public UserEndpoint {
 public:
  explicit BudgetTracingUser(LocalUser& inner) : inner_(inner) {}
  EvaluationReply handle(const EvaluationRequest& request) override {
    EvaluationReply reply = inner_.handle(request);
    trace.push_back(inner_.ledger() ? inner_.ledger()->consumed() : 0.0);
    return reply;
  }
  std::vector<double> trace;

 private:
  LocalUser& inner_;
};

}  // namespace

RunResult run(const RunConfig& config, const Dataset& data) {
  LocalUser user(data, config);
  BudgetTracingUser traced(user);
  RunResult result = run_outsourcer(config, data.d(), traced);
  result.per_iteration_budget = std::move(traced.trace);
  result.ledger = user.ledger();
  if (config.disclosure == Disclosure::kStrict) {
    result.per_iteration_gbest_fitness = user.gbest_fitness_trace();
    result.gbest_fitness = result.per_iteration_gbest_fitness.back();
  }
  return result;
}

void write_trace_csv(const RunResult& result, std::ostream& out) {
  out << "iteration,gbest_fitness,budget_consumed\n";
  const auto old = out.precision(17);
  for (std::size_t t = 0; t < result.per_iteration_gbest_fitness.size(); ++t) {
    const double budget = t < result.per_iteration_budget.size()
                              ? result.per_iteration_budget[t]
                              : 0.0;
    out << t << ',' << result.per_iteration_gbest_fitness[t] << ',' << budget
        << '\n';
  }
  out.precision(old);
}

}  // namespace dpswarm
