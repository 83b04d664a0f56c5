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

#ifndef DPSWARM_PROTOCOL_HPP_
#define DPSWARM_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "dpswarm/objective.hpp"
#include "dpswarm/privacy.hpp"
#include "dpswarm/rng.hpp"
#include "dpswarm/swarm.hpp"
#include "dpswarm/types.hpp"

namespace dpswarm {

// What the user reveals alongside the updated personal bests.
enum class Disclosure : std::uint8_t {
  kFaithful = 0,  // the fitness of every pbest entry
  kStrict = 1,    // only a ranking of the best entries and an improved flag
};

struct RunConfig {
  double epsilon = 1.0;
  int iterations = 100;
  int population_size = 100;
  BehaviorSpec behavior;
  Bounds bounds;
  std::uint64_t seed = 0;
  bool is_private = true;
  Disclosure disclosure = Disclosure::kFaithful;
  SensitivityMode sensitivity = SensitivityMode::kPerPair;

  // Throws ConfigError.
  void validate() const;
};

struct EvaluationRequest {
  std::uint32_t iteration = 0;
  std::vector<PositionVector> positions;

  friend bool operator==(const EvaluationRequest&,
                         const EvaluationRequest&) = default;
};

struct EvaluationReply {
  std::uint32_t iteration = 0;
  Disclosure disclosure = Disclosure::kFaithful;
  std::vector<PositionVector> pbest;
  // Faithful mode only.
  std::vector<FitnessValue> fitness;
  // Strict mode only: whether pbest[ranking[0]] beats the incumbent gbest,
  // and the best pbest indices in ascending fitness order.
  bool improved = false;
  std::vector<std::uint32_t> ranking;

  friend bool operator==(const EvaluationReply&,
                         const EvaluationReply&) = default;
};

using Message = std::variant<EvaluationRequest, EvaluationReply>;

// Wire format, version 1. Integers are little-endian, reals are IEEE-754
// binary64 little-endian.
//
//   frame   := "DPSW" | version:u8 = 1 | type:u8 | length:u32 | payload
//   type 1  := iteration:u32 | m:u32 | d:u32 | positions:f64[m*d]
//   type 2  := iteration:u32 | m:u32 | d:u32 | disclosure:u8 | pbest:f64[m*d]
//              | (disclosure 0) fitness:f64[m]
//              | (disclosure 1) improved:u8 | k:u32 | ranking:u32[k]
//
// Vectors are individual-major. `length` counts payload bytes exactly.
std::vector<std::uint8_t> serialize_message(const Message& msg);

// Throws ParseError on bad magic, unknown version or type, truncation,
// trailing bytes, m == 0, d == 0, non-finite reals, negative fitness, or
// ranking entries that are out of range or repeated.
Message parse_message(std::span<const std::uint8_t> bytes);

// The user role: holds the dataset, its personal bests and the ledger.
class UserEndpoint {
 public:
  virtual ~UserEndpoint() = default;
  virtual EvaluationReply handle(const EvaluationRequest& request) = 0;
};

class LocalUser final : public UserEndpoint {
 public:
  // The mechanism stream is fork_stream(config.seed, "mechanism").
  LocalUser(Dataset data, const RunConfig& config);

  EvaluationReply handle(const EvaluationRequest& request) override;

  // Present only for private runs.
  const std::optional<BudgetLedger>& ledger() const { return ledger_; }
  const RngStream& mechanism_stream() const { return mechanism_; }
  // Incumbent gbest fitness tracked user-side (strict mode).
  const std::vector<FitnessValue>& gbest_fitness_trace() const {
    return gbest_trace_;
  }

 private:
  Dataset data_;
  RunConfig config_;
  std::optional<BudgetLedger> ledger_;
  RngStream mechanism_;
  std::vector<PositionVector> pbest_;
  std::optional<FitnessValue> incumbent_;
  std::vector<FitnessValue> gbest_trace_;
};

using ByteTransport =
    std::function<std::vector<std::uint8_t>(std::span<const std::uint8_t>)>;

// Outsourcer-side stub that talks to a user through serialized bytes.
class WireUser final : public UserEndpoint {
 public:
  explicit WireUser(ByteTransport transport)
      : transport_(std::move(transport)) {}
  EvaluationReply handle(const EvaluationRequest& request) override;

 private:
  ByteTransport transport_;
};

// User-side dispatcher: decodes a request frame, answers it, encodes the
// reply.
std::vector<std::uint8_t> serve_bytes(UserEndpoint& user,
                                      std::span<const std::uint8_t> request);

struct RunResult {
  PositionVector gbest;
  FitnessValue gbest_fitness = 0.0;
  std::optional<BudgetLedger> ledger;
  std::vector<FitnessValue> per_iteration_gbest_fitness;
  std::vector<double> per_iteration_budget;
  // Dynamics-stream cursor at the start of every iteration and at the end.
  std::vector<std::uint64_t> dynamics_cursor;
};

// Runs the outsourcer against an arbitrary user endpoint. The outsourcer
// never sees the dataset; `dim` is the number of features. In strict mode
// the fitness trace is left empty since the outsourcer never learns it.
RunResult run_outsourcer(const RunConfig& config, std::size_t dim,
                         UserEndpoint& user);

// In-process run: a LocalUser over `data` and an outsourcer. The fitness
// trace is filled from the user side in strict mode.
RunResult run(const RunConfig& config, const Dataset& data);

// CSV: iteration,gbest_fitness,budget_consumed
void write_trace_csv(const RunResult& result, std::ostream& out);

}  // namespace dpswarm

#endif  // DPSWARM_PROTOCOL_HPP_
