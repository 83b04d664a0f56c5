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

#ifndef DPSWARM_EXPERIMENT_HPP_
#define DPSWARM_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpswarm/data.hpp"
#include "dpswarm/objective.hpp"
#include "dpswarm/protocol.hpp"
#include "dpswarm/swarm.hpp"

namespace dpswarm {

struct SyntheticSource {
  std::size_t n = 1000;
  std::size_t d = 4;
  double noise_sd = 0.05;
};

struct FileSource {
  std::filesystem::path path;
  TargetSelector target;
  // Keep only the first `subsample` rows of a seeded shuffle when set.
  std::optional<std::size_t> subsample;
};

enum class PrivacyMode { kPrivate, kNonPrivate, kBoth };

struct ExperimentConfig {
  std::variant<SyntheticSource, FileSource> source = SyntheticSource{};
  std::vector<BehaviorKind> algorithms = {BehaviorKind::kPSO,
                                          BehaviorKind::kGWO,
                                          BehaviorKind::kWOA,
                                          BehaviorKind::kSOA};
  PrivacyMode privacy = PrivacyMode::kBoth;
  std::vector<double> epsilon_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  int iterations = 100;
  int population = 100;
  int folds = 10;
  int repeats = 10;
  std::uint64_t seed = 0;
  double w_max = 1.0;
  SensitivityMode sensitivity = SensitivityMode::kPerPair;
  Disclosure disclosure = Disclosure::kFaithful;
  // Results, summary and plot series go here when set.
  std::optional<std::filesystem::path> out_dir;
  bool write_ledgers = false;
  // Off by default so identical configs give byte-identical results files.
  bool record_runtime = false;
  int threads = 1;

  // Throws ConfigError.
  void validate() const;
};

std::string config_to_json(const ExperimentConfig& cfg);
// Missing keys keep their defaults. Throws ConfigError.
ExperimentConfig config_from_json(const std::string& json);

struct ResultRecord {
  BehaviorKind algorithm;
  bool is_private;
  double epsilon;
  int repeat;
  int fold;
  double rmse;
  double runtime_ms;
  std::uint64_t seed;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct CellError {
  BehaviorKind algorithm;
  bool is_private;
  double epsilon;
  int repeat;
  int fold;
  std::string message;
};

struct ExperimentReport {
  std::vector<ResultRecord> records;
  std::vector<CellError> errors;
  FoldPlan plan;
};

// Seed shared by every run on (repeat, fold), private or not, so twins see
// the same dynamics stream.
std::uint64_t run_seed(std::uint64_t master, int repeat, int fold);

// The normalized dataset named by cfg.source.
Dataset load_experiment_data(const ExperimentConfig& cfg);

// Runs the whole grid. Records come out in grid order: algorithm, then
// non-private before private, then epsilon, repeat, fold. Non-private runs
// are executed once per (algorithm, repeat, fold) and copied to every epsilon.
// With cfg.out_dir set, results.csv is appended as records complete and any
// records already present are reused instead of re-run; summary.csv and the
// plot series are written at the end.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kResultsHeader =
    "algorithm,private,epsilon,repeat,fold,rmse,runtime_ms,seed";

void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const ResultRecord& rec);
// Throws LoadError.
std::vector<ResultRecord> read_results_csv(std::istream& in);

struct SummaryRow {
  BehaviorKind algorithm;
  bool is_private;
  double epsilon;
  double mean_rmse;
  std::size_t count;
};

// Mean RMSE per (algorithm, private, epsilon), sorted by that key. Throws
// DomainError on empty input.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// One TSV per (algorithm, private) named "<ALG>_<private|nonprivate>.tsv" in
// `dir`, header "epsilon\tmean_rmse", rows by ascending epsilon. Returns the
// written paths. Throws IoError.
std::vector<std::filesystem::path> emit_plot_data(
    const std::vector<SummaryRow>& summary, const std::filesystem::path& dir);

struct PlotPoint {
  double epsilon;
  double mean_rmse;
};
std::vector<PlotPoint> read_plot_series(const std::filesystem::path& path);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace dpswarm

#endif  // DPSWARM_EXPERIMENT_HPP_
