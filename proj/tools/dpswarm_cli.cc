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

// dpswarm: epsilon sweeps of private and non-private swarm regression.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpswarm/errors.hpp"
#include "dpswarm/experiment.hpp"

namespace {

using dpswarm::ExperimentConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dpswarm::IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

dpswarm::SyntheticSource parse_synthetic(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
  if (parts.size() != 3) {
    throw dpswarm::ConfigError("--synthetic expects n,d,noise, got '" + spec + "'");
  }
  try {
    return {std::stoul(parts[0]), std::stoul(parts[1]), std::stod(parts[2])};
  } catch (const std::exception&) {
    throw dpswarm::ConfigError("--synthetic expects n,d,noise, got '" + spec + "'");
  }
}

void print_summary(const std::vector<dpswarm::SummaryRow>& rows) {
  std::printf("%-6s %-11s %10s %12s %6s\n", "alg", "mode", "epsilon", "mean_rmse", "runs");
  for (const auto& r : rows) {
    std::printf("%-6s %-11s %10g %12.6f %6zu\n",
                std::string(dpswarm::to_string(r.algorithm)).c_str(),
                r.is_private ? "private" : "non-private", r.epsilon, r.mean_rmse,
                r.count);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private swarm optimization sweeps"};

  std::string config_path, dataset, target, synthetic, sensitivity, disclosure, out;
  std::vector<std::string> algorithms;
  std::vector<double> epsilons;
  std::size_t subsample = 0;
  int iterations = 0, population = 0, folds = 0, repeats = 0, threads = 1;
  std::uint64_t seed = 0;
  double bounds = 1.0;
  bool priv = false, non_priv = false, both = false;
  bool ledgers = false, timing = false, print_config = false, quiet = false;

  app.add_option("--config", config_path, "JSON experiment config; flags override it")
      ->check(CLI::ExistingFile);
  auto* dataset_opt =
      app.add_option("--dataset", dataset, "CSV file with a header row")->check(CLI::ExistingFile);
  auto* target_opt =
      app.add_option("--target", target, "Target column name or index (default: last)")
          ->needs(dataset_opt);
  auto* subsample_opt =
      app.add_option("--subsample", subsample, "Keep this many rows of a seeded shuffle")
          ->needs(dataset_opt);
  auto* synthetic_opt =
      app.add_option("--synthetic", synthetic, "Synthetic linear data as n,d,noise")
          ->excludes(dataset_opt);
  auto* algorithms_opt =
      app.add_option("--algorithms", algorithms, "PSO, CPSO, SPSO, GWO, WOA, SOA")
          ->delimiter(',');
  auto* private_opt = app.add_flag("--private", priv, "Private runs only");
  auto* non_private_opt = app.add_flag("--non-private", non_priv, "Non-private runs only");
  auto* both_opt = app.add_flag("--both", both, "Private and non-private runs");
  private_opt->excludes(non_private_opt)->excludes(both_opt);
  non_private_opt->excludes(both_opt);
  auto* epsilons_opt =
      app.add_option("--epsilons", epsilons, "Privacy budgets to sweep")->delimiter(',');
  auto* iterations_opt = app.add_option("--iterations", iterations, "Iterations r");
  auto* population_opt = app.add_option("--population", population, "Population size m");
  auto* folds_opt = app.add_option("--folds", folds, "Cross-validation folds k");
  auto* repeats_opt = app.add_option("--repeats", repeats, "Cross-validation repeats");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* bounds_opt = app.add_option("--bounds", bounds, "Search box half-width w_max");
  auto* sensitivity_opt = app.add_option("--sensitivity-mode", sensitivity,
                                         "Sensitivity bound: per-pair or global")
                              ->check(CLI::IsMember({"per-pair", "global"}));
  auto* disclosure_opt =
      app.add_option("--disclosure", disclosure, "User reply: faithful or strict")
          ->check(CLI::IsMember({"faithful", "strict"}));
  auto* out_opt = app.add_option("--out", out, "Output directory");
  auto* ledgers_opt = app.add_flag("--ledgers", ledgers, "Write one budget ledger per private run");
  auto* timing_opt =
      app.add_flag("--timing", timing, "Record wall-clock runtime (results become non-deterministic)");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads");
  app.add_flag("--print-config", print_config, "Print the resolved config as JSON and exit");
  app.add_flag("-q,--quiet", quiet, "Do not print the summary table");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = dpswarm::config_from_json(read_file(config_path));

    if (*dataset_opt) {
      dpswarm::FileSource file{dataset, {}, std::nullopt};
      if (*target_opt) {
        const bool numeric = !target.empty() &&
                             target.find_first_not_of("0123456789") == std::string::npos;
        if (numeric) {
          file.target = static_cast<std::size_t>(std::stoul(target));
        } else {
          file.target = target;
        }
      }
      if (*subsample_opt) file.subsample = subsample;
      cfg.source = file;
    } else if (*synthetic_opt) {
      cfg.source = parse_synthetic(synthetic);
    }
    if (*algorithms_opt) {
      cfg.algorithms.clear();
      for (const auto& name : algorithms) cfg.algorithms.push_back(dpswarm::parse_behavior(name));
    }
    if (priv) cfg.privacy = dpswarm::PrivacyMode::kPrivate;
    if (non_priv) cfg.privacy = dpswarm::PrivacyMode::kNonPrivate;
    if (both) cfg.privacy = dpswarm::PrivacyMode::kBoth;
    if (*epsilons_opt) cfg.epsilon_grid = epsilons;
    if (*iterations_opt) cfg.iterations = iterations;
    if (*population_opt) cfg.population = population;
    if (*folds_opt) cfg.folds = folds;
    if (*repeats_opt) cfg.repeats = repeats;
    if (*seed_opt) cfg.seed = seed;
    if (*bounds_opt) cfg.w_max = bounds;
    if (*sensitivity_opt) {
      cfg.sensitivity = sensitivity == "global" ? dpswarm::SensitivityMode::kGlobal
                                                : dpswarm::SensitivityMode::kPerPair;
    }
    if (*disclosure_opt) {
      cfg.disclosure =
          disclosure == "strict" ? dpswarm::Disclosure::kStrict : dpswarm::Disclosure::kFaithful;
    }
    if (*out_opt) cfg.out_dir = out;
    if (*ledgers_opt) cfg.write_ledgers = true;
    if (*timing_opt) cfg.record_runtime = true;
    if (*threads_opt) cfg.threads = threads;
    cfg.validate();

    if (print_config) {
      std::cout << dpswarm::config_to_json(cfg) << '\n';
      return 0;
    }
    if (cfg.write_ledgers && !cfg.out_dir) {
      throw dpswarm::ConfigError("--ledgers needs --out");
    }

    const dpswarm::ExperimentReport report = dpswarm::run_experiment(cfg);
    for (const auto& e : report.errors) {
      std::cerr << "error: " << dpswarm::to_string(e.algorithm)
                << (e.is_private ? " private" : " non-private") << " epsilon " << e.epsilon
                << " repeat " << e.repeat << " fold " << e.fold << ": " << e.message << '\n';
    }
    if (!report.records.empty() && !quiet) print_summary(dpswarm::summarize(report.records));
    if (cfg.out_dir && !quiet) std::cout << "results written to " << cfg.out_dir->string() << '\n';
    return report.errors.empty() ? 0 : 2;
  } catch (const dpswarm::Error& e) {
    std::cerr << "dpswarm: " << e.what() << '\n';
    return 1;
  }
}
