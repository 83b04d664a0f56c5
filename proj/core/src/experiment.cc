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

#include "dpswarm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

using nlohmann::json;

struct Prepared {
  Dataset data;
  FoldPlan plan;
};

Prepared prepare(const ExperimentConfig& cfg) {
  RngStream stream = fork_stream(cfg.seed, kDataStream);
  std::optional<Dataset> data;
  if (const auto* syn = std::get_if<SyntheticSource>(&cfg.source)) {
    PositionVector w_true(syn->d);
    for (double& w : w_true) {
      w = stream.uniform(-1.0, 1.0) / static_cast<double>(syn->d);
    }
    data = synth_linear(syn->n, syn->d, w_true, syn->noise_sd, stream);
  } else {
    const auto& file = std::get<FileSource>(cfg.source);
    Dataset full = normalize(load_csv(file.path, file.target)).data;
    if (file.subsample && *file.subsample < full.n()) {
      std::vector<std::size_t> perm(full.n());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[stream.below(i + 1)]);
      }
      perm.resize(*file.subsample);
      data = full.subset(perm);
    } else {
      data = std::move(full);
    }
  }
  FoldPlan plan = kfold(data->n(), cfg.folds, cfg.repeats, stream);
  return {std::move(*data), std::move(plan)};
}

struct Job {
  BehaviorKind algorithm;
  bool is_private;
  double epsilon;
  int repeat;
  int fold;
};

struct Slot {
  std::size_t job;
  double epsilon;
};

using RecordKey = std::tuple<int, bool, double, int, int>;

RecordKey key_of(BehaviorKind alg, bool priv, double eps, int rep, int fold) {
  return {static_cast<int>(alg), priv, eps, rep, fold};
}

std::string ledger_name(const Job& job) {
  return std::string(to_string(job.algorithm)) + "_eps" +
         format_double(job.epsilon) + "_r" + std::to_string(job.repeat) +
         "_f" + std::to_string(job.fold) + ".csv";
}

std::string_view privacy_name(PrivacyMode p) {
  switch (p) {
    case PrivacyMode::kPrivate: return "private";
    case PrivacyMode::kNonPrivate: return "non-private";
    case PrivacyMode::kBoth: return "both";
  }
  return "both";
}

double parse_number(std::string_view cell, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw LoadError(std::string("bad ") + what + " '" + std::string(cell) + "'");
  }
  return v;
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("no algorithms selected");
  if (epsilon_grid.empty()) throw ConfigError("epsilon grid is empty");
  for (double e : epsilon_grid) {
    if (!std::isfinite(e) || e <= 0.0) {
      throw ConfigError("epsilon values must be finite and positive");
    }
  }
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (population < 1) throw ConfigError("population must be >= 1");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  Bounds{w_max};
  for (BehaviorKind k : algorithms) {
    if (k == BehaviorKind::kGWO && population < 3) {
      throw ConfigError("GWO needs a population of at least 3");
    }
  }
  if (const auto* syn = std::get_if<SyntheticSource>(&source)) {
    if (syn->n < 1 || syn->d < 1 || !(syn->noise_sd >= 0.0)) {
      throw ConfigError("synthetic source needs n, d >= 1 and noise >= 0");
    }
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (const auto* syn = std::get_if<SyntheticSource>(&cfg.source)) {
    j["synthetic"] = {{"n", syn->n}, {"d", syn->d}, {"noise_sd", syn->noise_sd}};
  } else {
    const auto& file = std::get<FileSource>(cfg.source);
    j["dataset"] = file.path.string();
    if (const auto* name = std::get_if<std::string>(&file.target)) j["target"] = *name;
    if (const auto* idx = std::get_if<std::size_t>(&file.target)) j["target"] = *idx;
    if (file.subsample) j["subsample"] = *file.subsample;
  }
  std::vector<std::string> algs;
  for (BehaviorKind k : cfg.algorithms) algs.emplace_back(to_string(k));
  j["algorithms"] = algs;
  j["privacy"] = privacy_name(cfg.privacy);
  j["epsilons"] = cfg.epsilon_grid;
  j["iterations"] = cfg.iterations;
  j["population"] = cfg.population;
  j["folds"] = cfg.folds;
  j["repeats"] = cfg.repeats;
  j["seed"] = cfg.seed;
  j["bounds"] = cfg.w_max;
  j["sensitivity_mode"] =
      cfg.sensitivity == SensitivityMode::kPerPair ? "per-pair" : "global";
  j["disclosure"] = cfg.disclosure == Disclosure::kFaithful ? "faithful" : "strict";
  if (cfg.out_dir) j["out"] = cfg.out_dir->string();
  j["ledgers"] = cfg.write_ledgers;
  j["record_runtime"] = cfg.record_runtime;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    if (j.contains("dataset") && j.contains("synthetic")) {
      throw ConfigError("config names both a dataset and a synthetic source");
    }
    if (j.contains("synthetic")) {
      const json& s = j.at("synthetic");
      SyntheticSource syn;
      syn.n = s.value("n", syn.n);
      syn.d = s.value("d", syn.d);
      syn.noise_sd = s.value("noise_sd", syn.noise_sd);
      cfg.source = syn;
    } else if (j.contains("dataset")) {
      FileSource file;
      file.path = j.at("dataset").get<std::string>();
      if (j.contains("target")) {
        const json& t = j.at("target");
        if (t.is_string()) {
          file.target = t.get<std::string>();
        } else {
          file.target = t.get<std::size_t>();
        }
      }
      if (j.contains("subsample")) file.subsample = j.at("subsample").get<std::size_t>();
      cfg.source = file;
    }
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) {
        cfg.algorithms.push_back(parse_behavior(a.get<std::string>()));
      }
    }
    if (j.contains("privacy")) {
      const auto p = j.at("privacy").get<std::string>();
      if (p == "private") {
        cfg.privacy = PrivacyMode::kPrivate;
      } else if (p == "non-private") {
        cfg.privacy = PrivacyMode::kNonPrivate;
      } else if (p == "both") {
        cfg.privacy = PrivacyMode::kBoth;
      } else {
        throw ConfigError("privacy must be private, non-private or both");
      }
    }
    if (j.contains("epsilons")) cfg.epsilon_grid = j.at("epsilons").get<std::vector<double>>();
    cfg.iterations = j.value("iterations", cfg.iterations);
    cfg.population = j.value("population", cfg.population);
    cfg.folds = j.value("folds", cfg.folds);
    cfg.repeats = j.value("repeats", cfg.repeats);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.w_max = j.value("bounds", cfg.w_max);
    if (j.contains("sensitivity_mode")) {
      const auto s = j.at("sensitivity_mode").get<std::string>();
      if (s == "per-pair") {
        cfg.sensitivity = SensitivityMode::kPerPair;
      } else if (s == "global") {
        cfg.sensitivity = SensitivityMode::kGlobal;
      } else {
        throw ConfigError("sensitivity_mode must be per-pair or global");
      }
    }
    if (j.contains("disclosure")) {
      const auto s = j.at("disclosure").get<std::string>();
      if (s == "faithful") {
        cfg.disclosure = Disclosure::kFaithful;
      } else if (s == "strict") {
        cfg.disclosure = Disclosure::kStrict;
      } else {
        throw ConfigError("disclosure must be faithful or strict");
      }
    }
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    cfg.write_ledgers = j.value("ledgers", cfg.write_ledgers);
    cfg.record_runtime = j.value("record_runtime", cfg.record_runtime);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::uint64_t run_seed(std::uint64_t master, int repeat, int fold) {
  return derive_seed(master, {static_cast<std::uint64_t>(repeat),
                              static_cast<std::uint64_t>(fold)});
}

Dataset load_experiment_data(const ExperimentConfig& cfg) {
  return prepare(cfg).data;
}

void write_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_result_row(std::ostream& out, const ResultRecord& rec) {
  out << to_string(rec.algorithm) << ',' << (rec.is_private ? 1 : 0) << ','
      << format_double(rec.epsilon) << ',' << rec.repeat << ',' << rec.fold
      << ',' << format_double(rec.rmse) << ',' << format_double(rec.runtime_ms)
      << ',' << rec.seed << '\n';
}

std::vector<ResultRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw LoadError("results file has an unexpected header");
  }
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_on(line, ',');
    if (cells.size() != 8) throw LoadError("results row has wrong cell count");
    ResultRecord r{};
    try {
      r.algorithm = parse_behavior(cells[0]);
    } catch (const ConfigError& e) {
      throw LoadError(e.what());
    }
    if (cells[1] != "0" && cells[1] != "1") throw LoadError("bad private flag");
    r.is_private = cells[1] == "1";
    r.epsilon = parse_number(cells[2], "epsilon");
    r.repeat = static_cast<int>(parse_number(cells[3], "repeat"));
    r.fold = static_cast<int>(parse_number(cells[4], "fold"));
    r.rmse = parse_number(cells[5], "rmse");
    r.runtime_ms = parse_number(cells[6], "runtime");
    const auto [ptr, ec] =
        std::from_chars(cells[7].data(), cells[7].data() + cells[7].size(), r.seed);
    if (ec != std::errc() || ptr != cells[7].data() + cells[7].size()) {
      throw LoadError("bad seed");
    }
    out.push_back(r);
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Prepared prep = prepare(cfg);
  ExperimentReport report;
  report.plan = prep.plan;

  std::vector<Job> jobs;
  std::vector<Slot> slots;
  for (BehaviorKind alg : cfg.algorithms) {
    for (bool priv : {false, true}) {
      if (priv && cfg.privacy == PrivacyMode::kNonPrivate) continue;
      if (!priv && cfg.privacy == PrivacyMode::kPrivate) continue;
      std::map<std::pair<int, int>, std::size_t> shared;
      for (double eps : cfg.epsilon_grid) {
        for (int rep = 0; rep < cfg.repeats; ++rep) {
          for (int fold = 0; fold < cfg.folds; ++fold) {
            std::size_t job_index;
            const auto it = shared.find({rep, fold});
            if (!priv && it != shared.end()) {
              job_index = it->second;
            } else {
              job_index = jobs.size();
              jobs.push_back({alg, priv, eps, rep, fold});
              if (!priv) shared[{rep, fold}] = job_index;
            }
            slots.push_back({job_index, eps});
          }
        }
      }
    }
  }

  auto slot_key = [&](const Slot& s) {
    const Job& j = jobs[s.job];
    return key_of(j.algorithm, j.is_private, s.epsilon, j.repeat, j.fold);
  };

  // Resume from a results file whose rows are a prefix of this grid.
  std::vector<ResultRecord> existing;
  std::ofstream results;
  if (cfg.out_dir) {
    std::filesystem::create_directories(*cfg.out_dir);
    const auto path = *cfg.out_dir / "results.csv";
    if (std::filesystem::exists(path)) {
      std::ifstream in(path);
      existing = read_results_csv(in);
      if (existing.size() > slots.size()) {
        throw ConfigError("results.csv holds more rows than this grid");
      }
      for (std::size_t i = 0; i < existing.size(); ++i) {
        const ResultRecord& r = existing[i];
        if (key_of(r.algorithm, r.is_private, r.epsilon, r.repeat, r.fold) !=
            slot_key(slots[i])) {
          throw ConfigError("results.csv does not match this configuration");
        }
      }
      results.open(path, std::ios::app | std::ios::binary);
    } else {
      results.open(path, std::ios::binary);
      write_results_header(results);
    }
    if (!results) throw IoError("cannot write " + path.string());
    if (cfg.write_ledgers) {
      std::filesystem::create_directories(*cfg.out_dir / "ledgers");
    }
  }

  std::vector<bool> needed(jobs.size(), false);
  for (std::size_t s = existing.size(); s < slots.size(); ++s) {
    needed[slots[s].job] = true;
  }

  struct Outcome {
    bool done = false;
    std::optional<ResultRecord> record;
    std::string error;
  };
  std::vector<Outcome> outcomes(jobs.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto execute = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    Outcome out;
    try {
      const auto start = std::chrono::steady_clock::now();
      const Dataset train = prep.data.subset(
          prep.plan.training_rows(job.repeat, job.fold));
      const auto& test_rows =
          prep.plan.assignments[job.repeat][static_cast<std::size_t>(job.fold)];
      const Dataset test = prep.data.subset(test_rows);
      RunConfig rc;
      rc.epsilon = job.epsilon;
      rc.iterations = cfg.iterations;
      rc.population_size = cfg.population;
      rc.behavior = BehaviorSpec::defaults(job.algorithm);
      rc.bounds = Bounds(cfg.w_max);
      rc.seed = run_seed(cfg.seed, job.repeat, job.fold);
      rc.is_private = job.is_private;
      rc.disclosure = cfg.disclosure;
      rc.sensitivity = cfg.sensitivity;
      const RunResult res = run(rc, train);
      ResultRecord rec{};
      rec.algorithm = job.algorithm;
      rec.is_private = job.is_private;
      rec.epsilon = job.epsilon;
      rec.repeat = job.repeat;
      rec.fold = job.fold;
      rec.rmse = rmse(predict(test, res.gbest), test.ys());
      rec.seed = rc.seed;
      if (cfg.record_runtime) {
        rec.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      }
      if (cfg.out_dir && cfg.write_ledgers && res.ledger) {
        std::ofstream ledger_out(*cfg.out_dir / "ledgers" / ledger_name(job));
        res.ledger->write_csv(ledger_out);
      }
      out.record = rec;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.done = true;
    {
      std::lock_guard lock(mu);
      outcomes[idx] = std::move(out);
    }
    cv.notify_all();
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      if (needed[idx]) {
        execute(idx);
      } else {
        {
          std::lock_guard lock(mu);
          outcomes[idx].done = true;
        }
        cv.notify_all();
      }
    }
  };

  // With one thread, jobs run lazily in slot order so results.csv grows as
  // the sweep progresses.
  std::vector<std::jthread> pool;
  if (cfg.threads > 1) {
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (s < existing.size()) {
      report.records.push_back(existing[s]);
      continue;
    }
    const Slot& slot = slots[s];
    if (pool.empty() && !outcomes[slot.job].done) execute(slot.job);
    Outcome outcome;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return outcomes[slot.job].done; });
      outcome = outcomes[slot.job];
    }
    const Job& job = jobs[slot.job];
    if (outcome.record) {
      ResultRecord rec = *outcome.record;
      rec.epsilon = slot.epsilon;
      report.records.push_back(rec);
      if (results.is_open()) {
        write_result_row(results, rec);
        results.flush();
      }
    } else {
      report.errors.push_back({job.algorithm, job.is_private, slot.epsilon,
                               job.repeat, job.fold, outcome.error});
    }
  }
  pool.clear();

  if (cfg.out_dir && !report.records.empty()) {
    const auto summary = summarize(report.records);
    std::ofstream out(*cfg.out_dir / "summary.csv", std::ios::binary);
    write_summary_csv(out, summary);
    emit_plot_data(summary, *cfg.out_dir / "plot");
    std::ofstream plan_out(*cfg.out_dir / "folds.json", std::ios::binary);
    plan_out << fold_plan_to_json(report.plan) << '\n';
  }
  return report;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw DomainError("summarize: no records");
  std::map<std::tuple<int, bool, double>, std::pair<double, std::size_t>> acc;
  for (const ResultRecord& r : records) {
    auto& [sum, count] =
        acc[{static_cast<int>(r.algorithm), r.is_private, r.epsilon}];
    sum += r.rmse;
    ++count;
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, value] : acc) {
    out.push_back({static_cast<BehaviorKind>(std::get<0>(key)), std::get<1>(key),
                   std::get<2>(key),
                   value.first / static_cast<double>(value.second), value.second});
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,private,epsilon,mean_rmse,count\n";
  for (const SummaryRow& r : rows) {
    out << to_string(r.algorithm) << ',' << (r.is_private ? 1 : 0) << ','
        << format_double(r.epsilon) << ',' << format_double(r.mean_rmse) << ','
        << r.count << '\n';
  }
}

std::vector<std::filesystem::path> emit_plot_data(
    const std::vector<SummaryRow>& summary, const std::filesystem::path& dir) {
  if (summary.empty()) throw DomainError("emit_plot_data: empty summary");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::map<std::pair<int, bool>, std::vector<const SummaryRow*>> series;
  for (const SummaryRow& r : summary) {
    series[{static_cast<int>(r.algorithm), r.is_private}].push_back(&r);
  }
  std::vector<std::filesystem::path> written;
  for (auto& [key, rows] : series) {
    std::sort(rows.begin(), rows.end(),
              [](const SummaryRow* a, const SummaryRow* b) {
                return a->epsilon < b->epsilon;
              });
    const auto path =
        dir / (std::string(to_string(static_cast<BehaviorKind>(key.first))) +
               (key.second ? "_private.tsv" : "_nonprivate.tsv"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "epsilon\tmean_rmse\n";
    for (const SummaryRow* r : rows) {
      out << format_double(r->epsilon) << '\t' << format_double(r->mean_rmse)
          << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

std::vector<PlotPoint> read_plot_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "epsilon\tmean_rmse") {
    throw LoadError("plot series has an unexpected header");
  }
  std::vector<PlotPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_on(line, '\t');
    if (cells.size() != 2) throw LoadError("plot row needs two columns");
    out.push_back({parse_number(cells[0], "epsilon"),
                   parse_number(cells[1], "mean_rmse")});
  }
  return out;
}

}  // namespace dpswarm
