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

#include "dpswarm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "dpswarm/errors.hpp"

namespace dpswarm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    throw LoadError("row " + std::to_string(row) + ", column " +
                    std::to_string(col + 1) + ": '" + std::string(cell) +
                    "' is not a finite number");
  }
  return v;
}

std::size_t resolve_target(const std::vector<std::string>& header,
                           const TargetSelector& target) {
  if (std::holds_alternative<std::string>(target)) {
    const auto& name = std::get<std::string>(target);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw LoadError("target column '" + name + "' not found");
    return static_cast<std::size_t>(it - header.begin());
  }
  if (std::holds_alternative<std::size_t>(target)) {
    const std::size_t idx = std::get<std::size_t>(target);
    if (idx >= header.size()) {
      throw LoadError("target column index " + std::to_string(idx) +
                      " out of range");
    }
    return idx;
  }
  return header.size() - 1;
}

}  // namespace

RawTable parse_csv(const std::string& text, const TargetSelector& target) {
  RawTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (!have_header) {
      for (auto c : cells) table.header.emplace_back(c);
      if (table.header.size() < 2) {
        throw LoadError("need at least one feature and one target column");
      }
      have_header = true;
      continue;
    }
    ++row;
    if (cells.size() != table.header.size()) {
      throw LoadError("row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(table.header.size()));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      values.push_back(parse_cell(cells[c], row, c));
    }
    table.rows.push_back(std::move(values));
  }
  if (!have_header) throw LoadError("file is empty");
  if (table.rows.empty()) throw LoadError("file has a header but no data rows");
  table.target_column = resolve_target(table.header, target);
  return table;
}

RawTable load_csv(const std::filesystem::path& path,
                  const TargetSelector& target) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str(), target);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

double denormalize(double v, const ColumnRange& range) {
  if (range.max == range.min) return range.min;
  return (v + 1.0) / 2.0 * (range.max - range.min) + range.min;
}

NormalizedData normalize(const RawTable& table) {
  const std::size_t n = table.rows.size();
  const std::size_t cols = table.header.size();
  std::vector<ColumnRange> ranges(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    ColumnRange r{table.rows[0][c], table.rows[0][c]};
    for (const auto& row : table.rows) {
      r.min = std::min(r.min, row[c]);
      r.max = std::max(r.max, row[c]);
    }
    ranges[c] = r;
  }
  auto map = [&](double v, std::size_t c) {
    const ColumnRange& r = ranges[c];
    if (r.max == r.min) return 0.0;
    const double out = 2.0 * (v - r.min) / (r.max - r.min) - 1.0;
    return std::clamp(out, -1.0, 1.0);
  };
  const std::size_t d = cols - 1;
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(n * d);
  ys.reserve(n);
  std::vector<ColumnRange> feature_ranges;
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != table.target_column) feature_ranges.push_back(ranges[c]);
  }
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == table.target_column) {
        ys.push_back(map(row[c], c));
      } else {
        xs.push_back(map(row[c], c));
      }
    }
  }
  return {Dataset(n, d, std::move(xs), std::move(ys), 1.0),
          std::move(feature_ranges), ranges[table.target_column]};
}

std::vector<std::size_t> FoldPlan::training_rows(int repeat, int fold) const {
  std::vector<std::size_t> rows;
  const auto& folds = assignments.at(static_cast<std::size_t>(repeat));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (static_cast<int>(f) == fold) continue;
    rows.insert(rows.end(), folds[f].begin(), folds[f].end());
  }
  return rows;
}

FoldPlan kfold(std::size_t n, int k, int repeats, RngStream& rng) {
  if (k < 2) throw ConfigError("kfold: k must be >= 2");
  if (repeats < 1) throw ConfigError("kfold: repeats must be >= 1");
  if (n < static_cast<std::size_t>(k)) {
    throw ConfigError("kfold: " + std::to_string(n) + " rows cannot fill " +
                      std::to_string(k) + " folds");
  }
  FoldPlan plan;
  plan.k = k;
  plan.repeats = repeats;
  const std::size_t kk = static_cast<std::size_t>(k);
  for (int rep = 0; rep < repeats; ++rep) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    std::vector<std::vector<std::size_t>> folds(kk);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < kk; ++f) {
      const std::size_t size = n / kk + (f < n % kk ? 1 : 0);
      folds[f].assign(perm.begin() + pos, perm.begin() + pos + size);
      pos += size;
    }
    plan.assignments.push_back(std::move(folds));
  }
  return plan;
}

std::string fold_plan_to_json(const FoldPlan& plan) {
  nlohmann::json j;
  j["k"] = plan.k;
  j["repeats"] = plan.repeats;
  j["assignments"] = plan.assignments;
  return j.dump();
}

FoldPlan fold_plan_from_json(const std::string& json) {
  FoldPlan plan;
  try {
    const auto j = nlohmann::json::parse(json);
    plan.k = j.at("k").get<int>();
    plan.repeats = j.at("repeats").get<int>();
    plan.assignments = j.at("assignments")
                           .get<std::vector<std::vector<std::vector<std::size_t>>>>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("fold plan: ") + e.what());
  }
  if (plan.k < 2 || plan.repeats < 1 ||
      plan.assignments.size() != static_cast<std::size_t>(plan.repeats)) {
    throw LoadError("fold plan: inconsistent k or repeats");
  }
  std::size_t n = 0;
  for (const auto& f : plan.assignments[0]) n += f.size();
  for (const auto& folds : plan.assignments) {
    if (folds.size() != static_cast<std::size_t>(plan.k)) {
      throw LoadError("fold plan: repeat with wrong fold count");
    }
    std::vector<bool> seen(n, false);
    std::size_t lo = n;
    std::size_t hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      for (std::size_t idx : f) {
        if (idx >= n || seen[idx]) throw LoadError("fold plan: not a partition");
        seen[idx] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end() || hi - lo > 1) {
      throw LoadError("fold plan: not a balanced partition");
    }
  }
  return plan;
}

Dataset synth_linear(std::size_t n, std::size_t d, const PositionVector& w_true,
                     double noise_sd, RngStream& rng) {
  if (n == 0 || d == 0) throw DomainError("synth_linear: n and d must be >= 1");
  if (w_true.size() != d) throw DomainError("synth_linear: w_true has wrong size");
  if (!std::isfinite(noise_sd) || noise_sd < 0.0) {
    throw DomainError("synth_linear: noise_sd must be >= 0");
  }
  std::vector<double> xs(n * d);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double x = rng.uniform(-1.0, 1.0);
      xs[i * d + j] = x;
      y += w_true[j] * x;
    }
    if (noise_sd > 0.0) y += noise_sd * rng.gaussian();
    ys[i] = std::clamp(y, -1.0, 1.0);
  }
  return Dataset(n, d, std::move(xs), std::move(ys), 1.0);
}

}  // namespace dpswarm
