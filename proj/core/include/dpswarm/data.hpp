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

#ifndef DPSWARM_DATA_HPP_
#define DPSWARM_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dpswarm/objective.hpp"
#include "dpswarm/rng.hpp"
#include "dpswarm/types.hpp"

namespace dpswarm {

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t target_column = 0;

  std::size_t n() const { return rows.size(); }
  std::size_t d() const { return header.size() - 1; }
};

// Column name, zero-based index, or the default (last column).
using TargetSelector = std::variant<std::monostate, std::string, std::size_t>;

// Reads a comma-separated file with one header row. Throws LoadError naming
// the 1-based data row and column for non-numeric or non-finite cells, ragged
// rows, an unknown target, or a file without data rows.
RawTable load_csv(const std::filesystem::path& path,
                  const TargetSelector& target = {});
RawTable parse_csv(const std::string& text, const TargetSelector& target = {});

struct ColumnRange {
  double min;
  double max;
};

// Original value of a normalized entry. Constant columns map back to min.
double denormalize(double v, const ColumnRange& range);

struct NormalizedData {
  Dataset data;
  std::vector<ColumnRange> feature_ranges;
  ColumnRange target_range;
};

// Maps every column to [-1, 1] by v -> 2 (v - min) / (max - min) - 1;
// constant columns become 0. The result has a = 1.
NormalizedData normalize(const RawTable& table);

struct FoldPlan {
  int k = 0;
  int repeats = 0;
  // assignments[repeat][fold] -> row indices.
  std::vector<std::vector<std::vector<std::size_t>>> assignments;

  // Complement of `fold` within `repeat`, in permutation order.
  std::vector<std::size_t> training_rows(int repeat, int fold) const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Per repeat, Fisher-Yates shuffle of 0..n-1 using rng.below(), then cut into
// k consecutive folds; the first n % k folds hold one extra row. Throws
// ConfigError unless k >= 2, repeats >= 1 and n >= k.
FoldPlan kfold(std::size_t n, int k, int repeats, RngStream& rng);

std::string fold_plan_to_json(const FoldPlan& plan);
// Throws LoadError on malformed JSON or a plan that is not a partition.
FoldPlan fold_plan_from_json(const std::string& json);

// x rows uniform in [-1, 1]^d, y = w_true . x + N(0, noise_sd^2) clipped to
// [-1, 1]. Draws per row: d uniforms, then two for the Gaussian when
// noise_sd > 0.
Dataset synth_linear(std::size_t n, std::size_t d, const PositionVector& w_true,
                     double noise_sd, RngStream& rng);

}  // namespace dpswarm

#endif  // DPSWARM_DATA_HPP_
