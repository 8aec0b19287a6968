// Copyright 2026 the BranchLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BRANCHLAB_BENCH_HPP_
#define BRANCHLAB_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "branchlab/bnb.hpp"
#include "branchlab/gnn.hpp"

namespace branchlab {

// Geometric "A +- B%" aggregation: A = exp(mean ln x), B = 100 * population
// std of ln x. Values must be positive (times are floored at 0.001 s by the
// caller; node counts are >= 1 by construction).
struct Aggregate {
  double a = 0;
  double b_percent = 0;
};

Aggregate aggregate(const std::vector<double>& values);

inline constexpr double kTimeFloor = 0.001;

std::uint64_t fnv1a64(const std::string& text);

struct ManifestRow {
  std::string instance_id;
  std::string policy;
  std::string status;  // ok | limit | model_oom_guard
  long node_count = 0;
  double solve_time_s = 0;
  double objective = kInf;
  long lp_solves = 0;
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t base_seed = 0;
  std::string environment;
  std::vector<ManifestRow> rows;
};

// JSONL: one header record, then one record per row, in instance order.
std::string manifest_to_jsonl(const RunManifest& m);
RunManifest manifest_from_jsonl(const std::string& text);
void write_manifest_file(const RunManifest& m, const std::string& path);
RunManifest read_manifest_file(const std::string& path);

// A named policy factory; bench builds a fresh policy per (instance, policy)
// pair so stateful policies (pseudocost) never leak across instances.
struct PolicySpec {
  std::string name;
  std::function<std::unique_ptr<BranchingPolicy>()> make;
};

struct BenchConfig {
  SolveLimits limits;
  TimeModel time_model = TimeModel::kWall;
  int threads = 1;
  std::string config_hash;
  std::uint64_t base_seed = 0;
};

// Runs every policy (the caller appends the baseline to `policies`) on every
// instance. Rows appear grouped by instance in input order, policies in list
// order. OOMGuard aborts the row with status model_oom_guard; hitting a limit
// records status limit.
RunManifest bench_run(const std::vector<std::pair<std::string, MilpInstance>>& instances,
                      const std::vector<PolicySpec>& policies,
                      const BenchConfig& cfg);

// Per-policy "A +- B%" Time/Node table over ok+limit rows (model_oom_guard
// rows are excluded from aggregates but counted). Regenerating from the same
// manifest is byte-identical.
std::string render_report(const RunManifest& m);

struct AccuracyRow {
  std::string arch;
  std::string loss;
  double accuracy = -1;
};

// Architecture x loss accuracy grid in a fixed layout.
std::string render_accuracy_table(const std::vector<AccuracyRow>& rows);

}  // namespace branchlab

#endif  // BRANCHLAB_BENCH_HPP_
