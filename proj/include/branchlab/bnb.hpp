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

#ifndef BRANCHLAB_BNB_HPP_
#define BRANCHLAB_BNB_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "branchlab/milp.hpp"
#include "branchlab/simplex.hpp"

namespace branchlab {

inline constexpr double kTolInt = 1e-6;
inline constexpr double kTolGap = 1e-9;

enum class NodeStatus { kOpen, kClosedInfeasible, kClosedIntegral, kClosedBound };

std::string to_string(NodeStatus s);

// Per-variable bound tightening relative to the root instance.
struct BoundOverride {
  int var = 0;
  double lower = -kInf;
  double upper = kInf;
};

struct BnbNode {
  int id = 0;
  int parent = -1;  // -1 for root
  int depth = 0;
  std::vector<BoundOverride> overrides;  // sorted by var, one entry per var
  LpOutcome lp;
  NodeStatus status = NodeStatus::kOpen;
  int branched_var = -1;  // set when the node is expanded
};

// Integer-constrained variables whose LP value is more than tol_int from the
// nearest integer, ascending index order.
struct Candidates {
  std::vector<int> vars;
  std::vector<double> values;  // fractional LP values, parallel to vars

  bool empty() const { return vars.empty(); }
  std::size_t size() const { return vars.size(); }
};

struct SolveStats {
  long node_count = 0;
  double solve_time = 0.0;  // seconds (wall or deterministic, per options)
  double incumbent_objective = kInf;
  bool optimality_proven = false;
  long policy_calls = 0;
  long lp_solves = 0;
  long simplex_iterations = 0;
};

struct SolveLimits {
  long max_nodes = 0;      // created nodes; 0 = unlimited
  long max_expanded = 0;   // branched nodes (policy calls); 0 = unlimited
  double max_seconds = 0;  // 0 = unlimited (wall-clock guard)
};

enum class TimeModel { kWall, kDeterministic };

struct BnbOptions {
  SimplexOptions lp;
  TimeModel time_model = TimeModel::kWall;
  std::ostream* node_log = nullptr;  // JSONL, one record per node
};

// Counted LP access handed to policies so their child solves are observable
// in SolveStats.
class LpService {
 public:
  explicit LpService(SimplexOptions opts) : opts_(opts) {}

  LpOutcome solve(const MilpInstance& inst);
  LpOutcome solve_from(const LpOutcome& parent, const MilpInstance& child);

  long solves() const { return solves_; }
  long iterations() const { return iterations_; }

 private:
  SimplexOptions opts_;
  long solves_ = 0;
  long iterations_ = 0;
};

// Everything a branching policy may look at for one node.
struct NodeContext {
  const MilpInstance& root;
  const MilpInstance& inst;  // node-local instance (root + overrides)
  const BnbNode& node;
  const Candidates& candidates;
  double incumbent;
  LpService& lps;
  std::string instance_id;  // provenance label for sample collection
};

class BranchingPolicy {
 public:
  virtual ~BranchingPolicy() = default;
  virtual int select(const NodeContext& ctx) = 0;
  virtual std::string name() const = 0;
};

// Hooks for sample collectors and invariants tests. Called while the node is
// being expanded; children carry eagerly solved LPs.
class NodeObserver {
 public:
  virtual ~NodeObserver() = default;
  virtual void on_branch(const NodeContext& /*ctx*/, const BnbNode& /*up*/,
                         const BnbNode& /*down*/) {}
};

Candidates fractional_candidates(const LpOutcome& outcome,
                                 const MilpInstance& inst,
                                 double tol_int = kTolInt);

// Root instance + node overrides, materialized.
MilpInstance apply_overrides(const MilpInstance& root,
                             const std::vector<BoundOverride>& overrides);

// Up child gets x_var >= ceil(frac_value), down child x_var <= floor(...).
// Both LPs are solved eagerly through `lps`; box-infeasible children come
// back ClosedInfeasible without pivoting. Ids are next_id, next_id+1.
std::pair<BnbNode, BnbNode> branch(const MilpInstance& root, const BnbNode& node,
                                   int var, double frac_value, LpService& lps,
                                   int next_id);

struct SolveResult {
  SolveStats stats;
  std::optional<Eigen::VectorXd> best;  // incumbent solution when one exists
  bool limit_hit = false;
};

// Best-first (lowest LP bound, FIFO tie-break) branch and bound. Closing
// rules: (a) infeasible, (b) integral within tol_int, (c) bound >= incumbent
// - tol_gap. An unbounded root relaxation is reported as incumbent -inf with
// optimality_proven (generated benchmark families never produce it).
SolveResult solve(const MilpInstance& inst, BranchingPolicy& policy,
                  const SolveLimits& limits, const BnbOptions& opts = {},
                  NodeObserver* observer = nullptr,
                  const std::string& instance_id = "");

}  // namespace branchlab

#endif  // BRANCHLAB_BNB_HPP_
