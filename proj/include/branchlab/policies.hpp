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

#ifndef BRANCHLAB_POLICIES_HPP_
#define BRANCHLAB_POLICIES_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "branchlab/bnb.hpp"
#include "branchlab/gnn.hpp"

namespace branchlab {

enum class ScoreKind { kLinearMu, kProductEps };

// Symmetric gain combinators of the strong-branching score.
struct PolicyConfig {
  ScoreKind f_kind = ScoreKind::kProductEps;
  double mu = 1.0 / 6.0;   // linear_mu: (1-mu)*min + mu*max
  double eps = 1e-6;       // product_eps: max(d+,eps)*max(d-,eps)
  double infeasible_cap_base = 1e6;  // M = base * (1 + |parent objective|)
};

// f(d+, d-): exactly symmetric in its arguments for both kinds.
double combine_gains(const PolicyConfig& cfg, double delta_up, double delta_down);

struct ScoreEntry {
  int var = 0;
  double delta_up = 0;
  double delta_down = 0;
  double score = 0;  // -inf marks a skipped candidate
};

struct ScoreTable {
  std::vector<ScoreEntry> entries;
  int skipped = 0;  // candidates lost to NumericalBreakdown
};

// Solves both child LPs per candidate. Infeasible children contribute the cap
// M in place of their gain; per-candidate NumericalBreakdown yields score
// -inf (skipped in argmax).
ScoreTable strong_branching(const NodeContext& ctx, const PolicyConfig& cfg);

// Largest score, ties to the lowest variable index. Throws AllSkipped when
// every score is -inf.
int select_argmax(const ScoreTable& table);

// argmax of min(x - floor x, ceil x - x); ties to the lowest index.
int most_fractional(const Candidates& cands);

class StrongBranchingPolicy : public BranchingPolicy {
 public:
  explicit StrongBranchingPolicy(PolicyConfig cfg = {}) : cfg_(cfg) {}

  int select(const NodeContext& ctx) override;
  std::string name() const override { return "strong"; }

  // Sample-collection hook, invoked with each node's full score table.
  std::function<void(const NodeContext&, const ScoreTable&)> on_scores;

 private:
  PolicyConfig cfg_;
};

class MostFractionalPolicy : public BranchingPolicy {
 public:
  int select(const NodeContext& ctx) override { return most_fractional(ctx.candidates); }
  std::string name() const override { return "most_fractional"; }
};

// Per-variable running means of objective gain per unit fractionality.
struct PseudocostHistory {
  std::vector<double> up_sum, down_sum;
  std::vector<int> count;

  void ensure(int n_vars);
  void record(int var, double gain_up_per_frac, double gain_down_per_frac);
  double up_mean(int var) const;
  double down_mean(int var) const;
};

// Simplified reliability rule: candidates with fewer than reliability_k
// recorded strong-branching evaluations are scored by strong branching (which
// also feeds the history); the rest use f(pc_up*frac_up, pc_down*frac_down).
// One argmax over the mixed scores, lowest-index tie-break.
class PseudocostPolicy : public BranchingPolicy {
 public:
  explicit PseudocostPolicy(PolicyConfig cfg = {}, int reliability_k = 4)
      : cfg_(cfg), reliability_k_(reliability_k) {}

  int select(const NodeContext& ctx) override;
  std::string name() const override { return "pseudocost"; }

  const PseudocostHistory& history() const { return hist_; }

 private:
  PolicyConfig cfg_;
  int reliability_k_;
  PseudocostHistory hist_;
};

// Learned policy adapter: encodes the node-local instance, runs the model
// over the candidate variables, picks the restricted argmax (lowest index on
// ties). Only "mpnn" and "subgraph" checkpoints are accepted. A configurable
// pair-state cap throws OOMGuard for the anchored model on instances where
// |candidates|*(n+m) states would not fit; the bench harness records such
// rows as model_oom_guard.
class GnnPolicy : public BranchingPolicy {
 public:
  explicit GnnPolicy(GnnModel model, long pair_state_cap = 50'000'000);

  int select(const NodeContext& ctx) override;
  std::string name() const override { return "gnn_" + model_.arch; }

  const GnnModel& model() const { return model_; }

 private:
  GnnModel model_;
  long pair_state_cap_;
};

}  // namespace branchlab

#endif  // BRANCHLAB_POLICIES_HPP_
