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

#include "branchlab/policies.hpp"

#include <algorithm>
#include <cmath>

namespace branchlab {

double combine_gains(const PolicyConfig& cfg, double delta_up, double delta_down) {
  if (cfg.f_kind == ScoreKind::kLinearMu) {
    return (1.0 - cfg.mu) * std::min(delta_up, delta_down) +
           cfg.mu * std::max(delta_up, delta_down);
  }
  return std::max(delta_up, cfg.eps) * std::max(delta_down, cfg.eps);
}

ScoreTable strong_branching(const NodeContext& ctx, const PolicyConfig& cfg) {
  ScoreTable table;
  const double parent_obj = ctx.node.lp.objective;
  const double cap = cfg.infeasible_cap_base * (1.0 + std::abs(parent_obj));
  for (std::size_t k = 0; k < ctx.candidates.size(); ++k) {
    const int var = ctx.candidates.vars[k];
    const double frac = ctx.candidates.values[k];
    ScoreEntry entry;
    entry.var = var;
    try {
      const MilpInstance up = restrict_bounds(ctx.inst, var, std::ceil(frac), kInf);
      const MilpInstance down = restrict_bounds(ctx.inst, var, -kInf, std::floor(frac));
      const LpOutcome up_lp = ctx.lps.solve_from(ctx.node.lp, up);
      const LpOutcome down_lp = ctx.lps.solve_from(ctx.node.lp, down);
      entry.delta_up = up_lp.status == LpStatus::kInfeasible
                           ? cap
                           : up_lp.objective - parent_obj;
      entry.delta_down = down_lp.status == LpStatus::kInfeasible
                             ? cap
                             : down_lp.objective - parent_obj;
      entry.score = combine_gains(cfg, entry.delta_up, entry.delta_down);
    } catch (const NumericalBreakdown&) {
      entry.score = -kInf;
      ++table.skipped;
    }
    table.entries.push_back(entry);
  }
  return table;
}

int select_argmax(const ScoreTable& table) {
  int best_var = -1;
  double best_score = -kInf;
  // Entries are in ascending var order; strict > keeps the lowest index on ties.
  for (const ScoreEntry& e : table.entries) {
    if (e.score == -kInf) continue;
    if (best_var < 0 || e.score > best_score) {
      best_score = e.score;
      best_var = e.var;
    }
  }
  if (best_var < 0) throw AllSkipped("all strong-branching candidates skipped");
  return best_var;
}

int most_fractional(const Candidates& cands) {
  int best = -1;
  double best_frac = -1.0;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const double v = cands.values[k];
    const double f = std::min(v - std::floor(v), std::ceil(v) - v);
    if (f > best_frac) {
      best_frac = f;
      best = cands.vars[k];
    }
  }
  return best;
}

int StrongBranchingPolicy::select(const NodeContext& ctx) {
  const ScoreTable table = strong_branching(ctx, cfg_);
  if (on_scores) on_scores(ctx, table);
  return select_argmax(table);
}

void PseudocostHistory::ensure(int n_vars) {
  if (static_cast<int>(count.size()) < n_vars) {
    up_sum.resize(static_cast<std::size_t>(n_vars), 0.0);
    down_sum.resize(static_cast<std::size_t>(n_vars), 0.0);
    count.resize(static_cast<std::size_t>(n_vars), 0);
  }
}

void PseudocostHistory::record(int var, double gain_up_per_frac,
                               double gain_down_per_frac) {
  const std::size_t v = static_cast<std::size_t>(var);
  up_sum[v] += gain_up_per_frac;
  down_sum[v] += gain_down_per_frac;
  count[v] += 1;
}

double PseudocostHistory::up_mean(int var) const {
  const std::size_t v = static_cast<std::size_t>(var);
  return count[v] > 0 ? up_sum[v] / count[v] : 1.0;
}

double PseudocostHistory::down_mean(int var) const {
  const std::size_t v = static_cast<std::size_t>(var);
  return count[v] > 0 ? down_sum[v] / count[v] : 1.0;
}

int PseudocostPolicy::select(const NodeContext& ctx) {
  hist_.ensure(ctx.root.n_vars);
  const double parent_obj = ctx.node.lp.objective;
  const double cap = cfg_.infeasible_cap_base * (1.0 + std::abs(parent_obj));

  int best_var = -1;
  double best_score = -kInf;
  for (std::size_t k = 0; k < ctx.candidates.size(); ++k) {
    const int var = ctx.candidates.vars[k];
    const double value = ctx.candidates.values[k];
    const double frac_down = value - std::floor(value);
    const double frac_up = std::ceil(value) - value;
    double score;
    if (hist_.count[static_cast<std::size_t>(var)] < reliability_k_) {
      // Unreliable: pay for strong branching and bank the unit gains.
      try {
        const MilpInstance up = restrict_bounds(ctx.inst, var, std::ceil(value), kInf);
        const MilpInstance down = restrict_bounds(ctx.inst, var, -kInf, std::floor(value));
        const LpOutcome up_lp = ctx.lps.solve_from(ctx.node.lp, up);
        const LpOutcome down_lp = ctx.lps.solve_from(ctx.node.lp, down);
        const bool up_inf = up_lp.status == LpStatus::kInfeasible;
        const bool down_inf = down_lp.status == LpStatus::kInfeasible;
        const double du = up_inf ? cap : up_lp.objective - parent_obj;
        const double dd = down_inf ? cap : down_lp.objective - parent_obj;
        score = combine_gains(cfg_, du, dd);
        if (!up_inf && !down_inf) {
          // Capped gains would poison the running means.
          hist_.record(var, du / std::max(frac_up, kTolInt),
                       dd / std::max(frac_down, kTolInt));
        }
      } catch (const NumericalBreakdown&) {
        score = -kInf;
      }
    } else {
      score = combine_gains(cfg_, hist_.up_mean(var) * frac_up,
                            hist_.down_mean(var) * frac_down);
    }
    if (score > best_score) {
      best_score = score;
      best_var = var;
    }
  }
  if (best_var < 0) throw AllSkipped("all pseudocost candidates skipped");
  return best_var;
}

GnnPolicy::GnnPolicy(GnnModel model, long pair_state_cap)
    : model_(std::move(model)), pair_state_cap_(pair_state_cap) {
  if (model_.arch != "mpnn" && model_.arch != "subgraph") {
    throw ArchitectureMismatch("gnn policy requires an mpnn or subgraph checkpoint");
  }
}

int GnnPolicy::select(const NodeContext& ctx) {
  const BipartiteGraph g = encode_graph(ctx.inst);
  if (model_.arch == "subgraph") {
    const long states = static_cast<long>(ctx.candidates.size()) * (g.n_cons + g.n_vars);
    if (states > pair_state_cap_) {
      throw OOMGuard("anchored policy state exceeds configured cap");
    }
  }
  const Eigen::VectorXd scores = model_.predict(g, ctx.candidates.vars);
  int best = -1;
  double best_score = 0.0;
  for (std::size_t k = 0; k < ctx.candidates.size(); ++k) {
    const double v = scores[static_cast<long>(k)];
    if (best < 0 || v > best_score) {
      best_score = v;
      best = ctx.candidates.vars[k];
    }
  }
  return best;
}

}  // namespace branchlab
