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

#include "branchlab/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>

namespace branchlab {

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::kOpen: return "open";
    case NodeStatus::kClosedInfeasible: return "closed_infeasible";
    case NodeStatus::kClosedIntegral: return "closed_integral";
    case NodeStatus::kClosedBound: return "closed_bound";
  }
  return "?";
}

LpOutcome LpService::solve(const MilpInstance& inst) {
  LpOutcome out = solve_lp(inst, opts_);
  ++solves_;
  iterations_ += out.iterations;
  return out;
}

LpOutcome LpService::solve_from(const LpOutcome& parent, const MilpInstance& child) {
  LpOutcome out = solve_child(parent, child, opts_);
  ++solves_;
  iterations_ += out.iterations;
  return out;
}

Candidates fractional_candidates(const LpOutcome& outcome,
                                 const MilpInstance& inst, double tol_int) {
  Candidates cands;
  if (outcome.status != LpStatus::kOptimal) return cands;
  for (int j : inst.int_vars) {
    const double v = outcome.x[j];
    if (std::abs(v - std::round(v)) > tol_int) {
      cands.vars.push_back(j);
      cands.values.push_back(v);
    }
  }
  return cands;
}

MilpInstance apply_overrides(const MilpInstance& root,
                             const std::vector<BoundOverride>& overrides) {
  MilpInstance inst = root;
  for (const BoundOverride& o : overrides) {
    inst.lower[o.var] = std::max(inst.lower[o.var], o.lower);
    inst.upper[o.var] = std::min(inst.upper[o.var], o.upper);
    if (inst.lower[o.var] > inst.upper[o.var]) inst.box_infeasible = true;
  }
  return inst;
}

namespace {

std::vector<BoundOverride> with_override(std::vector<BoundOverride> base, int var,
                                         double lo, double hi) {
  auto it = std::lower_bound(base.begin(), base.end(), var,
                             [](const BoundOverride& o, int v) { return o.var < v; });
  if (it != base.end() && it->var == var) {
    it->lower = std::max(it->lower, lo);
    it->upper = std::min(it->upper, hi);
  } else {
    base.insert(it, BoundOverride{var, lo, hi});
  }
  return base;
}

bool integral_within(const LpOutcome& lp, const MilpInstance& inst, double tol) {
  if (lp.status != LpStatus::kOptimal) return false;
  for (int j : inst.int_vars) {
    if (std::abs(lp.x[j] - std::round(lp.x[j])) > tol) return false;
  }
  return true;
}

}  // namespace

std::pair<BnbNode, BnbNode> branch(const MilpInstance& root, const BnbNode& node,
                                   int var, double frac_value, LpService& lps,
                                   int next_id) {
  const double up_bound = std::ceil(frac_value);
  const double down_bound = std::floor(frac_value);

  BnbNode up;
  up.id = next_id;
  up.parent = node.id;
  up.depth = node.depth + 1;
  up.overrides = with_override(node.overrides, var, up_bound, kInf);

  BnbNode down;
  down.id = next_id + 1;
  down.parent = node.id;
  down.depth = node.depth + 1;
  down.overrides = with_override(node.overrides, var, -kInf, down_bound);

  for (BnbNode* child : {&up, &down}) {
    const MilpInstance child_inst = apply_overrides(root, child->overrides);
    child->lp = lps.solve_from(node.lp, child_inst);
    if (child->lp.status == LpStatus::kInfeasible) {
      child->status = NodeStatus::kClosedInfeasible;
    } else if (integral_within(child->lp, child_inst, kTolInt)) {
      child->status = NodeStatus::kClosedIntegral;
    } else {
      child->status = NodeStatus::kOpen;
    }
    // Lemma: tightening a bound can only raise the relaxation objective.
    if (child->lp.status == LpStatus::kOptimal &&
        node.lp.status == LpStatus::kOptimal &&
        child->lp.objective < node.lp.objective - 1e-9 * (1.0 + std::abs(node.lp.objective))) {
      throw Error("child relaxation fell below parent bound");
    }
  }
  return {up, down};
}

namespace {

void log_node(std::ostream* os, const BnbNode& n) {
  if (!os) return;
  *os << "{\"id\":" << n.id << ",\"parent\":" << n.parent
      << ",\"depth\":" << n.depth << ",\"status\":\"" << to_string(n.status)
      << "\",\"lp_obj\":";
  if (n.lp.status == LpStatus::kOptimal) {
    *os << n.lp.objective;
  } else {
    *os << "\"" << (n.lp.status == LpStatus::kInfeasible ? "inf" : "-inf") << "\"";
  }
  *os << ",\"branched_var\":" << n.branched_var << "}\n";
}

struct QueueEntry {
  double bound;
  int id;
};
struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;                                // FIFO tie-break
  }
};

}  // namespace

SolveResult solve(const MilpInstance& inst, BranchingPolicy& policy,
                  const SolveLimits& limits, const BnbOptions& opts,
                  NodeObserver* observer, const std::string& instance_id) {
  const auto t0 = std::chrono::steady_clock::now();
  LpService lps(opts.lp);
  SolveResult res;
  SolveStats& st = res.stats;

  std::vector<BnbNode> nodes;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;

  double incumbent = kInf;
  std::optional<Eigen::VectorXd> best;
  double root_bound = -kInf;

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto finished_time = [&] {
    if (opts.time_model == TimeModel::kDeterministic) {
      // Virtual clock: fixed cost per simplex iteration and per node.
      return 1e-5 * static_cast<double>(lps.iterations()) +
             1e-4 * static_cast<double>(st.node_count);
    }
    return elapsed();
  };

  auto note_integral = [&](const BnbNode& n) {
    if (n.lp.objective < incumbent) {
      incumbent = n.lp.objective;
      best = n.lp.x;
      if (root_bound > incumbent + 1e-6 * (1.0 + std::abs(incumbent))) {
        throw Error("incumbent fell below root relaxation bound");
      }
    }
  };

  BnbNode root;
  root.id = 0;
  root.lp = lps.solve(inst);
  ++st.node_count;
  if (root.lp.status == LpStatus::kInfeasible) {
    root.status = NodeStatus::kClosedInfeasible;
  } else if (root.lp.status == LpStatus::kUnbounded) {
    // MILP value is -inf by the relaxation convention; no solution vector.
    st.incumbent_objective = -kInf;
    st.optimality_proven = true;
    st.lp_solves = lps.solves();
    st.simplex_iterations = lps.iterations();
    st.solve_time = finished_time();
    log_node(opts.node_log, root);
    return res;
  } else if (integral_within(root.lp, inst, kTolInt)) {
    root.status = NodeStatus::kClosedIntegral;
    note_integral(root);
  } else {
    root.status = NodeStatus::kOpen;
    root_bound = root.lp.objective;
    open.push({root.lp.objective, 0});
  }
  nodes.push_back(root);

  bool limit_hit = false;
  while (!open.empty()) {
    if (limits.max_nodes > 0 && st.node_count >= limits.max_nodes) {
      limit_hit = true;
      break;
    }
    if (limits.max_expanded > 0 && st.policy_calls >= limits.max_expanded) {
      limit_hit = true;
      break;
    }
    if (limits.max_seconds > 0 && elapsed() >= limits.max_seconds) {
      limit_hit = true;
      break;
    }
    const QueueEntry e = open.top();
    open.pop();
    // Re-check rule (c): the incumbent may have improved since the push.
    if (e.bound >= incumbent - kTolGap) {
      nodes[static_cast<std::size_t>(e.id)].status = NodeStatus::kClosedBound;
      continue;
    }

    const MilpInstance node_inst =
        apply_overrides(inst, nodes[static_cast<std::size_t>(e.id)].overrides);
    const Candidates cands =
        fractional_candidates(nodes[static_cast<std::size_t>(e.id)].lp, node_inst);
    if (cands.empty()) {
      // Tolerance drift: treat as integral leaf.
      nodes[static_cast<std::size_t>(e.id)].status = NodeStatus::kClosedIntegral;
      note_integral(nodes[static_cast<std::size_t>(e.id)]);
      continue;
    }

    NodeContext ctx{inst, node_inst, nodes[static_cast<std::size_t>(e.id)],
                    cands, incumbent, lps, instance_id};
    ++st.policy_calls;
    const int var = policy.select(ctx);
    const std::size_t pos =
        static_cast<std::size_t>(std::lower_bound(cands.vars.begin(), cands.vars.end(), var) -
                                 cands.vars.begin());
    if (pos >= cands.vars.size() || cands.vars[pos] != var) {
      throw Error("policy selected a non-candidate variable");
    }
    const double frac = cands.values[pos];

    auto [up, down] = branch(inst, nodes[static_cast<std::size_t>(e.id)], var,
                             frac, lps, static_cast<int>(nodes.size()));
    nodes[static_cast<std::size_t>(e.id)].branched_var = var;
    if (observer) observer->on_branch(ctx, up, down);

    for (BnbNode* child : {&up, &down}) {
      st.node_count += 1;
      if (child->status == NodeStatus::kClosedIntegral) {
        note_integral(*child);
      } else if (child->status == NodeStatus::kOpen) {
        if (child->lp.objective >= incumbent - kTolGap) {
          child->status = NodeStatus::kClosedBound;
        } else {
          open.push({child->lp.objective, child->id});
        }
      }
      nodes.push_back(*child);
    }
  }

  st.incumbent_objective = incumbent;
  st.optimality_proven = !limit_hit;
  st.lp_solves = lps.solves();
  st.simplex_iterations = lps.iterations();
  st.solve_time = finished_time();
  res.best = best;
  res.limit_hit = limit_hit;
  // One record per node; interior nodes are those with branched_var >= 0.
  for (const BnbNode& n : nodes) log_node(opts.node_log, n);
  return res;
}

}  // namespace branchlab
