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

#ifndef BRANCHLAB_SIMPLEX_HPP_
#define BRANCHLAB_SIMPLEX_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "branchlab/milp.hpp"

namespace branchlab {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// Result of a relaxation solve. objective is +inf when Infeasible and -inf
// when Unbounded. When Optimal, x satisfies A x <= b + tol and
// l - tol <= x <= u + tol componentwise, and objective == c'x.
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;          // length n, present iff Optimal
  double objective = kInf;
  int iterations = 0;
  std::vector<int> basis;     // combined indices: structural < n, slacks >= n
};

struct SimplexOptions {
  double tol_feas = 1e-7;
  double tol_pivot = 1e-10;
  double tol_cost = 1e-9;      // reduced-cost optimality threshold
  int max_iterations = 0;      // 0 -> 1000 + 200*(m+n)
  std::ostream* trace = nullptr;  // one line per pivot when set
};

// Bounded-variable primal simplex on the LP relaxation (integrality ignored).
// Dantzig pricing, permanent switch to Bland's rule after 3*(m+n) degenerate
// pivots. Deterministic: identical input gives identical pivots. Throws
// NumericalBreakdown when pivoting stalls on sub-tolerance pivots even under
// Bland's rule.
LpOutcome solve_lp(const MilpInstance& inst, const SimplexOptions& opts = {});

// Child solve for a one-bound tightening of the parent's instance.
// Box-infeasible children return Infeasible without pivoting; a bound that is
// not binding at the parent optimum returns the parent outcome unchanged.
// Otherwise solves cold. Status/objective always match solve_lp within tol.
LpOutcome solve_child(const LpOutcome& parent, const MilpInstance& child,
                      const SimplexOptions& opts = {});

}  // namespace branchlab

#endif  // BRANCHLAB_SIMPLEX_HPP_
