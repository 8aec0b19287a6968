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

#ifndef BRANCHLAB_MILP_HPP_
#define BRANCHLAB_MILP_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "branchlab/errors.hpp"

namespace branchlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One nonzero of the constraint matrix, coordinate form.
struct Coord {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Canonical MILP:  min c'x  s.t.  A x <= b,  l <= x <= u,  x_j integral for
// j in int_vars. Minimization only; maximization inputs are negated at
// ingestion. All types are immutable after construction and safe to share.
struct MilpInstance {
  int n_vars = 0;
  int n_cons = 0;
  Eigen::VectorXd c;
  std::vector<Coord> entries;  // unique (row, col), value != 0
  Eigen::VectorXd b;
  Eigen::VectorXd lower;  // -inf allowed
  Eigen::VectorXd upper;  // +inf allowed
  std::vector<int> int_vars;  // strictly increasing, in range

  // Set by restrict_bounds when a tightening empties a variable's box.
  bool box_infeasible = false;

  // Throws std::invalid_argument on any invariant violation.
  void validate() const;
};

inline constexpr int kConsFeatDim = 1;
inline constexpr int kVarFeatDim = 6;

// Bipartite view: constraint nodes V (feature b_i) and variable nodes W.
// Infinite bounds cannot feed a network, so each bound enters as a
// (finite-flag, value) pair with value clamped to 0 when infinite:
//   var feature = (c_j, l_flag, l_value, u_flag, u_value, is_int).
struct BipartiteGraph {
  struct Arc {
    int node = 0;      // neighbor index on the opposite side
    double weight = 0;  // A_ij
  };

  int n_cons = 0;
  int n_vars = 0;
  Eigen::MatrixXd cons_feats;  // m x 1
  Eigen::MatrixXd var_feats;   // n x 6
  std::vector<std::vector<Arc>> cons_adj;  // per constraint: variable neighbors
  std::vector<std::vector<Arc>> var_adj;   // per variable: constraint neighbors
  std::vector<Coord> edges;  // sorted by (row, col); canonical iteration order

  int edge_count() const { return static_cast<int>(edges.size()); }
};

// Def-3.1 style encoding. |V| = m, |W| = n, one edge per nonzero of A.
BipartiteGraph encode_graph(const MilpInstance& inst);

// Returns a copy with l_var := max(l_var, new_l), u_var := min(u_var, new_u).
// An emptied box sets box_infeasible instead of throwing. Throws
// std::out_of_range for a bad index.
MilpInstance restrict_bounds(const MilpInstance& inst, int var, double new_l,
                             double new_u);

// MILP-JSON v1:
// {"version":1,"n":..,"m":..,"c":[..],"A":[[i,j,v],..],"b":[..],
//  "l":[..],"u":[..],"int_vars":[..]}
// where l/u entries may be the strings "-inf"/"inf". Field names are fixed;
// any version other than 1 (absent means 1) is rejected with FormatError.
std::string to_milp_json(const MilpInstance& inst);
MilpInstance milp_from_json(const std::string& text);

void write_milp_file(const MilpInstance& inst, const std::string& path);
MilpInstance read_milp_file(const std::string& path);

}  // namespace branchlab

#endif  // BRANCHLAB_MILP_HPP_
