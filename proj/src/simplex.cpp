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

#include "branchlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace branchlab {

namespace {

// Tableau state for one solve. Columns: [0,n) structural, [n,n+m) slacks,
// [n+m,N) phase-1 artificials on initially violated rows.
class Tableau {
 public:
  Tableau(const MilpInstance& inst, const SimplexOptions& opts)
      : inst_(inst), opts_(opts), m_(inst.n_cons), n_(inst.n_vars) {}

  LpOutcome run();

 private:
  enum class StepResult { kPivoted, kOptimal, kUnbounded, kStalled };

  void build();
  void reset_costs(bool phase1);
  void refresh_reduced_costs();
  int price() const;  // entering column or -1 when optimal
  StepResult step();
  void pivot(int entering, int row, double enter_value, bool leave_at_upper);
  void drive_out_artificials();
  double nonbasic_value(int j) const {
    if (at_upper_[static_cast<std::size_t>(j)]) return ub_[j];
    return std::isfinite(lb_[j]) ? lb_[j] : 0.0;
  }

  const MilpInstance& inst_;
  const SimplexOptions& opts_;
  int m_, n_, total_ = 0, n_art_ = 0;

  Eigen::MatrixXd t_;        // m x total, B^{-1} [A I | R]
  Eigen::VectorXd binv_b_;   // B^{-1} b
  Eigen::VectorXd lb_, ub_;  // combined bounds
  Eigen::VectorXd cost_, d_; // current-phase costs and reduced costs
  Eigen::VectorXd xb_;       // values of basic variables by row
  std::vector<int> basis_;
  std::vector<char> in_basis_, at_upper_, is_art_;

  bool bland_ = false;
  int degenerate_pivots_ = 0;
  int iterations_ = 0;
};

void Tableau::build() {
  // Count violated rows at the deterministic initial point first.
  Eigen::VectorXd x0(n_);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(inst_.lower[j])) {
      x0[j] = inst_.lower[j];
    } else if (std::isfinite(inst_.upper[j])) {
      x0[j] = inst_.upper[j];
    } else {
      x0[j] = 0.0;
    }
  }
  Eigen::VectorXd slack0 = inst_.b;
  for (const Coord& e : inst_.entries) slack0[e.row] -= e.value * x0[e.col];

  std::vector<int> art_rows;
  for (int i = 0; i < m_; ++i) {
    if (slack0[i] < 0.0) art_rows.push_back(i);
  }
  n_art_ = static_cast<int>(art_rows.size());
  total_ = n_ + m_ + n_art_;

  t_.setZero(m_, total_);
  for (const Coord& e : inst_.entries) t_(e.row, e.col) = e.value;
  for (int i = 0; i < m_; ++i) t_(i, n_ + i) = 1.0;
  lb_.resize(total_);
  ub_.resize(total_);
  for (int j = 0; j < n_; ++j) {
    lb_[j] = inst_.lower[j];
    ub_[j] = inst_.upper[j];
  }
  for (int i = 0; i < m_; ++i) {
    lb_[n_ + i] = 0.0;
    ub_[n_ + i] = kInf;
  }
  is_art_.assign(static_cast<std::size_t>(total_), 0);
  for (int k = 0; k < n_art_; ++k) {
    const int col = n_ + m_ + k;
    t_(art_rows[static_cast<std::size_t>(k)], col) = -1.0;
    lb_[col] = 0.0;
    ub_[col] = kInf;
    is_art_[static_cast<std::size_t>(col)] = 1;
  }

  binv_b_ = inst_.b;
  basis_.assign(static_cast<std::size_t>(m_), -1);
  in_basis_.assign(static_cast<std::size_t>(total_), 0);
  at_upper_.assign(static_cast<std::size_t>(total_), 0);
  xb_.resize(m_);

  // Basis: slack on satisfied rows, artificial on violated rows. Violated
  // rows are negated so the basis matrix is the identity.
  int k = 0;
  for (int i = 0; i < m_; ++i) {
    if (slack0[i] >= 0.0) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      xb_[i] = slack0[i];
    } else {
      const int col = n_ + m_ + k;
      ++k;
      t_.row(i) = -t_.row(i);
      binv_b_[i] = -binv_b_[i];
      basis_[static_cast<std::size_t>(i)] = col;
      xb_[i] = -slack0[i];
    }
  }
  for (int i = 0; i < m_; ++i) in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 1;
  for (int j = 0; j < n_; ++j) {
    // Nonbasic at the bound used for x0; free variables sit at 0.
    at_upper_[static_cast<std::size_t>(j)] =
        (!std::isfinite(inst_.lower[j]) && std::isfinite(inst_.upper[j])) ? 1 : 0;
  }
}

void Tableau::reset_costs(bool phase1) {
  cost_.setZero(total_);
  if (phase1) {
    for (int j = n_ + m_; j < total_; ++j) cost_[j] = 1.0;
  } else {
    for (int j = 0; j < n_; ++j) cost_[j] = inst_.c[j];
  }
  refresh_reduced_costs();
}

void Tableau::refresh_reduced_costs() {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[static_cast<std::size_t>(i)]];
  d_ = cost_ - t_.transpose() * cb;
  for (int i = 0; i < m_; ++i) d_[basis_[static_cast<std::size_t>(i)]] = 0.0;
}

int Tableau::price() const {
  const double tol = opts_.tol_cost;
  int best = -1;
  double best_viol = tol;
  for (int j = 0; j < total_; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    if (in_basis_[sj] || is_art_[sj]) continue;  // artificials never re-enter
    if (lb_[j] == ub_[j]) continue;              // fixed
    const bool lf = std::isfinite(lb_[j]);
    const bool uf = std::isfinite(ub_[j]);
    double viol = 0.0;
    if (!lf && !uf) {
      viol = std::abs(d_[j]);
    } else if (at_upper_[sj]) {
      viol = d_[j];   // profitable to decrease
    } else {
      viol = -d_[j];  // profitable to increase
    }
    if (viol <= best_viol) continue;
    if (bland_) return j;  // Bland: first eligible index
    best_viol = viol;
    best = j;
  }
  return best;
}

Tableau::StepResult Tableau::step() {
  const int q = price();
  if (q < 0) return StepResult::kOptimal;
  const std::size_t sq = static_cast<std::size_t>(q);

  const bool free_var = !std::isfinite(lb_[q]) && !std::isfinite(ub_[q]);
  const double dir = free_var ? (d_[q] < 0.0 ? 1.0 : -1.0)
                              : (at_upper_[sq] ? -1.0 : 1.0);

  // Ratio test: basic variable r blocks when xb_r - dir*t*T(r,q) hits its
  // own bound. Rows with |pivot| <= tol_pivot are not eligible.
  double t_row = kInf;
  int r_best = -1;
  bool leave_at_upper = false;
  double best_pivot_mag = 0.0;
  bool tiny_blocker = false;
  for (int r = 0; r < m_; ++r) {
    const double a = t_(r, q);
    const double slope = dir * a;
    if (slope == 0.0) continue;
    const int p = basis_[static_cast<std::size_t>(r)];
    double bound, ratio;
    bool at_up;
    if (slope > 0.0) {
      bound = lb_[p];
      if (!std::isfinite(bound)) continue;
      ratio = (xb_[r] - bound) / slope;
      at_up = false;
    } else {
      bound = ub_[p];
      if (!std::isfinite(bound)) continue;
      ratio = (xb_[r] - bound) / slope;
      at_up = true;
    }
    if (ratio < 0.0) ratio = 0.0;  // degeneracy past the bound
    if (std::abs(a) <= opts_.tol_pivot) {
      if (ratio < t_row) tiny_blocker = true;
      continue;
    }
    const bool better =
        ratio < t_row - 1e-12 ||
        (ratio < t_row + 1e-12 &&
         (std::abs(a) > best_pivot_mag + 1e-15 ||
          (std::abs(a) > best_pivot_mag - 1e-15 && (r_best < 0 || r < r_best))));
    if (better) {
      t_row = std::min(t_row, ratio);
      r_best = r;
      leave_at_upper = at_up;
      best_pivot_mag = std::abs(a);
    }
  }

  const double span = (std::isfinite(lb_[q]) && std::isfinite(ub_[q]))
                          ? ub_[q] - lb_[q]
                          : kInf;

  if (r_best < 0 && !std::isfinite(span)) {
    // A blocker behind a sub-tolerance pivot is not a genuine ray.
    return tiny_blocker ? StepResult::kStalled : StepResult::kUnbounded;
  }

  ++iterations_;
  const double t_step = std::min(t_row, span);
  if (t_step <= 1e-11 && ++degenerate_pivots_ > 3 * (m_ + n_) && !bland_) {
    bland_ = true;  // permanent anti-cycling fallback
  }

  if (span <= t_row) {
    // Bound flip: q crosses its box, basis unchanged.
    const double old_val = nonbasic_value(q);
    at_upper_[sq] = at_upper_[sq] ? 0 : 1;
    const double delta = nonbasic_value(q) - old_val;
    if (delta != 0.0) xb_ -= delta * t_.col(q);
    if (opts_.trace) {
      *opts_.trace << "flip col=" << q << " step=" << std::abs(delta) << "\n";
    }
    return StepResult::kPivoted;
  }

  const double enter_value = nonbasic_value(q) + dir * t_step;
  xb_ -= (dir * t_step) * t_.col(q);
  pivot(q, r_best, enter_value, leave_at_upper);
  if (opts_.trace) {
    *opts_.trace << "pivot col=" << q << " row=" << r_best << " step=" << t_step
                 << (bland_ ? " bland" : "") << "\n";
  }
  return StepResult::kPivoted;
}

void Tableau::pivot(int entering, int row, double enter_value, bool leave_at_upper) {
  const int leaving = basis_[static_cast<std::size_t>(row)];
  const double piv = t_(row, entering);
  t_.row(row) /= piv;
  binv_b_[row] /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    const double f = t_(i, entering);
    if (f == 0.0) continue;
    t_.row(i) -= f * t_.row(row);
    binv_b_[i] -= f * binv_b_[row];
  }
  const double dq = d_[entering];
  if (dq != 0.0) d_ -= dq * t_.row(row).transpose();

  in_basis_[static_cast<std::size_t>(leaving)] = 0;
  in_basis_[static_cast<std::size_t>(entering)] = 1;
  at_upper_[static_cast<std::size_t>(leaving)] = leave_at_upper ? 1 : 0;
  basis_[static_cast<std::size_t>(row)] = entering;
  xb_[row] = enter_value;
  d_[entering] = 0.0;
}

void Tableau::drive_out_artificials() {
  for (int r = 0; r < m_; ++r) {
    const int p = basis_[static_cast<std::size_t>(r)];
    if (!is_art_[static_cast<std::size_t>(p)]) continue;
    int col = -1;
    for (int j = 0; j < n_ + m_; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      if (std::abs(t_(r, j)) > opts_.tol_pivot * 100) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      pivot(col, r, nonbasic_value(col), false);  // zero-step swap
    }
    // Otherwise the artificial stays basic at zero; pinning its box keeps it
    // there through phase 2.
  }
  for (int j = n_ + m_; j < total_; ++j) {
    lb_[j] = 0.0;
    ub_[j] = 0.0;
  }
}

LpOutcome Tableau::run() {
  LpOutcome out;
  for (int j = 0; j < n_; ++j) {
    if (inst_.lower[j] > inst_.upper[j]) {
      out.status = LpStatus::kInfeasible;
      out.objective = kInf;
      return out;
    }
  }

  build();
  const int max_iter =
      opts_.max_iterations > 0 ? opts_.max_iterations : 1000 + 200 * (m_ + n_);
  const double feas_scale = 1.0 + inst_.b.cwiseAbs().sum();

  for (int phase = n_art_ > 0 ? 1 : 2; phase <= 2; ++phase) {
    reset_costs(phase == 1);
    int since_refresh = 0;
    while (true) {
      if (iterations_ > max_iter) {
        throw NumericalBreakdown("simplex iteration cap exceeded");
      }
      if (++since_refresh >= 500) {
        refresh_reduced_costs();
        since_refresh = 0;
      }
      const StepResult sr = step();
      if (sr == StepResult::kPivoted) continue;
      if (sr == StepResult::kStalled) {
        if (bland_) {
          throw NumericalBreakdown("sub-tolerance pivots persist under Bland's rule");
        }
        bland_ = true;
        continue;
      }
      if (sr == StepResult::kUnbounded) {
        if (phase == 1) throw NumericalBreakdown("phase-1 reported unbounded");
        out.status = LpStatus::kUnbounded;
        out.objective = -kInf;
        out.iterations = iterations_;
        return out;
      }
      break;  // phase optimal
    }
    if (phase == 1) {
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r) {
        const int p = basis_[static_cast<std::size_t>(r)];
        if (is_art_[static_cast<std::size_t>(p)]) infeas += xb_[r];
      }
      if (infeas > opts_.tol_feas * feas_scale) {
        out.status = LpStatus::kInfeasible;
        out.objective = kInf;
        out.iterations = iterations_;
        return out;
      }
      drive_out_artificials();
    }
  }

  // Assemble the structural solution from basic rows + nonbasic bounds.
  Eigen::VectorXd z(total_);
  for (int j = 0; j < total_; ++j) {
    z[j] = in_basis_[static_cast<std::size_t>(j)] ? 0.0 : nonbasic_value(j);
  }
  for (int r = 0; r < m_; ++r) z[basis_[static_cast<std::size_t>(r)]] = xb_[r];

  out.status = LpStatus::kOptimal;
  out.x = z.head(n_);
  out.objective = inst_.c.dot(out.x);
  out.iterations = iterations_;
  out.basis = basis_;

  // Cheap final sanity: feasibility residuals within a loose multiple of tol.
  Eigen::VectorXd resid = inst_.b;
  for (const Coord& e : inst_.entries) resid[e.row] -= e.value * out.x[e.col];
  const double scale = 1.0 + out.x.cwiseAbs().maxCoeff() + inst_.b.cwiseAbs().maxCoeff();
  if (resid.minCoeff() < -opts_.tol_feas * scale * 100) {
    throw NumericalBreakdown("final solution violates row feasibility");
  }
  return out;
}

}  // namespace

LpOutcome solve_lp(const MilpInstance& inst, const SimplexOptions& opts) {
  if (inst.box_infeasible) {
    LpOutcome out;
    out.status = LpStatus::kInfeasible;
    out.objective = kInf;
    return out;
  }
  Tableau tab(inst, opts);
  return tab.run();
}

LpOutcome solve_child(const LpOutcome& parent, const MilpInstance& child,
                      const SimplexOptions& opts) {
  if (child.box_infeasible) {
    LpOutcome out;
    out.status = LpStatus::kInfeasible;
    out.objective = kInf;
    return out;
  }
  if (parent.status == LpStatus::kOptimal && parent.x.size() == child.n_vars) {
    bool parent_still_feasible = true;
    for (int j = 0; j < child.n_vars; ++j) {
      if (parent.x[j] < child.lower[j] - opts.tol_feas ||
          parent.x[j] > child.upper[j] + opts.tol_feas) {
        parent_still_feasible = false;
        break;
      }
    }
    // The child's feasible set is contained in the parent's, so a parent
    // optimum inside the child's box is already the child optimum.
    if (parent_still_feasible) {
      LpOutcome out = parent;
      out.iterations = 0;
      return out;
    }
  }
  return solve_lp(child, opts);
}

}  // namespace branchlab
