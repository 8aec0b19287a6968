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

#include "branchlab/instance_gen.hpp"

#include <algorithm>
#include <cmath>

#include "branchlab/rng.hpp"

namespace branchlab {

Family family_from_string(const std::string& s) {
  if (s == "setcover") return Family::kSetcover;
  if (s == "cauction") return Family::kCauction;
  if (s == "facilities") return Family::kFacilities;
  if (s == "indset") return Family::kIndset;
  throw Error("unknown family: " + s);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kSetcover: return "setcover";
    case Family::kCauction: return "cauction";
    case Family::kFacilities: return "facilities";
    case Family::kIndset: return "indset";
  }
  return "?";
}

SizeClass size_from_string(const std::string& s) {
  if (s == "small") return SizeClass::kSmall;
  if (s == "medium") return SizeClass::kMedium;
  if (s == "large") return SizeClass::kLarge;
  if (s == "custom") return SizeClass::kCustom;
  throw Error("unknown size: " + s);
}

std::pair<int, int> GenSpec::dims() const {
  if (size == SizeClass::kCustom) {
    if (custom_a <= 0 || (family != Family::kIndset && custom_b <= 0)) {
      throw Error("custom size requires positive dimensions");
    }
    return {custom_a, custom_b};
  }
  const int level = size == SizeClass::kSmall ? 0 : size == SizeClass::kMedium ? 1 : 2;
  switch (family) {
    case Family::kSetcover: {
      constexpr int n[3] = {1000, 1000, 1000}, m[3] = {500, 1000, 2000};
      return {n[level], m[level]};
    }
    case Family::kCauction: {
      constexpr int n[3] = {500, 1000, 1500}, m[3] = {100, 200, 300};
      return {n[level], m[level]};
    }
    case Family::kFacilities: {
      constexpr int f[3] = {50, 100, 150};
      return {f[level], f[level]};
    }
    case Family::kIndset: {
      constexpr int nodes[3] = {500, 1000, 1500};
      return {nodes[level], 0};
    }
  }
  throw Error("unreachable");
}

MilpInstance gen_setcover(const GenSpec& spec) {
  const auto [n, m] = spec.dims();
  Rng rng(spec.seed);
  MilpInstance inst;
  inst.n_vars = n;
  inst.n_cons = m;
  inst.c.resize(n);
  for (int j = 0; j < n; ++j) {
    inst.c[j] = static_cast<double>(rng.uniform_int(spec.cost_lo, spec.cost_hi));
  }
  // Row i: sum_j a_ij x_j >= 1 in canonical form  -sum a_ij x_j <= -1.
  // Resample any row with fewer than two covering columns.
  for (int i = 0; i < m; ++i) {
    std::vector<int> cols;
    do {
      cols.clear();
      for (int j = 0; j < n; ++j) {
        if (rng.uniform() < spec.density) cols.push_back(j);
      }
    } while (cols.size() < 2);
    for (int j : cols) inst.entries.push_back({i, j, -1.0});
  }
  inst.b = Eigen::VectorXd::Constant(m, -1.0);
  inst.lower = Eigen::VectorXd::Zero(n);
  inst.upper = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) inst.int_vars.push_back(j);
  inst.validate();
  return inst;
}

MilpInstance gen_cauction(const GenSpec& spec) {
  const auto [n_bids, m_items] = spec.dims();
  Rng rng(spec.seed);
  MilpInstance inst;
  inst.n_vars = n_bids;
  inst.n_cons = m_items;

  std::vector<double> base(static_cast<std::size_t>(m_items));
  for (int i = 0; i < m_items; ++i) base[static_cast<std::size_t>(i)] = rng.uniform(spec.value_lo, spec.value_hi);

  // Geometric bundle size with the configured mean (failures-before-success
  // parameterization), clipped to [1, m].
  const double p = 1.0 / std::max(1.0, spec.bundle_mean);
  inst.c.resize(n_bids);
  for (int j = 0; j < n_bids; ++j) {
    int size = 1;
    while (size < m_items && rng.uniform() > p) ++size;
    const std::vector<int> bundle = rng.sample_indices(size, m_items);
    double value = 0.0;
    for (int item : bundle) {
      value += base[static_cast<std::size_t>(item)];
      inst.entries.push_back({item, j, 1.0});
    }
    const double price = value * (1.0 + rng.uniform(0.0, spec.price_jitter));
    inst.c[j] = -price;  // maximize price => minimize negated
  }
  inst.b = Eigen::VectorXd::Ones(m_items);
  inst.lower = Eigen::VectorXd::Zero(n_bids);
  inst.upper = Eigen::VectorXd::Ones(n_bids);
  for (int j = 0; j < n_bids; ++j) inst.int_vars.push_back(j);
  inst.validate();
  return inst;
}

MilpInstance gen_facilities(const GenSpec& spec) {
  const auto [nf, nc] = spec.dims();
  Rng rng(spec.seed);

  std::vector<double> fx(static_cast<std::size_t>(nf)), fy(static_cast<std::size_t>(nf));
  std::vector<double> cx(static_cast<std::size_t>(nc)), cy(static_cast<std::size_t>(nc));
  for (int f = 0; f < nf; ++f) {
    fx[static_cast<std::size_t>(f)] = rng.uniform();
    fy[static_cast<std::size_t>(f)] = rng.uniform();
  }
  for (int c = 0; c < nc; ++c) {
    cx[static_cast<std::size_t>(c)] = rng.uniform();
    cy[static_cast<std::size_t>(c)] = rng.uniform();
  }
  std::vector<double> demand(static_cast<std::size_t>(nc));
  double total_demand = 0.0;
  for (int c = 0; c < nc; ++c) {
    demand[static_cast<std::size_t>(c)] = rng.uniform_int(spec.demand_lo, spec.demand_hi);
    total_demand += demand[static_cast<std::size_t>(c)];
  }
  std::vector<double> cap(static_cast<std::size_t>(nf));
  double total_cap = 0.0;
  for (int f = 0; f < nf; ++f) {
    cap[static_cast<std::size_t>(f)] = rng.uniform_int(spec.cap_lo, spec.cap_hi);
    total_cap += cap[static_cast<std::size_t>(f)];
  }
  // Rescale so opening everything is always feasible.
  if (total_cap < spec.cap_margin * total_demand) {
    const double lambda = spec.cap_margin * total_demand / total_cap;
    for (double& v : cap) v = std::ceil(v * lambda);
  }

  // Variables: x_f (binary, first nf) then y_{fc} in [0,1] (fraction of
  // customer c served by f), index nf + f*nc + c.
  MilpInstance inst;
  inst.n_vars = nf + nf * nc;
  inst.n_cons = 2 * nc + nf;
  inst.c.resize(inst.n_vars);
  for (int f = 0; f < nf; ++f) {
    inst.c[f] = rng.uniform(spec.fixed_lo, spec.fixed_hi) * spec.cost_scale;
  }
  for (int f = 0; f < nf; ++f) {
    for (int c = 0; c < nc; ++c) {
      const double dx = fx[static_cast<std::size_t>(f)] - cx[static_cast<std::size_t>(c)];
      const double dy = fy[static_cast<std::size_t>(f)] - cy[static_cast<std::size_t>(c)];
      const double dist = std::sqrt(dx * dx + dy * dy);
      inst.c[nf + f * nc + c] = dist * demand[static_cast<std::size_t>(c)] * spec.cost_scale;
    }
  }

  // Demand c: sum_f y_{fc} = 1, split into <= and >= rows (2c, 2c+1).
  for (int c = 0; c < nc; ++c) {
    for (int f = 0; f < nf; ++f) {
      inst.entries.push_back({2 * c, nf + f * nc + c, 1.0});
      inst.entries.push_back({2 * c + 1, nf + f * nc + c, -1.0});
    }
  }
  // Capacity f (row 2*nc + f): sum_c d_c y_{fc} - cap_f x_f <= 0.
  for (int f = 0; f < nf; ++f) {
    const int row = 2 * nc + f;
    for (int c = 0; c < nc; ++c) {
      inst.entries.push_back({row, nf + f * nc + c, demand[static_cast<std::size_t>(c)]});
    }
    inst.entries.push_back({row, f, -cap[static_cast<std::size_t>(f)]});
  }
  inst.b.resize(inst.n_cons);
  for (int c = 0; c < nc; ++c) {
    inst.b[2 * c] = 1.0;
    inst.b[2 * c + 1] = -1.0;
  }
  for (int f = 0; f < nf; ++f) inst.b[2 * nc + f] = 0.0;
  inst.lower = Eigen::VectorXd::Zero(inst.n_vars);
  inst.upper = Eigen::VectorXd::Ones(inst.n_vars);
  for (int f = 0; f < nf; ++f) inst.int_vars.push_back(f);
  inst.validate();
  return inst;
}

MilpInstance gen_indset(const GenSpec& spec) {
  const int n = spec.dims().first;
  Rng rng(spec.seed);
  const int seed_nodes = std::min(n, spec.affinity + 1);

  // Barabasi-Albert: complete seed graph, then preferential attachment of
  // `affinity` distinct neighbors per new node.
  std::vector<std::pair<int, int>> edge_list;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<int> endpoint_pool;  // node repeated once per incident edge
  auto add_edge = [&](int u, int v) {
    edge_list.emplace_back(u, v);
    degree[static_cast<std::size_t>(u)]++;
    degree[static_cast<std::size_t>(v)]++;
    endpoint_pool.push_back(u);
    endpoint_pool.push_back(v);
  };
  for (int u = 0; u < seed_nodes; ++u) {
    for (int v = u + 1; v < seed_nodes; ++v) add_edge(u, v);
  }
  for (int u = seed_nodes; u < n; ++u) {
    std::vector<int> targets;
    const int want = std::min(spec.affinity, u);
    while (static_cast<int>(targets.size()) < want) {
      const int pick = endpoint_pool[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(endpoint_pool.size()) - 1))];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) {
        targets.push_back(pick);
      }
    }
    for (int v : targets) add_edge(u, v);
  }

  MilpInstance inst;
  inst.n_vars = n;
  inst.n_cons = static_cast<int>(edge_list.size());
  inst.c = Eigen::VectorXd::Constant(n, -1.0);  // maximize cardinality
  for (int e = 0; e < inst.n_cons; ++e) {
    const auto [u, v] = edge_list[static_cast<std::size_t>(e)];
    inst.entries.push_back({e, std::min(u, v), 1.0});
    inst.entries.push_back({e, std::max(u, v), 1.0});
  }
  inst.b = Eigen::VectorXd::Ones(inst.n_cons);
  inst.lower = Eigen::VectorXd::Zero(n);
  inst.upper = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) inst.int_vars.push_back(j);
  inst.validate();
  return inst;
}

MilpInstance generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::kSetcover: return gen_setcover(spec);
    case Family::kCauction: return gen_cauction(spec);
    case Family::kFacilities: return gen_facilities(spec);
    case Family::kIndset: return gen_indset(spec);
  }
  throw Error("unreachable");
}

}  // namespace branchlab
