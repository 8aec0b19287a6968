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

#include "branchlab/milp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace branchlab {

namespace {

using ordered_json = nlohmann::ordered_json;

void fail(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

void MilpInstance::validate() const {
  if (n_vars < 0 || n_cons < 0) fail("negative dimensions");
  if (c.size() != n_vars) fail("c length != n_vars");
  if (b.size() != n_cons) fail("b length != n_cons");
  if (lower.size() != n_vars || upper.size() != n_vars) fail("bound length != n_vars");
  std::set<std::pair<int, int>> seen;
  for (const Coord& e : entries) {
    if (e.row < 0 || e.row >= n_cons) fail("entry row out of range");
    if (e.col < 0 || e.col >= n_vars) fail("entry col out of range");
    if (e.value == 0.0 || !std::isfinite(e.value)) fail("entry value zero or non-finite");
    if (!seen.emplace(e.row, e.col).second) fail("duplicate (row,col) entry");
  }
  for (int j = 0; j < n_vars; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) fail("NaN bound");
    if (lower[j] > upper[j] && !box_infeasible) fail("l_j > u_j without box_infeasible flag");
  }
  int prev = -1;
  for (int j : int_vars) {
    if (j <= prev) fail("int_vars not strictly increasing");
    if (j < 0 || j >= n_vars) fail("int_vars index out of range");
    prev = j;
  }
  for (int i = 0; i < n_cons; ++i) {
    if (!std::isfinite(b[i])) fail("non-finite rhs");
  }
  for (int j = 0; j < n_vars; ++j) {
    if (!std::isfinite(c[j])) fail("non-finite objective coefficient");
  }
}

BipartiteGraph encode_graph(const MilpInstance& inst) {
  BipartiteGraph g;
  g.n_cons = inst.n_cons;
  g.n_vars = inst.n_vars;
  g.cons_feats.resize(inst.n_cons, kConsFeatDim);
  for (int i = 0; i < inst.n_cons; ++i) g.cons_feats(i, 0) = inst.b[i];

  g.var_feats.resize(inst.n_vars, kVarFeatDim);
  const std::set<int> ints(inst.int_vars.begin(), inst.int_vars.end());
  for (int j = 0; j < inst.n_vars; ++j) {
    const bool lf = std::isfinite(inst.lower[j]);
    const bool uf = std::isfinite(inst.upper[j]);
    g.var_feats(j, 0) = inst.c[j];
    g.var_feats(j, 1) = lf ? 1.0 : 0.0;
    g.var_feats(j, 2) = lf ? inst.lower[j] : 0.0;
    g.var_feats(j, 3) = uf ? 1.0 : 0.0;
    g.var_feats(j, 4) = uf ? inst.upper[j] : 0.0;
    g.var_feats(j, 5) = ints.count(j) ? 1.0 : 0.0;
  }

  g.edges = inst.entries;
  std::sort(g.edges.begin(), g.edges.end(), [](const Coord& a, const Coord& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  g.cons_adj.assign(static_cast<std::size_t>(inst.n_cons), {});
  g.var_adj.assign(static_cast<std::size_t>(inst.n_vars), {});
  for (const Coord& e : g.edges) {
    g.cons_adj[static_cast<std::size_t>(e.row)].push_back({e.col, e.value});
    g.var_adj[static_cast<std::size_t>(e.col)].push_back({e.row, e.value});
  }
  return g;
}

MilpInstance restrict_bounds(const MilpInstance& inst, int var, double new_l,
                             double new_u) {
  if (var < 0 || var >= inst.n_vars) {
    throw std::out_of_range("restrict_bounds: variable index out of range");
  }
  MilpInstance out = inst;
  out.lower[var] = std::max(inst.lower[var], new_l);
  out.upper[var] = std::min(inst.upper[var], new_u);
  if (out.lower[var] > out.upper[var]) out.box_infeasible = true;
  return out;
}

namespace {

ordered_json bound_to_json(double v) {
  if (v == kInf) return ordered_json("inf");
  if (v == -kInf) return ordered_json("-inf");
  return ordered_json(v);
}

double bound_from_json(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw FormatError("bad bound string: " + s);
  }
  if (!v.is_number()) throw FormatError("bound is neither number nor inf-string");
  return v.get<double>();
}

}  // namespace

std::string to_milp_json(const MilpInstance& inst) {
  ordered_json j;
  j["version"] = 1;
  j["n"] = inst.n_vars;
  j["m"] = inst.n_cons;
  j["c"] = std::vector<double>(inst.c.data(), inst.c.data() + inst.c.size());
  ordered_json a = ordered_json::array();
  for (const Coord& e : inst.entries) a.push_back({e.row, e.col, e.value});
  j["A"] = std::move(a);
  j["b"] = std::vector<double>(inst.b.data(), inst.b.data() + inst.b.size());
  ordered_json l = ordered_json::array();
  ordered_json u = ordered_json::array();
  for (int k = 0; k < inst.n_vars; ++k) {
    l.push_back(bound_to_json(inst.lower[k]));
    u.push_back(bound_to_json(inst.upper[k]));
  }
  j["l"] = std::move(l);
  j["u"] = std::move(u);
  j["int_vars"] = inst.int_vars;
  return j.dump();
}

MilpInstance milp_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("MILP-JSON parse failure: ") + e.what());
  }
  try {
    if (j.contains("version") && j["version"] != 1) {
      throw FormatError("unknown MILP-JSON version");
    }
    MilpInstance inst;
    inst.n_vars = j.at("n").get<int>();
    inst.n_cons = j.at("m").get<int>();
    const auto c = j.at("c").get<std::vector<double>>();
    const auto b = j.at("b").get<std::vector<double>>();
    inst.c = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<long>(c.size()));
    inst.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<long>(b.size()));
    for (const auto& e : j.at("A")) {
      if (!e.is_array() || e.size() != 3) throw FormatError("bad A entry");
      inst.entries.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    const auto& l = j.at("l");
    const auto& u = j.at("u");
    inst.lower.resize(inst.n_vars);
    inst.upper.resize(inst.n_vars);
    if (static_cast<int>(l.size()) != inst.n_vars || static_cast<int>(u.size()) != inst.n_vars) {
      throw FormatError("bound array length mismatch");
    }
    for (int k = 0; k < inst.n_vars; ++k) {
      inst.lower[k] = bound_from_json(l[static_cast<std::size_t>(k)]);
      inst.upper[k] = bound_from_json(u[static_cast<std::size_t>(k)]);
    }
    inst.int_vars = j.at("int_vars").get<std::vector<int>>();
    inst.validate();
    return inst;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("MILP-JSON: ") + e.what());
  }
}

void write_milp_file(const MilpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for write: " + path);
  out << to_milp_json(inst) << "\n";
}

MilpInstance read_milp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return milp_from_json(ss.str());
}

}  // namespace branchlab
