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

#include "branchlab/gnn.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace branchlab {

namespace {

using ad::Matrix;
using ad::Mlp;
using ad::Tape;
using ad::Var;

std::vector<int> all_vars(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
  return idx;
}

Matrix edge_weight_column(const BipartiteGraph& g, int replicas) {
  const int e = g.edge_count();
  Matrix w(static_cast<long>(replicas) * e, 1);
  for (int r = 0; r < replicas; ++r) {
    for (int k = 0; k < e; ++k) {
      w(static_cast<long>(r) * e + k, 0) = g.edges[static_cast<std::size_t>(k)].value;
    }
  }
  return w;
}

void check_graph_dims(const BipartiteGraph& g) {
  if (g.cons_feats.cols() != kConsFeatDim || g.var_feats.cols() != kVarFeatDim) {
    throw ShapeMismatch("graph feature dims do not match the encoder layout");
  }
}

}  // namespace

MpnnModel make_mpnn(Tape& tape, int hidden, int layers, Rng& rng) {
  MpnnModel m;
  m.hidden = hidden;
  m.layers = layers;
  m.p0 = ad::make_mlp(tape, {kConsFeatDim, hidden, hidden}, rng);
  m.q0 = ad::make_mlp(tape, {kVarFeatDim, hidden, hidden}, rng);
  for (int l = 0; l < layers; ++l) {
    m.f.push_back(ad::make_mlp(tape, {hidden + 1, hidden, hidden}, rng));
    m.g.push_back(ad::make_mlp(tape, {hidden + 1, hidden, hidden}, rng));
    m.p.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
    m.q.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
  }
  m.readout = ad::make_mlp(tape, {3 * hidden, hidden, 1}, rng);
  return m;
}

Var mpnn_forward(const MpnnModel& model, Tape& tape, const BipartiteGraph& g,
                 GnnCounters* counters) {
  check_graph_dims(g);
  const int e = g.edge_count();
  std::vector<int> ei(static_cast<std::size_t>(e)), ej(static_cast<std::size_t>(e));
  for (int k = 0; k < e; ++k) {
    ei[static_cast<std::size_t>(k)] = g.edges[static_cast<std::size_t>(k)].row;
    ej[static_cast<std::size_t>(k)] = g.edges[static_cast<std::size_t>(k)].col;
  }
  const Var w = tape.constant(edge_weight_column(g, 1));

  Var s = model.p0.apply(tape.constant(g.cons_feats));
  Var t = model.q0.apply(tape.constant(g.var_feats));

  for (int l = 0; l < model.layers; ++l) {
    if (counters) counters->messages += e;
    Var s_next = s;
    Var t_next = t;
    if (e > 0) {
      const Var fmsg = model.f[static_cast<std::size_t>(l)].apply(
          ad::concat_cols({ad::gather_rows(t, ej), w}));
      const Var gmsg = model.g[static_cast<std::size_t>(l)].apply(
          ad::concat_cols({ad::gather_rows(s, ei), w}));
      s_next = ad::scatter_add_rows(fmsg, ei, g.n_cons);
      t_next = ad::scatter_add_rows(gmsg, ej, g.n_vars);
    } else {
      s_next = tape.constant(Matrix::Zero(g.n_cons, model.hidden));
      t_next = tape.constant(Matrix::Zero(g.n_vars, model.hidden));
    }
    const Var s_new = model.p[static_cast<std::size_t>(l)].apply(ad::concat_cols({s, s_next}));
    const Var t_new = model.q[static_cast<std::size_t>(l)].apply(ad::concat_cols({t, t_next}));
    s = s_new;
    t = t_new;
  }

  const std::vector<int> zeros(static_cast<std::size_t>(g.n_vars), 0);
  const Var pooled_s = ad::gather_rows(ad::sum_rows(s), zeros);
  const Var pooled_t = ad::gather_rows(ad::sum_rows(t), zeros);
  return model.readout.apply(ad::concat_cols({pooled_s, pooled_t, t}));
}

SubgraphModel make_subgraph(Tape& tape, int hidden, int layers, bool global_agg,
                            Rng& rng) {
  SubgraphModel m;
  m.hidden = hidden;
  m.layers = layers;
  m.global_agg = global_agg;
  m.p0 = ad::make_mlp(tape, {kConsFeatDim + kVarFeatDim, hidden, hidden}, rng);
  m.q0 = ad::make_mlp(tape, {2 * kVarFeatDim + 1, hidden, hidden}, rng);
  const int upd_in = global_agg ? 4 * hidden : 2 * hidden;
  for (int l = 0; l < layers; ++l) {
    m.f.push_back(ad::make_mlp(tape, {hidden + 1, hidden, hidden}, rng));
    m.g.push_back(ad::make_mlp(tape, {hidden + 1, hidden, hidden}, rng));
    m.p.push_back(ad::make_mlp(tape, {upd_in, hidden, hidden}, rng));
    m.q.push_back(ad::make_mlp(tape, {upd_in, hidden, hidden}, rng));
  }
  m.readout = ad::make_mlp(tape, {2 * hidden, hidden, 1}, rng);
  return m;
}

Var subgraph_forward(const SubgraphModel& model, Tape& tape,
                     const BipartiteGraph& g, const std::vector<int>& anchors_in,
                     GnnCounters* counters) {
  check_graph_dims(g);
  std::vector<int> anchors = anchors_in.empty() ? all_vars(g.n_vars) : anchors_in;
  for (int a : anchors) {
    if (a < 0 || a >= g.n_vars) throw AnchorOutOfRange("anchor outside variable set");
  }
  const int ka = static_cast<int>(anchors.size());
  const int m_ = g.n_cons, n_ = g.n_vars, e = g.edge_count();

  // Anchor-major stacked states: s row (a*m + i), t row (a*n + j).
  Matrix init_s(static_cast<long>(ka) * m_, kConsFeatDim + kVarFeatDim);
  Matrix init_t(static_cast<long>(ka) * n_, 2 * kVarFeatDim + 1);
  for (int a = 0; a < ka; ++a) {
    const auto anchor_feat = g.var_feats.row(anchors[static_cast<std::size_t>(a)]);
    for (int i = 0; i < m_; ++i) {
      init_s.row(static_cast<long>(a) * m_ + i)
          << g.cons_feats.row(i), anchor_feat;
    }
    for (int j = 0; j < n_; ++j) {
      init_t.row(static_cast<long>(a) * n_ + j)
          << g.var_feats.row(j), anchor_feat,
          (j == anchors[static_cast<std::size_t>(a)] ? 1.0 : 0.0);
    }
  }
  Var s = model.p0.apply(tape.constant(std::move(init_s)));
  Var t = model.q0.apply(tape.constant(std::move(init_t)));

  // Replicated edge index lists with per-anchor offsets.
  std::vector<int> ei(static_cast<std::size_t>(ka) * e), ej(ei.size());
  for (int a = 0; a < ka; ++a) {
    for (int k = 0; k < e; ++k) {
      const std::size_t at = static_cast<std::size_t>(a) * e + k;
      ei[at] = a * m_ + g.edges[static_cast<std::size_t>(k)].row;
      ej[at] = a * n_ + g.edges[static_cast<std::size_t>(k)].col;
    }
  }
  const Var w = tape.constant(edge_weight_column(g, ka));

  std::vector<int> row_anchor_s(static_cast<std::size_t>(ka) * m_);
  std::vector<int> row_anchor_t(static_cast<std::size_t>(ka) * n_);
  for (int a = 0; a < ka; ++a) {
    for (int i = 0; i < m_; ++i) row_anchor_s[static_cast<std::size_t>(a) * m_ + i] = a;
    for (int j = 0; j < n_; ++j) row_anchor_t[static_cast<std::size_t>(a) * n_ + j] = a;
  }

  for (int l = 0; l < model.layers; ++l) {
    if (counters) counters->messages += static_cast<long>(ka) * e;
    Var s_msg{&tape, -1}, t_msg{&tape, -1};
    if (e > 0) {
      const Var fmsg = model.f[static_cast<std::size_t>(l)].apply(
          ad::concat_cols({ad::gather_rows(t, ej), w}));
      const Var gmsg = model.g[static_cast<std::size_t>(l)].apply(
          ad::concat_cols({ad::gather_rows(s, ei), w}));
      s_msg = ad::scatter_add_rows(fmsg, ei, ka * m_);
      t_msg = ad::scatter_add_rows(gmsg, ej, ka * n_);
    } else {
      s_msg = tape.constant(Matrix::Zero(static_cast<long>(ka) * m_, model.hidden));
      t_msg = tape.constant(Matrix::Zero(static_cast<long>(ka) * n_, model.hidden));
    }
    std::vector<Var> p_in{s, s_msg};
    std::vector<Var> q_in{t, t_msg};
    if (model.global_agg) {
      if (counters) counters->global_terms += static_cast<long>(ka) * (n_ + m_);
      const Var pooled_t = ad::scatter_add_rows(t, row_anchor_t, ka);  // ka x h
      const Var pooled_s = ad::scatter_add_rows(s, row_anchor_s, ka);
      const Var pt_s = ad::gather_rows(pooled_t, row_anchor_s);
      const Var ps_s = ad::gather_rows(pooled_s, row_anchor_s);
      const Var pt_t = ad::gather_rows(pooled_t, row_anchor_t);
      const Var ps_t = ad::gather_rows(pooled_s, row_anchor_t);
      p_in.push_back(pt_s);
      p_in.push_back(ps_s);
      q_in.push_back(pt_t);
      q_in.push_back(ps_t);
    }
    const Var s_new = model.p[static_cast<std::size_t>(l)].apply(ad::concat_cols(p_in));
    const Var t_new = model.q[static_cast<std::size_t>(l)].apply(ad::concat_cols(q_in));
    s = s_new;
    t = t_new;
  }

  const Var sum_s = ad::scatter_add_rows(s, row_anchor_s, ka);
  const Var sum_t = ad::scatter_add_rows(t, row_anchor_t, ka);
  return model.readout.apply(ad::concat_cols({sum_s, sum_t}));
}

FgnnModel make_fgnn(Tape& tape, int hidden, int layers, Rng& rng) {
  FgnnModel m;
  m.hidden = hidden;
  m.layers = layers;
  m.p0 = ad::make_mlp(tape, {kConsFeatDim + kVarFeatDim + 1, hidden, hidden}, rng);
  m.q0 = ad::make_mlp(tape, {2 * kVarFeatDim + 1, hidden, hidden}, rng);
  for (int l = 0; l < layers; ++l) {
    m.f.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
    m.g.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
    m.p.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
    m.q.push_back(ad::make_mlp(tape, {2 * hidden, hidden, hidden}, rng));
  }
  m.readout = ad::make_mlp(tape, {2 * hidden, hidden, 1}, rng);
  return m;
}

Var fgnn_forward(const FgnnModel& model, Tape& tape, const BipartiteGraph& g,
                 GnnCounters* counters, const FgnnOptions& opts) {
  check_graph_dims(g);
  const int m_ = g.n_cons, n_ = g.n_vars;
  if (static_cast<long>(n_) * (n_ + m_) > opts.pair_state_cap) {
    throw OOMGuard("dense pair state exceeds configured cap");
  }

  Matrix dense = Matrix::Zero(m_, n_);
  for (const Coord& c : g.edges) dense(c.row, c.col) = c.value;

  // Pair states: s row (i*n + j'), t row (j*n + j').
  Matrix init_s(static_cast<long>(m_) * n_, kConsFeatDim + kVarFeatDim + 1);
  for (int i = 0; i < m_; ++i) {
    for (int jp = 0; jp < n_; ++jp) {
      init_s.row(static_cast<long>(i) * n_ + jp)
          << g.cons_feats.row(i), g.var_feats.row(jp), dense(i, jp);
    }
  }
  Matrix init_t(static_cast<long>(n_) * n_, 2 * kVarFeatDim + 1);
  for (int j = 0; j < n_; ++j) {
    for (int jp = 0; jp < n_; ++jp) {
      init_t.row(static_cast<long>(j) * n_ + jp)
          << g.var_feats.row(j), g.var_feats.row(jp), (j == jp ? 1.0 : 0.0);
    }
  }
  Var s = model.p0.apply(tape.constant(std::move(init_s)));
  Var t = model.q0.apply(tape.constant(std::move(init_t)));

  // Triple index lists. s-update: (i,j') aggregates f(t[j,j'], s[i,j]) over j.
  const long s_triples = static_cast<long>(m_) * n_ * n_;
  std::vector<int> f_t_idx(static_cast<std::size_t>(s_triples));
  std::vector<int> f_s_idx(static_cast<std::size_t>(s_triples));
  std::vector<int> f_out_idx(static_cast<std::size_t>(s_triples));
  {
    std::size_t at = 0;
    for (int i = 0; i < m_; ++i) {
      for (int jp = 0; jp < n_; ++jp) {
        for (int j = 0; j < n_; ++j, ++at) {
          f_t_idx[at] = j * n_ + jp;
          f_s_idx[at] = i * n_ + j;
          f_out_idx[at] = i * n_ + jp;
        }
      }
    }
  }
  // t-update: (j,j') aggregates g(s[i,j'], s[i,j]) over i.
  const long t_triples = static_cast<long>(n_) * n_ * m_;
  std::vector<int> g_sp_idx(static_cast<std::size_t>(t_triples));
  std::vector<int> g_s_idx(static_cast<std::size_t>(t_triples));
  std::vector<int> g_out_idx(static_cast<std::size_t>(t_triples));
  {
    std::size_t at = 0;
    for (int j = 0; j < n_; ++j) {
      for (int jp = 0; jp < n_; ++jp) {
        for (int i = 0; i < m_; ++i, ++at) {
          g_sp_idx[at] = i * n_ + jp;
          g_s_idx[at] = i * n_ + j;
          g_out_idx[at] = j * n_ + jp;
        }
      }
    }
  }

  for (int l = 0; l < model.layers; ++l) {
    if (counters) counters->messages += static_cast<long>(m_) * n_ * n_;
    const Var fmsg = model.f[static_cast<std::size_t>(l)].apply(
        ad::concat_cols({ad::gather_rows(t, f_t_idx), ad::gather_rows(s, f_s_idx)}));
    const Var s_agg = ad::scatter_add_rows(fmsg, f_out_idx, m_ * n_);
    const Var gmsg = model.g[static_cast<std::size_t>(l)].apply(
        ad::concat_cols({ad::gather_rows(s, g_sp_idx), ad::gather_rows(s, g_s_idx)}));
    const Var t_agg = ad::scatter_add_rows(gmsg, g_out_idx, n_ * n_);
    const Var s_new = model.p[static_cast<std::size_t>(l)].apply(ad::concat_cols({s, s_agg}));
    const Var t_new = model.q[static_cast<std::size_t>(l)].apply(ad::concat_cols({t, t_agg}));
    s = s_new;
    t = t_new;
  }

  // Readout per j': sum_i s[i,j'] and sum_j t[j,j'].
  std::vector<int> s_to_jp(static_cast<std::size_t>(m_) * n_);
  for (int i = 0; i < m_; ++i) {
    for (int jp = 0; jp < n_; ++jp) s_to_jp[static_cast<std::size_t>(i) * n_ + jp] = jp;
  }
  std::vector<int> t_to_jp(static_cast<std::size_t>(n_) * n_);
  for (int j = 0; j < n_; ++j) {
    for (int jp = 0; jp < n_; ++jp) t_to_jp[static_cast<std::size_t>(j) * n_ + jp] = jp;
  }
  const Var sum_s = ad::scatter_add_rows(s, s_to_jp, n_);
  const Var sum_t = ad::scatter_add_rows(t, t_to_jp, n_);
  return model.readout.apply(ad::concat_cols({sum_s, sum_t}));
}

Var GnnModel::forward(const BipartiteGraph& g, const std::vector<int>& anchors,
                      GnnCounters* counters) {
  if (arch == "mpnn") return mpnn_forward(*mpnn, *tape, g, counters);
  if (arch == "subgraph") return subgraph_forward(*subgraph, *tape, g, anchors, counters);
  if (arch == "fgnn2") return fgnn_forward(*fgnn, *tape, g, counters);
  throw ArchitectureMismatch("unknown architecture tag: " + arch);
}

Eigen::VectorXd GnnModel::predict(const BipartiteGraph& g,
                                  const std::vector<int>& candidates) {
  tape->set_grad_enabled(false);
  Eigen::VectorXd out;
  try {
    if (arch == "subgraph") {
      const Var y = forward(g, candidates);
      out = y.value().col(0);
    } else {
      const Var y = forward(g, {});
      out.resize(static_cast<long>(candidates.size()));
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        out[static_cast<long>(k)] = y.value()(candidates[k], 0);
      }
    }
  } catch (...) {
    tape->rollback();
    tape->set_grad_enabled(true);
    throw;
  }
  tape->rollback();
  tape->set_grad_enabled(true);
  return out;
}

GnnModel make_model(const std::string& arch, int hidden, int layers,
                    bool global_agg, std::uint64_t seed) {
  GnnModel m;
  m.arch = arch;
  m.hidden = hidden;
  m.layers = layers;
  m.global_agg = global_agg;
  m.tape = std::make_unique<Tape>();
  Rng rng(seed);
  if (arch == "mpnn") {
    m.mpnn = make_mpnn(*m.tape, hidden, layers, rng);
  } else if (arch == "subgraph") {
    m.subgraph = make_subgraph(*m.tape, hidden, layers, global_agg, rng);
  } else if (arch == "fgnn2") {
    m.fgnn = make_fgnn(*m.tape, hidden, layers, rng);
  } else {
    throw ArchitectureMismatch("unknown architecture tag: " + arch);
  }
  m.tape->freeze_params();
  return m;
}

namespace {

using nlohmann::ordered_json;

ordered_json mlp_to_json(const Mlp& mlp) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < mlp.weights.size(); ++i) {
    const Matrix& w = mlp.weights[i].value();
    ordered_json wj = ordered_json::array();
    for (long r = 0; r < w.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (long c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
      wj.push_back(std::move(row));
    }
    arr.push_back(std::move(wj));
    const Matrix& b = mlp.biases[i].value();
    ordered_json bj = ordered_json::array();
    for (long c = 0; c < b.cols(); ++c) bj.push_back(b(0, c));
    arr.push_back(std::move(bj));
  }
  return arr;
}

void mlp_from_json(const nlohmann::json& arr, Mlp& mlp) {
  if (!arr.is_array() || arr.size() != 2 * mlp.weights.size()) {
    throw FormatError("checkpoint mlp layer count mismatch");
  }
  for (std::size_t i = 0; i < mlp.weights.size(); ++i) {
    const auto& wj = arr[2 * i];
    const auto& bj = arr[2 * i + 1];
    Matrix w(static_cast<long>(wj.size()), static_cast<long>(wj.at(0).size()));
    for (long r = 0; r < w.rows(); ++r) {
      for (long c = 0; c < w.cols(); ++c) {
        w(r, c) = wj[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
      }
    }
    if (w.rows() != mlp.weights[i].value().rows() || w.cols() != mlp.weights[i].value().cols()) {
      throw ArchitectureMismatch("checkpoint weight shape mismatch");
    }
    Matrix b(1, static_cast<long>(bj.size()));
    for (long c = 0; c < b.cols(); ++c) b(0, c) = bj[static_cast<std::size_t>(c)].get<double>();
    if (b.cols() != mlp.biases[i].value().cols()) {
      throw ArchitectureMismatch("checkpoint bias shape mismatch");
    }
    mlp.weights[i].tape->node(mlp.weights[i].id).value = std::move(w);
    mlp.biases[i].tape->node(mlp.biases[i].id).value = std::move(b);
  }
}

template <class ModelT>
void for_each_mlp(ModelT& model, const std::function<void(const std::string&, Mlp&)>& fn) {
  fn("p0", model.p0);
  fn("q0", model.q0);
  for (std::size_t l = 0; l < model.p.size(); ++l) {
    const std::string suffix = std::to_string(l + 1);
    fn("f" + suffix, model.f[l]);
    fn("g" + suffix, model.g[l]);
    fn("p" + suffix, model.p[l]);
    fn("q" + suffix, model.q[l]);
  }
  fn("r", model.readout);
}

void visit_mlps(GnnModel& model, const std::function<void(const std::string&, Mlp&)>& fn) {
  if (model.arch == "mpnn") {
    for_each_mlp(*model.mpnn, fn);
  } else if (model.arch == "subgraph") {
    for_each_mlp(*model.subgraph, fn);
  } else {
    for_each_mlp(*model.fgnn, fn);
  }
}

}  // namespace

std::string save_checkpoint(const GnnModel& model, const CheckpointMeta& meta) {
  ordered_json j;
  j["arch"] = model.arch;
  j["hyper"] = {{"layers", model.layers},
                {"hidden", model.hidden},
                {"global_agg", model.global_agg},
                {"cons_feat_dim", kConsFeatDim},
                {"var_feat_dim", kVarFeatDim}};
  ordered_json mlps;
  visit_mlps(const_cast<GnnModel&>(model), [&](const std::string& name, Mlp& mlp) {
    mlps[name] = mlp_to_json(mlp);
  });
  j["mlps"] = std::move(mlps);
  j["meta"] = {{"epochs", meta.epochs},
               {"best_val_loss", meta.best_val_loss},
               {"seed", meta.seed},
               {"best_epoch", meta.best_epoch},
               {"loss", meta.loss_kind},
               {"test_accuracy", meta.test_accuracy}};
  return j.dump();
}

GnnModel load_checkpoint(const std::string& text, CheckpointMeta* meta) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("CKPT-JSON parse failure: ") + e.what());
  }
  try {
    const std::string arch = j.at("arch").get<std::string>();
    const auto& hyper = j.at("hyper");
    if (hyper.at("cons_feat_dim").get<int>() != kConsFeatDim ||
        hyper.at("var_feat_dim").get<int>() != kVarFeatDim) {
      throw ArchitectureMismatch("checkpoint feature dims != encoder dims");
    }
    GnnModel model = make_model(arch, hyper.at("hidden").get<int>(),
                                hyper.at("layers").get<int>(),
                                hyper.value("global_agg", false), /*seed=*/0);
    const auto& mlps = j.at("mlps");
    visit_mlps(model, [&](const std::string& name, Mlp& mlp) {
      mlp_from_json(mlps.at(name), mlp);
    });
    if (meta && j.contains("meta")) {
      const auto& mj = j["meta"];
      meta->epochs = mj.value("epochs", 0L);
      meta->best_val_loss = mj.value("best_val_loss", kInf);
      meta->seed = mj.value("seed", static_cast<std::uint64_t>(0));
      meta->best_epoch = mj.value("best_epoch", 0L);
      meta->loss_kind = mj.value("loss", std::string());
      meta->test_accuracy = mj.value("test_accuracy", -1.0);
    }
    return model;
  } catch (const ArchitectureMismatch&) {
    throw;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("CKPT-JSON: ") + e.what());
  }
}

void write_checkpoint_file(const GnnModel& model, const CheckpointMeta& meta,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for write: " + path);
  out << save_checkpoint(model, meta) << "\n";
}

GnnModel read_checkpoint_file(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_checkpoint(ss.str(), meta);
}

}  // namespace branchlab
