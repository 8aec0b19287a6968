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

#include "branchlab/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace branchlab {

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::kScores: return "scores";
    case LossKind::kRank: return "rank";
    case LossKind::kPairwise: return "pairwise";
  }
  return "?";
}

LossKind loss_from_string(const std::string& s) {
  if (s == "scores") return LossKind::kScores;
  if (s == "rank") return LossKind::kRank;
  if (s == "pairwise") return LossKind::kPairwise;
  throw Error("unknown loss: " + s);
}

std::vector<BranchSample> collect_samples(
    const std::vector<std::pair<std::string, MilpInstance>>& instances,
    const CollectConfig& cfg, std::ostream* warnings) {
  std::vector<BranchSample> samples;
  for (const auto& [id, inst] : instances) {
    StrongBranchingPolicy expert(cfg.policy);
    std::vector<BranchSample> local;
    expert.on_scores = [&](const NodeContext& ctx, const ScoreTable& table) {
      if (ctx.candidates.size() < 2) return;
      for (const ScoreEntry& e : table.entries) {
        if (!std::isfinite(e.score)) {
          if (warnings) {
            *warnings << "warn: dropping sample with skipped candidate ("
                      << ctx.instance_id << ", node " << ctx.node.id << ")\n";
          }
          return;
        }
      }
      BranchSample s;
      s.inst = ctx.inst;
      s.graph = encode_graph(ctx.inst);
      s.candidates = ctx.candidates.vars;
      for (const ScoreEntry& e : table.entries) s.sb_scores.push_back(e.score);
      s.best = select_argmax(table);
      s.instance_id = ctx.instance_id;
      s.node_id = ctx.node.id;
      local.push_back(std::move(s));
    };
    SolveLimits limits;
    limits.max_expanded = cfg.node_cap;
    limits.max_seconds = cfg.max_seconds_per_instance;
    try {
      solve(inst, expert, limits, {}, nullptr, id);
    } catch (const Error& e) {
      if (warnings) *warnings << "warn: skipping instance " << id << ": " << e.what() << "\n";
      continue;
    }
    for (auto& s : local) samples.push_back(std::move(s));
  }
  return samples;
}

std::optional<std::vector<double>> normalize_scores(const std::vector<double>& raw) {
  if (raw.empty()) return std::nullopt;
  const auto [mn_it, mx_it] = std::minmax_element(raw.begin(), raw.end());
  const double mn = *mn_it, mx = *mx_it;
  const double range = mx - mn;
  if (range <= 1e-9 * std::max({1.0, std::abs(mn), std::abs(mx)})) return std::nullopt;
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mn) / range;
  return out;
}

std::optional<double> loss_scores(const std::vector<double>& pred,
                                  const std::vector<double>& raw_targets) {
  if (pred.size() != raw_targets.size()) throw ShapeMismatch("loss_scores: length mismatch");
  const auto norm = normalize_scores(raw_targets);
  if (!norm) return std::nullopt;
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - (*norm)[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

double loss_rank(const std::vector<double>& pred, int best_pos) {
  if (best_pos < 0 || best_pos >= static_cast<int>(pred.size())) {
    throw Error("loss_rank: best position out of range");
  }
  const double mx = *std::max_element(pred.begin(), pred.end());
  double total = 0.0;
  for (double p : pred) total += std::exp(p - mx);
  return std::log(total) - (pred[static_cast<std::size_t>(best_pos)] - mx);
}

double loss_pairwise(const std::vector<double>& pred,
                     const std::vector<double>& targets, double tau) {
  if (pred.size() != targets.size()) throw ShapeMismatch("loss_pairwise: length mismatch");
  if (pred.size() < 2) throw ShapeMismatch("loss_pairwise: needs >= 2 candidates");
  double acc = 0.0;
  long pairs = 0;
  for (std::size_t a = 0; a < pred.size(); ++a) {
    for (std::size_t b = 0; b < pred.size(); ++b) {
      if (a == b || targets[a] <= targets[b] + tau) continue;
      const double d = -(pred[a] - pred[b]);
      acc += std::max(d, 0.0) + std::log1p(std::exp(-std::abs(d)));
      ++pairs;
    }
  }
  return pairs > 0 ? acc / static_cast<double>(pairs) : 0.0;
}

ad::Var loss_scores_node(ad::Var pred, const std::vector<double>& normalized_targets) {
  Eigen::MatrixXd t(static_cast<long>(normalized_targets.size()), 1);
  for (std::size_t i = 0; i < normalized_targets.size(); ++i) {
    t(static_cast<long>(i), 0) = normalized_targets[i];
  }
  const ad::Var diff = ad::sub(pred, pred.tape->constant(std::move(t)));
  return ad::mean_all(ad::mul(diff, diff));
}

ad::Var loss_rank_node(ad::Var pred, int best_pos) {
  const ad::Var lse = ad::log_sum_exp(pred);
  const ad::Var best = ad::gather_rows(pred, {best_pos});
  return ad::sub(lse, best);
}

ad::Var loss_pairwise_node(ad::Var pred, const std::vector<double>& targets,
                           double tau) {
  std::vector<int> hi, lo;
  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = 0; b < targets.size(); ++b) {
      if (a == b || targets[a] <= targets[b] + tau) continue;
      hi.push_back(static_cast<int>(a));
      lo.push_back(static_cast<int>(b));
    }
  }
  if (hi.empty()) return pred.tape->constant(Eigen::MatrixXd::Zero(1, 1));
  const ad::Var margins =
      ad::sub(ad::gather_rows(pred, hi), ad::gather_rows(pred, lo));
  return ad::mean_all(ad::softplus(ad::scale(margins, -1.0)));
}

namespace {

// Per-sample loss on the tape; nullopt when the sample is dropped (constant
// scores under the scores loss).
std::optional<ad::Var> sample_loss(GnnModel& model, const BranchSample& s,
                                   LossKind kind) {
  const ad::Var y_all = model.forward(s.graph, {});
  const ad::Var pred = ad::gather_rows(y_all, s.candidates);
  switch (kind) {
    case LossKind::kScores: {
      const auto norm = normalize_scores(s.sb_scores);
      if (!norm) return std::nullopt;
      return loss_scores_node(pred, *norm);
    }
    case LossKind::kRank: {
      const auto it = std::find(s.candidates.begin(), s.candidates.end(), s.best);
      const int pos = static_cast<int>(it - s.candidates.begin());
      return loss_rank_node(pred, pos);
    }
    case LossKind::kPairwise:
      return loss_pairwise_node(pred, s.sb_scores);
  }
  return std::nullopt;
}

double dataset_loss(GnnModel& model, const std::vector<BranchSample>& samples,
                    const std::vector<std::size_t>& idx, LossKind kind) {
  ad::Tape& tape = *model.tape;
  tape.set_grad_enabled(false);
  double acc = 0.0;
  long used = 0;
  for (std::size_t i : idx) {
    const auto l = sample_loss(model, samples[i], kind);
    if (l) {
      acc += l->value()(0, 0);
      ++used;
    }
    tape.rollback();
  }
  tape.set_grad_enabled(true);
  return used > 0 ? acc / static_cast<double>(used) : 0.0;
}

}  // namespace

TrainResult train(const std::string& arch, const std::vector<BranchSample>& samples,
                  const TrainConfig& cfg) {
  if (samples.empty()) throw EmptyDataset("train: no samples");
  const int layers = cfg.layers > 0 ? cfg.layers : (arch == "mpnn" ? 3 : 2);
  const int max_epochs = cfg.max_epochs > 0 ? cfg.max_epochs : (arch == "mpnn" ? 500 : 200);

  // Split by instance id so no node of a validation instance leaks into
  // training.
  std::vector<std::string> ids;
  for (const auto& s : samples) ids.push_back(s.instance_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Rng rng(cfg.seed);
  rng.shuffle(ids);
  const std::size_t n_val =
      ids.size() >= 2
          ? std::max<std::size_t>(1, static_cast<std::size_t>(
                std::llround(cfg.val_fraction * static_cast<double>(ids.size()))))
          : 0;
  const std::set<std::string> val_ids(ids.begin(), ids.begin() + static_cast<long>(n_val));

  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (val_ids.count(samples[i].instance_id) ? val_idx : train_idx).push_back(i);
  }
  if (train_idx.empty()) throw EmptyDataset("train: empty training split");

  TrainResult res;
  res.model = make_model(arch, cfg.hidden, layers, cfg.global_agg, cfg.seed);
  res.meta.seed = cfg.seed;
  res.meta.loss_kind = to_string(cfg.loss);
  ad::Tape& tape = *res.model.tape;
  ad::AdamState adam;

  std::vector<ad::Matrix> best_params = tape.param_values();
  double best_val = kInf;
  long best_epoch = 0;
  int stale = 0;

  std::vector<std::size_t> order = train_idx;
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_acc = 0.0;
    long epoch_used = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), at + static_cast<std::size_t>(cfg.batch_size));
      tape.zero_grad();
      std::vector<ad::Var> losses;
      for (std::size_t k = at; k < end; ++k) {
        auto l = sample_loss(res.model, samples[order[k]], cfg.loss);
        if (l) losses.push_back(*l);
      }
      if (!losses.empty()) {
        ad::Var total = losses[0];
        for (std::size_t k = 1; k < losses.size(); ++k) total = ad::add(total, losses[k]);
        const ad::Var batch_loss = ad::scale(total, 1.0 / static_cast<double>(losses.size()));
        epoch_acc += batch_loss.value()(0, 0) * static_cast<double>(losses.size());
        epoch_used += static_cast<long>(losses.size());
        tape.backward(batch_loss);
        ad::adam_step(tape, adam, cfg.lr);
      }
      tape.rollback();
    }
    if (epoch_used == 0) throw EmptyDataset("train: every sample dropped by the loss");
    const double train_loss = epoch_acc / static_cast<double>(epoch_used);
    const double val_loss =
        val_idx.empty() ? train_loss : dataset_loss(res.model, samples, val_idx, cfg.loss);
    res.curve.push_back({epoch, train_loss, val_loss});
    if (val_loss < best_val) {
      best_val = val_loss;
      best_epoch = epoch;
      best_params = tape.param_values();
      stale = 0;
    } else {
      ++stale;
    }
    res.meta.epochs = epoch;
    if (cfg.patience > 0 && stale >= cfg.patience) break;
  }

  tape.set_param_values(best_params);
  res.meta.best_val_loss = best_val;
  res.meta.best_epoch = best_epoch;
  return res;
}

double eval_accuracy(GnnModel& model, const std::vector<BranchSample>& samples) {
  if (samples.empty()) throw EmptyDataset("eval_accuracy: no samples");
  long hits = 0;
  for (const BranchSample& s : samples) {
    const Eigen::VectorXd scores = model.predict(s.graph, s.candidates);
    int best = -1;
    double best_score = 0.0;
    for (std::size_t k = 0; k < s.candidates.size(); ++k) {
      const double v = scores[static_cast<long>(k)];
      if (best < 0 || v > best_score) {
        best_score = v;
        best = s.candidates[k];
      }
    }
    if (best == s.best) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

void write_samples_file(const std::vector<BranchSample>& samples,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for write: " + path);
  for (const BranchSample& s : samples) {
    nlohmann::ordered_json j;
    j["instance_id"] = s.instance_id;
    j["node_id"] = s.node_id;
    j["milp"] = nlohmann::ordered_json::parse(to_milp_json(s.inst));
    j["candidates"] = s.candidates;
    j["sb_scores"] = s.sb_scores;
    j["best"] = s.best;
    out << j.dump() << "\n";
  }
}

std::vector<BranchSample> read_samples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::vector<BranchSample> samples;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      BranchSample s;
      s.instance_id = j.at("instance_id").get<std::string>();
      s.node_id = j.at("node_id").get<long>();
      s.inst = milp_from_json(j.at("milp").dump());
      s.graph = encode_graph(s.inst);
      s.candidates = j.at("candidates").get<std::vector<int>>();
      s.sb_scores = j.at("sb_scores").get<std::vector<double>>();
      s.best = j.at("best").get<int>();
      if (s.candidates.size() < 2 || s.sb_scores.size() != s.candidates.size()) {
        throw FormatError("bad candidate/score arity");
      }
      if (!std::binary_search(s.candidates.begin(), s.candidates.end(), s.best)) {
        throw FormatError("best not among candidates");
      }
      samples.push_back(std::move(s));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError("SAMPLES-JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

}  // namespace branchlab
