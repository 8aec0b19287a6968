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

#ifndef BRANCHLAB_IMITATION_HPP_
#define BRANCHLAB_IMITATION_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "branchlab/gnn.hpp"
#include "branchlab/policies.hpp"

namespace branchlab {

// One expert state-action pair: the node-local instance (graph re-encoded on
// load), its fractional candidates, their strong-branching scores, and the
// expert pick.
struct BranchSample {
  MilpInstance inst;
  BipartiteGraph graph;
  std::vector<int> candidates;
  std::vector<double> sb_scores;
  int best = -1;  // variable index; always in candidates
  std::string instance_id;
  long node_id = 0;
};

enum class LossKind { kScores, kRank, kPairwise };

std::string to_string(LossKind k);
LossKind loss_from_string(const std::string& s);

struct CollectConfig {
  long node_cap = 0;  // expanded-node cap per instance; 0 = unlimited
  std::uint64_t seed = 0;
  PolicyConfig policy;
  double max_seconds_per_instance = 0.0;
};

// Runs B&B with the strong-branching expert on each instance and records a
// sample at every expanded node with >= 2 candidates. Solver errors skip the
// instance with a logged warning; samples carrying a skipped (-inf) candidate
// score are dropped to keep scores finite.
std::vector<BranchSample> collect_samples(
    const std::vector<std::pair<std::string, MilpInstance>>& instances,
    const CollectConfig& cfg, std::ostream* warnings = nullptr);

// Per-sample min-max normalization of raw scores into [0,1]; nullopt for
// constant samples (these are dropped from the scores loss).
std::optional<std::vector<double>> normalize_scores(const std::vector<double>& raw);

// Mean squared error between predictions and min-max normalized targets;
// nullopt when the sample is constant.
std::optional<double> loss_scores(const std::vector<double>& pred,
                                  const std::vector<double>& raw_targets);

// Softmax cross-entropy of the best position, max-subtraction stabilized.
double loss_rank(const std::vector<double>& pred, int best_pos);

// Mean over ordered pairs (a,b) with target_a > target_b + tau of
// log(1 + exp(-(pred_a - pred_b))); tau filters near-ties. 0 when no pairs.
double loss_pairwise(const std::vector<double>& pred,
                     const std::vector<double>& targets, double tau = 1e-9);

// Differentiable twins operating on a k x 1 prediction column.
ad::Var loss_scores_node(ad::Var pred, const std::vector<double>& normalized_targets);
ad::Var loss_rank_node(ad::Var pred, int best_pos);
ad::Var loss_pairwise_node(ad::Var pred, const std::vector<double>& targets,
                           double tau = 1e-9);

struct TrainConfig {
  LossKind loss = LossKind::kPairwise;
  int max_epochs = 0;  // 0 -> architecture default: 500 (mpnn), 200 (subgraph)
  int batch_size = 16;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double val_fraction = 0.2;
  int patience = 50;       // epochs without val improvement; <=0 means off
  int hidden = 64;
  int layers = 0;  // 0 -> architecture default: 3 (mpnn), 2 (subgraph)
  bool global_agg = false;
};

struct CurvePoint {
  int epoch = 0;
  double train_loss = 0;
  double val_loss = 0;
};

struct TrainResult {
  GnnModel model;
  CheckpointMeta meta;
  std::vector<CurvePoint> curve;
};

// Instance-id-disjoint train/val split, Adam updates, min-val-loss weights
// kept. Throws EmptyDataset when no usable samples remain.
TrainResult train(const std::string& arch, const std::vector<BranchSample>& samples,
                  const TrainConfig& cfg);

// Fraction of samples whose restricted argmax (lowest index on ties) equals
// the recorded best.
double eval_accuracy(GnnModel& model, const std::vector<BranchSample>& samples);

// SAMPLES-JSONL v1: one sample per line embedding the node-local MILP-JSON.
void write_samples_file(const std::vector<BranchSample>& samples, const std::string& path);
std::vector<BranchSample> read_samples_file(const std::string& path);

}  // namespace branchlab

#endif  // BRANCHLAB_IMITATION_HPP_
