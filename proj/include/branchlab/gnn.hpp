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

#ifndef BRANCHLAB_GNN_HPP_
#define BRANCHLAB_GNN_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "branchlab/autodiff.hpp"
#include "branchlab/milp.hpp"

namespace branchlab {

// Message-evaluation accounting. One message unit covers the paired
// constraint->variable and variable->constraint evaluations of a single edge
// in a single layer, so an L-layer MPNN on E edges counts exactly E*L. The
// anchored model counts |anchors|*E*L; with global aggregation on, each
// pooled-state touch ((n+m) per anchor per layer) lands in global_terms.
// The dense pair model counts m*n^2 per layer.
struct GnnCounters {
  long messages = 0;
  long global_terms = 0;
};

// Def-3.3 style message-passing GNN. All update MLPs keep hidden width h;
// edge weights enter f/g as one extra scalar column.
struct MpnnModel {
  int hidden = 0;
  int layers = 0;
  ad::Mlp p0, q0;                    // 1 -> h, 6 -> h
  std::vector<ad::Mlp> p, q, f, g;   // p,q: 2h -> h; f,g: (h+1) -> h
  ad::Mlp readout;                   // 3h -> 1  (sum_s, sum_t, t_j)
};

// Node-anchored variant: one MPNN pass per anchor with anchor-conditioned
// initialization and a (sum_s, sum_t) readout. Passes are independent, so
// they batch into a single stacked state.
struct SubgraphModel {
  int hidden = 0;
  int layers = 0;
  bool global_agg = false;
  ad::Mlp p0, q0;                    // 7 -> h, 13 -> h
  std::vector<ad::Mlp> p, q, f, g;   // p,q: 2h (or 4h) -> h; f,g: (h+1) -> h
  ad::Mlp readout;                   // 2h -> 1
};

// Dense second-order folklore GNN: pair states over VxW and WxW, updates
// aggregate over all nodes rather than neighbors.
struct FgnnModel {
  int hidden = 0;
  int layers = 0;
  ad::Mlp p0, q0;                    // 8 -> h, 13 -> h
  std::vector<ad::Mlp> p, q, f, g;   // p,q: 2h -> h; f,g: 2h -> h
  ad::Mlp readout;                   // 2h -> 1
};

struct FgnnOptions {
  long pair_state_cap = 2'000'000;  // guard on n*(n+m)
};

MpnnModel make_mpnn(ad::Tape& tape, int hidden, int layers, Rng& rng);
SubgraphModel make_subgraph(ad::Tape& tape, int hidden, int layers,
                            bool global_agg, Rng& rng);
FgnnModel make_fgnn(ad::Tape& tape, int hidden, int layers, Rng& rng);

// Per-variable outputs, n x 1.
ad::Var mpnn_forward(const MpnnModel& model, ad::Tape& tape,
                     const BipartiteGraph& g, GnnCounters* counters = nullptr);

// Per-anchor outputs, |anchors| x 1 in anchor order; empty anchors means all
// variable nodes. Throws AnchorOutOfRange for a bad anchor index.
ad::Var subgraph_forward(const SubgraphModel& model, ad::Tape& tape,
                         const BipartiteGraph& g, const std::vector<int>& anchors,
                         GnnCounters* counters = nullptr);

// Per-variable outputs, n x 1. Throws OOMGuard when n*(n+m) exceeds the cap.
ad::Var fgnn_forward(const FgnnModel& model, ad::Tape& tape,
                     const BipartiteGraph& g, GnnCounters* counters = nullptr,
                     const FgnnOptions& opts = {});

// A trained (or freshly initialized) model together with its own tape.
// arch is one of "mpnn" | "subgraph" | "fgnn2".
struct GnnModel {
  std::string arch;
  int hidden = 0;
  int layers = 0;
  bool global_agg = false;
  std::unique_ptr<ad::Tape> tape;
  std::optional<MpnnModel> mpnn;
  std::optional<SubgraphModel> subgraph;
  std::optional<FgnnModel> fgnn;

  // anchors: used by the subgraph arch (empty = all); others return all vars.
  ad::Var forward(const BipartiteGraph& g, const std::vector<int>& anchors,
                  GnnCounters* counters = nullptr);

  // Inference-only scores for candidate variables (grad-free, tape rolled
  // back). For mpnn/fgnn2 this gathers from the all-variable output; for the
  // anchored model it runs exactly the candidate anchors.
  Eigen::VectorXd predict(const BipartiteGraph& g, const std::vector<int>& candidates);
};

GnnModel make_model(const std::string& arch, int hidden, int layers,
                    bool global_agg, std::uint64_t seed);

struct CheckpointMeta {
  long epochs = 0;
  double best_val_loss = kInf;
  std::uint64_t seed = 0;
  long best_epoch = 0;
  std::string loss_kind;
  double test_accuracy = -1.0;  // -1 = not evaluated
};

// CKPT-JSON v1: {"arch":..,"hyper":{..},"mlps":{name:[W,b,W,b,..],..},
// "meta":{..}}. Loading validates feature dimensions against the graph
// encoder and throws ArchitectureMismatch on disagreement.
std::string save_checkpoint(const GnnModel& model, const CheckpointMeta& meta);
GnnModel load_checkpoint(const std::string& text, CheckpointMeta* meta = nullptr);

void write_checkpoint_file(const GnnModel& model, const CheckpointMeta& meta,
                           const std::string& path);
GnnModel read_checkpoint_file(const std::string& path, CheckpointMeta* meta = nullptr);

}  // namespace branchlab

#endif  // BRANCHLAB_GNN_HPP_
