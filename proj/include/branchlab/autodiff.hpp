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

#ifndef BRANCHLAB_AUTODIFF_HPP_
#define BRANCHLAB_AUTODIFF_HPP_

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "branchlab/errors.hpp"
#include "branchlab/rng.hpp"

namespace branchlab::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

// Lightweight handle into a tape node. 64-bit floats throughout.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  const Matrix& grad() const;
  long rows() const { return value().rows(); }
  long cols() const { return value().cols(); }
};

// Reverse-mode tape. Parameters are persistent leaves created before
// freeze_params(); everything appended afterwards is transient forward state
// that rollback() discards. One tape per training thread.
class Tape {
 public:
  Var param(Matrix init);     // persistent, differentiable leaf
  Var constant(Matrix v);     // transient input, no gradient
  void freeze_params();
  void rollback();            // drop all transient nodes
  void zero_grad();

  // Populates gradient buffers from a 1x1 loss node. Gradients accumulate
  // across calls until zero_grad().
  void backward(Var loss);

  void set_grad_enabled(bool on) { grad_enabled_ = on; }
  bool grad_enabled() const { return grad_enabled_; }

  int param_count() const { return frozen_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  std::vector<Matrix> param_values() const;
  void set_param_values(const std::vector<Matrix>& values);

  // Internal node accessors used by the op layer.
  struct Node {
    Matrix value;
    Matrix grad;  // empty unless requires_grad
    bool requires_grad = false;
    std::function<void(Tape&)> backprop;  // adds into input grads
  };
  Node& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  Var emit(Matrix value, bool requires_grad, std::function<void(Tape&)> backprop);

 private:
  std::vector<Node> nodes_;
  int frozen_ = 0;
  bool params_frozen_ = false;
  bool grad_enabled_ = true;
};

// Forward ops. Shapes follow standard rules; violations throw ShapeMismatch.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, double k);
Var add_bias(Var a, Var bias);  // bias is 1 x cols, broadcast over rows
Var relu(Var a);
Var softplus(Var a);  // log(1 + exp(x)), overflow-stable
Var sum_rows(Var a);  // collapses rows: result is 1 x cols
Var sum_all(Var a);   // 1 x 1
Var mean_all(Var a);  // 1 x 1
Var concat_cols(const std::vector<Var>& parts);
Var gather_rows(Var a, const std::vector<int>& idx);  // duplicates rows
// Accumulates src rows into out_rows buckets, ascending source order.
Var scatter_add_rows(Var src, const std::vector<int>& idx, int out_rows);
// Over a k x 1 column: max-subtracted log(sum exp), gradient is softmax.
Var log_sum_exp(Var a);

// Plain MLP: ReLU hidden activations, identity output.
struct Mlp {
  std::vector<Var> weights;  // layer i: in_i x out_i
  std::vector<Var> biases;   // 1 x out_i

  Var apply(Var x) const;
  int in_dim() const { return static_cast<int>(weights.front().rows()); }
  int out_dim() const { return static_cast<int>(weights.back().cols()); }
};

// dims = {in, hidden..., out}; He-scaled normal init, zero biases.
Mlp make_mlp(Tape& tape, const std::vector<int>& dims, Rng& rng);

struct AdamState {
  long step = 0;
  std::vector<Matrix> m, v;
};

// One Adam update over all tape parameters from their accumulated gradients.
void adam_step(Tape& tape, AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

}  // namespace branchlab::ad

#endif  // BRANCHLAB_AUTODIFF_HPP_
