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

#include "branchlab/autodiff.hpp"

#include <cmath>
#include <utility>

namespace branchlab::ad {

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) throw Error("tensor created with NaN/Inf entries");
}

void require(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

}  // namespace

const Matrix& Var::value() const { return tape->node(id).value; }
const Matrix& Var::grad() const { return tape->node(id).grad; }

Var Tape::param(Matrix init) {
  if (params_frozen_) throw Error("param() after freeze_params()");
  check_finite(init);
  Node n;
  n.grad = Matrix::Zero(init.rows(), init.cols());
  n.value = std::move(init);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  frozen_ = static_cast<int>(nodes_.size());
  return {this, frozen_ - 1};
}

Var Tape::constant(Matrix v) {
  check_finite(v);
  Node n;
  n.value = std::move(v);
  n.requires_grad = false;
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::freeze_params() { params_frozen_ = true; }

void Tape::rollback() { nodes_.resize(static_cast<std::size_t>(frozen_)); }

void Tape::zero_grad() {
  for (Node& n : nodes_) {
    if (n.requires_grad) n.grad.setZero();
  }
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw Error("backward: loss from another tape");
  Node& top = node(loss.id);
  if (top.value.rows() != 1 || top.value.cols() != 1) {
    throw ShapeMismatch("backward: loss must be 1x1");
  }
  if (!top.requires_grad) {
    throw Error("backward: loss does not depend on any parameter");
  }
  top.grad(0, 0) += 1.0;
  // Creation order is topological (inputs precede outputs), so one reverse
  // sweep settles every adjoint.
  for (int id = loss.id; id >= 0; --id) {
    Node& n = node(id);
    if (n.requires_grad && n.backprop) n.backprop(*this);
  }
}

Var Tape::emit(Matrix value, bool requires_grad, std::function<void(Tape&)> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad && grad_enabled_;
  if (n.requires_grad) {
    n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    n.backprop = std::move(backprop);
  }
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

std::vector<Matrix> Tape::param_values() const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(frozen_));
  for (int i = 0; i < frozen_; ++i) out.push_back(node(i).value);
  return out;
}

void Tape::set_param_values(const std::vector<Matrix>& values) {
  if (static_cast<int>(values.size()) != frozen_) {
    throw ShapeMismatch("set_param_values: count mismatch");
  }
  for (int i = 0; i < frozen_; ++i) {
    Node& n = node(i);
    require(values[static_cast<std::size_t>(i)].rows() == n.value.rows() &&
                values[static_cast<std::size_t>(i)].cols() == n.value.cols(),
            "set_param_values: shape mismatch");
    n.value = values[static_cast<std::size_t>(i)];
  }
}

namespace {

bool wants_grad(std::initializer_list<Var> vs) {
  for (const Var& v : vs) {
    if (v.tape->node(v.id).requires_grad) return true;
  }
  return false;
}

void check_same_tape(std::initializer_list<Var> vs) {
  const Tape* t = vs.begin()->tape;
  for (const Var& v : vs) {
    if (v.tape != t) throw Error("operands from different tapes");
    if (v.id >= v.tape->size()) throw Error("dangling node handle");
  }
}

void add_grad(Tape& t, int id, const Matrix& g) {
  Tape::Node& n = t.node(id);
  if (n.requires_grad) n.grad += g;
}

}  // namespace

Var matmul(Var a, Var b) {
  check_same_tape({a, b});
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Tape& t = *a.tape;
  Matrix out = a.value() * b.value();
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a, b}), [a, b, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    add_grad(tp, a.id, g * tp.node(b.id).value.transpose());
    add_grad(tp, b.id, tp.node(a.id).value.transpose() * g);
  });
}

Var add(Var a, Var b) {
  check_same_tape({a, b});
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  Tape& t = *a.tape;
  const int oid = t.size();
  return t.emit(a.value() + b.value(), wants_grad({a, b}), [a, b, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    add_grad(tp, a.id, g);
    add_grad(tp, b.id, g);
  });
}

Var sub(Var a, Var b) {
  check_same_tape({a, b});
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
  Tape& t = *a.tape;
  const int oid = t.size();
  return t.emit(a.value() - b.value(), wants_grad({a, b}), [a, b, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    add_grad(tp, a.id, g);
    add_grad(tp, b.id, -g);
  });
}

Var mul(Var a, Var b) {
  check_same_tape({a, b});
  require(a.rows() == b.rows() && a.cols() == b.cols(), "mul: shape mismatch");
  Tape& t = *a.tape;
  const int oid = t.size();
  return t.emit(a.value().cwiseProduct(b.value()), wants_grad({a, b}),
                [a, b, oid](Tape& tp) {
                  const Matrix& g = tp.node(oid).grad;
                  add_grad(tp, a.id, g.cwiseProduct(tp.node(b.id).value));
                  add_grad(tp, b.id, g.cwiseProduct(tp.node(a.id).value));
                });
}

Var scale(Var a, double k) {
  check_same_tape({a});
  Tape& t = *a.tape;
  const int oid = t.size();
  return t.emit(k * a.value(), wants_grad({a}), [a, k, oid](Tape& tp) {
    add_grad(tp, a.id, k * tp.node(oid).grad);
  });
}

Var add_bias(Var a, Var bias) {
  check_same_tape({a, bias});
  require(bias.rows() == 1 && bias.cols() == a.cols(), "add_bias: bias must be 1 x cols");
  Tape& t = *a.tape;
  Matrix out = a.value().rowwise() + bias.value().row(0);
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a, bias}), [a, bias, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    add_grad(tp, a.id, g);
    add_grad(tp, bias.id, g.colwise().sum());
  });
}

Var relu(Var a) {
  check_same_tape({a});
  Tape& t = *a.tape;
  const int oid = t.size();
  return t.emit(a.value().cwiseMax(0.0), wants_grad({a}), [a, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    const Matrix mask = (tp.node(a.id).value.array() > 0.0).cast<double>();
    add_grad(tp, a.id, g.cwiseProduct(mask));
  });
}

Var softplus(Var a) {
  check_same_tape({a});
  Tape& t = *a.tape;
  // log(1+exp(x)) = max(x,0) + log1p(exp(-|x|))
  Matrix out = a.value().unaryExpr([](double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  });
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a}), [a, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    const Matrix sig = tp.node(a.id).value.unaryExpr([](double x) {
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                      : std::exp(x) / (1.0 + std::exp(x));
    });
    add_grad(tp, a.id, g.cwiseProduct(sig));
  });
}

Var sum_rows(Var a) {
  check_same_tape({a});
  Tape& t = *a.tape;
  Matrix out = a.value().colwise().sum();
  const long rows = a.rows();
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a}), [a, rows, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    add_grad(tp, a.id, g.replicate(rows, 1));
  });
}

Var sum_all(Var a) {
  check_same_tape({a});
  Tape& t = *a.tape;
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a}), [a, oid](Tape& tp) {
    const double g = tp.node(oid).grad(0, 0);
    Tape::Node& n = tp.node(a.id);
    if (n.requires_grad) n.grad.array() += g;
  });
}

Var mean_all(Var a) {
  check_same_tape({a});
  require(a.rows() > 0 && a.cols() > 0, "mean_all: empty tensor");
  return scale(sum_all(a), 1.0 / static_cast<double>(a.rows() * a.cols()));
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols: no parts");
  Tape& t = *parts.front().tape;
  const long rows = parts.front().rows();
  long cols = 0;
  bool rg = false;
  for (const Var& p : parts) {
    check_same_tape({parts.front(), p});
    require(p.rows() == rows, "concat_cols: row mismatch");
    cols += p.cols();
    rg = rg || p.tape->node(p.id).requires_grad;
  }
  Matrix out(rows, cols);
  long at = 0;
  for (const Var& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  const int oid = t.size();
  std::vector<Var> held = parts;
  return t.emit(std::move(out), rg, [held, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    long at = 0;
    for (const Var& p : held) {
      const long c = tp.node(p.id).value.cols();
      add_grad(tp, p.id, g.middleCols(at, c));
      at += c;
    }
  });
}

Var gather_rows(Var a, const std::vector<int>& idx) {
  check_same_tape({a});
  Tape& t = *a.tape;
  const long rows = a.rows();
  Matrix out(static_cast<long>(idx.size()), a.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    require(idx[r] >= 0 && idx[r] < rows, "gather_rows: index out of range");
    out.row(static_cast<long>(r)) = a.value().row(idx[r]);
  }
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a}), [a, idx, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    Tape::Node& n = tp.node(a.id);
    if (!n.requires_grad) return;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      n.grad.row(idx[r]) += g.row(static_cast<long>(r));
    }
  });
}

Var scatter_add_rows(Var src, const std::vector<int>& idx, int out_rows) {
  check_same_tape({src});
  require(static_cast<long>(idx.size()) == src.rows(),
          "scatter_add_rows: one index per source row");
  Tape& t = *src.tape;
  Matrix out = Matrix::Zero(out_rows, src.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    require(idx[r] >= 0 && idx[r] < out_rows, "scatter_add_rows: index out of range");
    out.row(idx[r]) += src.value().row(static_cast<long>(r));
  }
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({src}), [src, idx, oid](Tape& tp) {
    const Matrix& g = tp.node(oid).grad;
    Tape::Node& n = tp.node(src.id);
    if (!n.requires_grad) return;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      n.grad.row(static_cast<long>(r)) += g.row(idx[r]);
    }
  });
}

Var log_sum_exp(Var a) {
  check_same_tape({a});
  require(a.cols() == 1 && a.rows() >= 1, "log_sum_exp: expects a k x 1 column");
  Tape& t = *a.tape;
  const double mx = a.value().maxCoeff();
  const Matrix shifted = (a.value().array() - mx).exp();
  const double total = shifted.sum();
  Matrix out(1, 1);
  out(0, 0) = mx + std::log(total);
  const Matrix softmax = shifted / total;
  const int oid = t.size();
  return t.emit(std::move(out), wants_grad({a}), [a, softmax, oid](Tape& tp) {
    const double g = tp.node(oid).grad(0, 0);
    add_grad(tp, a.id, g * softmax);
  });
}

Var Mlp::apply(Var x) const {
  require(!weights.empty(), "Mlp::apply: empty model");
  Var h = x;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    h = add_bias(matmul(h, weights[i]), biases[i]);
    if (i + 1 < weights.size()) h = relu(h);
  }
  return h;
}

Mlp make_mlp(Tape& tape, const std::vector<int>& dims, Rng& rng) {
  if (dims.size() < 2) throw ShapeMismatch("make_mlp: need at least in/out dims");
  Mlp mlp;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
    Matrix w(fan_in, fan_out);
    for (int r = 0; r < fan_in; ++r) {
      for (int c = 0; c < fan_out; ++c) {
        // Box-Muller on the deterministic stream.
        const double u1 = std::max(rng.uniform(), 1e-12);
        const double u2 = rng.uniform();
        w(r, c) = sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
      }
    }
    mlp.weights.push_back(tape.param(std::move(w)));
    mlp.biases.push_back(tape.param(Matrix::Zero(1, fan_out)));
  }
  return mlp;
}

void adam_step(Tape& tape, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
  const int k = tape.param_count();
  if (state.m.empty()) {
    for (int i = 0; i < k; ++i) {
      const Matrix& v = tape.node(i).value;
      state.m.push_back(Matrix::Zero(v.rows(), v.cols()));
      state.v.push_back(Matrix::Zero(v.rows(), v.cols()));
    }
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (int i = 0; i < k; ++i) {
    Tape::Node& n = tape.node(i);
    const Matrix& g = n.grad;
    Matrix& m = state.m[static_cast<std::size_t>(i)];
    Matrix& v = state.v[static_cast<std::size_t>(i)];
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const Matrix mhat = m / bc1;
    const Matrix vhat = v / bc2;
    const Matrix denom = vhat.cwiseSqrt() + Matrix::Constant(v.rows(), v.cols(), eps);
    n.value -= lr * mhat.cwiseQuotient(denom);
  }
}

}  // namespace branchlab::ad
