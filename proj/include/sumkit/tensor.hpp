// Copyright 2026 The Sumkit Authors.
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

#ifndef SUMKIT_TENSOR_HPP_
#define SUMKIT_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sumkit/rng.hpp"

namespace sumkit::num {

// Boolean permission matrix, row-major. true = (query, key) pair may attend.
struct BoolMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> v;

  BoolMat() = default;
  BoolMat(int r, int c, bool fill = true)
      : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill ? 1 : 0) {}

  bool at(int i, int j) const { return v[static_cast<std::size_t>(i) * cols + j] != 0; }
  void set(int i, int j, bool b) { v[static_cast<std::size_t>(i) * cols + j] = b ? 1 : 0; }
};

struct Node;
using Tensor = std::shared_ptr<Node>;

// A dense row-major 64-bit tensor, doubling as a node in the reverse-mode
// tape: each op stores its parents and a closure scattering grad into them.
struct Node {
  std::vector<int> shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated by backward(); same length as value
  std::vector<Tensor> parents;
  std::function<void(Node&)> backfn;
  bool backward_run = false;

  std::size_t size() const { return value.size(); }
  int rows() const { return shape.empty() ? 1 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  double scalar() const { return value[0]; }
};

inline std::size_t numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor: non-positive dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

inline Tensor make_tensor(std::vector<int> shape, std::vector<double> data) {
  if (data.size() != numel(shape))
    throw std::invalid_argument("tensor: data length does not match shape");
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(data);
  return n;
}

inline Tensor zeros(std::vector<int> shape) {
  std::size_t n = numel(shape);
  return make_tensor(std::move(shape), std::vector<double>(n, 0.0));
}

inline Tensor full(std::vector<int> shape, double x) {
  std::size_t n = numel(shape);
  return make_tensor(std::move(shape), std::vector<double>(n, x));
}

inline Tensor scalar_tensor(double x) { return make_tensor({1}, {x}); }

// ---------------------------------------------------------------------------
// Forward ops with recorded backward closures.
// ---------------------------------------------------------------------------

inline void check_mat(const Tensor& t, const char* who) {
  if (t->shape.size() != 2)
    throw std::invalid_argument(std::string(who) + ": expected a 2-d tensor");
}

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  check_mat(a, "matmul");
  check_mat(b, "matmul");
  const int m = a->rows(), k = a->cols(), n = b->cols();
  if (b->rows() != k) throw std::invalid_argument("matmul: inner dimensions disagree");
  auto out = zeros({m, n});
  const double* pa = a->value.data();
  const double* pb = b->value.data();
  double* po = out->value.data();
  for (int i = 0; i < m; ++i)
    for (int kk = 0; kk < k; ++kk) {
      const double aik = pa[i * k + kk];
      if (aik == 0.0) continue;
      const double* brow = pb + kk * n;
      double* orow = po + i * n;
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  out->parents = {a, b};
  out->backfn = [m, k, n](Node& self) {
    Node& A = *self.parents[0];
    Node& B = *self.parents[1];
    const double* g = self.grad.data();
    // dA = g * B^T
    for (int i = 0; i < m; ++i)
      for (int kk = 0; kk < k; ++kk) {
        double s = 0;
        const double* grow = g + i * n;
        const double* brow = B.value.data() + kk * n;
        for (int j = 0; j < n; ++j) s += grow[j] * brow[j];
        A.grad[i * k + kk] += s;
      }
    // dB = A^T * g
    for (int kk = 0; kk < k; ++kk)
      for (int i = 0; i < m; ++i) {
        const double aik = A.value[i * k + kk];
        if (aik == 0.0) continue;
        const double* grow = g + i * n;
        double* brow = B.grad.data() + kk * n;
        for (int j = 0; j < n; ++j) brow[j] += aik * grow[j];
      }
  };
  return out;
}

// a [m,k] times b^T where b is [n,k]; used for QK^T style products.
inline Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  check_mat(a, "matmul_nt");
  check_mat(b, "matmul_nt");
  const int m = a->rows(), k = a->cols(), n = b->rows();
  if (b->cols() != k) throw std::invalid_argument("matmul_nt: inner dimensions disagree");
  auto out = zeros({m, n});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      const double* arow = a->value.data() + i * k;
      const double* brow = b->value.data() + j * k;
      for (int kk = 0; kk < k; ++kk) s += arow[kk] * brow[kk];
      out->value[i * n + j] = s;
    }
  out->parents = {a, b};
  out->backfn = [m, k, n](Node& self) {
    Node& A = *self.parents[0];
    Node& B = *self.parents[1];
    const double* g = self.grad.data();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const double gij = g[i * n + j];
        if (gij == 0.0) continue;
        double* ga = A.grad.data() + i * k;
        double* gb = B.grad.data() + j * k;
        const double* av = A.value.data() + i * k;
        const double* bv = B.value.data() + j * k;
        for (int kk = 0; kk < k; ++kk) {
          ga[kk] += gij * bv[kk];
          gb[kk] += gij * av[kk];
        }
      }
  };
  return out;
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  if (a->shape != b->shape) throw std::invalid_argument("add: shape mismatch");
  auto out = make_tensor(a->shape, a->value);
  for (std::size_t i = 0; i < out->size(); ++i) out->value[i] += b->value[i];
  out->parents = {a, b};
  out->backfn = [](Node& self) {
    for (std::size_t i = 0; i < self.size(); ++i) {
      self.parents[0]->grad[i] += self.grad[i];
      self.parents[1]->grad[i] += self.grad[i];
    }
  };
  return out;
}

// Adds a length-d row vector to every row of a [m,d] matrix.
inline Tensor add_rowvec(const Tensor& a, const Tensor& b) {
  check_mat(a, "add_rowvec");
  const int m = a->rows(), d = a->cols();
  if (static_cast<int>(b->size()) != d)
    throw std::invalid_argument("add_rowvec: vector length mismatch");
  auto out = make_tensor(a->shape, a->value);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) out->value[i * d + j] += b->value[j];
  out->parents = {a, b};
  out->backfn = [m, d](Node& self) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) {
        self.parents[0]->grad[i * d + j] += self.grad[i * d + j];
        self.parents[1]->grad[j] += self.grad[i * d + j];
      }
  };
  return out;
}

inline Tensor scale(const Tensor& a, double c) {
  auto out = make_tensor(a->shape, a->value);
  for (auto& x : out->value) x *= c;
  out->parents = {a};
  out->backfn = [c](Node& self) {
    for (std::size_t i = 0; i < self.size(); ++i)
      self.parents[0]->grad[i] += c * self.grad[i];
  };
  return out;
}

inline Tensor relu(const Tensor& a) {
  auto out = make_tensor(a->shape, a->value);
  for (auto& x : out->value) x = x > 0 ? x : 0.0;
  out->parents = {a};
  out->backfn = [](Node& self) {
    for (std::size_t i = 0; i < self.size(); ++i)
      if (self.parents[0]->value[i] > 0) self.parents[0]->grad[i] += self.grad[i];
  };
  return out;
}

// Row-wise softmax over permitted columns only. Forbidden entries are exactly
// 0.0 and never read from the logits. A fully forbidden row yields all zeros.
inline Tensor masked_softmax(const Tensor& logits, const BoolMat& mask) {
  check_mat(logits, "masked_softmax");
  const int m = logits->rows(), n = logits->cols();
  if (mask.rows != m || mask.cols != n)
    throw std::invalid_argument("masked_softmax: mask shape mismatch");
  auto out = zeros({m, n});
  for (int i = 0; i < m; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (mask.at(i, j)) mx = std::max(mx, logits->value[i * n + j]);
    if (!std::isfinite(mx)) continue;  // fully forbidden row
    double z = 0;
    for (int j = 0; j < n; ++j)
      if (mask.at(i, j)) {
        const double e = std::exp(logits->value[i * n + j] - mx);
        out->value[i * n + j] = e;
        z += e;
      }
    for (int j = 0; j < n; ++j)
      if (mask.at(i, j)) out->value[i * n + j] /= z;
  }
  out->parents = {logits};
  BoolMat mk = mask;
  out->backfn = [m, n, mk](Node& self) {
    for (int i = 0; i < m; ++i) {
      double dot = 0;
      for (int j = 0; j < n; ++j)
        if (mk.at(i, j)) dot += self.grad[i * n + j] * self.value[i * n + j];
      for (int j = 0; j < n; ++j)
        if (mk.at(i, j))
          self.parents[0]->grad[i * n + j] +=
              self.value[i * n + j] * (self.grad[i * n + j] - dot);
    }
  };
  return out;
}

inline Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                         double eps) {
  check_mat(x, "layer_norm");
  if (eps <= 0) throw std::invalid_argument("layer_norm: eps must be positive");
  const int m = x->rows(), d = x->cols();
  if (static_cast<int>(gain->size()) != d || static_cast<int>(bias->size()) != d)
    throw std::invalid_argument("layer_norm: gain/bias length mismatch");
  auto out = zeros({m, d});
  std::vector<double> inv_std(m), xhat(static_cast<std::size_t>(m) * d);
  for (int i = 0; i < m; ++i) {
    double mean = 0;
    for (int j = 0; j < d; ++j) mean += x->value[i * d + j];
    mean /= d;
    double var = 0;
    for (int j = 0; j < d; ++j) {
      const double c = x->value[i * d + j] - mean;
      var += c * c;
    }
    var /= d;
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (int j = 0; j < d; ++j) {
      xhat[i * d + j] = (x->value[i * d + j] - mean) * inv_std[i];
      out->value[i * d + j] = gain->value[j] * xhat[i * d + j] + bias->value[j];
    }
  }
  out->parents = {x, gain, bias};
  out->backfn = [m, d, inv_std = std::move(inv_std), xhat = std::move(xhat)](Node& self) {
    Node& gx = *self.parents[0];
    Node& gg = *self.parents[1];
    Node& gb = *self.parents[2];
    for (int i = 0; i < m; ++i) {
      double sum_dxhat = 0, sum_dxhat_xhat = 0;
      for (int j = 0; j < d; ++j) {
        const double dy = self.grad[i * d + j];
        const double dxhat = dy * gg.value[j];
        sum_dxhat += dxhat;
        sum_dxhat_xhat += dxhat * xhat[i * d + j];
        gg.grad[j] += dy * xhat[i * d + j];
        gb.grad[j] += dy;
      }
      for (int j = 0; j < d; ++j) {
        const double dxhat = self.grad[i * d + j] * gg.value[j];
        gx.grad[i * d + j] +=
            inv_std[i] * (dxhat - sum_dxhat / d - xhat[i * d + j] * sum_dxhat_xhat / d);
      }
    }
  };
  return out;
}

// Gathers rows of an embedding table; grad scatters back (accumulating
// across repeated ids).
inline Tensor rows_lookup(const Tensor& table, const std::vector<int>& ids) {
  check_mat(table, "rows_lookup");
  const int v = table->rows(), d = table->cols();
  const int n = static_cast<int>(ids.size());
  auto out = zeros({n, d});
  for (int i = 0; i < n; ++i) {
    if (ids[i] < 0 || ids[i] >= v)
      throw std::invalid_argument("rows_lookup: id out of range");
    std::copy_n(table->value.data() + ids[i] * d, d, out->value.data() + i * d);
  }
  out->parents = {table};
  out->backfn = [ids, d](Node& self) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (int j = 0; j < d; ++j)
        self.parents[0]->grad[ids[i] * d + j] += self.grad[i * d + j];
  };
  return out;
}

inline Tensor slice_cols(const Tensor& a, int start, int width) {
  check_mat(a, "slice_cols");
  const int m = a->rows(), d = a->cols();
  if (start < 0 || width <= 0 || start + width > d)
    throw std::invalid_argument("slice_cols: range out of bounds");
  auto out = zeros({m, width});
  for (int i = 0; i < m; ++i)
    std::copy_n(a->value.data() + i * d + start, width, out->value.data() + i * width);
  out->parents = {a};
  out->backfn = [m, d, start, width](Node& self) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < width; ++j)
        self.parents[0]->grad[i * d + start + j] += self.grad[i * width + j];
  };
  return out;
}

inline Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const int m = parts[0]->rows();
  int d = 0;
  for (const auto& p : parts) {
    check_mat(p, "concat_cols");
    if (p->rows() != m) throw std::invalid_argument("concat_cols: row mismatch");
    d += p->cols();
  }
  auto out = zeros({m, d});
  int off = 0;
  for (const auto& p : parts) {
    const int w = p->cols();
    for (int i = 0; i < m; ++i)
      std::copy_n(p->value.data() + i * w, w, out->value.data() + i * d + off);
    off += w;
  }
  out->parents = parts;
  out->backfn = [m, d](Node& self) {
    int off2 = 0;
    for (auto& p : self.parents) {
      const int w = p->cols();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < w; ++j) p->grad[i * w + j] += self.grad[i * d + off2 + j];
      off2 += w;
    }
  };
  return out;
}

// Relative-position logit term: out[i][j] = q_i . rel[clip(j-i, k) + k],
// where rel is a (2k+1) x d table indexed by clipped signed offset.
inline Tensor rel_logits(const Tensor& q, const Tensor& rel, int n_kv, int clip_k) {
  check_mat(q, "rel_logits");
  check_mat(rel, "rel_logits");
  const int n = q->rows(), d = q->cols();
  if (rel->rows() != 2 * clip_k + 1 || rel->cols() != d)
    throw std::invalid_argument("rel_logits: table shape mismatch");
  auto out = zeros({n, n_kv});
  auto clip = [clip_k](int off) { return std::clamp(off, -clip_k, clip_k) + clip_k; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n_kv; ++j) {
      const double* qi = q->value.data() + i * d;
      const double* a = rel->value.data() + clip(j - i) * d;
      double s = 0;
      for (int t = 0; t < d; ++t) s += qi[t] * a[t];
      out->value[i * n_kv + j] = s;
    }
  out->parents = {q, rel};
  out->backfn = [n, n_kv, d, clip](Node& self) {
    Node& Q = *self.parents[0];
    Node& R = *self.parents[1];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n_kv; ++j) {
        const double g = self.grad[i * n_kv + j];
        if (g == 0.0) continue;
        const int r = clip(j - i);
        for (int t = 0; t < d; ++t) {
          Q.grad[i * d + t] += g * R.value[r * d + t];
          R.grad[r * d + t] += g * Q.value[i * d + t];
        }
      }
  };
  return out;
}

// Inverted dropout; identity when rate == 0.
inline Tensor dropout(const Tensor& a, double rate, Rng& rng) {
  if (rate == 0.0) return a;
  if (rate < 0 || rate >= 1) throw std::invalid_argument("dropout: rate out of range");
  auto out = make_tensor(a->shape, a->value);
  std::vector<double> keep(a->size());
  const double inv = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < a->size(); ++i) {
    keep[i] = rng.next_double() >= rate ? inv : 0.0;
    out->value[i] *= keep[i];
  }
  out->parents = {a};
  out->backfn = [keep = std::move(keep)](Node& self) {
    for (std::size_t i = 0; i < self.size(); ++i)
      self.parents[0]->grad[i] += keep[i] * self.grad[i];
  };
  return out;
}

// Sum of -log softmax(target) over non-pad positions. The mean form used for
// reporting is sum / count; callers combine sums across a batch first.
inline Tensor cross_entropy_sum(const Tensor& logits, const std::vector<int>& targets,
                                const std::vector<std::uint8_t>& pad_mask) {
  check_mat(logits, "cross_entropy");
  const int m = logits->rows(), v = logits->cols();
  if (static_cast<int>(targets.size()) != m || pad_mask.size() != targets.size())
    throw std::invalid_argument("cross_entropy: target length mismatch");
  auto out = zeros({1});
  std::vector<double> probs(static_cast<std::size_t>(m) * v, 0.0);
  double total = 0;
  int count = 0;
  for (int i = 0; i < m; ++i) {
    if (pad_mask[i]) continue;
    if (targets[i] < 0 || targets[i] >= v)
      throw std::invalid_argument("cross_entropy: target id out of range");
    double mx = logits->value[i * v];
    for (int j = 1; j < v; ++j) mx = std::max(mx, logits->value[i * v + j]);
    double z = 0;
    for (int j = 0; j < v; ++j) {
      probs[i * v + j] = std::exp(logits->value[i * v + j] - mx);
      z += probs[i * v + j];
    }
    for (int j = 0; j < v; ++j) probs[i * v + j] /= z;
    total += -std::log(probs[i * v + targets[i]]);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("cross_entropy: empty loss");
  out->value[0] = total;
  out->parents = {logits};
  out->backfn = [m, v, targets, pad_mask, probs = std::move(probs)](Node& self) {
    const double g = self.grad[0];
    for (int i = 0; i < m; ++i) {
      if (pad_mask[i]) continue;
      for (int j = 0; j < v; ++j)
        self.parents[0]->grad[i * v + j] +=
            g * (probs[i * v + j] - (j == targets[i] ? 1.0 : 0.0));
    }
  };
  return out;
}

inline int non_pad_count(const std::vector<std::uint8_t>& pad_mask) {
  int c = 0;
  for (auto p : pad_mask)
    if (!p) ++c;
  return c;
}

// Mean negative log-likelihood over non-pad positions.
inline Tensor cross_entropy(const Tensor& logits, const std::vector<int>& targets,
                            const std::vector<std::uint8_t>& pad_mask) {
  auto s = cross_entropy_sum(logits, targets, pad_mask);
  return scale(s, 1.0 / non_pad_count(pad_mask));
}

// ---------------------------------------------------------------------------
// Reverse pass.
// ---------------------------------------------------------------------------

inline void topo_order(const Tensor& root, std::vector<Node*>& order) {
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{root.get(), 0}};
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx++].get();
      if (seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
}

inline void backward(const Tensor& root) {
  if (root->size() != 1)
    throw std::invalid_argument("backward: root must be scalar");
  if (root->backward_run)
    throw std::runtime_error("backward: already run on this graph; reset first");
  root->backward_run = true;
  std::vector<Node*> order;
  topo_order(root, order);
  for (Node* n : order) n->grad.assign(n->size(), 0.0);
  root->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backfn) (*it)->backfn(**it);
}

// ---------------------------------------------------------------------------
// Adam and the learning-rate schedule.
// ---------------------------------------------------------------------------

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t t = 0;
  std::vector<std::vector<double>> m, v;

  void init(const std::vector<Tensor>& params) {
    m.clear();
    v.clear();
    for (const auto& p : params) {
      m.emplace_back(p->size(), 0.0);
      v.emplace_back(p->size(), 0.0);
    }
    t = 0;
  }
};

inline void adam_step(const std::vector<Tensor>& params, AdamState& st,
                      double lr_override = -1.0) {
  if (st.m.size() != params.size()) throw std::invalid_argument("adam: state mismatch");
  const double lr = lr_override >= 0 ? lr_override : st.lr;
  st.t += 1;
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Node& w = *params[p];
    if (w.grad.size() != w.size()) throw std::invalid_argument("adam: missing grads");
    if (st.m[p].size() != w.size()) throw std::invalid_argument("adam: shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double g = w.grad[i];
      st.m[p][i] = st.beta1 * st.m[p][i] + (1 - st.beta1) * g;
      st.v[p][i] = st.beta2 * st.v[p][i] + (1 - st.beta2) * g * g;
      const double mhat = st.m[p][i] / bc1;
      const double vhat = st.v[p][i] / bc2;
      w.value[i] -= lr * mhat / (std::sqrt(vhat) + st.eps);
    }
  }
}

// Inverse-sqrt schedule with linear warmup.
inline double lr_schedule(std::int64_t step, std::int64_t warmup, int d_model) {
  if (step < 1) throw std::invalid_argument("lr_schedule: step must be >= 1");
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(warmup);
  return std::pow(static_cast<double>(d_model), -0.5) *
         std::min(std::pow(s, -0.5), s * std::pow(w, -1.5));
}

// ---------------------------------------------------------------------------
// Finite-difference gradient verification.
// ---------------------------------------------------------------------------

// build() must construct a fresh graph over the given leaves and return the
// scalar loss. Returns the worst relative error between central differences
// and backward() gradients across every leaf coordinate.
inline double finite_diff_check(const std::function<Tensor()>& build,
                                const std::vector<Tensor>& leaves, double eps) {
  if (eps == 0.0) throw std::invalid_argument("finite_diff_check: zero step");
  Tensor loss = build();
  backward(loss);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(leaves.size());
  for (const auto& l : leaves) analytic.push_back(l->grad);
  double worst = 0;
  for (std::size_t p = 0; p < leaves.size(); ++p) {
    for (std::size_t i = 0; i < leaves[p]->size(); ++i) {
      const double keep = leaves[p]->value[i];
      leaves[p]->value[i] = keep + eps;
      const double fp = build()->scalar();
      leaves[p]->value[i] = keep - eps;
      const double fm = build()->scalar();
      leaves[p]->value[i] = keep;
      const double fd = (fp - fm) / (2 * eps);
      const double ad = analytic[p][i];
      const double denom = std::max({std::fabs(fd), std::fabs(ad), 1e-6});
      worst = std::max(worst, std::fabs(fd - ad) / denom);
    }
  }
  return worst;
}

}  // namespace sumkit::num

#endif  // SUMKIT_TENSOR_HPP_
