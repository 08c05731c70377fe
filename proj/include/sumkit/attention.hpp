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

#ifndef SUMKIT_ATTENTION_HPP_
#define SUMKIT_ATTENTION_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumkit/tensor.hpp"

namespace sumkit::attn {

using num::BoolMat;
using num::Tensor;

enum class AttentionVariant {
  kSDotProd,
  kRelSDotProd,
  kLocal,
  kLocalMask,
  kLocalBlkMask,
  kDilated,
  kDilatedMask,
};

inline const char* variant_name(AttentionVariant v) {
  switch (v) {
    case AttentionVariant::kSDotProd: return "s-dot-prod";
    case AttentionVariant::kRelSDotProd: return "rel-s-dot-prod";
    case AttentionVariant::kLocal: return "local";
    case AttentionVariant::kLocalMask: return "local-mask";
    case AttentionVariant::kLocalBlkMask: return "local-blk-mask";
    case AttentionVariant::kDilated: return "dilated";
    case AttentionVariant::kDilatedMask: return "dilated-mask";
  }
  return "?";
}

inline AttentionVariant variant_from_name(const std::string& s) {
  for (auto v : {AttentionVariant::kSDotProd, AttentionVariant::kRelSDotProd,
                 AttentionVariant::kLocal, AttentionVariant::kLocalMask,
                 AttentionVariant::kLocalBlkMask, AttentionVariant::kDilated,
                 AttentionVariant::kDilatedMask})
    if (s == variant_name(v)) return v;
  throw std::invalid_argument("unknown attention variant: " + s);
}

inline const std::vector<AttentionVariant>& all_variants() {
  static const std::vector<AttentionVariant> v = {
      AttentionVariant::kSDotProd,     AttentionVariant::kRelSDotProd,
      AttentionVariant::kLocal,        AttentionVariant::kLocalMask,
      AttentionVariant::kLocalBlkMask, AttentionVariant::kDilated,
      AttentionVariant::kDilatedMask};
  return v;
}

struct AttentionConfig {
  int heads = 8;
  int d_model = 256;
  int block_len = 4;   // B
  int gap = 1;         // G, dilated only
  int window = 1;      // W, attended blocks per side, dilated only
  int clip_dist = 16;  // k, relative only
  bool causal = false;

  void validate() const {
    if (heads <= 0 || d_model <= 0 || d_model % heads != 0)
      throw std::invalid_argument("attention config: d_model must be divisible by heads");
    if (block_len <= 0) throw std::invalid_argument("attention config: block_len <= 0");
    if (gap < 0 || window <= 0 || clip_dist <= 0)
      throw std::invalid_argument("attention config: invalid window parameters");
  }
};

using AttendMask = BoolMat;

// Permission matrix for a variant. blk(i) = i / B. All variants are realized
// as masks over full attention; blockwise kernels would be an optimization
// only (the mask-equivalence test pins the semantics).
inline AttendMask build_mask(AttentionVariant variant, int n_q, int n_kv,
                             const AttentionConfig& cfg) {
  cfg.validate();
  const int b = cfg.block_len;
  auto blk = [b](int i) { return i / b; };
  AttendMask mask(n_q, n_kv, false);
  for (int i = 0; i < n_q; ++i) {
    for (int j = 0; j < n_kv; ++j) {
      bool ok = false;
      switch (variant) {
        case AttentionVariant::kSDotProd:
        case AttentionVariant::kRelSDotProd:
          ok = true;
          break;
        case AttentionVariant::kLocal:
          ok = blk(i) == blk(j);
          break;
        case AttentionVariant::kLocalMask:
          ok = blk(j) <= blk(i);
          break;
        case AttentionVariant::kLocalBlkMask:
          ok = blk(i) == blk(j) && j <= i;
          break;
        case AttentionVariant::kDilated:
        case AttentionVariant::kDilatedMask: {
          // Attended blocks: blk(i) plus W blocks per side at stride G+1.
          const int stride = cfg.gap + 1;
          const int db = blk(j) - blk(i);
          ok = db == 0;
          for (int t = 1; !ok && t <= cfg.window; ++t)
            ok = db == t * stride || db == -t * stride;
          if (ok && variant == AttentionVariant::kDilatedMask) {
            if (blk(j) > blk(i)) ok = false;
            if (blk(j) == blk(i) && j > i) ok = false;
          }
          break;
        }
      }
      if (ok && cfg.causal && j > i) ok = false;
      mask.set(i, j, ok);
    }
  }
  bool any = false;
  for (auto x : mask.v) any = any || x != 0;
  if (!any) throw std::invalid_argument("build_mask: mask permits nothing");
  return mask;
}

inline AttendMask causal_mask(int n) {
  AttendMask m(n, n, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, true);
  return m;
}

inline AttendMask and_masks(const AttendMask& a, const AttendMask& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("and_masks: shape mismatch");
  AttendMask out(a.rows, a.cols, false);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] & b.v[i];
  return out;
}

// softmax(QK^T / sqrt(d)) V over permitted positions.
inline Tensor sdp_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                            const AttendMask& mask) {
  if (q->cols() != k->cols()) throw std::invalid_argument("sdp_attention: Q/K dim mismatch");
  if (k->rows() != v->rows()) throw std::invalid_argument("sdp_attention: K/V row mismatch");
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(q->cols()));
  Tensor logits = num::scale(num::matmul_nt(q, k), inv_sqrt_d);
  return num::matmul(num::masked_softmax(logits, mask), v);
}

// Table of (2k+1) learned offset embeddings, row index = clip(j-i, k) + k.
struct RelEmbeddings {
  int clip_dist = 0;
  Tensor table;  // [2k+1, d_head]
};

// Relative-position attention: logits get an additive key-side term
// q_i . a_{clip(j-i)} before scaling.
inline Tensor relative_sdp_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                                     const RelEmbeddings& rel, const AttendMask& mask) {
  if (rel.table->cols() != q->cols())
    throw std::invalid_argument("relative_sdp_attention: rel width mismatch");
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(q->cols()));
  Tensor logits = num::add(num::matmul_nt(q, k),
                           num::rel_logits(q, rel.table, k->rows(), rel.clip_dist));
  logits = num::scale(logits, inv_sqrt_d);
  return num::matmul(num::masked_softmax(logits, mask), v);
}

struct MultiHeadParams {
  Tensor wq, wk, wv, wo;  // all [d_model, d_model]
  // Present only for the relative variant; shared across heads.
  std::vector<RelEmbeddings> rel;  // one table per head when non-empty
};

// Standard multi-head attention: project, split columns per head, attend,
// concatenate, output-project. Uses the relative form when params carry
// rel tables.
inline Tensor multi_head(const Tensor& q_in, const Tensor& k_in, const Tensor& v_in,
                         const MultiHeadParams& params, const AttendMask& mask,
                         const AttentionConfig& cfg) {
  cfg.validate();
  const int d_head = cfg.d_model / cfg.heads;
  Tensor q = num::matmul(q_in, params.wq);
  Tensor k = num::matmul(k_in, params.wk);
  Tensor v = num::matmul(v_in, params.wv);
  std::vector<Tensor> heads;
  heads.reserve(cfg.heads);
  for (int h = 0; h < cfg.heads; ++h) {
    Tensor qh = num::slice_cols(q, h * d_head, d_head);
    Tensor kh = num::slice_cols(k, h * d_head, d_head);
    Tensor vh = num::slice_cols(v, h * d_head, d_head);
    if (!params.rel.empty())
      heads.push_back(relative_sdp_attention(qh, kh, vh, params.rel[h], mask));
    else
      heads.push_back(sdp_attention(qh, kh, vh, mask));
  }
  return num::matmul(num::concat_cols(heads), params.wo);
}

// Absolute positional signal: channel 2i uses sin, 2i+1 uses cos.
inline Tensor sinusoid_positions(int n, int d_model) {
  if (d_model % 2 != 0)
    throw std::invalid_argument("sinusoid_positions: d_model must be even");
  auto out = num::zeros({n, d_model});
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < d_model / 2; ++i) {
      const double rate = std::pow(10000.0, 2.0 * i / d_model);
      out->value[p * d_model + 2 * i] = std::sin(p / rate);
      out->value[p * d_model + 2 * i + 1] = std::cos(p / rate);
    }
  out->backfn = nullptr;  // constant
  return out;
}

}  // namespace sumkit::attn

#endif  // SUMKIT_ATTENTION_HPP_
