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

#ifndef SUMKIT_TRANSFORMER_HPP_
#define SUMKIT_TRANSFORMER_HPP_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sumkit/attention.hpp"
#include "sumkit/rng.hpp"
#include "sumkit/tensor.hpp"

namespace sumkit::model {

using attn::AttendMask;
using attn::AttentionConfig;
using attn::AttentionVariant;
using num::Tensor;

struct ModelConfig {
  int layers = 2;
  int d_model = 256;
  int d_ff = 2048;
  int heads = 8;
  int vocab = 0;
  int max_len = 256;
  double dropout = 0.1;
  AttentionVariant variant = AttentionVariant::kSDotProd;
  bool use_absolute_positions = true;
  // Variant geometry.
  int block_len = 4;
  int gap = 1;
  int window = 1;
  int clip_dist = 16;
  double ln_eps = 1e-6;

  void validate() const {
    if (layers < 1) throw std::invalid_argument("model config: layers must be >= 1");
    if (d_model % heads != 0)
      throw std::invalid_argument("model config: d_model not divisible by heads");
    if (d_model % 2 != 0) throw std::invalid_argument("model config: d_model must be even");
    if (vocab <= 4) throw std::invalid_argument("model config: vocab too small");
  }

  AttentionConfig attn_config(bool causal) const {
    AttentionConfig a;
    a.heads = heads;
    a.d_model = d_model;
    a.block_len = block_len;
    a.gap = gap;
    a.window = window;
    a.clip_dist = clip_dist;
    a.causal = causal;
    return a;
  }
};

inline void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"layers", c.layers},
                     {"d_model", c.d_model},
                     {"d_ff", c.d_ff},
                     {"heads", c.heads},
                     {"vocab", c.vocab},
                     {"max_len", c.max_len},
                     {"dropout", c.dropout},
                     {"variant", attn::variant_name(c.variant)},
                     {"use_absolute_positions", c.use_absolute_positions},
                     {"block_len", c.block_len},
                     {"gap", c.gap},
                     {"window", c.window},
                     {"clip_dist", c.clip_dist},
                     {"ln_eps", c.ln_eps}};
}

inline void from_json(const nlohmann::json& j, ModelConfig& c) {
  j.at("layers").get_to(c.layers);
  j.at("d_model").get_to(c.d_model);
  j.at("d_ff").get_to(c.d_ff);
  j.at("heads").get_to(c.heads);
  j.at("vocab").get_to(c.vocab);
  j.at("max_len").get_to(c.max_len);
  j.at("dropout").get_to(c.dropout);
  c.variant = attn::variant_from_name(j.at("variant").get<std::string>());
  j.at("use_absolute_positions").get_to(c.use_absolute_positions);
  j.at("block_len").get_to(c.block_len);
  j.at("gap").get_to(c.gap);
  j.at("window").get_to(c.window);
  j.at("clip_dist").get_to(c.clip_dist);
  j.at("ln_eps").get_to(c.ln_eps);
}

struct SublayerNorm {
  Tensor gain, bias;
};

struct FeedForward {
  Tensor w1, b1, w2, b2;
};

struct EncoderLayer {
  attn::MultiHeadParams self;
  SublayerNorm ln_self;
  FeedForward ff;
  SublayerNorm ln_ff;
};

struct DecoderLayer {
  attn::MultiHeadParams self;
  SublayerNorm ln_self;
  attn::MultiHeadParams cross;  // plain scaled dot-product, never relative
  SublayerNorm ln_cross;
  FeedForward ff;
  SublayerNorm ln_ff;
};

struct ModelParams {
  Tensor embed;  // shared source/target embedding [V, d_model]
  std::vector<EncoderLayer> enc;
  std::vector<DecoderLayer> dec;
  Tensor out_proj;  // [d_model, V], untied from embed
  Tensor out_bias;  // [V]

  // Stable name -> tensor enumeration; order defines the checkpoint layout.
  std::vector<std::pair<std::string, Tensor>> named() const {
    std::vector<std::pair<std::string, Tensor>> out;
    out.emplace_back("embed", embed);
    auto add_mh = [&out](const std::string& p, const attn::MultiHeadParams& mh) {
      out.emplace_back(p + ".wq", mh.wq);
      out.emplace_back(p + ".wk", mh.wk);
      out.emplace_back(p + ".wv", mh.wv);
      out.emplace_back(p + ".wo", mh.wo);
      for (std::size_t h = 0; h < mh.rel.size(); ++h)
        out.emplace_back(p + ".rel" + std::to_string(h), mh.rel[h].table);
    };
    auto add_ln = [&out](const std::string& p, const SublayerNorm& ln) {
      out.emplace_back(p + ".gain", ln.gain);
      out.emplace_back(p + ".bias", ln.bias);
    };
    auto add_ff = [&out](const std::string& p, const FeedForward& ff) {
      out.emplace_back(p + ".w1", ff.w1);
      out.emplace_back(p + ".b1", ff.b1);
      out.emplace_back(p + ".w2", ff.w2);
      out.emplace_back(p + ".b2", ff.b2);
    };
    for (std::size_t l = 0; l < enc.size(); ++l) {
      const std::string p = "enc" + std::to_string(l);
      add_mh(p + ".self", enc[l].self);
      add_ln(p + ".ln_self", enc[l].ln_self);
      add_ff(p + ".ff", enc[l].ff);
      add_ln(p + ".ln_ff", enc[l].ln_ff);
    }
    for (std::size_t l = 0; l < dec.size(); ++l) {
      const std::string p = "dec" + std::to_string(l);
      add_mh(p + ".self", dec[l].self);
      add_ln(p + ".ln_self", dec[l].ln_self);
      add_mh(p + ".cross", dec[l].cross);
      add_ln(p + ".ln_cross", dec[l].ln_cross);
      add_ff(p + ".ff", dec[l].ff);
      add_ln(p + ".ln_ff", dec[l].ln_ff);
    }
    out.emplace_back("out_proj", out_proj);
    out.emplace_back("out_bias", out_bias);
    return out;
  }

  std::vector<Tensor> all() const {
    std::vector<Tensor> out;
    for (auto& [name, t] : named()) out.push_back(t);
    return out;
  }
};

// Xavier-uniform weights, zero biases, unit layer-norm gains.
inline ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  auto xavier = [&rng](int fan_in, int fan_out) {
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    auto t = num::zeros({fan_in, fan_out});
    for (auto& x : t->value) x = rng.uniform(-bound, bound);
    return t;
  };
  auto make_ln = [&](SublayerNorm& ln) {
    ln.gain = num::full({cfg.d_model}, 1.0);
    ln.bias = num::zeros({cfg.d_model});
  };
  auto make_mh = [&](attn::MultiHeadParams& mh, bool relative) {
    mh.wq = xavier(cfg.d_model, cfg.d_model);
    mh.wk = xavier(cfg.d_model, cfg.d_model);
    mh.wv = xavier(cfg.d_model, cfg.d_model);
    mh.wo = xavier(cfg.d_model, cfg.d_model);
    if (relative) {
      const int d_head = cfg.d_model / cfg.heads;
      mh.rel.resize(cfg.heads);
      for (auto& r : mh.rel) {
        r.clip_dist = cfg.clip_dist;
        r.table = xavier(2 * cfg.clip_dist + 1, d_head);
      }
    }
  };
  auto make_ff = [&](FeedForward& ff) {
    ff.w1 = xavier(cfg.d_model, cfg.d_ff);
    ff.b1 = num::zeros({cfg.d_ff});
    ff.w2 = xavier(cfg.d_ff, cfg.d_model);
    ff.b2 = num::zeros({cfg.d_model});
  };
  const bool relative = cfg.variant == AttentionVariant::kRelSDotProd;
  ModelParams p;
  p.embed = xavier(cfg.vocab, cfg.d_model);
  p.enc.resize(cfg.layers);
  for (auto& l : p.enc) {
    make_mh(l.self, relative);
    make_ln(l.ln_self);
    make_ff(l.ff);
    make_ln(l.ln_ff);
  }
  p.dec.resize(cfg.layers);
  for (auto& l : p.dec) {
    make_mh(l.self, relative);
    make_ln(l.ln_self);
    make_mh(l.cross, false);
    make_ln(l.ln_cross);
    make_ff(l.ff);
    make_ln(l.ln_ff);
  }
  p.out_proj = xavier(cfg.d_model, cfg.vocab);
  p.out_bias = num::zeros({cfg.vocab});
  return p;
}

namespace detail {

inline Tensor feed_forward(const Tensor& x, const FeedForward& ff) {
  Tensor h = num::relu(num::add_rowvec(num::matmul(x, ff.w1), ff.b1));
  return num::add_rowvec(num::matmul(h, ff.w2), ff.b2);
}

inline Tensor sublayer(const Tensor& x, const Tensor& fx, const SublayerNorm& ln,
                       const ModelConfig& cfg, double drop_rate, Rng* rng) {
  Tensor y = fx;
  if (drop_rate > 0 && rng) y = num::dropout(y, drop_rate, *rng);
  return num::layer_norm(num::add(x, y), ln.gain, ln.bias, cfg.ln_eps);
}

// Forbid attending to pad key positions.
inline AttendMask apply_pad_cols(AttendMask m, const std::vector<std::uint8_t>& key_pad) {
  for (int j = 0; j < m.cols; ++j)
    if (key_pad[j])
      for (int i = 0; i < m.rows; ++i) m.set(i, j, false);
  return m;
}

inline Tensor embed_tokens(const std::vector<int>& ids, const ModelParams& p,
                           const ModelConfig& cfg) {
  Tensor x = num::scale(num::rows_lookup(p.embed, ids),
                        std::sqrt(static_cast<double>(cfg.d_model)));
  if (cfg.use_absolute_positions)
    x = num::add(x, attn::sinusoid_positions(static_cast<int>(ids.size()), cfg.d_model));
  return x;
}

}  // namespace detail

// Single-sequence encoder. pad[i] marks positions excluded from attention
// keys; pass all-false when the sequence carries no padding.
inline Tensor encode_seq(const std::vector<int>& ids, const std::vector<std::uint8_t>& pad,
                         const ModelParams& p, const ModelConfig& cfg, Rng* drop_rng = nullptr) {
  cfg.validate();
  const int n = static_cast<int>(ids.size());
  if (n == 0) throw std::invalid_argument("encode: empty sequence");
  if (n > cfg.max_len) throw std::invalid_argument("encode: sequence exceeds max_len");
  if (pad.size() != ids.size()) throw std::invalid_argument("encode: pad mask length");
  const double drop = drop_rng ? cfg.dropout : 0.0;
  AttendMask self_mask = detail::apply_pad_cols(
      attn::build_mask(cfg.variant, n, n, cfg.attn_config(false)), pad);
  Tensor x = detail::embed_tokens(ids, p, cfg);
  for (const auto& layer : p.enc) {
    Tensor a = attn::multi_head(x, x, x, layer.self, self_mask, cfg.attn_config(false));
    x = detail::sublayer(x, a, layer.ln_self, cfg, drop, drop_rng);
    Tensor f = detail::feed_forward(x, layer.ff);
    x = detail::sublayer(x, f, layer.ln_ff, cfg, drop, drop_rng);
  }
  return x;
}

// Single-sequence decoder over a target prefix. Returns [n_tgt, V] logits.
inline Tensor decoder_forward_seq(const std::vector<int>& tgt_ids, const Tensor& memory,
                                  const std::vector<std::uint8_t>& src_pad,
                                  const ModelParams& p, const ModelConfig& cfg,
                                  Rng* drop_rng = nullptr) {
  cfg.validate();
  const int n = static_cast<int>(tgt_ids.size());
  if (n == 0) throw std::invalid_argument("decode: empty prefix");
  if (n > cfg.max_len) throw std::invalid_argument("decode: sequence exceeds max_len");
  if (memory->cols() != cfg.d_model)
    throw std::invalid_argument("decode: memory width mismatch");
  if (static_cast<int>(src_pad.size()) != memory->rows())
    throw std::invalid_argument("decode: source pad mask length");
  const double drop = drop_rng ? cfg.dropout : 0.0;
  AttendMask self_mask = attn::build_mask(cfg.variant, n, n, cfg.attn_config(true));
  AttendMask cross_mask =
      detail::apply_pad_cols(AttendMask(n, memory->rows(), true), src_pad);
  Tensor x = detail::embed_tokens(tgt_ids, p, cfg);
  for (const auto& layer : p.dec) {
    Tensor a = attn::multi_head(x, x, x, layer.self, self_mask, cfg.attn_config(true));
    x = detail::sublayer(x, a, layer.ln_self, cfg, drop, drop_rng);
    Tensor c = attn::multi_head(x, memory, memory, layer.cross, cross_mask,
                                cfg.attn_config(false));
    x = detail::sublayer(x, c, layer.ln_cross, cfg, drop, drop_rng);
    Tensor f = detail::feed_forward(x, layer.ff);
    x = detail::sublayer(x, f, layer.ln_ff, cfg, drop, drop_rng);
  }
  return num::add_rowvec(num::matmul(x, p.out_proj), p.out_bias);
}

struct Batch {
  // Raw id sequences; no BOS/EOS markers. Pad masks are parallel to the ids
  // and let padded batches mark positions to ignore.
  std::vector<std::vector<int>> src, tgt;
  std::vector<std::vector<std::uint8_t>> src_pad, tgt_pad;

  void push(std::vector<int> s, std::vector<int> t) {
    src_pad.emplace_back(s.size(), 0);
    tgt_pad.emplace_back(t.size(), 0);
    src.push_back(std::move(s));
    tgt.push_back(std::move(t));
  }
  std::size_t size() const { return src.size(); }
};

// Teacher-forced loss over a batch: mean cross entropy over all non-pad
// target positions. BOS/EOS handling: decoder input is BOS + tgt, the
// prediction targets are tgt + EOS.
inline Tensor batch_loss(const Batch& batch, const ModelParams& p, const ModelConfig& cfg,
                         int bos_id, int eos_id, Rng* drop_rng = nullptr) {
  if (batch.size() == 0) throw std::invalid_argument("batch_loss: empty batch");
  std::vector<Tensor> sums;
  int total = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Tensor memory = encode_seq(batch.src[i], batch.src_pad[i], p, cfg, drop_rng);
    // Padded target positions are dropped outright: sequences run through
    // the decoder independently, so target padding carries no information.
    std::vector<int> real_tgt;
    for (std::size_t t = 0; t < batch.tgt[i].size(); ++t)
      if (!batch.tgt_pad[i][t]) real_tgt.push_back(batch.tgt[i][t]);
    if (real_tgt.empty()) throw std::invalid_argument("batch_loss: empty target");
    std::vector<int> dec_in{bos_id};
    dec_in.insert(dec_in.end(), real_tgt.begin(), real_tgt.end());
    std::vector<int> targets(real_tgt);
    targets.push_back(eos_id);
    const std::vector<std::uint8_t> pad(targets.size(), 0);
    Tensor logits = decoder_forward_seq(dec_in, memory, batch.src_pad[i], p, cfg, drop_rng);
    sums.push_back(num::cross_entropy_sum(logits, targets, pad));
    total += static_cast<int>(targets.size());
  }
  Tensor s = sums[0];
  for (std::size_t i = 1; i < sums.size(); ++i) s = num::add(s, sums[i]);
  return num::scale(s, 1.0 / total);
}

struct TrainState {
  num::AdamState adam;
  std::int64_t step = 0;
  std::int64_t warmup = 4000;
};

// One optimizer step; returns the pre-step loss.
inline double train_step(const Batch& batch, ModelParams& p, TrainState& st,
                         const ModelConfig& cfg, int bos_id, int eos_id,
                         Rng* drop_rng = nullptr) {
  auto params = p.all();
  if (st.adam.m.size() != params.size()) st.adam.init(params);
  Tensor loss = batch_loss(batch, p, cfg, bos_id, eos_id, drop_rng);
  num::backward(loss);
  st.step += 1;
  const double lr = num::lr_schedule(st.step, st.warmup, cfg.d_model);
  num::adam_step(params, st.adam, lr);
  return loss->scalar();
}

// Token-count batching with bucketing by source length.
inline std::vector<Batch> make_batches(const std::vector<std::vector<int>>& src,
                                       const std::vector<std::vector<int>>& tgt,
                                       int batch_tokens) {
  if (src.size() != tgt.size()) throw std::invalid_argument("make_batches: size mismatch");
  std::vector<std::size_t> order(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&src](std::size_t a, std::size_t b) {
    return src[a].size() < src[b].size();
  });
  std::vector<Batch> out;
  Batch cur;
  int tokens = 0;
  for (std::size_t i : order) {
    cur.push(src[i], tgt[i]);
    tokens += static_cast<int>(src[i].size() + tgt[i].size());
    if (tokens >= batch_tokens) {
      out.push_back(std::move(cur));
      cur = Batch();
      tokens = 0;
    }
  }
  if (cur.size() > 0) out.push_back(std::move(cur));
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint container: magic "SUMKIT01", length-prefixed JSON config, then
// per tensor: u64 name length, name bytes, u64 rank, dims (u64 LE each),
// values (f64 LE each). Bit-exact round trip.
// ---------------------------------------------------------------------------

namespace detail {

inline void write_u64(std::ostream& os, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}

inline void write_f64(std::ostream& os, double d) {
  std::uint64_t x;
  std::memcpy(&x, &d, 8);
  write_u64(os, x);
}

inline double read_f64(std::istream& is) {
  std::uint64_t x = read_u64(is);
  double d;
  std::memcpy(&d, &x, 8);
  return d;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                            const ModelParams& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write("SUMKIT01", 8);
  const std::string cfg_json = nlohmann::json(cfg).dump();
  detail::write_u64(os, cfg_json.size());
  os.write(cfg_json.data(), static_cast<std::streamsize>(cfg_json.size()));
  for (const auto& [name, t] : params.named()) {
    detail::write_u64(os, name.size());
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::write_u64(os, t->shape.size());
    for (int d : t->shape) detail::write_u64(os, static_cast<std::uint64_t>(d));
    for (double x : t->value) detail::write_f64(os, x);
  }
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

inline std::pair<ModelConfig, ModelParams> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "SUMKIT01", 8) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const std::uint64_t cfg_len = detail::read_u64(is);
  std::string cfg_json(cfg_len, '\0');
  is.read(cfg_json.data(), static_cast<std::streamsize>(cfg_len));
  if (!is) throw std::runtime_error("checkpoint: truncated config");
  ModelConfig cfg = nlohmann::json::parse(cfg_json).get<ModelConfig>();
  ModelParams params = init_params(cfg, 0);
  for (auto& [name, t] : params.named()) {
    const std::uint64_t name_len = detail::read_u64(is);
    std::string got(name_len, '\0');
    is.read(got.data(), static_cast<std::streamsize>(name_len));
    if (!is || got != name)
      throw std::runtime_error("checkpoint: unexpected tensor record '" + got + "'");
    const std::uint64_t rank = detail::read_u64(is);
    if (rank != t->shape.size()) throw std::runtime_error("checkpoint: rank mismatch");
    for (std::size_t d = 0; d < rank; ++d)
      if (detail::read_u64(is) != static_cast<std::uint64_t>(t->shape[d]))
        throw std::runtime_error("checkpoint: dim mismatch in " + name);
    for (auto& x : t->value) x = detail::read_f64(is);
  }
  return {cfg, std::move(params)};
}

}  // namespace sumkit::model

#endif  // SUMKIT_TRANSFORMER_HPP_
