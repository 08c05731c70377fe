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

#ifndef SUMKIT_DECODING_HPP_
#define SUMKIT_DECODING_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sumkit/transformer.hpp"

namespace sumkit::decode {

struct BeamConfig {
  int beam_size = 8;
  int max_words = 14;
  int byte_cap = 75;
  double length_bonus = 0.1;  // gamma
  int bos_id = 2;
  int eos_id = 3;

  void validate() const {
    if (beam_size < 1 || max_words < 1 || length_bonus < 0)
      throw std::invalid_argument("beam config: invalid values");
  }
};

struct Hypothesis {
  std::vector<int> tokens;  // generated ids, no BOS/EOS
  double logp = 0.0;
  bool finished = false;
};

// Cumulative log-prob plus a per-token bonus encouraging longer summaries.
inline double augmented_score(const Hypothesis& h, double gamma) {
  return h.logp + gamma * static_cast<double>(h.tokens.size());
}

// Next-token log-probabilities given the generated prefix (without BOS).
using StepScorer = std::function<std::vector<double>(const std::vector<int>&)>;

namespace detail {

struct Candidate {
  Hypothesis hyp;
  double score;
};

inline bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.hyp.tokens < b.hyp.tokens;  // deterministic tie-break
}

}  // namespace detail

// Beam expansion ranked by augmented score. At every step the top beam_size
// expansions are kept; those ending in EOS (or at max_words) move to the
// finished pool. Returns the finished hypothesis with the highest augmented
// score, ties broken by lexicographically smaller token sequence.
inline Hypothesis beam_search_hyp(const StepScorer& scorer, const BeamConfig& cfg) {
  cfg.validate();
  std::vector<Hypothesis> live{Hypothesis{}};
  Hypothesis best;
  bool have_best = false;
  auto offer = [&](const Hypothesis& h) {
    detail::Candidate cand{h, augmented_score(h, cfg.length_bonus)};
    detail::Candidate cur{best, augmented_score(best, cfg.length_bonus)};
    if (!have_best || detail::better(cand, cur)) {
      best = h;
      have_best = true;
    }
  };
  for (int step = 0; step < cfg.max_words && !live.empty(); ++step) {
    std::vector<detail::Candidate> expanded;
    for (const auto& h : live) {
      const std::vector<double> lp = scorer(h.tokens);
      for (int t = 0; t < static_cast<int>(lp.size()); ++t) {
        if (t == cfg.bos_id || !std::isfinite(lp[t])) continue;
        Hypothesis next = h;
        next.logp += lp[t];
        if (t == cfg.eos_id) {
          next.finished = true;
        } else {
          next.tokens.push_back(t);
          next.finished = static_cast<int>(next.tokens.size()) >= cfg.max_words;
        }
        const double score = augmented_score(next, cfg.length_bonus);
        expanded.push_back({std::move(next), score});
      }
    }
    const std::size_t keep =
        std::min<std::size_t>(expanded.size(), static_cast<std::size_t>(cfg.beam_size));
    std::partial_sort(expanded.begin(), expanded.begin() + keep, expanded.end(),
                      detail::better);
    live.clear();
    for (std::size_t i = 0; i < keep; ++i) {
      if (expanded[i].hyp.finished)
        offer(expanded[i].hyp);
      else
        live.push_back(std::move(expanded[i].hyp));
    }
  }
  for (auto& h : live) {  // ran out of steps
    h.finished = true;
    offer(h);
  }
  if (!have_best) throw std::runtime_error("beam_search: no finished hypothesis");
  return best;
}

inline std::vector<int> beam_search(const StepScorer& scorer, const BeamConfig& cfg) {
  return beam_search_hyp(scorer, cfg).tokens;
}

// Per step, takes the single best expansion by augmented score (so EOS
// competes without the length bonus); identical to beam_size=1.
inline std::vector<int> greedy_decode(const StepScorer& scorer, const BeamConfig& cfg) {
  BeamConfig c = cfg;
  c.beam_size = 1;
  return beam_search(scorer, c);
}

// Scorer backed by a trained encoder-decoder; the memory is computed once.
inline StepScorer model_scorer(const std::vector<int>& src_ids,
                               const model::ModelParams& params,
                               const model::ModelConfig& cfg, int bos_id) {
  if (src_ids.empty()) throw std::invalid_argument("decode: empty source");
  auto src_pad = std::make_shared<std::vector<std::uint8_t>>(src_ids.size(), 0);
  auto memory =
      std::make_shared<num::Tensor>(model::encode_seq(src_ids, *src_pad, params, cfg));
  return [memory, src_pad, &params, cfg, bos_id](const std::vector<int>& prefix) {
    std::vector<int> dec_in{bos_id};
    dec_in.insert(dec_in.end(), prefix.begin(), prefix.end());
    num::Tensor logits =
        model::decoder_forward_seq(dec_in, *memory, *src_pad, params, cfg);
    const int v = logits->cols();
    const int last = logits->rows() - 1;
    std::vector<double> lp(logits->value.begin() + last * v,
                           logits->value.begin() + (last + 1) * v);
    double mx = lp[0];
    for (double x : lp) mx = std::max(mx, x);
    double z = 0;
    for (double x : lp) z += std::exp(x - mx);
    const double logz = mx + std::log(z);
    for (double& x : lp) x -= logz;
    return lp;
  };
}

}  // namespace sumkit::decode

#endif  // SUMKIT_DECODING_HPP_
