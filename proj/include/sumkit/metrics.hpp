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

#ifndef SUMKIT_METRICS_HPP_
#define SUMKIT_METRICS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sumkit/embeddings.hpp"
#include "sumkit/textproc.hpp"

namespace sumkit::metrics {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// ROUGE recall.
// ---------------------------------------------------------------------------

struct RougeResult {
  double r1 = 0, r2 = 0, rl = 0;  // percentages in [0, 100]
};

// Clipped n-gram recall (multiset semantics), as a percentage of reference
// n-grams. A reference shorter than n scores 0.
inline double ngram_recall(const Tokens& hyp, const Tokens& ref, int n) {
  if (n < 1) throw std::invalid_argument("ngram_recall: n must be >= 1");
  if (static_cast<int>(ref.size()) < n) return 0.0;
  std::map<std::vector<std::string>, int> ref_grams;
  for (std::size_t i = 0; i + n <= ref.size(); ++i)
    ++ref_grams[{ref.begin() + i, ref.begin() + i + n}];
  const int total = static_cast<int>(ref.size()) - n + 1;
  int matched = 0;
  if (static_cast<int>(hyp.size()) >= n) {
    std::map<std::vector<std::string>, int> hyp_grams;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i)
      ++hyp_grams[{hyp.begin() + i, hyp.begin() + i + n}];
    for (const auto& [gram, count] : ref_grams) {
      auto it = hyp_grams.find(gram);
      if (it != hyp_grams.end()) matched += std::min(count, it->second);
    }
  }
  return 100.0 * matched / total;
}

inline double lcs_recall(const Tokens& hyp, const Tokens& ref) {
  if (ref.empty()) throw std::invalid_argument("lcs_recall: empty reference");
  const std::size_t n = hyp.size(), m = ref.size();
  std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (hyp[i - 1] == ref[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return 100.0 * prev[m] / static_cast<double>(m);
}

// Limited-length recall: the hypothesis is byte-capped first, then each
// metric takes the maximum over references.
inline RougeResult rouge_multi(const Tokens& hyp, const std::vector<Tokens>& refs,
                               int byte_cap = 75) {
  if (refs.empty()) throw std::invalid_argument("rouge_multi: no references");
  const Tokens capped = text::truncate_to_bytes(hyp, byte_cap);
  RougeResult out;
  for (const auto& ref : refs) {
    out.r1 = std::max(out.r1, ngram_recall(capped, ref, 1));
    out.r2 = std::max(out.r2, ngram_recall(capped, ref, 2));
    out.rl = std::max(out.rl, lcs_recall(capped, ref));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact optimal transport and WMD.
// ---------------------------------------------------------------------------

struct TransportPlan {
  std::vector<std::vector<double>> flow;
  double objective = 0;
};

// Exact minimum-cost transportation via successive shortest augmenting
// paths with node potentials (Dijkstra). Supplies and demands must balance.
inline TransportPlan transport_solve(const std::vector<double>& supply,
                                     const std::vector<double>& demand,
                                     const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(supply.size());
  const int m = static_cast<int>(demand.size());
  if (n == 0 || m == 0) throw std::invalid_argument("transport_solve: empty instance");
  double sa = 0, sb = 0;
  for (double x : supply) sa += x;
  for (double x : demand) sb += x;
  if (std::fabs(sa - sb) > 1e-9)
    throw std::invalid_argument("transport_solve: unbalanced masses");
  if (static_cast<int>(cost.size()) != n)
    throw std::invalid_argument("transport_solve: cost rows mismatch");
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("transport_solve: cost cols mismatch");
    for (double c : row)
      if (c < 0) throw std::invalid_argument("transport_solve: negative cost");
  }

  std::vector<double> a(supply), b(demand);
  std::vector<std::vector<double>> f(n, std::vector<double>(m, 0.0));
  std::vector<double> pot(n + m, 0.0);  // node potentials; supplies then demands
  const double inf = std::numeric_limits<double>::infinity();
  const double tol = 1e-15;

  for (;;) {
    double remaining = 0;
    for (double x : a) remaining += x;
    if (remaining <= tol) break;

    // Multi-source Dijkstra over the bipartite residual graph.
    std::vector<double> dist(n + m, inf);
    std::vector<int> parent(n + m, -1);
    std::vector<char> done(n + m, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int i = 0; i < n; ++i)
      if (a[i] > tol) {
        dist[i] = 0;
        pq.push({0.0, i});
      }
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u < n) {
        for (int j = 0; j < m; ++j) {
          // Rounding can push reduced costs a hair below zero; clamping
          // keeps Dijkstra's nonnegativity assumption intact.
          const double rc = std::max(0.0, cost[u][j] + pot[u] - pot[n + j]);
          if (d + rc < dist[n + j]) {
            dist[n + j] = d + rc;
            parent[n + j] = u;
            pq.push({dist[n + j], n + j});
          }
        }
      } else {
        const int j = u - n;
        for (int i = 0; i < n; ++i) {
          if (f[i][j] <= tol) continue;
          const double rc = std::max(0.0, -cost[i][j] + pot[n + j] - pot[i]);
          if (d + rc < dist[i]) {
            dist[i] = d + rc;
            parent[i] = u;
            pq.push({dist[i], i});
          }
        }
      }
    }

    int target = -1;
    double best = inf;
    for (int j = 0; j < m; ++j)
      if (b[j] > tol && dist[n + j] < best) {
        best = dist[n + j];
        target = n + j;
      }
    if (target < 0)
      throw std::runtime_error("transport_solve: no augmenting path (degenerate input)");

    for (int u = 0; u < n + m; ++u)
      if (dist[u] < inf) pot[u] += std::min(dist[u], best);

    // Trace the path back to its supply node, then augment by the
    // bottleneck: remaining supply, remaining demand, and any backward
    // arc's current flow.
    std::vector<std::pair<int, int>> path;  // (from, to) arcs
    int u = target;
    while (parent[u] != -1) {
      path.emplace_back(parent[u], u);
      u = parent[u];
    }
    double push = std::min(a[u], b[target - n]);
    for (const auto& [from, to] : path)
      if (from >= n) push = std::min(push, f[to][from - n]);  // backward arc
    for (const auto& [from, to] : path) {
      if (from < n)
        f[from][to - n] += push;
      else
        f[to][from - n] -= push;
    }
    a[u] -= push;
    b[target - n] -= push;
  }

  TransportPlan plan;
  plan.flow = std::move(f);
  double obj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) obj += plan.flow[i][j] * cost[i][j];
  plan.objective = obj;
  return plan;
}

// Normalized bag of words: stopwords and out-of-store tokens removed,
// remaining distinct words (sorted, so results do not depend on token
// order) weighted by relative frequency.
struct Nbow {
  std::vector<std::string> words;
  std::vector<double> weights;
  bool empty() const { return words.empty(); }
};

inline Nbow nbow(const Tokens& tokens, const std::vector<std::string>& stopwords,
                 const emb::WordVectorStore& store) {
  std::unordered_set<std::string> stop(stopwords.begin(), stopwords.end());
  std::map<std::string, int> counts;
  int total = 0;
  for (const auto& t : tokens) {
    if (stop.count(t) || store.find(t) == nullptr) continue;
    ++counts[t];
    ++total;
  }
  Nbow out;
  for (const auto& [w, c] : counts) {
    out.words.push_back(w);
    out.weights.push_back(static_cast<double>(c) / total);
  }
  return out;
}

struct VertConfig {
  double alpha = 5.0;
  std::vector<std::string> stopwords = text::default_stopwords();
  const emb::WordVectorStore* word_store = nullptr;  // ground costs for WMD
  emb::SentenceEncoder encoder;                      // similarity sub-score

  void validate() const {
    if (alpha <= 0) throw std::invalid_argument("vert config: alpha must be positive");
    if (!word_store) throw std::invalid_argument("vert config: word store missing");
  }
};

// Word mover's distance with Euclidean ground costs; either side empty
// after stopword/OOV removal yields the default distance alpha.
inline double wmd(const Tokens& s1, const Tokens& s2, const VertConfig& cfg) {
  cfg.validate();
  const Nbow d1 = nbow(s1, cfg.stopwords, *cfg.word_store);
  const Nbow d2 = nbow(s2, cfg.stopwords, *cfg.word_store);
  if (d1.empty() || d2.empty()) return cfg.alpha;
  std::vector<std::vector<double>> cost(d1.words.size(),
                                        std::vector<double>(d2.words.size()));
  for (std::size_t i = 0; i < d1.words.size(); ++i) {
    const auto& u = *cfg.word_store->find(d1.words[i]);
    for (std::size_t j = 0; j < d2.words.size(); ++j) {
      const auto& v = *cfg.word_store->find(d2.words[j]);
      double s = 0;
      for (std::size_t t = 0; t < u.size(); ++t) s += (u[t] - v[t]) * (u[t] - v[t]);
      cost[i][j] = std::sqrt(s);
    }
  }
  return transport_solve(d1.weights, d2.weights, cost).objective;
}

inline double dis_subscore(const Tokens& s1, const Tokens& s2, const VertConfig& cfg) {
  return std::min(wmd(s1, s2, cfg), cfg.alpha);
}

// Cosine of sentence encodings, clamped into the declared [0, 1] range.
inline double sim_subscore(const Tokens& s1, const Tokens& s2, const VertConfig& cfg) {
  if (!cfg.encoder) throw std::invalid_argument("sim_subscore: no sentence encoder");
  const double c = emb::cosine(cfg.encoder(s1), cfg.encoder(s2));
  return std::clamp(c, 0.0, 1.0);
}

// VERT(s1, s2) = (1 + sim - dis/alpha) / 2.
inline double vert_combine(double sim, double dis, double alpha) {
  if (alpha <= 0) throw std::invalid_argument("vert_combine: alpha must be positive");
  if (sim < 0 || sim > 1) throw std::invalid_argument("vert_combine: sim out of [0,1]");
  if (dis < 0 || dis > alpha)
    throw std::invalid_argument("vert_combine: dis out of [0,alpha]");
  return 0.5 * (1.0 + sim - dis / alpha);
}

struct VertResult {
  double sim = 0, dis = 0, vert = 0;
};

// Multi-reference VERT is the arithmetic mean of per-reference scores;
// sub-scores are averaged the same way for reporting.
inline VertResult vert_score(const Tokens& hyp, const std::vector<Tokens>& refs,
                             const VertConfig& cfg) {
  if (refs.empty()) throw std::invalid_argument("vert_score: no references");
  VertResult out;
  for (const auto& ref : refs) {
    const double sim = sim_subscore(hyp, ref, cfg);
    const double dis = dis_subscore(hyp, ref, cfg);
    out.sim += sim;
    out.dis += dis;
    out.vert += vert_combine(sim, dis, cfg.alpha);
  }
  const double k = static_cast<double>(refs.size());
  out.sim /= k;
  out.dis /= k;
  out.vert /= k;
  return out;
}

// ---------------------------------------------------------------------------
// Pearson correlation with a locally computed two-sided p-value.
// ---------------------------------------------------------------------------

namespace detail {

// Continued-fraction evaluation for the regularized incomplete beta.
inline double betacf(double a, double b, double x) {
  const double eps = 3e-16, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

inline double betai(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1 - x));
  if (x < (a + 1) / (a + b + 2)) return bt * betacf(a, b, x) / a;
  return 1 - bt * betacf(b, a, 1 - x) / b;
}

}  // namespace detail

struct PearsonResult {
  double r = 0, p = 1;
};

inline PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 points");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw std::invalid_argument("pearson: zero variance");
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  const double df = n - 2;
  PearsonResult out;
  out.r = r;
  if (std::fabs(r) >= 1.0) {
    out.p = 0.0;
  } else {
    const double t = r * std::sqrt(df / (1 - r * r));
    out.p = detail::betai(df / 2, 0.5, df / (df + t * t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Human-reference holdout baseline.
// ---------------------------------------------------------------------------

struct HoldoutStats {
  // WMD histogram bins [0,1), [1,2), [2,3), [3,4), [4,5), [5,inf).
  std::array<std::int64_t, 6> hist{};
  double mean_sim = 0, mean_dis = 0, mean_vert = 0;
  std::int64_t comparisons = 0;
};

// Every reference of a document is held out as the target and scored
// against each of the document's other references.
inline HoldoutStats holdout_stats(const std::vector<std::vector<Tokens>>& docs,
                                  const VertConfig& cfg) {
  HoldoutStats st;
  double sum_sim = 0, sum_dis = 0, sum_vert = 0;
  for (const auto& refs : docs) {
    if (refs.size() < 2)
      throw std::invalid_argument("holdout_stats: document with fewer than 2 references");
    for (std::size_t target = 0; target < refs.size(); ++target) {
      for (std::size_t other = 0; other < refs.size(); ++other) {
        if (other == target) continue;
        const double w = wmd(refs[other], refs[target], cfg);
        const int bin = w >= 5.0 ? 5 : static_cast<int>(w);
        ++st.hist[bin];
        const double sim = sim_subscore(refs[other], refs[target], cfg);
        const double dis = std::min(w, cfg.alpha);
        sum_sim += sim;
        sum_dis += dis;
        sum_vert += vert_combine(sim, dis, cfg.alpha);
        ++st.comparisons;
      }
    }
  }
  if (st.comparisons > 0) {
    sum_sim /= static_cast<double>(st.comparisons);
    sum_dis /= static_cast<double>(st.comparisons);
    sum_vert /= static_cast<double>(st.comparisons);
  }
  st.mean_sim = sum_sim;
  st.mean_dis = sum_dis;
  st.mean_vert = sum_vert;
  return st;
}

}  // namespace sumkit::metrics

#endif  // SUMKIT_METRICS_HPP_
