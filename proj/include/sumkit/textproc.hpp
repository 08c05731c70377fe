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

#ifndef SUMKIT_TEXTPROC_HPP_
#define SUMKIT_TEXTPROC_HPP_

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sumkit/rng.hpp"

namespace sumkit::text {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kBosId = 2;
inline constexpr int kEosId = 3;

// Lowercase, map decimal digits to '#', collapse whitespace, trim.
inline std::string normalize(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // also trims the front
  for (unsigned char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!in_space) out.push_back(' ');
      in_space = true;
      continue;
    }
    in_space = false;
    if (std::isdigit(c))
      out.push_back('#');
    else
      out.push_back(static_cast<char>(std::tolower(c)));
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

namespace detail {

inline const std::vector<std::string>& contractions() {
  static const std::vector<std::string> c = {"n't", "'s", "'re", "'ve", "'ll", "'d", "'m"};
  return c;
}

inline bool is_detachable_punct(char c) {
  static const std::string p = ".,;:!?\"()";
  return p.find(c) != std::string::npos;
}

// Splits one whitespace-delimited chunk into tokens: trailing/leading
// clause punctuation detached, contractions split, hyphens and word-internal
// periods (abbreviations) left alone.
inline void split_word(const std::string& w, std::vector<std::string>& out) {
  if (w.empty()) return;
  // Leading punctuation.
  std::size_t a = 0;
  while (a < w.size() && is_detachable_punct(w[a])) out.emplace_back(1, w[a++]);
  // Trailing punctuation (collected, emitted after the core).
  std::size_t b = w.size();
  std::vector<std::string> tail;
  while (b > a + 1 && is_detachable_punct(w[b - 1])) {
    // A period inside an abbreviation like "u.s." stays; only the final
    // run of punctuation is detached, and "u.s." keeps its last period
    // only when the preceding char is also a period-separated letter run.
    tail.emplace_back(1, w[b - 1]);
    --b;
  }
  std::string core = w.substr(a, b - a);
  // Re-attach a single trailing period to dotted abbreviations ("u.s." ).
  if (!tail.empty() && tail.back() == "." && core.find('.') != std::string::npos) {
    core.push_back('.');
    tail.pop_back();
  }
  if (!core.empty()) {
    bool split = false;
    for (const auto& suf : contractions()) {
      if (core.size() > suf.size() &&
          core.compare(core.size() - suf.size(), suf.size(), suf) == 0) {
        out.push_back(core.substr(0, core.size() - suf.size()));
        out.push_back(suf);
        split = true;
        break;
      }
    }
    if (!split) out.push_back(core);
  }
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) out.push_back(*it);
}

}  // namespace detail

// Simplified PTB-style tokenization over normalized text.
inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string w;
  while (is >> w) detail::split_word(w, out);
  return out;
}

class Vocab {
 public:
  Vocab() {
    for (const char* t : {"PAD", "UNK", "BOS", "EOS"}) add(t);
  }

  int add(const std::string& token) {
    auto [it, inserted] = to_id_.emplace(token, static_cast<int>(to_token_.size()));
    if (inserted) to_token_.push_back(token);
    return it->second;
  }

  int encode(const std::string& token) const {
    auto it = to_id_.find(token);
    return it == to_id_.end() ? kUnkId : it->second;
  }

  std::vector<int> encode(const std::vector<std::string>& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(encode(t));
    return out;
  }

  const std::string& decode(int id) const {
    if (id < 0 || id >= static_cast<int>(to_token_.size()))
      throw std::invalid_argument("vocab: id out of range");
    return to_token_[id];
  }

  std::vector<std::string> decode(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int i : ids) out.push_back(decode(i));
    return out;
  }

  int size() const { return static_cast<int>(to_token_.size()); }

  void save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("vocab: cannot write " + path);
    for (const auto& t : to_token_) os << t << '\n';
  }

  static Vocab load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("vocab: cannot open " + path);
    Vocab v;
    std::string line;
    int i = 0;
    while (std::getline(is, line)) {
      if (i >= 4) v.add(line);  // first four lines are the reserved symbols
      ++i;
    }
    return v;
  }

 private:
  std::unordered_map<std::string, int> to_id_;
  std::vector<std::string> to_token_;
};

struct Pair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

struct Corpus {
  std::vector<Pair> pairs;
  std::string provenance;
};

// Most frequent tokens up to max_size - 4 reserved slots; frequency ties
// broken alphabetically.
inline Vocab build_vocab(const Corpus& corpus, int max_size) {
  if (max_size <= 4) throw std::invalid_argument("build_vocab: max_size must exceed 4");
  if (corpus.pairs.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  std::map<std::string, std::int64_t> freq;
  for (const auto& p : corpus.pairs) {
    for (const auto& t : p.source) ++freq[t];
    for (const auto& t : p.target) ++freq[t];
  }
  std::vector<std::pair<std::string, std::int64_t>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab v;
  for (const auto& [tok, n] : items) {
    if (v.size() >= max_size) break;
    v.add(tok);
  }
  return v;
}

inline const std::vector<std::string>& default_stopwords();

// Drops question sources and pairs with no shared non-stopword token.
inline std::vector<Pair> filter_pairs(const std::vector<Pair>& pairs,
                                      const std::vector<std::string>& stopwords =
                                          default_stopwords()) {
  std::unordered_set<std::string> stop(stopwords.begin(), stopwords.end());
  std::vector<Pair> out;
  for (const auto& p : pairs) {
    bool question = false;
    for (const auto& t : p.source) question = question || t == "?";
    if (question) continue;
    std::unordered_set<std::string> content;
    for (const auto& t : p.source)
      if (!stop.count(t)) content.insert(t);
    bool overlap = false;
    for (const auto& t : p.target)
      if (content.count(t)) {
        overlap = true;
        break;
      }
    if (overlap) out.push_back(p);
  }
  return out;
}

// Longest whole-token prefix whose space-joined rendering fits the byte cap.
// Degenerate case: a first token longer than the cap is cut mid-token.
inline std::vector<std::string> truncate_to_bytes(const std::vector<std::string>& tokens,
                                                  int cap = 75) {
  if (cap <= 0) throw std::invalid_argument("truncate_to_bytes: cap must be positive");
  if (tokens.empty()) return {};
  if (static_cast<int>(tokens[0].size()) > cap)
    return {tokens[0].substr(0, static_cast<std::size_t>(cap))};
  std::vector<std::string> out;
  int bytes = 0;
  for (const auto& t : tokens) {
    const int add = static_cast<int>(t.size()) + (out.empty() ? 0 : 1);
    if (bytes + add > cap) break;
    out.push_back(t);
    bytes += add;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// Deterministic toy corpus: content-word sentences with function-word noise;
// the target is the first k content words, so summarization is learnable at
// desk scale.
inline Corpus synth_corpus(std::uint64_t seed, int n_pairs, int vocab_size, int k) {
  static const std::vector<std::string> function_words = {
      "the", "a", "of", "to", "and", "in", "on", "for", "with", "at"};
  Rng rng(seed);
  Corpus corpus;
  corpus.provenance = "synthetic seed=" + std::to_string(seed);
  corpus.pairs.reserve(n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    const int len = rng.uniform_int(10, 20);
    Pair p;
    int content_seen = 0;
    for (int j = 0; j < len; ++j) {
      // Guarantee at least k content words by front-loading them.
      const bool function_word =
          content_seen >= k && rng.next_double() < 0.3;
      if (function_word) {
        p.source.push_back(
            function_words[rng.next_below(function_words.size())]);
      } else {
        // Letter-only token ids survive normalization (digits would be
        // masked to '#').
        std::string suffix;
        for (char c : std::to_string(rng.next_below(vocab_size)))
          suffix.push_back(static_cast<char>('a' + (c - '0')));
        std::string w = "w" + suffix;
        p.source.push_back(w);
        if (content_seen < k) p.target.push_back(w);
        ++content_seen;
      }
    }
    if (static_cast<int>(p.target.size()) != k)
      throw std::logic_error("synth_corpus: k exceeds sentence length");
    corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

inline Corpus load_parallel(const std::string& src_path, const std::string& tgt_path) {
  std::ifstream src(src_path), tgt(tgt_path);
  if (!src) throw std::runtime_error("load_parallel: cannot open " + src_path);
  if (!tgt) throw std::runtime_error("load_parallel: cannot open " + tgt_path);
  Corpus corpus;
  corpus.provenance = src_path + " + " + tgt_path;
  std::string s, t;
  for (;;) {
    const bool got_s = static_cast<bool>(std::getline(src, s));
    const bool got_t = static_cast<bool>(std::getline(tgt, t));
    if (got_s != got_t) throw std::runtime_error("load_parallel: line count mismatch");
    if (!got_s) break;
    corpus.pairs.push_back({tokenize(normalize(s)), tokenize(normalize(t))});
  }
  return corpus;
}

inline void save_parallel(const Corpus& corpus, const std::string& src_path,
                          const std::string& tgt_path) {
  std::ofstream src(src_path), tgt(tgt_path);
  if (!src || !tgt) throw std::runtime_error("save_parallel: cannot open output files");
  for (const auto& p : corpus.pairs) {
    src << join(p.source) << '\n';
    tgt << join(p.target) << '\n';
  }
}

// One lowercase token per line; '#' comments and blank lines skipped.
inline std::vector<std::string> load_stopwords(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("stopwords: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    line = normalize(line);
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

// Frozen list of English function words; shipped as data/stopwords.txt and
// overridable by flag.
inline const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "aren't", "as", "at", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn't",
      "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down", "during",
      "each", "few", "for", "from", "further", "had", "hadn't", "has", "hasn't",
      "have", "haven't", "having", "he", "he'd", "he'll", "he's", "her", "here",
      "here's", "hers", "herself", "him", "himself", "his", "how", "how's", "i",
      "i'd", "i'll", "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's",
      "its", "itself", "let's", "me", "more", "most", "mustn't", "my", "myself",
      "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
      "our", "ours", "ourselves", "out", "over", "own", "same", "shan't", "she",
      "she'd", "she'll", "she's", "should", "shouldn't", "so", "some", "such",
      "than", "that", "that's", "the", "their", "theirs", "them", "themselves",
      "then", "there", "there's", "these", "they", "they'd", "they'll", "they're",
      "they've", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "wasn't", "we", "we'd", "we'll", "we're", "we've", "were",
      "weren't", "what", "what's", "when", "when's", "where", "where's", "which",
      "while", "who", "who's", "whom", "why", "why's", "will", "with", "won't",
      "would", "wouldn't", "you", "you'd", "you'll", "you're", "you've", "your",
      "yours", "yourself", "yourselves", "n't", "'s", "'re", "'ve", "'ll", "'d",
      "'m", ",", ".", ";", ":", "!", "?", "\"", "(", ")"};
  return words;
}

}  // namespace sumkit::text

#endif  // SUMKIT_TEXTPROC_HPP_
