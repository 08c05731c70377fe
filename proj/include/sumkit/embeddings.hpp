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

#ifndef SUMKIT_EMBEDDINGS_HPP_
#define SUMKIT_EMBEDDINGS_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sumkit::emb {

class WordVectorStore {
 public:
  WordVectorStore(int dim, std::unordered_map<std::string, std::vector<double>> vectors,
                  int duplicate_count = 0)
      : dim_(dim), vectors_(std::move(vectors)), duplicates_(duplicate_count) {}

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  int duplicate_count() const { return duplicates_; }

  const std::vector<double>* find(const std::string& token) const {
    auto it = vectors_.find(token);
    return it == vectors_.end() ? nullptr : &it->second;
  }

 private:
  int dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  int duplicates_;  // duplicate tokens seen at load; last occurrence wins
};

// GloVe-style text format: "token v1 ... vd" per line, dimension fixed by
// the first line.
inline WordVectorStore load_word_vectors_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("word vectors: cannot open " + path);
  std::unordered_map<std::string, std::vector<double>> vectors;
  int dim = -1, duplicates = 0;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> vec;
    double x;
    while (ls >> x) vec.push_back(x);
    if (dim < 0) dim = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != dim || dim == 0)
      throw std::runtime_error("word vectors: bad dimension at line " +
                               std::to_string(lineno) + " of " + path);
    if (!vectors.emplace(token, vec).second) {
      vectors[token] = vec;  // last wins
      ++duplicates;
    }
  }
  if (dim < 0) throw std::runtime_error("word vectors: no vectors in " + path);
  return WordVectorStore(dim, std::move(vectors), duplicates);
}

// word2vec binary format: ASCII "count dim\n" header; per record, token
// bytes up to 0x20 then dim float32 LE values, optional trailing 0x0A.
// Values widen to float64.
inline WordVectorStore load_word_vectors_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("word vectors: cannot open " + path);
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::int64_t count = -1;
  int dim = -1;
  if (!(hs >> count >> dim) || count < 0 || dim <= 0)
    throw std::runtime_error("word vectors: bad binary header in " + path);
  std::unordered_map<std::string, std::vector<double>> vectors;
  int duplicates = 0;
  for (std::int64_t r = 0; r < count; ++r) {
    std::string token;
    char c;
    while (is.get(c) && c != ' ') {
      if (c != '\n') token.push_back(c);
    }
    if (!is) throw std::runtime_error("word vectors: truncated record in " + path);
    std::vector<double> vec(dim);
    for (int j = 0; j < dim; ++j) {
      unsigned char b[4];
      is.read(reinterpret_cast<char*>(b), 4);
      if (!is) throw std::runtime_error("word vectors: truncated record in " + path);
      std::uint32_t u = static_cast<std::uint32_t>(b[0]) |
                        (static_cast<std::uint32_t>(b[1]) << 8) |
                        (static_cast<std::uint32_t>(b[2]) << 16) |
                        (static_cast<std::uint32_t>(b[3]) << 24);
      float f;
      std::memcpy(&f, &u, 4);
      vec[j] = static_cast<double>(f);
    }
    if (!vectors.emplace(token, vec).second) {
      vectors[token] = vec;
      ++duplicates;
    }
  }
  // Header count must match the records present.
  if (static_cast<std::int64_t>(vectors.size()) + duplicates != count)
    throw std::runtime_error("word vectors: record count mismatch in " + path);
  char extra;
  while (is.get(extra)) {
    if (extra != '\n')
      throw std::runtime_error("word vectors: trailing bytes after records in " + path);
  }
  return WordVectorStore(dim, std::move(vectors), duplicates);
}

// Round-trip writer for the binary format (float32 precision).
inline void save_word_vectors_binary(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<double>>>& entries, int dim) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("word vectors: cannot write " + path);
  os << entries.size() << ' ' << dim << '\n';
  for (const auto& [token, vec] : entries) {
    os << token << ' ';
    for (double d : vec) {
      float f = static_cast<float>(d);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      unsigned char b[4] = {static_cast<unsigned char>(u),
                            static_cast<unsigned char>(u >> 8),
                            static_cast<unsigned char>(u >> 16),
                            static_cast<unsigned char>(u >> 24)};
      os.write(reinterpret_cast<const char*>(b), 4);
    }
    os.put('\n');
  }
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) return 0.0;  // degenerate all-OOV sentences
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// Arithmetic mean of in-store token vectors; zero vector when every token
// is out of store.
inline std::vector<double> mean_sentence_encode(const std::vector<std::string>& tokens,
                                                const WordVectorStore& store) {
  std::vector<double> sum(store.dim(), 0.0);
  int hits = 0;
  for (const auto& t : tokens) {
    if (const auto* v = store.find(t)) {
      for (int j = 0; j < store.dim(); ++j) sum[j] += (*v)[j];
      ++hits;
    }
  }
  if (hits > 0)
    for (auto& x : sum) x /= hits;
  return sum;
}

// Pluggable sentence encoder (the neural encoder of the original pipeline
// is injected via precomputed vectors; the default is mean-of-word-vectors).
using SentenceEncoder = std::function<std::vector<double>(const std::vector<std::string>&)>;

inline SentenceEncoder mean_encoder(const WordVectorStore& store) {
  return [&store](const std::vector<std::string>& tokens) {
    return mean_sentence_encode(tokens, store);
  };
}

// Exact-string sentence -> vector map from a TSV file:
// "sentence<TAB>v1 v2 ... vd".
class PrecomputedSentenceStore {
 public:
  static PrecomputedSentenceStore load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("sentence vectors: cannot open " + path);
    PrecomputedSentenceStore store;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::runtime_error("sentence vectors: missing tab at line " +
                                 std::to_string(lineno));
      const std::string sentence = line.substr(0, tab);
      std::istringstream vs(line.substr(tab + 1));
      std::vector<double> vec;
      double x;
      while (vs >> x) vec.push_back(x);
      if (store.dim_ < 0) store.dim_ = static_cast<int>(vec.size());
      if (static_cast<int>(vec.size()) != store.dim_ || store.dim_ == 0)
        throw std::runtime_error("sentence vectors: bad dimension at line " +
                                 std::to_string(lineno));
      if (!store.map_.emplace(sentence, std::move(vec)).second)
        throw std::runtime_error("sentence vectors: duplicate sentence at line " +
                                 std::to_string(lineno));
    }
    if (store.dim_ < 0) throw std::runtime_error("sentence vectors: empty file " + path);
    return store;
  }

  int dim() const { return dim_; }
  std::size_t size() const { return map_.size(); }

  const std::vector<double>& lookup(const std::string& sentence) const {
    auto it = map_.find(sentence);
    if (it == map_.end())
      throw std::runtime_error("sentence vectors: no entry for sentence: " + sentence);
    return it->second;
  }

  SentenceEncoder encoder() const {
    return [this](const std::vector<std::string>& tokens) {
      std::string joined;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) joined.push_back(' ');
        joined += tokens[i];
      }
      return lookup(joined);
    };
  }

 private:
  int dim_ = -1;
  std::unordered_map<std::string, std::vector<double>> map_;
};

}  // namespace sumkit::emb

#endif  // SUMKIT_EMBEDDINGS_HPP_
