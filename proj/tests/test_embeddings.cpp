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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "sumkit/embeddings.hpp"

using namespace sumkit::emb;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p, const std::string& content) : path(std::move(p)) {
    std::ofstream os(path, std::ios::binary);
    os << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("text loader: two vectors of dimension 3") {
  TempFile f("test_vecs.txt", "cat 1 0 0\ndog 0 2 0\n");
  auto store = load_word_vectors_text(f.path);
  CHECK(store.dim() == 3);
  CHECK(store.size() == 2);
  CHECK(store.duplicate_count() == 0);
  REQUIRE(store.find("cat") != nullptr);
  CHECK(*store.find("cat") == std::vector<double>{1, 0, 0});
  CHECK(*store.find("dog") == std::vector<double>{0, 2, 0});
  CHECK(store.find("fox") == nullptr);
}

TEST_CASE("text loader: ragged dimension reported with line number") {
  TempFile f("test_ragged.txt", "cat 1 0 0\ndog 0 2\n");
  try {
    load_word_vectors_text(f.path);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("text loader: empty file and missing file rejected") {
  TempFile f("test_empty.txt", "");
  CHECK_THROWS_AS(load_word_vectors_text(f.path), std::runtime_error);
  CHECK_THROWS_AS(load_word_vectors_text("no_such_vectors.txt"), std::runtime_error);
}

TEST_CASE("text loader: duplicates counted, last occurrence wins") {
  TempFile f("test_dup.txt", "cat 1 0\ncat 0 5\n");
  auto store = load_word_vectors_text(f.path);
  CHECK(store.size() == 1);
  CHECK(store.duplicate_count() == 1);
  CHECK(*store.find("cat") == std::vector<double>{0, 5});
}

TEST_CASE("binary loader: hand-written bytes") {
  std::string blob = "1 2\n";
  blob += "cat ";
  const float vals[2] = {1.5f, -2.0f};
  blob.append(reinterpret_cast<const char*>(vals), 8);
  blob += '\n';
  TempFile f("test_vecs.bin", blob);
  auto store = load_word_vectors_binary(f.path);
  CHECK(store.dim() == 2);
  CHECK(store.size() == 1);
  REQUIRE(store.find("cat") != nullptr);
  CHECK((*store.find("cat"))[0] == 1.5);
  CHECK((*store.find("cat"))[1] == -2.0);
}

TEST_CASE("binary loader: count mismatch and truncation rejected") {
  std::string blob = "2 2\n";
  blob += "cat ";
  const float vals[2] = {1.0f, 2.0f};
  blob.append(reinterpret_cast<const char*>(vals), 8);
  TempFile f("test_trunc.bin", blob);
  CHECK_THROWS_AS(load_word_vectors_binary(f.path), std::runtime_error);
  TempFile g("test_badhdr.bin", "nonsense header\n");
  CHECK_THROWS_AS(load_word_vectors_binary(g.path), std::runtime_error);
}

TEST_CASE("binary writer/loader: round trip at float32 precision") {
  std::vector<std::pair<std::string, std::vector<double>>> entries = {
      {"alpha", {0.25, -1.0, 3.5}}, {"beta", {1.0, 2.0, -0.125}}};
  const std::string path = "test_rt.bin";
  save_word_vectors_binary(path, entries, 3);
  auto store = load_word_vectors_binary(path);
  CHECK(store.dim() == 3);
  CHECK(store.size() == 2);
  for (const auto& [token, vec] : entries) {
    REQUIRE(store.find(token) != nullptr);
    CHECK(*store.find(token) == vec);  // values chosen exactly representable
  }
  std::remove(path.c_str());
}

TEST_CASE("cosine: identities and bounds") {
  CHECK(cosine({1, 0}, {2, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine({1, 0}, {1, 1}) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cosine({1, 2}, {-1, -2}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cosine({0, 0}, {1, 2}) == 0.0);
  CHECK_THROWS_AS(cosine({1, 0}, {1, 0, 0}), std::invalid_argument);
  // Symmetry and bounds on arbitrary values.
  const std::vector<double> u = {0.3, -1.2, 4.0}, v = {2.2, 0.5, -0.7};
  CHECK(cosine(u, v) == cosine(v, u));
  CHECK(std::abs(cosine(u, v)) <= 1.0 + 1e-12);
}

TEST_CASE("mean_sentence_encode: averages in-store tokens") {
  TempFile f("test_mean.txt", "cat 1 0\ndog 0 2\nneg -1 0\n");
  auto store = load_word_vectors_text(f.path);
  CHECK(mean_sentence_encode({"cat"}, store) == std::vector<double>{1, 0});
  CHECK(mean_sentence_encode({"cat", "dog"}, store) == std::vector<double>{0.5, 1});
  CHECK(mean_sentence_encode({"cat", "neg"}, store) == std::vector<double>{0, 0});
  // All-OOV sentences collapse to the zero vector.
  CHECK(mean_sentence_encode({"zebra", "yak"}, store) == std::vector<double>{0, 0});
  CHECK(mean_sentence_encode({}, store) == std::vector<double>{0, 0});
  // Permutation invariance.
  CHECK(mean_sentence_encode({"dog", "cat"}, store) ==
        mean_sentence_encode({"cat", "dog"}, store));
  // OOV tokens do not dilute the mean.
  CHECK(mean_sentence_encode({"cat", "zebra"}, store) == std::vector<double>{1, 0});
}

TEST_CASE("mean_encoder: matches mean_sentence_encode") {
  TempFile f("test_enc.txt", "cat 1 0\ndog 0 2\n");
  auto store = load_word_vectors_text(f.path);
  auto enc = mean_encoder(store);
  CHECK(enc({"cat", "dog"}) == mean_sentence_encode({"cat", "dog"}, store));
}

TEST_CASE("precomputed store: lookup hit, miss, and encoder join") {
  TempFile f("test_sent.tsv", "the cat sat\t1 2 3\nthe dog ran\t4 5 6\n");
  auto store = PrecomputedSentenceStore::load(f.path);
  CHECK(store.dim() == 3);
  CHECK(store.size() == 2);
  CHECK(store.lookup("the cat sat") == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(store.lookup("missing sentence"), std::runtime_error);
  auto enc = store.encoder();
  CHECK(enc({"the", "dog", "ran"}) == std::vector<double>{4, 5, 6});
}

TEST_CASE("precomputed store: duplicate sentence and malformed lines rejected") {
  TempFile f("test_sent_dup.tsv", "a b\t1 2\na b\t3 4\n");
  CHECK_THROWS_AS(PrecomputedSentenceStore::load(f.path), std::runtime_error);
  TempFile g("test_sent_notab.tsv", "no tab here 1 2\n");
  CHECK_THROWS_AS(PrecomputedSentenceStore::load(g.path), std::runtime_error);
  TempFile h("test_sent_empty.tsv", "");
  CHECK_THROWS_AS(PrecomputedSentenceStore::load(h.path), std::runtime_error);
  TempFile r("test_sent_ragged.tsv", "a\t1 2\nb\t1 2 3\n");
  CHECK_THROWS_AS(PrecomputedSentenceStore::load(r.path), std::runtime_error);
}
