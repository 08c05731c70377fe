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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "sumkit/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"sumkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return sumkit::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(static_cast<bool>(is));
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path dir;
  TempDir() : dir(fs::temp_directory_path() / ("sumkit_cli_test_" +
                                               std::to_string(::getpid()))) {
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli: unknown subcommand and missing required flags are usage errors") {
  CHECK(run_cli({"frobnicate"}) == sumkit::cli::kUsageError);
  CHECK(run_cli({"train"}) == sumkit::cli::kUsageError);
  CHECK(run_cli({}) == sumkit::cli::kUsageError);
}

TEST_CASE("cli: missing input files are data errors") {
  TempDir tmp;
  CHECK(run_cli({"preprocess", "--src", tmp / "no.src", "--tgt", tmp / "no.tgt", "--out",
                 tmp / "out"}) == sumkit::cli::kDataError);
  CHECK(run_cli({"summarize", "--model", tmp / "no.ckpt", "--vocab", tmp / "no.vocab",
                 "--src", tmp / "no.src"}) == sumkit::cli::kDataError);
}

TEST_CASE("cli: synth writes a deterministic parallel corpus") {
  TempDir tmp;
  REQUIRE(run_cli({"synth", "--seed", "7", "--pairs", "25", "--vocab-size", "40", "--k",
                   "3", "--out", tmp / "a"}) == sumkit::cli::kOk);
  REQUIRE(run_cli({"synth", "--seed", "7", "--pairs", "25", "--vocab-size", "40", "--k",
                   "3", "--out", tmp / "b"}) == sumkit::cli::kOk);
  CHECK(slurp(tmp / "a.src") == slurp(tmp / "b.src"));
  CHECK(slurp(tmp / "a.tgt") == slurp(tmp / "b.tgt"));
  // Every target line has exactly k tokens.
  std::istringstream tgt(slurp(tmp / "a.tgt"));
  std::string line;
  int lines = 0;
  while (std::getline(tgt, line)) {
    CHECK(sumkit::text::tokenize(line).size() == 3);
    ++lines;
  }
  CHECK(lines == 25);
}

TEST_CASE("cli: preprocess filters questions and zero-overlap pairs") {
  TempDir tmp;
  {
    std::ofstream src(tmp / "raw.src"), t(tmp / "raw.tgt");
    src << "The cat sat on the mat\n"
        << "Is this a question ?\n"
        << "Dogs bark loudly\n";
    t << "cat sat\n"
      << "question\n"
      << "birds sing\n";
  }
  REQUIRE(run_cli({"preprocess", "--src", tmp / "raw.src", "--tgt", tmp / "raw.tgt",
                   "--out", tmp / "clean"}) == sumkit::cli::kOk);
  CHECK(slurp(tmp / "clean.src") == "the cat sat on the mat\n");
  CHECK(slurp(tmp / "clean.tgt") == "cat sat\n");
}

TEST_CASE("cli: train is deterministic and summarize decodes every line") {
  TempDir tmp;
  REQUIRE(run_cli({"synth", "--seed", "3", "--pairs", "30", "--vocab-size", "30", "--k",
                   "2", "--out", tmp / "corpus"}) == sumkit::cli::kOk);
  const std::vector<std::string> train_args = {
      "train",      "--corpus", tmp / "corpus", "--epochs",       "1",
      "--layers",   "1",        "--d-model",    "16",             "--d-ff",
      "32",         "--heads",  "2",            "--batch-tokens", "128",
      "--seed",     "5",        "--vocab-size", "100"};
  auto with_out = [&](const std::string& out) {
    auto args = train_args;
    args.push_back("--out");
    args.push_back(out);
    return args;
  };
  REQUIRE(run_cli(with_out(tmp / "m1.ckpt")) == sumkit::cli::kOk);
  REQUIRE(run_cli(with_out(tmp / "m2.ckpt")) == sumkit::cli::kOk);
  CHECK(slurp(tmp / "m1.ckpt") == slurp(tmp / "m2.ckpt"));
  CHECK(slurp(tmp / "m1.ckpt.vocab") == slurp(tmp / "m2.ckpt.vocab"));

  REQUIRE(run_cli({"summarize", "--model", tmp / "m1.ckpt", "--vocab",
                   tmp / "m1.ckpt.vocab", "--src", tmp / "corpus.src", "--beam", "2",
                   "--out", tmp / "hyp.txt"}) == sumkit::cli::kOk);
  std::istringstream hyp(slurp(tmp / "hyp.txt"));
  std::string line;
  int lines = 0;
  while (std::getline(hyp, line)) {
    ++lines;
    CHECK(line.size() <= 75);
    CHECK(sumkit::text::tokenize(line).size() <= 14);
  }
  CHECK(lines == 30);
}

TEST_CASE("cli: score emits the TSV report with perfect self-scores") {
  TempDir tmp;
  {
    std::ofstream hyp(tmp / "hyp.txt"), ref(tmp / "ref.txt");
    hyp << "the cat sat\nbig dogs bark\n";
    ref << "the cat sat\nbig dogs bark\n";
  }
  REQUIRE(run_cli({"score", "--hyp", tmp / "hyp.txt", "--refs", tmp / "ref.txt", "--out",
                   tmp / "report.tsv"}) == sumkit::cli::kOk);
  std::istringstream report(slurp(tmp / "report.tsv"));
  std::string header;
  REQUIRE(std::getline(report, header));
  CHECK(header == "id\tr1\tr2\trl\tsim\tdis\tvert");
  std::string line;
  int rows = 0;
  bool saw_mean = false;
  while (std::getline(report, line)) {
    std::istringstream ls(line);
    std::string id;
    double r1, r2, rl, sim, dis, vert;
    ls >> id >> r1 >> r2 >> rl >> sim >> dis >> vert;
    if (id == "mean") {
      saw_mean = true;
    } else {
      ++rows;
    }
    CHECK(r1 == doctest::Approx(100.0));
    CHECK(rl == doctest::Approx(100.0));
    CHECK(sim == doctest::Approx(1.0));
    CHECK(dis == doctest::Approx(0.0));
    CHECK(vert == doctest::Approx(1.0));
  }
  CHECK(rows == 2);
  CHECK(saw_mean);
}

TEST_CASE("cli: holdout reports the comparison count law") {
  TempDir tmp;
  {
    std::ofstream a(tmp / "r1.txt"), b(tmp / "r2.txt"), c(tmp / "r3.txt");
    a << "the cat sat\nbig dogs bark\n";
    b << "a cat sits\nloud dogs bark\n";
    c << "cats sit quietly\ndogs bark here\n";
  }
  REQUIRE(run_cli({"holdout", "--refs",
                   (tmp / "r1.txt") + "," + (tmp / "r2.txt") + "," + (tmp / "r3.txt"),
                   "--out", tmp / "hold.tsv"}) == sumkit::cli::kOk);
  const std::string out = slurp(tmp / "hold.tsv");
  // 2 documents x 3 references x 2 others.
  CHECK(out.find("comparisons\t12") != std::string::npos);
  CHECK(run_cli({"holdout", "--refs", tmp / "r1.txt", "--out", tmp / "x.tsv"}) ==
        sumkit::cli::kDataError);
}

TEST_CASE("cli: correlate matches the pearson oracle") {
  TempDir tmp;
  const std::vector<double> vert = {0.91, 0.85, 0.72, 0.95, 0.60};
  const std::vector<double> human = {4.1, 3.9, 2.8, 4.6, 2.1};
  {
    std::ofstream scores(tmp / "scores.tsv");
    scores << "id\tr1\tr2\trl\tsim\tdis\tvert\n";
    for (std::size_t i = 0; i < vert.size(); ++i)
      scores << i << "\t" << 50.0 + i << "\t" << 30.0 + 2 * i << "\t" << 40.0 + i
             << "\t0.9\t0.5\t" << vert[i] << "\n";
    scores << "mean\t1\t1\t1\t1\t1\t1\n";
    std::ofstream hs(tmp / "human.tsv");
    for (std::size_t i = 0; i < human.size(); ++i) hs << i << "\t" << human[i] << "\n";
  }
  REQUIRE(run_cli({"correlate", "--scores", tmp / "scores.tsv", "--human",
                   tmp / "human.tsv", "--out", tmp / "corr.tsv"}) == sumkit::cli::kOk);
  const auto want = sumkit::metrics::pearson(vert, human);
  std::ostringstream expect;
  expect << std::fixed << std::setprecision(4) << "VERT\t" << want.r << "\t" << want.p;
  CHECK(slurp(tmp / "corr.tsv").find(expect.str()) != std::string::npos);
  // A constant metric column has zero variance and is rejected.
  {
    std::ofstream scores(tmp / "flat.tsv");
    scores << "id\tr1\tr2\trl\tsim\tdis\tvert\n";
    for (std::size_t i = 0; i < vert.size(); ++i)
      scores << i << "\t50\t40\t45\t0.9\t0.5\t" << vert[i] << "\n";
  }
  CHECK(run_cli({"correlate", "--scores", tmp / "flat.tsv", "--human", tmp / "human.tsv",
                 "--out", tmp / "bad.tsv"}) != sumkit::cli::kOk);
}

TEST_CASE("cli: JSON config fills unset flags but never overrides them") {
  TempDir tmp;
  {
    std::ofstream cfg(tmp / "cfg.json");
    cfg << R"({"pairs": 12, "k": 2, "seed": 9})";
  }
  // --pairs given on the command line wins; k and seed come from the file.
  REQUIRE(run_cli({"synth", "--pairs", "5", "--vocab-size", "30", "--out", tmp / "c",
                   "--config", tmp / "cfg.json"}) == sumkit::cli::kOk);
  std::istringstream tgt(slurp(tmp / "c.tgt"));
  std::string line;
  int lines = 0;
  while (std::getline(tgt, line)) {
    CHECK(sumkit::text::tokenize(line).size() == 2);  // k from config
    ++lines;
  }
  CHECK(lines == 5);  // pairs from the flag
  // Same seed/k/vocab fully via flags must reproduce the config-file run.
  REQUIRE(run_cli({"synth", "--pairs", "5", "--vocab-size", "30", "--k", "2", "--seed",
                   "9", "--out", tmp / "d"}) == sumkit::cli::kOk);
  CHECK(slurp(tmp / "c.src") == slurp(tmp / "d.src"));
}

TEST_CASE("cli: input paths resolve against SUMKIT_DATA") {
  TempDir tmp;
  {
    std::ofstream src(tmp / "env.src"), t(tmp / "env.tgt");
    src << "the cat sat\n";
    t << "cat sat\n";
  }
  ::setenv("SUMKIT_DATA", tmp.dir.string().c_str(), 1);
  const int rc = run_cli(
      {"preprocess", "--src", "env.src", "--tgt", "env.tgt", "--out", tmp / "envout"});
  ::unsetenv("SUMKIT_DATA");
  CHECK(rc == sumkit::cli::kOk);
  CHECK(slurp(tmp / "envout.src") == "the cat sat\n");
}
