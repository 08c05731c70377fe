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

#ifndef SUMKIT_CLI_HPP_
#define SUMKIT_CLI_HPP_

#include <array>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sumkit/decoding.hpp"
#include "sumkit/embeddings.hpp"
#include "sumkit/metrics.hpp"
#include "sumkit/textproc.hpp"
#include "sumkit/transformer.hpp"

namespace sumkit::cli {

// Exit codes: 0 success, 1 usage error, 2 data/IO error.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;

namespace detail {

// Input paths resolve against $SUMKIT_DATA when not found directly.
inline std::string resolve_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path)) return path;
  if (const char* root = std::getenv("SUMKIT_DATA")) {
    const fs::path candidate = fs::path(root) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<std::vector<std::string>> read_token_lines(const std::string& path) {
  std::ifstream is(resolve_path(path));
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(is, line)) out.push_back(text::tokenize(text::normalize(line)));
  return out;
}

// Deterministic stand-in word vectors for desk-scale runs without real
// embedding files: unit-norm random directions keyed by the token text.
inline emb::WordVectorStore synthetic_store(const std::vector<std::string>& tokens,
                                            int dim, std::uint64_t seed) {
  std::unordered_map<std::string, std::vector<double>> vecs;
  for (const auto& t : tokens) {
    std::uint64_t h = seed;
    for (unsigned char c : t) h = (h ^ c) * 0x100000001b3ULL;
    Rng rng(h);
    std::vector<double> v(dim);
    double norm = 0;
    for (auto& x : v) {
      // Box-Muller for an isotropic direction.
      const double u1 = std::max(rng.next_double(), 1e-12);
      const double u2 = rng.next_double();
      x = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    vecs.emplace(t, std::move(v));
  }
  return emb::WordVectorStore(dim, std::move(vecs));
}

inline std::vector<std::string> corpus_tokens(const text::Corpus& corpus) {
  std::set<std::string> seen;
  for (const auto& p : corpus.pairs) {
    seen.insert(p.source.begin(), p.source.end());
    seen.insert(p.target.begin(), p.target.end());
  }
  return {seen.begin(), seen.end()};
}

struct ScoreRow {
  std::string id;
  double r1, r2, rl, sim, dis, vert;
};

inline void write_report(std::ostream& os, const std::vector<ScoreRow>& rows) {
  os << "id\tr1\tr2\trl\tsim\tdis\tvert\n";
  os << std::fixed << std::setprecision(6);
  double m[6] = {0, 0, 0, 0, 0, 0};
  for (const auto& r : rows) {
    os << r.id << '\t' << r.r1 << '\t' << r.r2 << '\t' << r.rl << '\t' << r.sim << '\t'
       << r.dis << '\t' << r.vert << '\n';
    m[0] += r.r1;
    m[1] += r.r2;
    m[2] += r.rl;
    m[3] += r.sim;
    m[4] += r.dis;
    m[5] += r.vert;
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  os << "mean";
  for (double x : m) os << '\t' << x / n;
  os << '\n';
}

// Shared embedding/encoder options for the scoring commands.
struct VertSetup {
  std::string wordvecs, wordvecs_bin, sent_vecs, stopwords;
  double alpha = 5.0;
  std::unique_ptr<emb::WordVectorStore> store;
  std::unique_ptr<emb::PrecomputedSentenceStore> sentences;
  metrics::VertConfig cfg;

  void add_flags(CLI::App* app) {
    app->add_option("--wordvecs", wordvecs, "word vectors, text format");
    app->add_option("--wordvecs-bin", wordvecs_bin, "word vectors, binary format");
    app->add_option("--sent-vecs", sent_vecs, "precomputed sentence vectors (TSV)");
    app->add_option("--stopwords", stopwords, "stopword list file");
    app->add_option("--alpha", alpha, "WMD cap / default distance");
  }

  // fallback_tokens: used to synthesize a store when none is given.
  void build(const std::vector<std::string>& fallback_tokens) {
    if (!wordvecs.empty())
      store = std::make_unique<emb::WordVectorStore>(
          emb::load_word_vectors_text(resolve_path(wordvecs)));
    else if (!wordvecs_bin.empty())
      store = std::make_unique<emb::WordVectorStore>(
          emb::load_word_vectors_binary(resolve_path(wordvecs_bin)));
    else
      store = std::make_unique<emb::WordVectorStore>(
          synthetic_store(fallback_tokens, 32, 12345));
    cfg.alpha = alpha;
    cfg.word_store = store.get();
    if (!stopwords.empty()) cfg.stopwords = text::load_stopwords(resolve_path(stopwords));
    if (!sent_vecs.empty()) {
      sentences = std::make_unique<emb::PrecomputedSentenceStore>(
          emb::PrecomputedSentenceStore::load(resolve_path(sent_vecs)));
      cfg.encoder = sentences->encoder();
    } else {
      cfg.encoder = emb::mean_encoder(*store);
    }
  }
};

inline model::ModelConfig desk_config(int vocab, const std::string& variant_name) {
  model::ModelConfig cfg;
  cfg.layers = 2;
  cfg.d_model = 64;
  cfg.d_ff = 256;
  cfg.heads = 4;
  cfg.vocab = vocab;
  cfg.max_len = 64;
  cfg.dropout = 0.0;
  cfg.block_len = 4;
  cfg.variant = attn::variant_from_name(variant_name);
  // Relative runs rely on offsets alone by default. A clip wider than the
  // desk-scale sentences keeps every offset distinct, which the relative
  // variant needs to localize positions without absolute encodings.
  cfg.use_absolute_positions = cfg.variant != attn::AttentionVariant::kRelSDotProd;
  cfg.clip_dist = 24;
  return cfg;
}

struct TrainResult {
  model::ModelConfig cfg;
  model::ModelParams params;
};

inline TrainResult train_model(const text::Corpus& corpus, const text::Vocab& vocab,
                               model::ModelConfig cfg, std::uint64_t seed, int epochs,
                               int batch_tokens, std::int64_t warmup, bool quiet) {
  std::vector<std::vector<int>> src, tgt;
  for (const auto& p : corpus.pairs) {
    src.push_back(vocab.encode(p.source));
    tgt.push_back(vocab.encode(p.target));
  }
  auto batches = model::make_batches(src, tgt, batch_tokens);
  model::ModelParams params = model::init_params(cfg, seed);
  model::TrainState st;
  st.warmup = warmup;
  Rng drop_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Rng* drop = cfg.dropout > 0 ? &drop_rng : nullptr;
  for (int e = 0; e < epochs; ++e) {
    double loss_sum = 0;
    for (const auto& b : batches)
      loss_sum += model::train_step(b, params, st, cfg, text::kBosId, text::kEosId, drop);
    if (!quiet)
      std::clog << "epoch " << (e + 1) << " mean loss "
                << loss_sum / static_cast<double>(batches.size()) << '\n';
  }
  return {cfg, std::move(params)};
}

inline std::vector<std::string> summarize_one(const std::vector<std::string>& tokens,
                                              const text::Vocab& vocab,
                                              const model::ModelParams& params,
                                              const model::ModelConfig& mcfg,
                                              const decode::BeamConfig& bcfg) {
  auto ids = vocab.encode(tokens);
  auto scorer = decode::model_scorer(ids, params, mcfg, text::kBosId);
  const std::vector<int> out = bcfg.beam_size == 1 ? decode::greedy_decode(scorer, bcfg)
                                                   : decode::beam_search(scorer, bcfg);
  return text::truncate_to_bytes(vocab.decode(out), bcfg.byte_cap);
}

// Config-file precedence: defaults < JSON config < flags. For every flag
// that was not given on the command line but appears in the JSON object,
// the JSON value is injected before final validation.
inline void apply_config_file(CLI::App* app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(resolve_path(path));
  if (!is) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  is >> j;
  for (auto& [key, value] : j.items()) {
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (!opt || opt->count() > 0) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

inline void log_effective(const std::string& cmd, const nlohmann::json& cfg) {
  std::clog << "[" << cmd << "] effective config: " << cfg.dump() << '\n';
}

}  // namespace detail

int run(int argc, const char* const* argv);

namespace detail {

inline int run_impl(int argc, const char* const* argv) {
  CLI::App app{"sumkit: sentence summarization toolkit"};
  app.require_subcommand(1);

  // ---- preprocess ----
  auto* pre = app.add_subcommand("preprocess", "normalize, tokenize, and filter a corpus");
  std::string pre_src, pre_tgt, pre_out, pre_stop, pre_config;
  pre->add_option("--src", pre_src, "source sentences, one per line")->required();
  pre->add_option("--tgt", pre_tgt, "target summaries, one per line")->required();
  pre->add_option("--out", pre_out, "output prefix (.src/.tgt)")->required();
  pre->add_option("--stopwords", pre_stop, "stopword file for pair filtering");
  pre->add_option("--config", pre_config, "JSON config file");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  std::uint64_t synth_seed = 1;
  int synth_pairs = 1000, synth_vocab = 200, synth_k = 4;
  std::string synth_out, synth_config;
  synth->add_option("--seed", synth_seed);
  synth->add_option("--pairs", synth_pairs);
  synth->add_option("--vocab-size", synth_vocab);
  synth->add_option("--k", synth_k, "summary length in content words");
  synth->add_option("--out", synth_out, "output prefix (.src/.tgt)")->required();
  synth->add_option("--config", synth_config, "JSON config file");

  // ---- train ----
  auto* train = app.add_subcommand("train", "train a summarization model");
  std::string tr_corpus, tr_variant = "s-dot-prod", tr_out = "model.ckpt";
  std::string tr_vocab_out, tr_config;
  std::uint64_t tr_seed = 1;
  int tr_epochs = 5, tr_batch_tokens = 8192, tr_vocab_size = 10000;
  int tr_layers = 2, tr_d_model = 64, tr_d_ff = 256, tr_heads = 4;
  std::int64_t tr_warmup = 4000;
  train->add_option("--corpus", tr_corpus, "corpus prefix (.src/.tgt)")->required();
  train->add_option("--variant", tr_variant, "attention variant");
  train->add_option("--seed", tr_seed);
  train->add_option("--epochs", tr_epochs);
  train->add_option("--batch-tokens", tr_batch_tokens);
  train->add_option("--vocab-size", tr_vocab_size);
  train->add_option("--layers", tr_layers);
  train->add_option("--d-model", tr_d_model);
  train->add_option("--d-ff", tr_d_ff);
  train->add_option("--heads", tr_heads);
  train->add_option("--warmup", tr_warmup);
  train->add_option("--out", tr_out, "checkpoint path");
  train->add_option("--vocab-out", tr_vocab_out, "vocab path (default <out>.vocab)");
  train->add_option("--config", tr_config, "JSON config file");

  // ---- summarize ----
  auto* summ = app.add_subcommand("summarize", "decode summaries for source sentences");
  std::string su_model, su_vocab, su_src, su_out, su_config;
  int su_beam = 8, su_max_words = 14, su_byte_cap = 75;
  double su_gamma = 0.1;
  summ->add_option("--model", su_model, "checkpoint path")->required();
  summ->add_option("--vocab", su_vocab, "vocab path")->required();
  summ->add_option("--src", su_src, "source sentences")->required();
  summ->add_option("--beam", su_beam);
  summ->add_option("--max-words", su_max_words);
  summ->add_option("--byte-cap", su_byte_cap);
  summ->add_option("--gamma", su_gamma, "length bonus");
  summ->add_option("--out", su_out, "output file (default stdout)");
  summ->add_option("--config", su_config, "JSON config file");

  // ---- score ----
  auto* score = app.add_subcommand("score", "ROUGE and VERT report for hypotheses");
  std::string sc_hyp, sc_refs, sc_out, sc_config;
  int sc_byte_cap = 75;
  VertSetup sc_vert;
  score->add_option("--hyp", sc_hyp, "hypothesis file, one summary per line")->required();
  score->add_option("--refs", sc_refs, "comma-separated reference files")->required();
  score->add_option("--byte-cap", sc_byte_cap);
  sc_vert.add_flags(score);
  score->add_option("--out", sc_out, "output file (default stdout)");
  score->add_option("--config", sc_config, "JSON config file");

  // ---- holdout ----
  auto* hold = app.add_subcommand("holdout", "human-reference holdout statistics");
  std::string ho_refs, ho_out, ho_config;
  VertSetup ho_vert;
  hold->add_option("--refs", ho_refs, "comma-separated reference files (>= 2)")->required();
  ho_vert.add_flags(hold);
  hold->add_option("--out", ho_out, "output file (default stdout)");
  hold->add_option("--config", ho_config, "JSON config file");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "train and evaluate every attention variant");
  std::string sw_corpus, sw_out, sw_config;
  std::uint64_t sw_seed = 1;
  int sw_epochs = 3, sw_batch_tokens = 256, sw_holdout = 100, sw_vocab_size = 1000;
  int sw_beam = 4, sw_max_words = 14, sw_byte_cap = 75;
  VertSetup sw_vert;
  sweep->add_option("--corpus", sw_corpus, "corpus prefix (.src/.tgt)")->required();
  sweep->add_option("--seed", sw_seed);
  sweep->add_option("--epochs", sw_epochs);
  sweep->add_option("--batch-tokens", sw_batch_tokens);
  sweep->add_option("--holdout", sw_holdout, "held-out pair count");
  sweep->add_option("--vocab-size", sw_vocab_size);
  sweep->add_option("--beam", sw_beam);
  sweep->add_option("--max-words", sw_max_words);
  sweep->add_option("--byte-cap", sw_byte_cap);
  sw_vert.add_flags(sweep);
  sweep->add_option("--out", sw_out, "output file (default stdout)");
  sweep->add_option("--config", sw_config, "JSON config file");

  // ---- correlate ----
  auto* corr = app.add_subcommand("correlate", "Pearson r between metrics and human scores");
  std::string co_scores, co_human, co_out, co_config;
  corr->add_option("--scores", co_scores, "score report TSV")->required();
  corr->add_option("--human", co_human, "human scores TSV: id<TAB>score")->required();
  corr->add_option("--out", co_out, "output file (default stdout)");
  corr->add_option("--config", co_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsageError;
  }

  auto out_stream = [](const std::string& path, std::ofstream& file) -> std::ostream& {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
  };

  try {
    if (pre->parsed()) {
      apply_config_file(pre, pre_config);
      log_effective("preprocess", {{"src", pre_src}, {"tgt", pre_tgt}, {"out", pre_out}});
      text::Corpus corpus = text::load_parallel(resolve_path(pre_src), resolve_path(pre_tgt));
      const auto stop = pre_stop.empty() ? text::default_stopwords()
                                         : text::load_stopwords(resolve_path(pre_stop));
      corpus.pairs = text::filter_pairs(corpus.pairs, stop);
      text::save_parallel(corpus, pre_out + ".src", pre_out + ".tgt");
      std::clog << "kept " << corpus.pairs.size() << " pairs\n";
    } else if (synth->parsed()) {
      apply_config_file(synth, synth_config);
      log_effective("synth", {{"seed", synth_seed},
                              {"pairs", synth_pairs},
                              {"vocab-size", synth_vocab},
                              {"k", synth_k},
                              {"out", synth_out}});
      text::Corpus corpus = text::synth_corpus(synth_seed, synth_pairs, synth_vocab, synth_k);
      text::save_parallel(corpus, synth_out + ".src", synth_out + ".tgt");
    } else if (train->parsed()) {
      apply_config_file(train, tr_config);
      log_effective("train", {{"corpus", tr_corpus},
                              {"variant", tr_variant},
                              {"seed", tr_seed},
                              {"epochs", tr_epochs},
                              {"batch-tokens", tr_batch_tokens},
                              {"layers", tr_layers},
                              {"d-model", tr_d_model},
                              {"d-ff", tr_d_ff},
                              {"heads", tr_heads},
                              {"warmup", tr_warmup},
                              {"out", tr_out}});
      text::Corpus corpus = text::load_parallel(resolve_path(tr_corpus + ".src"),
                                                resolve_path(tr_corpus + ".tgt"));
      text::Vocab vocab = text::build_vocab(corpus, tr_vocab_size);
      model::ModelConfig cfg = desk_config(vocab.size(), tr_variant);
      cfg.layers = tr_layers;
      cfg.d_model = tr_d_model;
      cfg.d_ff = tr_d_ff;
      cfg.heads = tr_heads;
      auto result = train_model(corpus, vocab, cfg, tr_seed, tr_epochs, tr_batch_tokens,
                                tr_warmup, false);
      model::save_checkpoint(tr_out, result.cfg, result.params);
      vocab.save(tr_vocab_out.empty() ? tr_out + ".vocab" : tr_vocab_out);
    } else if (summ->parsed()) {
      apply_config_file(summ, su_config);
      log_effective("summarize", {{"model", su_model},
                                  {"src", su_src},
                                  {"beam", su_beam},
                                  {"max-words", su_max_words},
                                  {"byte-cap", su_byte_cap},
                                  {"gamma", su_gamma}});
      auto [mcfg, params] = model::load_checkpoint(resolve_path(su_model));
      text::Vocab vocab = text::Vocab::load(resolve_path(su_vocab));
      decode::BeamConfig bcfg;
      bcfg.beam_size = su_beam;
      bcfg.max_words = su_max_words;
      bcfg.byte_cap = su_byte_cap;
      bcfg.length_bonus = su_gamma;
      std::ofstream file;
      std::ostream& os = out_stream(su_out, file);
      for (const auto& tokens : read_token_lines(su_src))
        os << text::join(summarize_one(tokens, vocab, params, mcfg, bcfg)) << '\n';
    } else if (score->parsed()) {
      apply_config_file(score, sc_config);
      log_effective("score", {{"hyp", sc_hyp},
                              {"refs", sc_refs},
                              {"byte-cap", sc_byte_cap},
                              {"alpha", sc_vert.alpha}});
      auto hyps = read_token_lines(sc_hyp);
      std::vector<std::vector<std::vector<std::string>>> refs;
      for (const auto& f : split_commas(sc_refs)) refs.push_back(read_token_lines(f));
      for (const auto& r : refs)
        if (r.size() != hyps.size())
          throw std::runtime_error("score: reference/hypothesis line counts differ");
      std::vector<std::string> all_tokens;
      for (const auto& h : hyps) all_tokens.insert(all_tokens.end(), h.begin(), h.end());
      for (const auto& r : refs)
        for (const auto& t : r) all_tokens.insert(all_tokens.end(), t.begin(), t.end());
      sc_vert.build(all_tokens);
      std::vector<ScoreRow> rows;
      for (std::size_t i = 0; i < hyps.size(); ++i) {
        std::vector<std::vector<std::string>> row_refs;
        for (const auto& r : refs) row_refs.push_back(r[i]);
        const auto rouge = metrics::rouge_multi(hyps[i], row_refs, sc_byte_cap);
        const auto vert = metrics::vert_score(
            text::truncate_to_bytes(hyps[i], sc_byte_cap), row_refs, sc_vert.cfg);
        rows.push_back({std::to_string(i), rouge.r1, rouge.r2, rouge.rl, vert.sim,
                        vert.dis, vert.vert});
      }
      std::ofstream file;
      write_report(out_stream(sc_out, file), rows);
    } else if (hold->parsed()) {
      apply_config_file(hold, ho_config);
      log_effective("holdout", {{"refs", ho_refs}, {"alpha", ho_vert.alpha}});
      std::vector<std::vector<std::vector<std::string>>> ref_files;
      for (const auto& f : split_commas(ho_refs)) ref_files.push_back(read_token_lines(f));
      if (ref_files.size() < 2)
        throw std::runtime_error("holdout: need at least two reference files");
      for (const auto& r : ref_files)
        if (r.size() != ref_files[0].size())
          throw std::runtime_error("holdout: reference line counts differ");
      std::vector<std::string> all_tokens;
      for (const auto& r : ref_files)
        for (const auto& t : r) all_tokens.insert(all_tokens.end(), t.begin(), t.end());
      ho_vert.build(all_tokens);
      std::vector<std::vector<metrics::Tokens>> docs(ref_files[0].size());
      for (std::size_t d = 0; d < docs.size(); ++d)
        for (const auto& r : ref_files) docs[d].push_back(r[d]);
      const auto st = metrics::holdout_stats(docs, ho_vert.cfg);
      std::ofstream file;
      std::ostream& os = out_stream(ho_out, file);
      os << "wmd_bin\tcount\n";
      const char* bins[] = {"[0,1)", "[1,2)", "[2,3)", "[3,4)", "[4,5)", "[5,inf)"};
      for (int i = 0; i < 6; ++i) os << bins[i] << '\t' << st.hist[i] << '\n';
      os << std::fixed << std::setprecision(4);
      os << "comparisons\t" << st.comparisons << '\n'
         << "mean_sim\t" << st.mean_sim << '\n'
         << "mean_dis\t" << st.mean_dis << '\n'
         << "mean_vert\t" << st.mean_vert << '\n';
    } else if (sweep->parsed()) {
      apply_config_file(sweep, sw_config);
      log_effective("sweep", {{"corpus", sw_corpus},
                              {"seed", sw_seed},
                              {"epochs", sw_epochs},
                              {"holdout", sw_holdout},
                              {"batch-tokens", sw_batch_tokens}});
      text::Corpus corpus = text::load_parallel(resolve_path(sw_corpus + ".src"),
                                                resolve_path(sw_corpus + ".tgt"));
      if (static_cast<int>(corpus.pairs.size()) <= sw_holdout)
        throw std::runtime_error("sweep: corpus smaller than holdout split");
      text::Corpus train_part, held;
      train_part.pairs.assign(corpus.pairs.begin(), corpus.pairs.end() - sw_holdout);
      held.pairs.assign(corpus.pairs.end() - sw_holdout, corpus.pairs.end());
      sw_vert.build(corpus_tokens(corpus));
      text::Vocab vocab = text::build_vocab(train_part, sw_vocab_size);
      decode::BeamConfig bcfg;
      bcfg.beam_size = sw_beam;
      bcfg.max_words = sw_max_words;
      bcfg.byte_cap = sw_byte_cap;
      std::ofstream file;
      std::ostream& os = out_stream(sw_out, file);
      os << "variant\trg1\trg2\trgl\tvert_s\tvert_d\tvert\n";
      os << std::fixed << std::setprecision(5);
      for (auto variant : attn::all_variants()) {
        model::ModelConfig cfg = desk_config(vocab.size(), attn::variant_name(variant));
        auto result = train_model(train_part, vocab, cfg, sw_seed, sw_epochs,
                                  sw_batch_tokens, 1200, true);
        double rg1 = 0, rg2 = 0, rgl = 0, vs = 0, vd = 0, vt = 0;
        for (const auto& p : held.pairs) {
          const auto out = summarize_one(p.source, vocab, result.params, result.cfg, bcfg);
          const std::vector<metrics::Tokens> refs{p.target};
          const auto rouge = metrics::rouge_multi(out, refs, sw_byte_cap);
          const auto vert = metrics::vert_score(out, refs, sw_vert.cfg);
          rg1 += rouge.r1;
          rg2 += rouge.r2;
          rgl += rouge.rl;
          vs += vert.sim;
          vd += vert.dis;
          vt += vert.vert;
        }
        const double n = static_cast<double>(held.pairs.size());
        os << attn::variant_name(variant) << '\t' << rg1 / n << '\t' << rg2 / n << '\t'
           << rgl / n << '\t' << vs / n << '\t' << vd / n << '\t' << vt / n << '\n';
        std::clog << "sweep: finished " << attn::variant_name(variant) << '\n';
      }
    } else if (corr->parsed()) {
      apply_config_file(corr, co_config);
      log_effective("correlate", {{"scores", co_scores}, {"human", co_human}});
      std::ifstream ss(resolve_path(co_scores));
      if (!ss) throw std::runtime_error("correlate: cannot open " + co_scores);
      std::string line;
      if (!std::getline(ss, line) || line.rfind("id\t", 0) != 0)
        throw std::runtime_error("correlate: bad score report header");
      std::map<std::string, std::array<double, 6>> scores;
      while (std::getline(ss, line)) {
        std::istringstream ls(line);
        std::string id;
        std::array<double, 6> v{};
        ls >> id;
        if (id == "mean") continue;
        for (auto& x : v) ls >> x;
        scores[id] = v;
      }
      std::ifstream hs(resolve_path(co_human));
      if (!hs) throw std::runtime_error("correlate: cannot open " + co_human);
      std::vector<double> human;
      std::vector<std::array<double, 6>> metric_cols;
      while (std::getline(hs, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id;
        double h;
        ls >> id >> h;
        auto it = scores.find(id);
        if (it == scores.end())
          throw std::runtime_error("correlate: id '" + id + "' missing from scores");
        human.push_back(h);
        metric_cols.push_back(it->second);
      }
      std::ofstream file;
      std::ostream& os = out_stream(co_out, file);
      os << "metric\tpearson\tp_value\n" << std::fixed << std::setprecision(4);
      const char* names[] = {"ROUGE-1", "ROUGE-2", "ROUGE-L", "VERT"};
      const int cols[] = {0, 1, 2, 5};
      for (int c = 0; c < 4; ++c) {
        std::vector<double> m;
        for (const auto& row : metric_cols) m.push_back(row[cols[c]]);
        const auto pr = metrics::pearson(m, human);
        os << names[c] << '\t' << pr.r << '\t' << pr.p << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) { return detail::run_impl(argc, argv); }

}  // namespace sumkit::cli

#endif  // SUMKIT_CLI_HPP_
