// Copyright 2026 The Detox Authors.
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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <unistd.h>

#include "cli/commands.h"
#include "desk_corpus.h"
#include "desk_pipeline.h"
#include "detox/dataset.h"
#include "detox/edit.h"
#include "detox/generate.h"
#include "detox/lm.h"
#include "detox/log.h"
#include "detox/metrics.h"
#include "detox/ngram.h"
#include "detox/postag.h"
#include "detox/retrieve.h"
#include "detox/rng.h"
#include "detox/select.h"
#include "oracles.h"

namespace detox::acceptance {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(std::string text) { notes.push_back(std::move(text)); }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Workdir {
 public:
  explicit Workdir(const std::string& name)
      : path_(fs::temp_directory_path() /
              ("detox_acceptance_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

void write_vocab(const fs::path& p) {
  std::string text;
  for (const auto& w : testing::toy_restricted_words()) text += w + "\n";
  write_text(p, text);
}

void write_tagged(const fs::path& p, std::span<const LabeledSentence> sentences,
                  const RestrictedVocab& vocab) {
  RuleTagger tagger;
  std::vector<TaggedSentence> tagged;
  for (const auto& s : sentences) tagged.push_back(tag_and_mark(s, tagger, vocab));
  std::ostringstream buf;
  write_corpus(buf, tagged);
  write_text(p, buf.str());
}

// ---------------------------------------------------------------------------

Outcome assignment_count_law() {
  Outcome o;
  Rng rng(20260101);
  const auto start = std::chrono::steady_clock::now();
  size_t mismatched = 0, total_assignments = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + uniform_below(rng, 4), m = 1 + uniform_below(rng, 4);
    // Distinct, irregular occurrence and slot indices.
    std::vector<size_t> words, positions;
    size_t next = uniform_below(rng, 3);
    for (size_t i = 0; i < n; ++i) words.push_back(next += 1 + uniform_below(rng, 3));
    next = uniform_below(rng, 3);
    for (size_t j = 0; j < m; ++j) positions.push_back(next += 1 + uniform_below(rng, 4));

    const auto got = enumerate_assignments(words, positions, 1u << 20);
    const uint64_t expect = permutations(std::max(n, m), std::min(n, m));
    std::set<testing::PairSet> as_sets;
    for (const auto& a : got) {
      testing::PairSet s;
      for (const auto& p : a.placements) s.insert({p.source_index, p.slot});
      as_sets.insert(std::move(s));
    }
    total_assignments += got.size();
    if (got.size() != expect || as_sets.size() != got.size() ||
        as_sets != testing::recursive_assignments(words, positions)) {
      if (mismatched++ == 0) {
        o.fail("N=" + std::to_string(n) + " M=" + std::to_string(m) + " gave " +
               std::to_string(got.size()) + " assignments, expected " + std::to_string(expect));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 5.0) o.fail("took " + fmt(secs, 2) + " s");
  if (o.pass) {
    o.detail = "500 configs, " + std::to_string(total_assignments) +
               " assignments, all equal P(max,min) and the recursive enumeration, " +
               fmt(secs, 3) + " s";
  } else {
    o.note(std::to_string(mismatched) + " mismatching configs");
  }
  return o;
}

Outcome end_to_end_accuracy() {
  Outcome o;
  Workdir dir("e2e");
  const auto desk = testing::make_desk_corpus(240, 800, 77);
  const RestrictedVocab vocab = testing::toy_vocab();
  write_vocab(dir / "vocab.txt");
  write_tagged(dir / "clean.jsonl", desk.clean, vocab);
  write_tagged(dir / "offensive.jsonl", desk.offensive, vocab);

  cli::cmd_index(cli::IndexOptions{{dir / "clean.jsonl", std::nullopt, "train"}, dir / "index"});
  cli::cmd_train_lm(cli::TrainLmOptions{{dir / "clean.jsonl", std::nullopt, "train"},
                                        dir / "lm.txt", 3, 0.75});

  std::string detail;
  for (Variant v : {Variant::kRgs, Variant::kRges}) {
    cli::TransferOptions t;
    t.input.input = dir / "offensive.jsonl";
    t.vocab = dir / "vocab.txt";
    t.index = dir / "index";
    t.lm = dir / "lm.txt";
    t.variant = v;
    t.editor.mode = EditorMode::kIdentity;
    t.jobs = 4;
    t.out = dir / (std::string(variant_name(v)) + ".jsonl");
    const auto out = cli::cmd_transfer(t);
    std::vector<Tokens> outputs;
    size_t fallbacks = 0;
    for (const auto& r : out.results) {
      if (r.passthrough) continue;
      outputs.push_back(r.output);
      fallbacks += r.fallback_used;
    }
    if (outputs.size() < 200) {
      o.fail(std::string(variant_name(v)) + " saw only " + std::to_string(outputs.size()) +
             " offensive inputs");
      continue;
    }
    const double acc = transfer_accuracy(outputs, vocab);
    if (acc != 100.0) o.fail(std::string(variant_name(v)) + " accuracy " + fmt(acc, 2));
    detail += std::string(detail.empty() ? "" : ", ") + std::string(variant_name(v)) + " " +
              fmt(acc, 1) + " on " + std::to_string(outputs.size()) + " sentences";
    o.note(std::string(variant_name(v)) + ": " + std::to_string(fallbacks) +
           " outputs used the removal fallback");
  }
  if (slurp(dir / "rgs.jsonl") != slurp(dir / "rges.jsonl")) {
    o.fail("rges with the identity editor differs from rgs");
  }
  if (o.pass) {
    o.detail = detail + " (" + std::to_string(vocab.size()) +
               "-word vocabulary); identity rges output equals rgs";
  }
  return o;
}

Outcome retrieval_oracle() {
  Outcome o;
  Rng rng(4242);
  size_t queries = 0, compared = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 1 + uniform_below(rng, 1000);
    const size_t alphabet = 3 + uniform_below(rng, 15);
    std::vector<std::vector<PosTag>> raw;
    std::vector<PosSequence> seqs;
    for (size_t i = 0; i < n; ++i) {
      raw.push_back(testing::random_sequence(rng, 1, 14, alphabet));
      seqs.emplace_back(raw.back());
    }
    const PosIndex index = PosIndex::build(seqs);
    const testing::BruteForceIndex oracle(raw);
    for (int q = 0; q < 10; ++q, ++queries) {
      const auto query = q % 3 == 0 ? raw[uniform_below(rng, raw.size())]
                                    : testing::random_sequence(rng, 1, 14, alphabet);
      const bool exclude = q % 2 == 1;
      const auto hits = index.query_similar(PosSequence(query), 10, exclude);
      const auto expect = oracle.top_k(query, 10, exclude);
      if (hits.size() != expect.size()) {
        o.fail("index " + std::to_string(trial) + " query " + std::to_string(q) + ": " +
               std::to_string(hits.size()) + " hits vs " + std::to_string(expect.size()));
        continue;
      }
      for (size_t i = 0; i < hits.size(); ++i, ++compared) {
        const double diff = std::abs(hits[i].score - expect[i].score);
        worst = std::max(worst, diff);
        if (hits[i].sequence.tags() != oracle.docs()[expect[i].doc] || diff > 1e-9) {
          o.fail("index " + std::to_string(trial) + " query " + std::to_string(q) + " rank " +
                 std::to_string(i) + " differs");
          break;
        }
      }
    }
  }
  if (o.pass) {
    o.detail = "20 indexes, " + std::to_string(queries) + " queries, " + std::to_string(compared) +
               " ranked hits identical; max score gap " + g(worst);
  }
  return o;
}

Outcome metric_fixtures() {
  Outcome o;
  Rng rng(99);
  const std::vector<std::string> words = {"the", "a", "cat", "dog", "sat", "ran", "on", "mat",
                                          "big", "red", "and", "it", "was", "very", "home", "."};
  EmbeddingTable emb;
  for (const auto& w : words) {
    std::vector<double> v(8);
    for (double& x : v) x = uniform_unit(rng) * 2.0 - 1.0;
    emb.add(w, v);
  }
  double worst_bleu = 1, worst_rouge = 1, worst_meteor = 1, worst_fucp = 1;
  for (int c = 0; c < 50; ++c) {
    std::vector<Tokens> corpus(1 + uniform_below(rng, 20));
    for (auto& s : corpus) {
      s.resize(1 + uniform_below(rng, 15));
      for (auto& t : s) t = words[uniform_below(rng, words.size())];
    }
    auto farthest = [](double cur, double v) { return std::abs(v - 1) > std::abs(cur - 1) ? v : cur; };
    worst_bleu = farthest(worst_bleu, bleu_corpus(corpus, corpus));
    worst_rouge = farthest(worst_rouge, rouge_l(corpus, corpus));
    worst_meteor = farthest(worst_meteor, meteor(corpus, corpus));
    worst_fucp = farthest(worst_fucp, fu_content_preservation(corpus, corpus, emb));
  }
  const std::pair<const char*, double> identity[] = {
      {"bleu", worst_bleu}, {"rouge", worst_rouge}, {"meteor", worst_meteor}, {"fucp", worst_fucp}};
  for (const auto& [name, v] : identity) {
    if (std::abs(v - 1.0) > 1e-9) {
      o.fail(std::string(name) + " on identical corpora = " + g(v) + " (needs 1 +- 1e-9)");
    }
  }
  o.note("identity, worst of 50 random corpora: bleu " + g(worst_bleu) + ", rouge " +
         g(worst_rouge) + ", meteor " + g(worst_meteor) + ", fucp " + g(worst_fucp));

  auto one = [](Tokens t) { return std::vector<Tokens>{std::move(t)}; };
  const EmbeddingTable toy = EmbeddingTable::parse("a 1 0\nb 0 1\nc 1 1\n");
  const struct {
    const char* name;
    double got;
    double want;
  } fixtures[] = {
      {"bleu [the cat] vs [the cat sat]", bleu_corpus(one({"the", "cat"}), one({"the", "cat", "sat"})),
       std::exp(1.0 - 3.0 / 2.0)},
      {"rouge-l [the cat sat] vs [the cat]", rouge_l(one({"the", "cat", "sat"}), one({"the", "cat"})),
       0.8},
      {"meteor identical 2-token pair", meteor(one({"the", "cat"}), one({"the", "cat"})), 0.9375},
      {"fucp [a b] vs [a c]", fu_content_preservation(one({"a", "b"}), one({"a", "c"}), toy),
       2.75 / std::sqrt(2.5 * 4.25)},
  };
  for (const auto& f : fixtures) {
    if (std::abs(f.got - f.want) > 1e-6) {
      o.fail(std::string(f.name) + " = " + g(f.got) + ", expected " + g(f.want));
    }
    o.note(std::string(f.name) + ": " + g(f.got) + " (expected " + g(f.want) + ")");
  }
  if (o.pass) o.detail = "identity 1.0 for all four metrics; hand-computed fixtures within 1e-6";
  return o;
}

std::vector<ScoredCandidate> random_set(Rng& rng, size_t n) {
  std::vector<ScoredCandidate> set(n);
  for (size_t i = 0; i < n; ++i) {
    set[i].tokens = {"c" + std::to_string(i)};
    set[i].content_raw = uniform_unit(rng);
    set[i].fluency_raw = 1.0 + 499.0 * uniform_unit(rng);
  }
  return set;
}

const Tokens& winner(std::vector<ScoredCandidate> set) {
  static thread_local Tokens out;
  normalize_scores(set);
  out = set[select_best_index(set)].tokens;
  return out;
}

Outcome selection_properties() {
  Outcome o;
  Rng rng(31337);
  size_t dominance_violations = 0, in_range_sets = 0, in_range_violations = 0;
  size_t affine_violations = 0;
  std::string example;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto base = random_set(rng, 2 + uniform_below(rng, 7));
    const Tokens before = winner(base);

    // Dominance: D has strictly lower BLEU and strictly higher PPL than an
    // existing candidate.
    const auto& ref = base[uniform_below(rng, base.size())];
    ScoredCandidate d;
    d.tokens = {"dominated"};
    d.content_raw = ref.content_raw * uniform_unit(rng) * 0.999;
    d.fluency_raw = ref.fluency_raw + 1e-6 + 600.0 * uniform_unit(rng);
    double min_bleu = 1e300, max_ppl = -1e300;
    for (const auto& c : base) {
      min_bleu = std::min(min_bleu, c.content_raw);
      max_ppl = std::max(max_ppl, c.fluency_raw);
    }
    const bool in_range = d.content_raw >= min_bleu && d.fluency_raw <= max_ppl;
    in_range_sets += in_range;
    auto with_d = base;
    with_d.push_back(d);
    if (winner(with_d) != before) {
      ++dominance_violations;
      in_range_violations += in_range;
      if (example.empty()) {
        example = "trial " + std::to_string(trial) + ": winner " + before[0] + " became " +
                  winner(with_d)[0];
      }
    }

    // Strictly increasing affine maps on raw BLEU and on raw PPL.
    const double a1 = 0.01 + 10 * uniform_unit(rng), b1 = -5 + 10 * uniform_unit(rng);
    const double a2 = 0.01 + 10 * uniform_unit(rng), b2 = -5 + 10 * uniform_unit(rng);
    auto bleu_mapped = base, ppl_mapped = base;
    for (auto& c : bleu_mapped) c.content_raw = a1 * c.content_raw + b1;
    for (auto& c : ppl_mapped) c.fluency_raw = a2 * c.fluency_raw + b2;
    if (winner(bleu_mapped) != before || winner(ppl_mapped) != before) ++affine_violations;
  }

  const std::vector<double> same{5.0, 5.0}, single{3.25};
  const auto n1 = minmax_normalize(same), n2 = minmax_normalize(single);
  const bool degenerate_ok = n1 == std::vector<double>{0.5, 0.5} && n2 == std::vector<double>{0.5};

  if (dominance_violations) {
    o.fail("dominance broken in " + std::to_string(dominance_violations) + "/1000 sets");
  }
  if (affine_violations) {
    o.fail("affine invariance broken in " + std::to_string(affine_violations) + "/1000 sets");
  }
  if (!degenerate_ok) o.fail("minmax degenerate range is not exactly 0.5");
  if (o.pass) {
    o.detail = "dominance and affine invariance over 1000 sets; degenerate minmax = 0.5";
  } else {
    o.note("affine invariance violations: " + std::to_string(affine_violations) +
           "; degenerate minmax exact 0.5: " + (degenerate_ok ? "yes" : "no"));
  }
  o.note("dominance violations with D inside the existing BLEU/PPL ranges: " +
         std::to_string(in_range_violations) + " of " + std::to_string(in_range_sets) +
         " such sets" +
         (in_range_violations == 0 && dominance_violations
              ? std::string("; every violation has D widening a range, which rescales the others")
              : std::string()));
  if (!example.empty()) o.note("first violation, " + example);
  return o;
}

Outcome lm_sanity() {
  Outcome o;
  NgramOptions uniform_opts;
  uniform_opts.order = 1;
  uniform_opts.end_event = false;
  uniform_opts.open_vocab = false;
  const std::vector<Tokens> four = {{"a", "b", "c", "d"}};
  const NgramModel uniform = NgramModel::train(four, uniform_opts);
  double worst = 0.0;
  for (const Tokens& s : {Tokens{"a"}, Tokens{"a", "b", "c", "d"}, Tokens{"d", "d", "b", "a", "c"}}) {
    worst = std::max(worst, std::abs(perplexity(uniform, s, /*with_end=*/false) - 4.0));
  }
  if (worst > 1e-9) o.fail("uniform PPL off by " + g(worst));

  // Fuzz: the restricted set is drawn from the filler's own most likely words.
  auto desk = testing::make_desk_artifacts(0, 400, 17);
  const auto ranked = desk->lm->ranked_vocabulary(0);
  std::vector<std::string> words, bannable;
  for (const auto& w : ranked) {
    if (w == kBosToken || w == kEosToken || w == kUnkToken) continue;
    words.push_back(w);
    if (!normalize_token(w).empty()) bannable.push_back(w);
  }
  Rng rng(555);
  size_t violations = 0, errors = 0, filled = 0;
  for (int c = 0; c < 10000; ++c) {
    std::vector<std::string> banned;
    const size_t n_banned = 1 + uniform_below(rng, bannable.size() / 2);
    for (size_t i = 0; i < n_banned; ++i) {
      // Bias toward the head of the frequency ranking.
      const size_t r = uniform_below(rng, 1 + uniform_below(rng, bannable.size()));
      banned.push_back(bannable[r]);
    }
    const RestrictedVocab vocab(banned);
    const FillConstraint constraint(vocab);
    Tokens context(uniform_below(rng, 8));
    for (auto& t : context) t = words[uniform_below(rng, words.size())];
    std::vector<Slot> slots(1 + uniform_below(rng, 12));
    for (auto& s : slots) {
      if (uniform_unit(rng) < 0.6) continue;  // MASK
      s = words[uniform_below(rng, words.size())];
    }
    try {
      const auto out = fill_slots(context, slots, constraint, *desk->filler);
      bool ok = out.size() == slots.size();
      for (size_t i = 0; ok && i < slots.size(); ++i) {
        if (slots[i]) {
          ok = out[i] == *slots[i];
        } else {
          ++filled;
          ok = !is_restricted(vocab, out[i]);
        }
      }
      violations += !ok;
    } catch (const std::exception&) {
      ++errors;
    }
  }
  if (violations) o.fail(std::to_string(violations) + " of 10000 fills broke the constraint");
  if (errors) o.fail(std::to_string(errors) + " of 10000 fills raised");
  if (o.pass) {
    o.detail = "uniform 4-word PPL within " + g(worst) + " of 4; 10000 fuzz fills (" +
               std::to_string(filled) + " masks) restricted-free";
  }
  return o;
}

Outcome edit_synthesis() {
  Outcome o;
  auto desk = testing::make_desk_artifacts(0, 200, 2024);
  const auto& corpus = desk->corpus.clean;
  std::set<Tokens> sentences;
  for (const auto& s : corpus) sentences.insert(s.tokens);

  std::string first_text;
  size_t first_pairs = 0;
  SynthesisStats stats;
  for (size_t jobs : {1u, 1u, 4u}) {
    auto handles = desk->synthesis();
    handles.jobs = jobs;
    const auto pairs = synthesize_edit_corpus(corpus, 200, 9, handles, &stats);
    std::ostringstream buf;
    write_edit_pairs(buf, pairs);
    if (first_text.empty()) {
      first_text = buf.str();
      first_pairs = pairs.size();
      size_t bad_target = 0, identical = 0;
      for (const auto& p : pairs) {
        bad_target += !sentences.contains(p.target);
        identical += p.source == p.target;
      }
      if (pairs.empty()) o.fail("no pairs produced");
      if (bad_target) o.fail(std::to_string(bad_target) + " targets are not corpus sentences");
      if (identical) o.fail(std::to_string(identical) + " pairs have source == target");
    } else if (buf.str() != first_text) {
      o.fail("rerun with jobs=" + std::to_string(jobs) + " is not byte-identical");
    }
  }
  const double ratio = stats.sampled ? static_cast<double>(first_pairs) / stats.sampled : 0.0;
  if (o.pass) {
    o.detail = std::to_string(first_pairs) + " pairs from " + std::to_string(stats.sampled) +
               " sentences; targets in corpus, no identity pairs, reruns byte-identical";
  }
  o.note("pairs per sampled sentence " + fmt(ratio, 2) + " (reference point 780K/60K = 13.00)");
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto lines = testing::make_raw_lines(1500, 4711);
  std::string raw;
  for (const auto& l : lines) raw += l + "\n";

  std::vector<std::string> digests;
  for (int run = 0; run < 2; ++run) {
    Workdir dir("determinism" + std::to_string(run));
    write_text(dir / "raw.txt", raw);
    write_vocab(dir / "vocab.txt");
    cli::BuildOptions b;
    b.input = dir / "raw.txt";
    b.vocab = dir / "vocab.txt";
    b.out_dir = dir / "data";
    b.seed = 13;
    b.jobs = 4;
    cli::cmd_build(b);
    const cli::CorpusSelection train{dir / "data/corpus.jsonl", dir / "data/splits.json", "train"};
    cli::cmd_index(cli::IndexOptions{train, dir / "index"});
    cli::cmd_train_lm(cli::TrainLmOptions{train, dir / "lm.txt", 3, 0.75});
    std::string digest;
    for (Variant v : {Variant::kRgs, Variant::kRges}) {
      cli::TransferOptions t;
      t.input = cli::InputOptions{dir / "data/corpus.jsonl", dir / "data/splits.json", "test"};
      t.vocab = dir / "vocab.txt";
      t.index = dir / "index";
      t.lm = dir / "lm.txt";
      t.variant = v;
      t.jobs = 4;
      t.out = dir / "results.jsonl";
      const auto out = cli::cmd_transfer(t);
      digest += slurp(*t.out);
      if (run == 0 && v == Variant::kRgs) {
        o.note("rgs run: " + out.summary.dump());
      }
    }
    digest += slurp(dir / "data/corpus.jsonl") + slurp(dir / "data/splits.json") +
              slurp(dir / "lm.txt");
    digests.push_back(std::move(digest));
  }
  if (digests[0] != digests[1]) o.fail("result files differ between identical runs");
  if (o.pass) {
    o.detail = "two full build/index/train-lm/transfer runs byte-identical (" +
               std::to_string(digests[0].size()) + " bytes compared)";
  }
  return o;
}

}  // namespace
}  // namespace detox::acceptance

int main() {
  using namespace detox::acceptance;
  // Pipeline events would drown the report.
  detox::set_log_sink({});

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"assignment-count-law", assignment_count_law},
      {"end-to-end-accuracy", end_to_end_accuracy},
      {"retrieval-oracle", retrieval_oracle},
      {"metric-fixtures", metric_fixtures},
      {"selection-properties", selection_properties},
      {"lm-sanity", lm_sanity},
      {"edit-corpus-synthesis", edit_synthesis},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed ? 1 : 0;
}
