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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli/app.h"
#include "cli/commands.h"
#include "detox/corpus.h"
#include "detox/select.h"
#include "echo_server.h"

namespace detox::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const fs::path kData = DETOX_TEST_DATA_DIR;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "detox");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void expect_json_lines(const std::string& text) {
  for (const auto& line : lines_of(text)) {
    EXPECT_FALSE(json::parse(line, nullptr, false).is_discarded()) << line;
  }
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("detox_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
            "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string vocab() const { return (kData / "toy_vocab.txt").string(); }
  std::string raw() const { return (kData / "raw_comments_1k.txt").string(); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  // build + index + train-lm over the 1K fixture.
  void prepare() {
    ASSERT_EQ(run({"build", "--input", raw(), "--vocab", vocab(), "--out", p("b"), "--seed", "7"})
                  .code,
              kExitOk);
    const std::vector<std::string> sel = {"--corpus", p("b/corpus.jsonl"), "--splits",
                                          p("b/splits.json")};
    auto index_args = sel;
    index_args.insert(index_args.begin(), "index");
    index_args.insert(index_args.end(), {"--out", p("b/index")});
    ASSERT_EQ(run(index_args).code, kExitOk);
    auto lm_args = sel;
    lm_args.insert(lm_args.begin(), "train-lm");
    lm_args.insert(lm_args.end(), {"--out", p("b/lm.txt")});
    ASSERT_EQ(run(lm_args).code, kExitOk);
  }

  std::vector<std::string> transfer_args(const std::string& variant, const std::string& out) const {
    return {"transfer",  variant,         "--input", p("b/corpus.jsonl"), "--splits",
            p("b/splits.json"), "--split", "test",    "--vocab",          vocab(),
            "--index",   p("b/index"),    "--lm",    p("b/lm.txt"),       "--out",
            p(out)};
  }

  fs::path dir_;
};

// Counts recomputed by tests/data/recount_build.py.
TEST_F(CliTest, BuildCountsMatchIndependentRecount) {
  const CliRun r = run({"build", "--input", raw(), "--vocab", vocab(), "--out", p("b"), "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json s = json::parse(r.out);
  EXPECT_EQ(s["lines"], 1000);
  EXPECT_EQ(s["sentences"], 1457);
  EXPECT_EQ(s["dropped_noise"],
            json::parse(R"({"url":56,"email":31,"date":33,"time":22,"number":32,"emoticon":23})"));
  EXPECT_EQ(s["dropped_length"], 122);
  EXPECT_EQ(s["kept"], 1138);
  EXPECT_EQ(s["offensive"], 353);
  EXPECT_EQ(s["non_offensive"], 785);
  EXPECT_EQ(s["train"], 910);
  EXPECT_EQ(s["validation"], 114);
  EXPECT_EQ(s["test"], 114);
  EXPECT_EQ(json::parse(slurp(p("b/summary.json"))), s);
  EXPECT_EQ(lines_of(slurp(p("b/corpus.jsonl"))).size(), 1138u);
  expect_json_lines(r.err);

  const CliRun narrow = run({"build", "--input", raw(), "--vocab", vocab(), "--out", p("n"),
                          "--min-tokens", "3", "--max-tokens", "12"});
  ASSERT_EQ(narrow.code, kExitOk) << narrow.err;
  const json n = json::parse(narrow.out);
  EXPECT_EQ(n["dropped_length"], 146);
  EXPECT_EQ(n["kept"], 1114);
  EXPECT_EQ(n["offensive"], 325);
  EXPECT_EQ(n["non_offensive"], 789);
  EXPECT_EQ(n["train"], 891);
  EXPECT_EQ(n["validation"], 112);
  EXPECT_EQ(n["test"], 111);
}

TEST_F(CliTest, BuildIsByteIdenticalOnRerun) {
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(run({"build", "--input", raw(), "--vocab", vocab(), "--out", p(out), "--seed", "11",
                   "--jobs", out == std::string("a") ? "1" : "4"})
                  .code,
              kExitOk);
  }
  for (const char* f : {"corpus.jsonl", "splits.json", "summary.json"}) {
    EXPECT_EQ(slurp(p(std::string("a/") + f)), slurp(p(std::string("b/") + f))) << f;
  }
}

TEST_F(CliTest, MissingVocabIsUsageError) {
  const CliRun r = run({"build", "--input", raw(), "--vocab", p("nope.txt"), "--out", p("b")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  const json e = json::parse(lines_of(r.err).front());
  EXPECT_EQ(e["event"], "usage_error");
  EXPECT_NE(e["usage"].get<std::string>().find("Usage:"), std::string::npos);
  EXPECT_FALSE(fs::exists(p("b")));

  const CliRun no_vocab = run({"build", "--input", raw(), "--out", p("b")});
  EXPECT_EQ(no_vocab.code, kExitUsage);
  EXPECT_NE(no_vocab.err.find("--vocab is required"), std::string::npos);
}

TEST_F(CliTest, TransferVariantsAgreeAndAreRestrictedFree) {
  prepare();
  ASSERT_EQ(run(transfer_args("rgs", "rgs.jsonl")).code, kExitOk);
  auto rges = transfer_args("rges", "rges.jsonl");
  rges.insert(rges.end(), {"--jobs", "4"});
  const CliRun r = run(rges);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["accuracy"], 100.0);
  EXPECT_EQ(slurp(p("rgs.jsonl")), slurp(p("rges.jsonl")));

  const RestrictedVocab v = load_restricted_vocab(vocab());
  const auto results = read_transfer_results(p("rgs.jsonl"));
  ASSERT_EQ(results.size(), 114u);
  size_t offensive = 0;
  for (const auto& res : results) {
    EXPECT_FALSE(contains_restricted(v, res.output)) << res.source.id;
    if (res.passthrough) {
      EXPECT_EQ(res.output, res.source.tokens);
    } else {
      ++offensive;
    }
  }
  EXPECT_GT(offensive, 0u);
}

TEST_F(CliTest, TransferWritesResultsToStdoutWithoutOut) {
  prepare();
  auto args = transfer_args("rgs", "unused");
  args.resize(args.size() - 2);
  const CliRun r = run(args);
  ASSERT_EQ(r.code, kExitOk);
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 114u);
  for (const auto& line : lines) EXPECT_NO_THROW(parse_transfer_result(line));
  expect_json_lines(r.err);
}

TEST_F(CliTest, UnreachableEditorFailsNamingEndpoint) {
  prepare();
  auto args = transfer_args("rges", "out.jsonl");
  args.insert(args.end(), {"--editor", "remote", "--editor-url", "http://127.0.0.1:9",
                           "--timeout-ms", "500"});
  const CliRun r = run(args);
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("http://127.0.0.1:9"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(p("out.jsonl")));

  args.push_back("--editor-fallback-identity");
  EXPECT_EQ(run(args).code, kExitOk);
  ASSERT_EQ(run(transfer_args("rgs", "rgs.jsonl")).code, kExitOk);
  EXPECT_EQ(slurp(p("out.jsonl")), slurp(p("rgs.jsonl")));
}

TEST_F(CliTest, RemoteEditorRoundTrip) {
  prepare();
  testing::EchoServer server;
  auto args = transfer_args("rges", "out.jsonl");
  args.insert(args.end(), {"--editor", "remote", "--editor-url", server.url()});
  const CliRun r = run(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GT(server.requests(), 0);
  EXPECT_EQ(json::parse(r.out)["accuracy"], 100.0);
}

TEST_F(CliTest, EvaluateIdentityFixture) {
  const std::vector<Tokens> sentences = {{"the", "cat", "sat", "down"},
                                         {"a", "dog", "ran", "home", "fast"}};
  std::string results;
  for (size_t i = 0; i < sentences.size(); ++i) {
    TransferResult r;
    r.source = LabeledSentence{"s" + std::to_string(i), sentences[i], Label::kOffensive};
    r.output = sentences[i];
    results += transfer_result_line(r) + "\n";
  }
  std::ofstream(p("res.jsonl")) << results;
  std::ofstream(p("emb.txt")) << "the 1 0\ncat 0 1\nsat 1 1\ndown 2 1\na 1 3\ndog 0 2\n"
                                 "ran 3 1\nhome 1 1\nfast 2 2\n";
  const CliRun r = run({"evaluate", "--results", p("res.jsonl"), "--vocab", vocab(), "--embeddings",
                     p("emb.txt"), "--json-out", p("rep.json"), "--tsv-out", p("rep.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json rep = json::parse(slurp(p("rep.json")));
  EXPECT_NEAR(rep["bleu"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(rep["rouge_l_f1"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(rep["fucp"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(rep["accuracy"], 100.0);
  // A single aligned chunk still draws the fragmentation penalty 0.5 / m^3.
  const double mt = ((1 - 0.5 / 64.0) + (1 - 0.5 / 125.0)) / 2;
  EXPECT_NEAR(rep["meteor"].get<double>(), mt, 1e-12);
  const auto tsv = lines_of(slurp(p("rep.tsv")));
  ASSERT_EQ(tsv.size(), 2u);
  EXPECT_EQ(tsv[0], "BL\tRG\tMT\tFuCP\tAcc\tPPL");
  EXPECT_EQ(tsv[1], "100.0\t100.0\t99.4\t1.000\t100.0\tNA");
  EXPECT_NE(r.out.find(tsv[1]), std::string::npos);
}

TEST_F(CliTest, EvaluateMalformedLineNamesLineNumber) {
  prepare();
  ASSERT_EQ(run(transfer_args("rgs", "rgs.jsonl")).code, kExitOk);
  auto lines = lines_of(slurp(p("rgs.jsonl")));
  lines[4] = "{\"id\": broken";
  std::ofstream bad(p("bad.jsonl"));
  for (const auto& l : lines) bad << l << '\n';
  bad.close();
  const CliRun r = run({"evaluate", "--results", p("bad.jsonl"), "--vocab", vocab()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, RemBaselineMatchesEvaluateRemMode) {
  prepare();
  ASSERT_EQ(run(transfer_args("rgs", "rgs.jsonl")).code, kExitOk);
  const CliRun rem = run({"rem-baseline", "--input", p("b/corpus.jsonl"), "--splits",
                       p("b/splits.json"), "--vocab", vocab(), "--out", p("rem.jsonl")});
  ASSERT_EQ(rem.code, kExitOk) << rem.err;
  EXPECT_EQ(json::parse(rem.out)["accuracy"], 100.0);
  const CliRun a = run({"evaluate", "--results", p("rem.jsonl"), "--vocab", vocab()});
  const CliRun b = run({"evaluate", "--results", p("rgs.jsonl"), "--vocab", vocab(), "--rem"});
  ASSERT_EQ(a.code, kExitOk);
  ASSERT_EQ(b.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
  prepare();
  ASSERT_EQ(run(transfer_args("rgs", "rgs.jsonl")).code, kExitOk);
  std::ofstream(p("cfg.toml")) << "vocab = \"" << vocab() << "\"\n"
                               << "splits = \"" << p("b/splits.json") << "\"\n"
                               << "split = \"test\"\n"
                               << "index = \"" << p("b/index") << "\"\n"
                               << "lm = \"" << p("b/lm.txt") << "\"\n"
                               << "[transfer]\n"
                               << "input = \"" << p("b/corpus.jsonl") << "\"\n";
  ASSERT_EQ(run({"--config", p("cfg.toml"), "transfer", "rgs", "--out", p("cfg.jsonl")}).code,
            kExitOk);
  EXPECT_EQ(slurp(p("cfg.jsonl")), slurp(p("rgs.jsonl")));
  ASSERT_EQ(
      run({"--config", p("cfg.toml"), "transfer", "rgs", "--k", "1", "--out", p("k1.jsonl")}).code,
      kExitOk);
  EXPECT_NE(slurp(p("k1.jsonl")), slurp(p("rgs.jsonl")));

  std::ofstream(p("bad.toml")) << "no_such_key = 3\n";
  EXPECT_EQ(run({"--config", p("bad.toml"), "transfer", "rgs", "--input", raw()}).code, kExitUsage);
}

TEST_F(CliTest, SynthEditWritesPairsDeterministically) {
  prepare();
  std::vector<std::string> args = {"synth-edit", "--corpus", p("b/corpus.jsonl"), "--splits",
                                   p("b/splits.json"), "--vocab", vocab(), "--index", p("b/index"),
                                   "--lm", p("b/lm.txt"), "--sample-n", "50", "--seed", "5"};
  auto a = args;
  a.insert(a.end(), {"--out", p("a.tsv")});
  auto b = args;
  b.insert(b.end(), {"--out", p("b.tsv"), "--jobs", "3"});
  const CliRun ra = run(a);
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  ASSERT_EQ(run(b).code, kExitOk);
  EXPECT_EQ(json::parse(ra.out)["sampled"], 50);
  EXPECT_EQ(slurp(p("a.tsv")), slurp(p("b.tsv")));
  EXPECT_FALSE(slurp(p("a.tsv")).empty());
}

TEST_F(CliTest, MissingArtifactsFail) {
  const CliRun r = run({"transfer", "rgs", "--input", raw(), "--vocab", vocab(), "--index",
                     p("missing"), "--lm", p("missing.txt")});
  EXPECT_EQ(r.code, kExitUsage);
  const CliRun no_index = run({"transfer", "rgs", "--input", raw(), "--vocab", vocab()});
  EXPECT_EQ(no_index.code, kExitUsage);
  EXPECT_NE(no_index.err.find("--index is required"), std::string::npos);
}

}  // namespace
}  // namespace detox::cli
