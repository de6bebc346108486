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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "desk_pipeline.h"
#include "detox/edit.h"
#include "detox/error.h"

namespace detox {
namespace {

TEST(IdentityEditor, ReturnsInput) {
  const IdentityEditor ed;
  const std::vector<Tokens> in = {{"a", "b"}, {"c"}, {"d", "e", "f"}};
  EXPECT_EQ(edit_candidates(in, ed), in);
  EXPECT_THROW(edit_candidates({}, ed), Error);
}

TEST(MakeEditor, RemoteNeedsEndpoint) {
  EXPECT_NE(make_editor({}), nullptr);
  EXPECT_THROW(make_editor({.mode = EditorMode::kRemote}), Error);
  EXPECT_EQ(parse_editor_mode("remote"), EditorMode::kRemote);
  EXPECT_THROW(parse_editor_mode("t5"), Error);
}

class ThrowingEditor : public Editor {
 public:
  Tokens edit(std::span<const std::string> tokens) const override {
    if (++calls_ > 2) throw Error(ErrorCode::kRemoteUnavailable, "down");
    return Tokens(tokens.begin(), tokens.end());
  }

 private:
  mutable int calls_ = 0;
};

TEST(EditCandidates, FailureReportsProgress) {
  const std::vector<Tokens> in(5, Tokens{"x"});
  try {
    edit_candidates(in, ThrowingEditor());
    FAIL();
  } catch (const EditError& e) {
    EXPECT_EQ(e.completed(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kRemoteUnavailable);
  }
}

class Synthesis : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { art_ = testing::make_desk_artifacts(0, 50, 404).release(); }
  static void TearDownTestSuite() { delete art_; }
  static testing::DeskArtifacts* art_;
};
testing::DeskArtifacts* Synthesis::art_ = nullptr;

TEST_F(Synthesis, PairsAreValidAndDeterministic) {
  const auto& corpus = art_->corpus.clean;
  const auto h = art_->synthesis({4, 8, 16});
  SynthesisStats stats;
  const auto pairs = synthesize_edit_corpus(corpus, 60000, 5, h, &stats);
  EXPECT_EQ(stats.sampled, corpus.size());
  EXPECT_GT(pairs.size(), 0u);
  std::set<Tokens> originals;
  for (const auto& s : corpus) originals.insert(s.tokens);
  for (const auto& p : pairs) {
    EXPECT_TRUE(originals.count(p.target));
    EXPECT_NE(p.source, p.target);
    EXPECT_FALSE(contains_restricted(art_->vocab, p.target));
  }
  std::ostringstream a, b;
  write_edit_pairs(a, pairs);
  auto again_handles = h;
  again_handles.jobs = 4;
  write_edit_pairs(b, synthesize_edit_corpus(corpus, 60000, 5, again_handles));
  EXPECT_EQ(a.str(), b.str());
}

TEST_F(Synthesis, SampleSizeAndPreconditions) {
  const auto h = art_->synthesis({4, 8, 16});
  SynthesisStats stats;
  synthesize_edit_corpus(art_->corpus.clean, 10, 1, h, &stats);
  EXPECT_EQ(stats.sampled, 10u);
  EXPECT_THROW(synthesize_edit_corpus({}, 10, 1, h), Error);
  std::vector<LabeledSentence> bad = {art_->corpus.clean[0]};
  bad[0].label = Label::kOffensive;
  EXPECT_THROW(synthesize_edit_corpus(bad, 10, 1, h), Error);
}

TEST(EditPairsTsv, RoundTripAndErrors) {
  const std::vector<EditPair> pairs = {{{"a", "b"}, {"c", "d", "e"}}, {{"x"}, {"y"}}};
  std::stringstream buf;
  write_edit_pairs(buf, pairs);
  EXPECT_EQ(buf.str(), "a b\tc d e\nx\ty\n");
  EXPECT_EQ(read_edit_pairs(buf), pairs);
  std::stringstream bad("a b c\n");
  EXPECT_THROW(read_edit_pairs(bad), Error);
  std::ostringstream out;
  EXPECT_THROW(write_edit_pairs(out, std::vector<EditPair>{{{"a b"}, {"c"}}}), Error);
}

}  // namespace
}  // namespace detox
