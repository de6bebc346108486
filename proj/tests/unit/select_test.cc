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

#include <gtest/gtest.h>

#include "detox/error.h"
#include "detox/ngram.h"
#include "detox/rng.h"
#include "detox/select.h"

namespace detox {
namespace {

std::vector<ScoredCandidate> raw(std::initializer_list<std::pair<double, double>> bleu_ppl) {
  std::vector<ScoredCandidate> out;
  int i = 0;
  for (auto [b, p] : bleu_ppl) {
    ScoredCandidate c;
    c.tokens = {"c" + std::to_string(i++)};
    c.content_raw = b;
    c.fluency_raw = p;
    out.push_back(c);
  }
  normalize_scores(out);
  return out;
}

TEST(MinmaxNormalize, Fixtures) {
  EXPECT_EQ(minmax_normalize(std::vector<double>{2, 4, 6}), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(minmax_normalize(std::vector<double>{5, 5}), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(minmax_normalize(std::vector<double>{-1, 0, 3}),
            (std::vector<double>{0.0, 0.25, 1.0}));
  try {
    minmax_normalize(std::vector<double>{1.0, std::nan("")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotANumber);
  }
  EXPECT_THROW(minmax_normalize(std::vector<double>{}), Error);
}

TEST(SelectBest, Argmax) {
  std::vector<ScoredCandidate> s(3);
  s[0].total = 1.3;
  s[1].total = 1.7;
  s[2].total = 0.9;
  EXPECT_EQ(select_best_index(s), 1u);
}

TEST(SelectBest, TieGoesToLowerPerplexity) {
  const auto s = raw({{0.8, 100}, {0.5, 50}});
  EXPECT_EQ(s[0].content_norm, 1.0);
  EXPECT_EQ(s[0].fluency_norm, 0.0);
  EXPECT_EQ(s[1].content_norm, 0.0);
  EXPECT_EQ(s[1].fluency_norm, 1.0);
  EXPECT_EQ(s[0].total, s[1].total);
  EXPECT_EQ(select_best(s).fluency_raw, 50.0);
}

TEST(SelectBest, FullTieGoesToSmallerTokens) {
  auto s = raw({{0.5, 10}, {0.5, 10}});
  s[0].tokens = {"b"};
  s[1].tokens = {"a"};
  EXPECT_EQ(select_best_index(s), 1u);
}

TEST(SelectBest, SingleCandidateDegenerate) {
  const auto s = raw({{0.3, 42}});
  EXPECT_EQ(s[0].content_norm, 0.5);
  EXPECT_EQ(s[0].fluency_norm, 0.5);
  EXPECT_EQ(select_best_index(s), 0u);
}

TEST(SelectBest, AffineInvariance) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + uniform_below(rng, 8);
    std::vector<ScoredCandidate> a, b, c;
    const double scale = 0.1 + 10 * uniform_unit(rng), shift = 5 * uniform_unit(rng) - 2;
    for (size_t i = 0; i < n; ++i) {
      ScoredCandidate x;
      x.tokens = {"t" + std::to_string(i)};
      x.content_raw = uniform_unit(rng);
      x.fluency_raw = 1 + 500 * uniform_unit(rng);
      a.push_back(x);
      x.content_raw = scale * x.content_raw + shift;
      b.push_back(x);
      x = a.back();
      x.fluency_raw = scale * x.fluency_raw + shift;
      c.push_back(x);
    }
    normalize_scores(a);
    normalize_scores(b);
    normalize_scores(c);
    EXPECT_EQ(select_best_index(a), select_best_index(b));
    EXPECT_EQ(select_best_index(a), select_best_index(c));
    for (const auto& x : a) {
      EXPECT_GE(x.content_norm, 0.0);
      EXPECT_LE(x.content_norm, 1.0);
      EXPECT_GE(x.fluency_norm, 0.0);
      EXPECT_LE(x.fluency_norm, 1.0);
    }
  }
}

// Per-set normalization means a new candidate can move the minimum of one
// criterion and reorder the others, even when it is dominated.
TEST(SelectBest, DominatedCandidateCanStillShiftWinner) {
  const auto before = raw({{1.0, 1.8}, {0.5, 1.0}, {0.75, 2.0}});
  EXPECT_EQ(select_best_index(before), 0u);
  const auto after = raw({{1.0, 1.8}, {0.5, 1.0}, {0.75, 2.0}, {0.0, 2.0001}});
  EXPECT_EQ(select_best_index(after), 1u);
}

TEST(ScoreCandidates, FiltersThenScores) {
  const auto lm = NgramModel::train(std::vector<Tokens>{Tokens{"the", "dog", "is", "nice"}}, {.order = 2});
  const RestrictedVocab vocab{"jerk"};
  const Tokens source{"the", "dog", "is", "nice"};
  const std::vector<Tokens> cands = {{"the", "jerk", "is", "nice"}, source, {"the", "dog"}};
  const auto scored = score_candidates(source, cands, lm, vocab);
  ASSERT_EQ(scored.size(), 2u);
  EXPECT_EQ(scored[0].tokens, source);
  EXPECT_NEAR(scored[0].content_raw, 1.0, 1e-12);
  for (const auto& s : scored) EXPECT_FALSE(contains_restricted(vocab, s.tokens));
  try {
    score_candidates(source, std::vector<Tokens>{{"jerk"}}, lm, vocab);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAfterFilter);
  }
}

TEST(TransferResult, JsonRoundTrip) {
  TransferResult r;
  r.source = {"id-1", {"you", "jerk", "."}, Label::kOffensive};
  r.output = {"you", "friend", "."};
  r.selected = raw({{0.25, 12.5}})[0];
  r.selected->tokens = r.output;
  r.candidate_count = 7;
  r.fallback_used = true;
  r.fallback_reason = "why";
  EXPECT_EQ(parse_transfer_result(transfer_result_line(r)), r);
  TransferResult p;
  p.source = {"id-2", {"hi", "there"}, Label::kNonOffensive};
  p.output = p.source.tokens;
  p.passthrough = true;
  EXPECT_EQ(parse_transfer_result(transfer_result_line(p)), p);
  EXPECT_THROW(parse_transfer_result("{}"), Error);
  EXPECT_THROW(parse_transfer_result("nope"), Error);
}

}  // namespace
}  // namespace detox
