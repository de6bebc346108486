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

#include <algorithm>
#include <array>
#include <unordered_set>

#include "detox/postag.h"

namespace detox {
namespace {

struct WordList {
  PosTag tag;
  std::string_view words;
};

// Later lists win on conflicts, so the more specific lists come last.
constexpr std::array<WordList, 14> kLexicon = {{
    {PosTag::kNoun,
     "people time year way day man men woman women thing things world life child children "
     "government country president party news job money house school family friend friends "
     "guy guys country state law vote votes war head mouth brain sense platform merit sympathy "
     "dog cat car game team city week month night home word words idea fact point problem"},
    {PosTag::kAdj,
     "good bad new old great big small little high low long short large young own other same "
     "right wrong real best better worse worst sure free full true false happy sad nice "
     "amazing whole entire last next first able clear hard easy poor rich strong weak loud "
     "crazy smart wise fine awful terrible horrible great different important"},
    {PosTag::kVerb,
     "go went gone get got make made know knew known think thought see saw seen come came "
     "take took want give gave use find found tell told ask work seem feel felt try leave "
     "left call keep kept let begin show hear heard play run ran move live believe hold "
     "bring happen write provide sit stand lose lost pay meet include continue set learn "
     "change lead understand watch follow stop create speak read allow add spend grow open "
     "walk win offer remember love consider appear buy wait serve die send expect build stay "
     "fall cut reach kill remain suggest raise pass sell require report decide pull say said "
     "talk lie hate deserve sow reap put care lack shut look need mean meant"},
    {PosTag::kAdv,
     "very really just also too so never always often now then here there where when why how "
     "still already even again ever quite rather almost only maybe perhaps soon today "
     "tomorrow yesterday away back obviously actually probably simply literally else"},
    {PosTag::kIntj, "oh wow yes yeah lol hey hi hello please ok okay ugh haha thanks lmao omg"},
    {PosTag::kNum,
     "one two three four five six seven eight nine ten eleven twelve twenty thirty hundred "
     "thousand million billion"},
    {PosTag::kSconj, "because if although though while whereas unless until whether as than"},
    {PosTag::kCconj, "and or but nor plus"},
    {PosTag::kAdp,
     "of in on at by for with about against between into through during before after above "
     "below from up down over under around near across without within along among behind "
     "beyond toward towards upon off out like since"},
    {PosTag::kPart, "not n't"},
    {PosTag::kAux,
     "am is are was were be been being have has had do does did will would shall should can "
     "could may might must 's 're 've 'd 'll ain't isn't aren't wasn't weren't don't doesn't "
     "didn't won't wouldn't can't couldn't shouldn't haven't hasn't hadn't cannot"},
    {PosTag::kPron,
     "i you he she it we they me him us them myself yourself himself herself itself "
     "ourselves themselves mine yours hers ours theirs my your his her its our their who "
     "whom whose what which something anything nothing everything someone anyone everyone "
     "nobody somebody anybody everybody i'm you're he's she's it's we're they're i've you've "
     "we've they've i'd you'd he'd she'd we'd they'd i'll you'll he'll she'll we'll they'll "
     "that's there's what's who's"},
    {PosTag::kDet,
     "the a an this these those every each some any no all both either neither another such"},
    {PosTag::kPron, "that"},
}};

const std::unordered_set<std::string_view>& subject_pronouns() {
  static const std::unordered_set<std::string_view> s = {"i", "you", "he", "she", "it", "we",
                                                         "they", "who"};
  return s;
}

const std::unordered_set<std::string_view>& modals() {
  static const std::unordered_set<std::string_view> s = {
      "will", "would", "shall", "should", "can",   "could",  "may",      "might",
      "must", "do",    "does",  "did",    "don't", "didn't", "doesn't",  "won't",
      "can't", "couldn't", "wouldn't", "shouldn't", "cannot", "'ll", "'d"};
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool ends_with_any(std::string_view s, std::initializer_list<std::string_view> suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(),
                     [&](std::string_view x) { return ends_with(s, x); });
}

bool all_of_chars(std::string_view s, bool (*pred)(char)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), pred);
}

bool is_digit_or_sep(char c) { return (c >= '0' && c <= '9') || c == ',' || c == '.'; }
bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}
bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80;
  });
}

}  // namespace

RuleTagger::RuleTagger() {
  for (const auto& list : kLexicon) {
    for (auto& w : split_whitespace(list.words)) lexicon_[w] = list.tag;
  }
}

PosTag RuleTagger::guess(std::string_view token, std::string_view lower, bool sentence_initial,
                         PosTag previous) const {
  if (all_of_chars(token, is_ascii_punct)) {
    static constexpr std::string_view kSymbols = "$%&*+=<>@#^~|/\\";
    return token.size() == 1 && kSymbols.find(token[0]) != std::string_view::npos ? PosTag::kSym
                                                                                  : PosTag::kPunct;
  }
  if (has_digit(token) && all_of_chars(token, is_digit_or_sep)) return PosTag::kNum;
  if (!has_alpha(token)) return PosTag::kSym;

  if (!sentence_initial && token[0] >= 'A' && token[0] <= 'Z') return PosTag::kPropn;

  const size_t n = lower.size();
  if (n > 4 && ends_with(lower, "ly")) return PosTag::kAdv;
  if (n > 4 && ends_with(lower, "ing")) return PosTag::kVerb;
  if (n > 3 && ends_with(lower, "ed")) return PosTag::kVerb;
  if (n > 5 && ends_with_any(lower, {"ize", "ise", "ify", "ate"})) return PosTag::kVerb;
  if (n > 4 && ends_with_any(lower, {"ous", "ful", "ive", "able", "ible", "less", "ical", "ish"})) {
    return PosTag::kAdj;
  }
  if (n > 4 && ends_with_any(lower, {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship",
                                     "ism", "ist"})) {
    return PosTag::kNoun;
  }
  if (n > 2 && ends_with(lower, "s") && !ends_with_any(lower, {"ss", "us", "is"})) {
    const bool after_subject =
        previous == PosTag::kNoun || previous == PosTag::kPron || previous == PosTag::kPropn;
    return after_subject ? PosTag::kVerb : PosTag::kNoun;
  }
  return PosTag::kNoun;
}

std::vector<PosTag> RuleTagger::tag(std::span<const std::string> tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(to_lower_ascii(t));

  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& w = lower[i];
    const PosTag previous = i == 0 ? PosTag::kPunct : tags.back();
    const bool sentence_initial = i == 0 || previous == PosTag::kPunct;
    auto it = lexicon_.find(w);
    PosTag tag;
    if (w == "to") {
      // Infinitival "to" before a known verb, preposition otherwise.
      auto next = i + 1 < tokens.size() ? lexicon_.find(lower[i + 1]) : lexicon_.end();
      tag = next != lexicon_.end() && next->second == PosTag::kVerb ? PosTag::kPart : PosTag::kAdp;
    } else if (w == "that") {
      if (previous == PosTag::kVerb) {
        tag = PosTag::kSconj;
      } else if (i + 1 < tokens.size() && lexicon_.find(lower[i + 1]) == lexicon_.end() &&
                 has_alpha(lower[i + 1])) {
        tag = PosTag::kDet;
      } else {
        tag = PosTag::kPron;
      }
    } else if (it != lexicon_.end()) {
      tag = it->second;
    } else {
      tag = guess(tokens[i], w, sentence_initial, previous);
      const std::string_view prev_word = i == 0 ? std::string_view{} : lower[i - 1];
      if (tag == PosTag::kNoun && i > 0 &&
          (subject_pronouns().contains(prev_word) || modals().contains(prev_word) ||
           previous == PosTag::kPart)) {
        tag = PosTag::kVerb;
      }
    }
    tags.push_back(tag);
  }
  return tags;
}

}  // namespace detox
