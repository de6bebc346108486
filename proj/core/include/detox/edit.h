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

#ifndef DETOX_EDIT_H_
#define DETOX_EDIT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "detox/corpus.h"
#include "detox/error.h"
#include "detox/generate.h"
#include "detox/lm.h"
#include "detox/postag.h"
#include "detox/remote.h"
#include "detox/retrieve.h"

namespace detox {

namespace internal {
class JsonClient;
}

struct EditPair {
  Tokens source;  // generated candidate
  Tokens target;  // original non-offensive sentence
  bool operator==(const EditPair&) const = default;
};

enum class EditorMode { kIdentity, kRemote };

std::string_view editor_mode_name(EditorMode mode);
EditorMode parse_editor_mode(std::string_view name);

struct EditorConfig {
  EditorMode mode = EditorMode::kIdentity;
  std::optional<RemoteEndpoint> endpoint;
  int beam_size = 5;
  size_t max_len = 30;
};

class Editor {
 public:
  virtual ~Editor() = default;
  virtual Tokens edit(std::span<const std::string> tokens) const = 0;
};

class IdentityEditor final : public Editor {
 public:
  Tokens edit(std::span<const std::string> tokens) const override {
    return Tokens(tokens.begin(), tokens.end());
  }
};

// POST /edit {"tokens", "beam_size", "max_len"} -> {"tokens"}.
class RemoteEditor final : public Editor {
 public:
  RemoteEditor(RemoteEndpoint endpoint, int beam_size, size_t max_len);
  ~RemoteEditor() override;
  Tokens edit(std::span<const std::string> tokens) const override;

 private:
  std::unique_ptr<internal::JsonClient> client_;
  int beam_size_;
  size_t max_len_;
};

// Throws kInvalidArgument for remote mode without an endpoint.
std::unique_ptr<Editor> make_editor(const EditorConfig& config);

// Raised when an editor fails part-way through a batch.
class EditError : public Error {
 public:
  EditError(ErrorCode code, const std::string& message, size_t completed)
      : Error(code, message), completed_(completed) {}
  size_t completed() const { return completed_; }

 private:
  size_t completed_;
};

// One edited sequence per candidate, in input order. Candidates must be
// non-empty.
std::vector<Tokens> edit_candidates(std::span<const Tokens> candidates, const Editor& editor);

struct SynthesisHandles {
  const Tagger* tagger = nullptr;
  const PosIndex* index = nullptr;
  const MaskFiller* filler = nullptr;
  const RestrictedVocab* vocab = nullptr;
  GenerationCaps caps;
  size_t k = 10;
  size_t jobs = 1;
};

struct SynthesisStats {
  size_t corpus_size = 0;
  size_t english = 0;
  size_t sampled = 0;
  size_t pairs = 0;
  size_t identical_dropped = 0;
};

// Samples min(sample_n, |English sentences|) sentences with `seed`, retrieves
// templates for each with its own sequence excluded, generates candidates and
// pairs every candidate differing from the original with that original.
std::vector<EditPair> synthesize_edit_corpus(std::span<const LabeledSentence> corpus,
                                             size_t sample_n, uint64_t seed,
                                             const SynthesisHandles& handles,
                                             SynthesisStats* stats = nullptr);

// TSV: space-joined source, TAB, space-joined target.
void write_edit_pairs(std::ostream& out, std::span<const EditPair> pairs);
std::vector<EditPair> read_edit_pairs(std::istream& in);
void write_edit_pairs_file(const std::filesystem::path& path, std::span<const EditPair> pairs);
std::vector<EditPair> read_edit_pairs_file(const std::filesystem::path& path);

}  // namespace detox

#endif  // DETOX_EDIT_H_
