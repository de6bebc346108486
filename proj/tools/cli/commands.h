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


#ifndef DETOX_TOOLS_CLI_COMMANDS_H_
#define DETOX_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detox/corpus.h"
#include "detox/edit.h"
#include "detox/generate.h"
#include "detox/metrics.h"
#include "detox/pipeline.h"
#include "detox/select.h"

namespace detox::cli {

namespace fs = std::filesystem;

// Thrown for invalid command-line usage; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Remote service URLs; unset means the built-in implementation.
struct RemoteOptions {
  std::optional<std::string> tagger_url;
  std::optional<std::string> filler_url;
  std::optional<std::string> scorer_url;
  int timeout_ms = 10000;
};

// Selects a subset of a corpus file by split name.
struct CorpusSelection {
  fs::path corpus;
  std::optional<fs::path> splits;
  std::string split = "train";
};

struct BuildOptions {
  fs::path input;  // raw comments, one per line
  fs::path vocab;
  fs::path out_dir;
  std::optional<fs::path> filters;
  LengthBounds bounds;
  SplitProportions proportions;
  std::optional<size_t> subsample_nonoffensive;
  uint64_t seed = 0;
  size_t jobs = 1;
  RemoteOptions remote;
};

struct IndexOptions {
  CorpusSelection source;
  fs::path out_dir;
};

struct TrainLmOptions {
  CorpusSelection source;
  fs::path out;
  int order = 3;
  double discount = 0.75;
};

struct SynthOptions {
  CorpusSelection source;
  fs::path vocab;
  fs::path index;
  fs::path lm;
  fs::path out;
  size_t sample_n = 60000;
  uint64_t seed = 0;
  size_t k = 10;
  GenerationCaps caps;
  size_t jobs = 1;
  RemoteOptions remote;
};

// Input sentences: a corpus JSON-lines file (".jsonl", optionally narrowed
// by a split manifest) or plain text with one sentence per line.
struct InputOptions {
  fs::path input;
  std::optional<fs::path> splits;
  std::string split = "test";
};

struct TransferOptions {
  InputOptions input;
  fs::path vocab;
  fs::path index;
  fs::path lm;
  std::optional<fs::path> out;
  Variant variant = Variant::kRgs;
  EditorConfig editor;
  bool editor_fallback_identity = false;
  size_t k = 10;
  GenerationCaps caps;
  size_t jobs = 1;
  RemoteOptions remote;
};

struct RemOptions {
  InputOptions input;
  fs::path vocab;
  std::optional<fs::path> out;
};

struct EvaluateOptions {
  fs::path results;
  fs::path vocab;
  std::optional<fs::path> lm;
  std::optional<fs::path> embeddings;
  std::optional<fs::path> json_out;
  std::optional<fs::path> tsv_out;
  bool rem = false;  // score remove_restricted(source) instead of the outputs
  bool include_passthrough = false;
  RemoteOptions remote;
};

// Each command writes its artifacts atomically and returns a JSON summary.
nlohmann::ordered_json cmd_build(const BuildOptions& opts);
nlohmann::ordered_json cmd_index(const IndexOptions& opts);
nlohmann::ordered_json cmd_train_lm(const TrainLmOptions& opts);
nlohmann::ordered_json cmd_synth_edit(const SynthOptions& opts);

// Results are written to opts.out, or returned as lines when it is unset.
struct TransferOutput {
  std::vector<TransferResult> results;
  nlohmann::ordered_json summary;
};
TransferOutput cmd_transfer(const TransferOptions& opts);
TransferOutput cmd_rem_baseline(const RemOptions& opts);

EvalReport cmd_evaluate(const EvaluateOptions& opts);

std::vector<LabeledSentence> load_input_sentences(const InputOptions& opts,
                                                  const RestrictedVocab& vocab);
std::vector<TransferResult> read_transfer_results(const fs::path& path);

// Writes via a sibling temporary file and a rename.
void write_file_atomic(const fs::path& path, const std::string& contents);

}  // namespace detox::cli

#endif  // DETOX_TOOLS_CLI_COMMANDS_H_
