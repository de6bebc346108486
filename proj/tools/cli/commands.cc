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


#include "commands.h"

#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include <unistd.h>

#include "detox/dataset.h"
#include "detox/error.h"
#include "detox/lm.h"
#include "detox/ngram.h"
#include "detox/parallel.h"
#include "detox/postag.h"
#include "detox/retrieve.h"

namespace detox::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kSplitsFormat = "detox-splits";
constexpr int kSplitsVersion = 1;

RemoteEndpoint endpoint_for(const std::string& url, const RemoteOptions& remote) {
  RemoteEndpoint ep;
  ep.url = url;
  ep.timeout = std::chrono::milliseconds(remote.timeout_ms);
  return ep;
}

std::unique_ptr<Tagger> make_tagger(const RemoteOptions& remote) {
  if (remote.tagger_url) return std::make_unique<RemoteTagger>(endpoint_for(*remote.tagger_url, remote));
  return std::make_unique<RuleTagger>();
}

// Language-model handles; the n-gram model backs whichever side is local.
struct LmHandles {
  std::shared_ptr<const NgramModel> model;
  std::unique_ptr<MaskFiller> filler;
  std::unique_ptr<Scorer> remote_scorer;

  const Scorer* scorer() const {
    return remote_scorer ? remote_scorer.get() : static_cast<const Scorer*>(model.get());
  }
};

LmHandles load_lm(const fs::path& lm_path, const RemoteOptions& remote, bool need_filler,
                  bool need_scorer) {
  LmHandles h;
  const bool local_filler = need_filler && !remote.filler_url;
  const bool local_scorer = need_scorer && !remote.scorer_url;
  if (local_filler || local_scorer) {
    if (lm_path.empty()) throw UsageError("--lm is required unless remote filler and scorer are set");
    h.model = std::make_shared<const NgramModel>(NgramModel::load_file(lm_path));
  }
  if (need_filler) {
    if (remote.filler_url) {
      h.filler = std::make_unique<RemoteFiller>(endpoint_for(*remote.filler_url, remote));
    } else {
      h.filler = std::make_unique<NgramFiller>(h.model);
    }
  }
  if (need_scorer && remote.scorer_url) {
    h.remote_scorer = std::make_unique<RemoteScorer>(endpoint_for(*remote.scorer_url, remote));
  }
  return h;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParse, path.string() + ": not a JSON object");
  }
  return j;
}

std::unordered_set<std::string> split_ids(const fs::path& manifest_path, const std::string& split) {
  json m = read_json_file(manifest_path);
  if (m.value("format", "") != kSplitsFormat) {
    throw Error(ErrorCode::kParse, manifest_path.string() + ": not a split manifest");
  }
  if (m.value("version", -1) != kSplitsVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                manifest_path.string() + ": unsupported split manifest version");
  }
  if (split != "train" && split != "validation" && split != "test") {
    throw UsageError("unknown split '" + split + "' (expected train, validation or test)");
  }
  std::unordered_set<std::string> ids;
  try {
    for (const auto& id : m.at(split)) ids.insert(id.get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, manifest_path.string() + ": " + e.what());
  }
  return ids;
}

std::vector<TaggedSentence> load_selection(const CorpusSelection& sel) {
  auto sentences = read_corpus_file(sel.corpus);
  if (!sel.splits) return sentences;
  const auto ids = split_ids(*sel.splits, sel.split);
  std::erase_if(sentences, [&](const TaggedSentence& s) { return !ids.contains(s.base.id); });
  return sentences;
}

std::vector<TaggedSentence> non_offensive(std::vector<TaggedSentence> sentences,
                                          const RestrictedVocab* vocab) {
  std::erase_if(sentences, [&](const TaggedSentence& s) {
    const Label label = vocab ? label_for(*vocab, s.tokens()) : s.base.label;
    return label == Label::kOffensive;
  });
  return sentences;
}

std::vector<std::string> ids_of(std::span<const LabeledSentence> sentences) {
  std::vector<std::string> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) ids.push_back(s.id);
  return ids;
}

// Saves into a sibling directory first so a failed save leaves no partial index.
void save_index_atomic(const PosIndex& index, const fs::path& dir) {
  const fs::path tmp = dir.string() + ".partial-" + std::to_string(::getpid());
  fs::remove_all(tmp);
  try {
    index.save(tmp);
    fs::remove_all(dir);
    fs::rename(tmp, dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
}

std::string results_text(std::span<const TransferResult> results) {
  std::string text;
  for (const auto& r : results) {
    text += transfer_result_line(r);
    text += '\n';
  }
  return text;
}

json transfer_summary(std::string_view command, std::span<const TransferResult> results,
                      const RestrictedVocab& vocab) {
  size_t offensive = 0, passthrough = 0, fallback = 0;
  std::vector<Tokens> outputs;
  for (const auto& r : results) {
    if (r.passthrough) {
      ++passthrough;
      continue;
    }
    ++offensive;
    if (r.fallback_used) ++fallback;
    outputs.push_back(r.output);
  }
  json s;
  s["command"] = command;
  s["inputs"] = results.size();
  s["offensive"] = offensive;
  s["passthrough"] = passthrough;
  s["fallback_used"] = fallback;
  if (!outputs.empty()) s["accuracy"] = transfer_accuracy(outputs, vocab);
  return s;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".partial-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error(ErrorCode::kIo, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot move output into place at " + path.string() + ": " +
                                    ec.message());
  }
}

json cmd_build(const BuildOptions& opts) {
  const RestrictedVocab vocab = load_restricted_vocab(opts.vocab);
  std::optional<NoiseFilter> custom;
  if (opts.filters) custom = NoiseFilter::load(*opts.filters);
  const NoiseFilter& filter = custom ? *custom : NoiseFilter::defaults();
  if (opts.bounds.min_len < 1 || opts.bounds.max_len < opts.bounds.min_len) {
    throw UsageError("token bounds require 1 <= min <= max");
  }

  std::ifstream in(opts.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read input " + opts.input.string());

  json dropped_noise = json::object();
  for (const auto& rule : filter.rules()) dropped_noise[rule.name] = 0;
  size_t lines = 0, sentence_count = 0, dropped_length = 0;
  std::vector<LabeledSentence> kept;
  for (std::string line; std::getline(in, line);) {
    ++lines;
    const auto sentences = split_sentences(line);
    for (size_t k = 0; k < sentences.size(); ++k) {
      ++sentence_count;
      if (auto rule = filter.match(sentences[k])) {
        dropped_noise[std::string(*rule)] = dropped_noise[std::string(*rule)].get<size_t>() + 1;
        continue;
      }
      Tokens tokens = tokenize(sentences[k]);
      if (tokens.size() < opts.bounds.min_len || tokens.size() > opts.bounds.max_len) {
        ++dropped_length;
        continue;
      }
      kept.push_back(make_labeled("c" + std::to_string(lines) + "-s" + std::to_string(k),
                                  std::move(tokens), vocab));
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptyAfterFilter,
                "no sentence of " + opts.input.string() + " survived filtering");
  }

  const auto tagger = make_tagger(opts.remote);
  std::vector<TaggedSentence> tagged(kept.size());
  parallel_for(kept.size(), opts.jobs,
               [&](size_t i) { tagged[i] = tag_and_mark(kept[i], *tagger, vocab); });

  const CorpusSplits splits =
      build_splits(kept, opts.proportions, opts.subsample_nonoffensive, opts.seed);

  size_t offensive = 0;
  for (const auto& s : kept) offensive += s.label == Label::kOffensive;

  json manifest;
  manifest["format"] = kSplitsFormat;
  manifest["version"] = kSplitsVersion;
  manifest["seed"] = opts.seed;
  manifest["proportions"] = {{"train", opts.proportions.train},
                             {"validation", opts.proportions.validation},
                             {"test", opts.proportions.test}};
  manifest["subsample_nonoffensive_to"] =
      opts.subsample_nonoffensive ? json(*opts.subsample_nonoffensive) : json(nullptr);
  manifest["train"] = ids_of(splits.train);
  manifest["validation"] = ids_of(splits.validation);
  manifest["test"] = ids_of(splits.test);

  json summary;
  summary["command"] = "build";
  summary["lines"] = lines;
  summary["sentences"] = sentence_count;
  summary["dropped_noise"] = dropped_noise;
  summary["dropped_length"] = dropped_length;
  summary["kept"] = kept.size();
  summary["offensive"] = offensive;
  summary["non_offensive"] = kept.size() - offensive;
  summary["train"] = splits.train.size();
  summary["validation"] = splits.validation.size();
  summary["test"] = splits.test.size();
  summary["seed"] = opts.seed;

  std::ostringstream corpus;
  write_corpus(corpus, tagged);
  fs::create_directories(opts.out_dir);
  write_file_atomic(opts.out_dir / "corpus.jsonl", corpus.str());
  write_file_atomic(opts.out_dir / "splits.json", manifest.dump(2) + "\n");
  write_file_atomic(opts.out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_index(const IndexOptions& opts) {
  const auto clean = non_offensive(load_selection(opts.source), nullptr);
  std::vector<PosSequence> seqs;
  seqs.reserve(clean.size());
  for (const auto& s : clean) {
    if (s.tags.size() != s.tokens().size()) {
      throw Error(ErrorCode::kCorruptCorpus, "sentence '" + s.base.id + "' has no POS tags");
    }
    seqs.emplace_back(s.tags);
  }
  const PosIndex index = PosIndex::build(seqs);
  save_index_atomic(index, opts.out_dir);
  json summary;
  summary["command"] = "index";
  summary["sentences"] = seqs.size();
  summary["documents"] = index.doc_count();
  return summary;
}

json cmd_train_lm(const TrainLmOptions& opts) {
  const auto clean = non_offensive(load_selection(opts.source), nullptr);
  std::vector<Tokens> sentences;
  sentences.reserve(clean.size());
  for (const auto& s : clean) sentences.push_back(s.tokens());
  NgramOptions lm_opts;
  lm_opts.order = opts.order;
  lm_opts.discount = opts.discount;
  const NgramModel model = NgramModel::train(sentences, lm_opts);
  std::ostringstream buf;
  model.save(buf);
  write_file_atomic(opts.out, buf.str());
  json summary;
  summary["command"] = "train-lm";
  summary["sentences"] = sentences.size();
  summary["order"] = opts.order;
  summary["vocabulary"] = model.predictable_count();
  return summary;
}

json cmd_synth_edit(const SynthOptions& opts) {
  const RestrictedVocab vocab = load_restricted_vocab(opts.vocab);
  const auto clean = non_offensive(load_selection(opts.source), &vocab);
  std::vector<LabeledSentence> corpus;
  corpus.reserve(clean.size());
  for (const auto& s : clean) corpus.push_back(s.base);

  const PosIndex index = PosIndex::load(opts.index);
  const LmHandles lm = load_lm(opts.lm, opts.remote, /*need_filler=*/true, /*need_scorer=*/false);
  const auto tagger = make_tagger(opts.remote);

  SynthesisHandles handles;
  handles.tagger = tagger.get();
  handles.index = &index;
  handles.filler = lm.filler.get();
  handles.vocab = &vocab;
  handles.caps = opts.caps;
  handles.k = opts.k;
  handles.jobs = opts.jobs;
  SynthesisStats stats;
  const auto pairs = synthesize_edit_corpus(corpus, opts.sample_n, opts.seed, handles, &stats);

  std::ostringstream buf;
  write_edit_pairs(buf, pairs);
  write_file_atomic(opts.out, buf.str());

  json summary;
  summary["command"] = "synth-edit";
  summary["corpus_size"] = stats.corpus_size;
  summary["english"] = stats.english;
  summary["sampled"] = stats.sampled;
  summary["pairs"] = stats.pairs;
  summary["identical_dropped"] = stats.identical_dropped;
  summary["pairs_per_sentence"] =
      stats.sampled ? static_cast<double>(stats.pairs) / static_cast<double>(stats.sampled) : 0.0;
  return summary;
}

std::vector<LabeledSentence> load_input_sentences(const InputOptions& opts,
                                                  const RestrictedVocab& vocab) {
  std::vector<LabeledSentence> out;
  if (opts.input.extension() == ".jsonl") {
    CorpusSelection sel{opts.input, opts.splits, opts.split};
    for (auto& s : load_selection(sel)) {
      out.push_back(make_labeled(std::move(s.base.id), std::move(s.base.tokens), vocab));
    }
    return out;
  }
  if (opts.splits) throw UsageError("--splits applies only to .jsonl corpus input");
  std::ifstream in(opts.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read input " + opts.input.string());
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    out.push_back(make_labeled("l" + std::to_string(line_no), tokenize(text), vocab));
  }
  return out;
}

TransferOutput cmd_transfer(const TransferOptions& opts) {
  if (opts.k < 1) throw UsageError("--k must be at least 1");
  const RestrictedVocab vocab = load_restricted_vocab(opts.vocab);
  const auto sentences = load_input_sentences(opts.input, vocab);
  const PosIndex index = PosIndex::load(opts.index);
  const LmHandles lm = load_lm(opts.lm, opts.remote, /*need_filler=*/true, /*need_scorer=*/true);
  const auto tagger = make_tagger(opts.remote);
  std::unique_ptr<Editor> editor;
  if (opts.variant == Variant::kRges) {
    if (opts.editor.mode == EditorMode::kRemote && !opts.editor.endpoint) {
      throw UsageError("--editor remote requires --editor-url");
    }
    editor = make_editor(opts.editor);
  }

  PipelineHandles handles{tagger.get(), &index, lm.filler.get(), lm.scorer(), &vocab,
                          editor.get()};
  PipelineOptions popts;
  popts.k = opts.k;
  popts.caps = opts.caps;
  popts.editor_fallback_identity = opts.editor_fallback_identity;
  const TransferPipeline pipeline(handles, popts);

  TransferOutput result;
  result.results = pipeline.transfer_all(sentences, opts.variant, opts.jobs);
  if (opts.out) write_file_atomic(*opts.out, results_text(result.results));
  result.summary = transfer_summary("transfer", result.results, vocab);
  result.summary["variant"] = variant_name(opts.variant);
  return result;
}

TransferOutput cmd_rem_baseline(const RemOptions& opts) {
  const RestrictedVocab vocab = load_restricted_vocab(opts.vocab);
  TransferOutput result;
  for (auto& s : load_input_sentences(opts.input, vocab)) {
    TransferResult r;
    r.passthrough = s.label != Label::kOffensive;
    r.output = r.passthrough ? s.tokens : remove_restricted(s.tokens, vocab);
    r.source = std::move(s);
    result.results.push_back(std::move(r));
  }
  if (opts.out) write_file_atomic(*opts.out, results_text(result.results));
  result.summary = transfer_summary("rem-baseline", result.results, vocab);
  return result;
}

std::vector<TransferResult> read_transfer_results(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read results " + path.string());
  std::vector<TransferResult> out;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(parse_transfer_result(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

EvalReport cmd_evaluate(const EvaluateOptions& opts) {
  const RestrictedVocab vocab = load_restricted_vocab(opts.vocab);
  const auto results = read_transfer_results(opts.results);
  std::vector<Tokens> outputs, sources;
  for (const auto& r : results) {
    if (r.passthrough && !opts.include_passthrough) continue;
    sources.push_back(r.source.tokens);
    outputs.push_back(opts.rem ? remove_restricted(r.source.tokens, vocab) : r.output);
  }
  if (outputs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, opts.results.string() + ": no results to evaluate");
  }

  std::optional<LmHandles> lm;
  if (opts.lm || opts.remote.scorer_url) {
    lm = load_lm(opts.lm.value_or(fs::path()), opts.remote, /*need_filler=*/false,
                 /*need_scorer=*/true);
  }
  std::optional<EmbeddingTable> embeddings;
  if (opts.embeddings) embeddings = EmbeddingTable::load(*opts.embeddings);

  EvalInputs inputs;
  inputs.outputs = outputs;
  inputs.sources = sources;
  inputs.vocab = &vocab;
  inputs.scorer = lm ? lm->scorer() : nullptr;
  inputs.embeddings = embeddings ? &*embeddings : nullptr;
  const EvalReport report = evaluate(inputs);

  if (opts.json_out) write_file_atomic(*opts.json_out, report_json(report) + "\n");
  if (opts.tsv_out) {
    write_file_atomic(*opts.tsv_out, report_tsv_header() + "\n" + report_tsv_row(report) + "\n");
  }
  return report;
}

}  // namespace detox::cli
