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


#include "app.h"

#include <chrono>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.h"
#include "detox/error.h"
#include "detox/log.h"

namespace detox::cli {
namespace {

using json = nlohmann::ordered_json;

// Options shared by several subcommands. They live on the top-level app so a
// config file can set them as plain top-level keys.
struct Common {
  std::string vocab;
  std::string corpus;
  std::optional<std::string> splits;
  std::optional<std::string> split;
  std::string index;
  std::string lm;
  std::optional<std::string> embeddings;
  uint64_t seed = 0;
  size_t jobs = 1;
  size_t k = 10;
  GenerationCaps caps;
  std::string editor = "identity";
  std::optional<std::string> editor_url;
  int beam_size = 5;
  size_t max_len = 30;
  bool editor_fallback_identity = false;
  RemoteOptions remote;
};

struct Specific {
  std::string input;
  std::string out;
  std::optional<std::string> filters;
  LengthBounds bounds;
  SplitProportions proportions;
  std::optional<size_t> subsample;
  int order = 3;
  double discount = 0.75;
  size_t sample_n = 60000;
  std::string variant;
  std::string results;
  std::optional<std::string> json_out;
  std::optional<std::string> tsv_out;
  bool rem = false;
  bool include_passthrough = false;
};

std::string require(const std::string& value, std::string_view flag, std::string_view command) {
  if (value.empty()) {
    throw UsageError(std::string(flag) + " is required for " + std::string(command));
  }
  return value;
}

std::optional<fs::path> opt_path(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return fs::path(*s);
}

CorpusSelection selection(const Common& c, std::string_view command) {
  return CorpusSelection{require(c.corpus, "--corpus", command), opt_path(c.splits),
                         c.split.value_or("train")};
}

InputOptions input_options(const Common& c, const Specific& s) {
  return InputOptions{s.input, opt_path(c.splits), c.split.value_or("test")};
}

void emit(json line) { emit_log_line(line.dump()); }

void emit_usage_error(const std::string& message, const CLI::App& app) {
  json line;
  line["event"] = "usage_error";
  line["message"] = message;
  line["usage"] = app.help();
  emit(std::move(line));
}

class SinkScope {
 public:
  explicit SinkScope(std::ostream& err) {
    set_log_sink([&err](const std::string& line) { err << line << '\n' << std::flush; });
  }
  ~SinkScope() {
    set_log_sink([](const std::string& line) { std::cerr << line << '\n'; });
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  SinkScope sink(err);
  Common c;
  Specific s;

  CLI::App app{"Rewrites sentences holding restricted words and evaluates the rewrites."};
  app.name("detox");
  app.set_config("--config", "", "TOML-style key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--vocab", c.vocab, "Restricted vocabulary, one word per line")
      ->check(CLI::ExistingFile);
  app.add_option("--corpus", c.corpus, "Corpus JSON-lines file from build")
      ->check(CLI::ExistingFile);
  app.add_option("--splits", c.splits, "Split manifest from build")->check(CLI::ExistingFile);
  app.add_option("--split", c.split, "Split name: train, validation or test");
  app.add_option("--index", c.index, "Index directory")->check(CLI::ExistingDirectory);
  app.add_option("--lm", c.lm, "N-gram model file")->check(CLI::ExistingFile);
  app.add_option("--embeddings", c.embeddings, "Word vectors, one 'word v1 ... vd' per line")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--k", c.k, "Templates retrieved per sentence")->check(CLI::PositiveNumber);
  app.add_option("--per-tag-cap", c.caps.per_tag, "Assignments kept per shared tag");
  app.add_option("--per-template-cap", c.caps.per_template, "Candidates kept per template");
  app.add_option("--per-sentence-cap", c.caps.per_sentence, "Candidates kept per sentence");
  app.add_option("--editor", c.editor, "Editor mode")
      ->check(CLI::IsMember({"identity", "remote"}));
  app.add_option("--editor-url", c.editor_url, "Editor service base URL");
  app.add_option("--beam-size", c.beam_size, "Editor beam size")->check(CLI::PositiveNumber);
  app.add_option("--max-len", c.max_len, "Editor output length limit")->check(CLI::PositiveNumber);
  app.add_flag("--editor-fallback-identity", c.editor_fallback_identity,
               "Keep unedited candidates when the editor fails");
  app.add_option("--tagger-url", c.remote.tagger_url, "POS tagger service base URL");
  app.add_option("--filler-url", c.remote.filler_url, "Mask filler service base URL");
  app.add_option("--scorer-url", c.remote.scorer_url, "Scorer service base URL");
  app.add_option("--timeout-ms", c.remote.timeout_ms, "Per-request timeout for remote services")
      ->check(CLI::PositiveNumber);

  auto* build = app.add_subcommand("build", "Extract, label, tag and split raw comments");
  build->add_option("--input", s.input, "Raw comments, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", s.out, "Output directory")->required();
  build->add_option("--filters", s.filters, "Noise filter rules (name<TAB>regex)")
      ->check(CLI::ExistingFile);
  build->add_option("--min-tokens", s.bounds.min_len, "Shortest sentence kept");
  build->add_option("--max-tokens", s.bounds.max_len, "Longest sentence kept");
  build->add_option("--train-frac", s.proportions.train, "Training proportion");
  build->add_option("--validation-frac", s.proportions.validation, "Validation proportion");
  build->add_option("--test-frac", s.proportions.test, "Test proportion");
  build->add_option("--subsample", s.subsample, "Downsample non-offensive sentences to this count");

  auto* index = app.add_subcommand("index", "Build the POS retrieval index");
  index->add_option("--out", s.out, "Output directory")->required();

  auto* train_lm = app.add_subcommand("train-lm", "Train the n-gram language model");
  train_lm->add_option("--out", s.out, "Model file")->required();
  train_lm->add_option("--order", s.order, "N-gram order")->check(CLI::Range(1, 8));
  train_lm->add_option("--discount", s.discount, "Absolute discount")->check(CLI::Range(0.0, 1.0));

  auto* synth = app.add_subcommand("synth-edit", "Synthesize editor training pairs");
  synth->add_option("--out", s.out, "Pairs TSV file")->required();
  synth->add_option("--sample-n", s.sample_n, "Sentences sampled");

  auto* transfer = app.add_subcommand("transfer", "Rewrite offensive sentences");
  transfer->add_option("variant", s.variant, "rgs or rges")
      ->required()
      ->check(CLI::IsMember({"rgs", "rges"}));
  transfer->add_option("--input", s.input, "Sentences: corpus .jsonl or one per line")
      ->required()
      ->check(CLI::ExistingFile);
  transfer->add_option("--out", s.out, "Results file; stdout when omitted");

  auto* rem = app.add_subcommand("rem-baseline", "Delete restricted words from each sentence");
  rem->add_option("--input", s.input, "Sentences: corpus .jsonl or one per line")
      ->required()
      ->check(CLI::ExistingFile);
  rem->add_option("--out", s.out, "Results file; stdout when omitted");

  auto* eval = app.add_subcommand("evaluate", "Score transfer results");
  eval->add_option("--results", s.results, "Results JSON-lines file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--json-out", s.json_out, "Also write the JSON report here");
  eval->add_option("--tsv-out", s.tsv_out, "Also write the TSV row here");
  eval->add_flag("--rem", s.rem, "Score the removal baseline of each source instead");
  eval->add_flag("--include-passthrough", s.include_passthrough,
                 "Also score non-offensive inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    emit_usage_error(e.what(), subs.empty() ? app : *subs.front());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const auto started = std::chrono::steady_clock::now();
  emit(json{{"event", "command_start"}, {"command", command}});
  try {
    if (sub == build) {
      BuildOptions o;
      o.input = s.input;
      o.vocab = require(c.vocab, "--vocab", command);
      o.out_dir = s.out;
      o.filters = opt_path(s.filters);
      o.bounds = s.bounds;
      o.proportions = s.proportions;
      o.subsample_nonoffensive = s.subsample;
      o.seed = c.seed;
      o.jobs = c.jobs;
      o.remote = c.remote;
      out << cmd_build(o).dump() << '\n';
    } else if (sub == index) {
      out << cmd_index(IndexOptions{selection(c, command), s.out}).dump() << '\n';
    } else if (sub == train_lm) {
      out << cmd_train_lm(TrainLmOptions{selection(c, command), s.out, s.order, s.discount}).dump()
          << '\n';
    } else if (sub == synth) {
      SynthOptions o;
      o.source = selection(c, command);
      o.vocab = require(c.vocab, "--vocab", command);
      o.index = require(c.index, "--index", command);
      o.lm = c.lm;
      o.out = s.out;
      o.sample_n = s.sample_n;
      o.seed = c.seed;
      o.k = c.k;
      o.caps = c.caps;
      o.jobs = c.jobs;
      o.remote = c.remote;
      out << cmd_synth_edit(o).dump() << '\n';
    } else if (sub == transfer) {
      TransferOptions o;
      o.input = input_options(c, s);
      o.vocab = require(c.vocab, "--vocab", command);
      o.index = require(c.index, "--index", command);
      o.lm = c.lm;
      if (!s.out.empty()) o.out = s.out;
      o.variant = parse_variant(s.variant);
      o.editor.mode = parse_editor_mode(c.editor);
      if (c.editor_url) {
        RemoteEndpoint ep;
        ep.url = *c.editor_url;
        ep.timeout = std::chrono::milliseconds(c.remote.timeout_ms);
        o.editor.endpoint = ep;
      }
      o.editor.beam_size = c.beam_size;
      o.editor.max_len = c.max_len;
      o.editor_fallback_identity = c.editor_fallback_identity;
      o.k = c.k;
      o.caps = c.caps;
      o.jobs = c.jobs;
      o.remote = c.remote;
      const auto result = cmd_transfer(o);
      if (o.out) {
        out << result.summary.dump() << '\n';
      } else {
        for (const auto& r : result.results) out << transfer_result_line(r) << '\n';
        emit(json{{"event", "summary"}, {"summary", result.summary}});
      }
    } else if (sub == rem) {
      RemOptions o;
      o.input = input_options(c, s);
      o.vocab = require(c.vocab, "--vocab", command);
      if (!s.out.empty()) o.out = s.out;
      const auto result = cmd_rem_baseline(o);
      if (o.out) {
        out << result.summary.dump() << '\n';
      } else {
        for (const auto& r : result.results) out << transfer_result_line(r) << '\n';
      }
    } else if (sub == eval) {
      EvaluateOptions o;
      o.results = s.results;
      o.vocab = require(c.vocab, "--vocab", command);
      if (!c.lm.empty()) o.lm = c.lm;
      o.embeddings = opt_path(c.embeddings);
      o.json_out = opt_path(s.json_out);
      o.tsv_out = opt_path(s.tsv_out);
      o.rem = s.rem;
      o.include_passthrough = s.include_passthrough;
      o.remote = c.remote;
      const EvalReport report = cmd_evaluate(o);
      out << report_json(report) << '\n'
          << report_tsv_header() << '\n'
          << report_tsv_row(report) << '\n';
    }
  } catch (const UsageError& e) {
    emit_usage_error(e.what(), *sub);
    return kExitUsage;
  } catch (const Error& e) {
    emit(json{{"event", "error"},
              {"command", command},
              {"code", error_code_name(e.code())},
              {"message", e.what()}});
    return kExitFailure;
  } catch (const std::exception& e) {
    emit(json{{"event", "error"}, {"command", command}, {"code", "Internal"}, {"message", e.what()}});
    return kExitFailure;
  }
  out.flush();
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  emit(json{{"event", "command_done"}, {"command", command}, {"elapsed_ms", elapsed.count()}});
  return kExitOk;
}

}  // namespace detox::cli
