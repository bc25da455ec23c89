/*
 * Copyright 2026 The SpecDet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "specdet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "specdet/collector.hpp"
#include "specdet/corpus.hpp"
#include "specdet/cps.hpp"
#include "specdet/embedding.hpp"
#include "specdet/error.hpp"
#include "specdet/eval.hpp"
#include "specdet/features.hpp"
#include "specdet/ml/model.hpp"
#include "specdet/report.hpp"
#include "specdet/text_util.hpp"

namespace specdet::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err, const Globals& g) : out_(out), err_(err), g_(g) {}

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  std::uint64_t seed(std::uint64_t fallback) const { return g_.seed_given ? g_.seed : fallback; }

  template <typename... Args>
  void log(const Args&... args) {
    if (g_.quiet) return;
    (err_ << ... << args);
    err_ << '\n';
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  const Globals& g_;
};

void check_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw UsageError("--threshold must lie in [0, 1]");
}

// Verdicts go to --out when given, standard output otherwise.
void emit(Context& ctx, const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    ctx.out() << text;
  } else {
    write_file(out_path, text);
  }
}

void verdict_line(std::ostringstream& os, const std::string& subject, double score,
                  double threshold) {
  os << quote_csv_field(subject) << ',' << format_double(score) << ','
     << (score >= threshold ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> dirs;
  std::vector<int> labels;
  std::string out;
};

void ingest(Context& ctx, const IngestArgs& a) {
  if (a.dirs.size() != a.labels.size()) {
    throw UsageError("every --dir needs a matching --label");
  }
  corpus::CorpusManifest manifest;
  for (std::size_t i = 0; i < a.dirs.size(); ++i) {
    corpus::IngestLog log;
    auto records = corpus::ingest_gadget_dir(a.dirs[i], a.labels[i], &log);
    for (const auto& w : log.warnings) ctx.log("warning: ", w);
    ctx.log(a.dirs[i], ": ", records.size(), " gadgets, label ", a.labels[i]);
    manifest.append(std::move(records));
  }
  corpus::save_manifest(a.out, manifest);
  ctx.log("wrote ", manifest.size(), " records to ", a.out);
}

struct EmbedArgs {
  std::string corpus;
  std::string out;
  embedding::EmbeddingConfig config;
  int min_count = 1;
};

void train_embedding(Context& ctx, EmbedArgs a) {
  a.config.seed = ctx.seed(a.config.seed);
  a.config.validate();
  if (a.min_count < 1) throw UsageError("--min-count must be at least 1");
  const auto corpus = corpus::load_manifest(a.corpus);
  const auto vocab = embedding::build_vocab(corpus, a.min_count);
  embedding::SkipgramStats stats;
  const auto emb = embedding::train_skipgram(corpus, vocab, a.config, &stats);
  for (std::size_t e = 0; e < stats.epoch_loss.size(); ++e) {
    ctx.log("epoch ", e + 1, " loss ", format_fixed(stats.epoch_loss[e], 6));
  }
  embedding::save_embedding(a.out, emb);
  ctx.log("vocabulary ", vocab.size(), ", wrote ", a.out);
}

struct EncodeArgs {
  std::string corpus;
  std::string embedding;
  std::string mode = "pooled";
  std::string out;
};

void encode(Context& ctx, const EncodeArgs& a) {
  const auto mode =
      a.mode == "sequence" ? features::FeatureSource::kSequence : features::FeatureSource::kPooled;
  const auto corpus = corpus::load_manifest(a.corpus);
  auto emb = std::make_shared<const embedding::EmbeddingMatrix>(embedding::load_embedding(a.embedding));
  auto table = features::encode_corpus(corpus, emb, mode);
  table.embedding_path = fs::absolute(a.embedding).lexically_normal();
  features::save_features(a.out, table);
  ctx.log("encoded ", table.ids.size(), " gadgets as ", table.data.schema().describe());
}

struct ModelArgs {
  bool standardize = false;
  bool no_standardize = false;
  int trees = 100;
  int cnn_epochs = 10;
  int cnn_filters = 64;
  double svc_c = 1.0;
};

// Standardization is on by default for trace features only.
ml::TrainConfig make_config(const ModelArgs& m, const features::FeatureTable& table,
                            std::uint64_t seed) {
  if (m.standardize && m.no_standardize) {
    throw UsageError("--standardize and --no-standardize are exclusive");
  }
  ml::TrainConfig c;
  c.seed = seed;
  c.standardize = m.standardize || (table.source == features::FeatureSource::kTrace && !m.no_standardize);
  c.forest.trees = m.trees;
  c.cnn.epochs = m.cnn_epochs;
  c.cnn.filters = m.cnn_filters;
  c.svc_c = m.svc_c;
  return c;
}

// Non-CNN classifiers see a sequence table through its pooled vectors.
class TableView {
 public:
  explicit TableView(const features::FeatureTable& table) : table_(table) {}

  const ml::Dataset& for_kind(ml::ClassifierKind kind) {
    if (kind == ml::ClassifierKind::kCnn || table_.data.kind() == ml::FeatureKind::kVector) {
      return table_.data;
    }
    if (!pooled_) pooled_ = features::pooled_dataset(table_);
    return *pooled_;
  }

 private:
  const features::FeatureTable& table_;
  std::optional<ml::Dataset> pooled_;
};

struct TrainArgs {
  std::string classifier;
  std::string features;
  std::string out;
  ModelArgs model;
};

void train(Context& ctx, const TrainArgs& a) {
  const auto kind = ml::parse_classifier(a.classifier);
  const auto table = features::load_features(a.features);
  TableView view(table);
  const auto& data = view.for_kind(kind);
  const auto model = ml::train(kind, data, make_config(a.model, table, ctx.seed(0)));
  ml::save_model(model, a.out);
  const auto counts = data.class_counts();
  ctx.log("trained ", ml::display_name(kind), " on ", data.size(), " examples (", counts[1],
          " positive), wrote ", a.out);
}

// ---------------------------------------------------------------------------

struct Subject {
  std::string name;
  std::vector<std::string> tokens;
};

// Symbol definitions ("main:", "victim_function:") open a new chunk;
// local labels such as ".L3:" stay inside the current one. When the file
// marks functions with ".type name, @function" only those chunks count.
std::vector<Subject> split_functions(const std::string& text, const std::string& file_name) {
  static const std::regex kLabel(R"(^\s*([A-Za-z_$][A-Za-z0-9_.$@]*):)");
  static const std::regex kType(R"(^\s*\.type\s+([^,\s]+)\s*,\s*[@%]function)");
  const auto lines = split_lines(text);
  std::set<std::string> functions;
  for (const auto& line : lines) {
    std::smatch m;
    if (std::regex_search(line, m, kType)) functions.insert(m[1].str());
  }
  std::vector<std::pair<std::string, std::string>> chunks{{file_name, ""}};
  for (const auto& line : lines) {
    std::smatch m;
    if (std::regex_search(line, m, kLabel)) chunks.emplace_back(m[1].str(), "");
    chunks.back().second += line;
    chunks.back().second += '\n';
  }
  std::vector<Subject> subjects;
  for (auto& [name, raw] : chunks) {
    if (!functions.empty() && !functions.contains(name)) continue;
    auto tokens = corpus::tokenize(corpus::preprocess(raw));
    if (tokens.empty()) continue;
    subjects.push_back({name, std::move(tokens)});
  }
  return subjects;
}

bool looks_like_manifest(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{';
}

struct ScanArgs {
  std::string model;
  std::string embedding;
  std::string input;
  double threshold = 0.5;
  std::string out;
};

void scan(Context& ctx, const ScanArgs& a) {
  check_threshold(a.threshold);
  const auto model = ml::load_model(a.model);
  const auto emb = embedding::load_embedding(a.embedding);
  const auto& schema = model.feature_schema;
  const bool sequence = schema.kind == ml::FeatureKind::kSequence;
  const ml::FeatureSchema produced{sequence ? ml::FeatureKind::kSequence : ml::FeatureKind::kVector,
                                   emb.config.dim, sequence ? emb.config.maxlen : 0};
  if (!(schema == produced)) {
    throw SchemaError("model expects " + schema.describe() + " but the embedding produces " +
                      produced.describe());
  }

  const std::string text = read_file(a.input);
  std::vector<Subject> subjects;
  if (looks_like_manifest(text)) {
    std::istringstream in(text);
    const auto manifest = corpus::read_manifest(in);
    for (const auto& r : manifest.records()) subjects.push_back({r.id, r.tokens});
  } else {
    subjects = split_functions(text, fs::path(a.input).filename().string());
  }

  std::ostringstream os;
  for (const auto& s : subjects) {
    const auto seq = embedding::encode_sequence(s.tokens, emb);
    const double score = sequence ? ml::predict_score(model, seq.matrix)
                                  : ml::predict_score(model, embedding::pool_features(seq));
    verdict_line(os, s.name, score, a.threshold);
  }
  emit(ctx, a.out, os.str());
  ctx.log("scanned ", subjects.size(), " functions");
}

struct DetectArgs {
  std::string model;
  std::string trace;
  std::string aggregate;
  double threshold = 0.5;
  std::string out;
};

void detect(Context& ctx, const DetectArgs& a) {
  check_threshold(a.threshold);
  if (!a.aggregate.empty() && a.aggregate != "pid") {
    throw UsageError("--aggregate accepts only 'pid'");
  }
  const auto model = ml::load_model(a.model);
  const ml::FeatureSchema expected{ml::FeatureKind::kVector, cps::kFeatureDim, 0};
  if (!(model.feature_schema == expected)) {
    throw SchemaError("model expects " + model.feature_schema.describe() +
                      " but traces produce " + expected.describe());
  }
  const auto samples = cps::parse_trace(a.trace);
  const auto rows = cps::derive_features(samples);

  std::ostringstream os;
  if (a.aggregate.empty()) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      const std::string subject =
          std::to_string(s.pid) + ":" + s.process_name + "@" + std::to_string(s.timestamp_us);
      verdict_line(os, subject, ml::predict_score(model, Eigen::VectorXd(rows[i].vector())), a.threshold);
    }
  } else {
    // Per-pid majority: score is the fraction of samples labeled 1 and the
    // verdict is 1 when at least half are.
    std::map<std::pair<std::int64_t, std::string>, std::pair<std::size_t, std::size_t>> votes;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto& v = votes[{samples[i].pid, samples[i].process_name}];
      v.first += ml::predict_label(model, Eigen::VectorXd(rows[i].vector()), a.threshold);
      ++v.second;
    }
    for (const auto& [key, v] : votes) {
      const double share = static_cast<double>(v.first) / static_cast<double>(v.second);
      verdict_line(os, std::to_string(key.first) + ":" + key.second, share, 0.5);
    }
  }
  emit(ctx, a.out, os.str());
  ctx.log("scored ", samples.size(), " samples");
}

struct CollectArgs {
  std::uint64_t interval_us = 1000;
  std::uint64_t duration_s = 1;
  std::vector<std::int64_t> pids;
  std::string out;
};

void collect(Context& ctx, const CollectArgs& a) {
  auto source = cps::make_perf_source(a.pids);
  std::vector<cps::CpsSample> samples;
  const auto stats = cps::collect_live(*source, a.interval_us, a.duration_s,
                                       [&](const cps::CpsSample& s) { samples.push_back(s); });
  cps::save_trace(a.out, samples);
  ctx.log("emitted ", stats.emitted, ", dropped ", stats.dropped_overflow, " (overflow) ",
          stats.dropped_backpressure, " (backpressure), missed ticks ", stats.missed_ticks);
}

struct SynthArgs {
  std::size_t benign = 1000;
  std::size_t attack = 250;
  std::string out;
};

void synth(Context& ctx, const SynthArgs& a) {
  const auto config = cps::make_synth_config(a.benign, a.attack, ctx.seed(42));
  cps::save_trace(a.out, cps::synth_trace(config));
  ctx.log("wrote ", a.benign + a.attack, " samples to ", a.out);
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string features;
  std::string classifier = "all";
  int kfold = 10;
  double beta = eval::kDefaultBeta;
  double threshold = 0.5;
  bool no_cv = false;
  std::string report;
  std::string report_csv;
  std::string roc;
  ModelArgs model;
};

eval::MetricsReport score_partition(const ml::ModelArtifact& model, const ml::Dataset& part,
                                    double threshold, double beta) {
  const auto scores = ml::predict_scores(model, part);
  return eval::metrics(eval::confusion(part.labels(), eval::threshold_labels(scores, threshold)),
                       beta);
}

void evaluate(Context& ctx, const EvaluateArgs& a) {
  check_threshold(a.threshold);
  if (!(a.beta > 0.0)) throw UsageError("--beta must be positive");
  if (!a.no_cv && a.kfold < 2) throw UsageError("--kfold must be at least 2");

  const auto table = features::load_features(a.features);
  std::vector<ml::ClassifierKind> kinds;
  if (a.classifier == "all") {
    for (auto k : ml::kAllClassifiers) {
      if (k == ml::ClassifierKind::kCnn && table.data.kind() != ml::FeatureKind::kSequence) continue;
      kinds.push_back(k);
    }
  } else {
    kinds.push_back(ml::parse_classifier(a.classifier));
  }

  const std::uint64_t seed = ctx.seed(0);
  eval::SplitSpec spec;
  spec.seed = seed;
  const auto parts = eval::split(table.data.labels(), spec);
  std::vector<std::size_t> cv_rows = parts.train;
  cv_rows.insert(cv_rows.end(), parts.val.begin(), parts.val.end());

  TableView view(table);
  std::vector<eval::EvaluationRow> rows;
  for (const auto kind : kinds) {
    const auto& data = view.for_kind(kind);
    const auto config = make_config(a.model, table, seed);
    eval::EvaluationRow row;
    row.kind = kind;
    if (!a.no_cv) {
      const auto cv = eval::kfold_cv(kind, data.subset(cv_rows), {a.kfold, seed}, config,
                                     a.threshold, a.beta);
      row.cv = cv.mean;
      row.cv->trt_s = cv.trt_s;
    }
    const auto model = ml::train(kind, data.subset(parts.train), config);
    row.validation = score_partition(model, data.subset(parts.val), a.threshold, a.beta);
    const auto test = data.subset(parts.test);
    row.test = score_partition(model, test, a.threshold, a.beta);
    row.roc = eval::roc(test.labels(), ml::predict_scores(model, test));
    row.test.prt_s = eval::time_prediction(model, test);
    ctx.log(ml::display_name(kind), ": test F1 ", format_fixed(row.test.f1, 3), ", AUC ",
            format_fixed(row.roc.auc, 3));
    rows.push_back(std::move(row));
  }

  const auto counts = table.data.class_counts();
  const std::string title = "Evaluation on " + std::to_string(table.data.size()) + " examples (" +
                            std::to_string(counts[1]) + " positive), seed " +
                            std::to_string(seed);
  const std::string md = eval::markdown_report(rows, title, a.kfold);
  if (a.report.empty()) {
    ctx.out() << md;
  } else {
    write_file(a.report, md);
  }
  if (!a.report_csv.empty()) write_file(a.report_csv, eval::csv_report(rows));
  if (!a.roc.empty()) write_file(a.roc, eval::roc_csv(rows));
}

void add_model_flags(CLI::App* sub, ModelArgs& m) {
  sub->add_flag("--standardize", m.standardize, "Z-score vector features before fitting");
  sub->add_flag("--no-standardize", m.no_standardize,
                "Skip z-scoring (the default except for trace features)");
  sub->add_option("--trees", m.trees, "Random forest size")->check(CLI::Range(1, 100000));
  sub->add_option("--svc-c", m.svc_c, "Linear SVC penalty")->check(CLI::PositiveNumber);
  sub->add_option("--cnn-epochs", m.cnn_epochs, "1D-CNN training epochs")
      ->check(CLI::Range(1, 100000));
  sub->add_option("--cnn-filters", m.cnn_filters, "1D-CNN filter count")
      ->check(CLI::Range(1, 4096));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectre gadget and attack detection toolkit", "specdet"};
  app.set_version_flag("--version", "specdet " + std::string(kVersion));
  app.require_subcommand(1);

  Globals globals;
  auto* seed_opt = app.add_option("--seed", globals.seed, "Seed for every randomized step")
                       ->envname("SPECDET_SEED");
  app.add_flag("--quiet", globals.quiet, "Silence progress messages");

  std::function<void(Context&)> action;
  auto subcommand = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };

  IngestArgs ingest_args;
  {
    auto* sub = subcommand("ingest-gadgets", "Build a gadget manifest from labeled directories");
    sub->add_option("--dir", ingest_args.dirs, "Gadget directory (repeatable)")->required();
    sub->add_option("--label", ingest_args.labels, "Label for the matching --dir")
        ->required()
        ->check(CLI::Range(0, 1));
    sub->add_option("--out", ingest_args.out, "Manifest path")->required();
    sub->callback([&] { action = [&](Context& c) { ingest(c, ingest_args); }; });
  }

  EmbedArgs embed_args;
  {
    auto* sub = subcommand("train-embedding", "Train skip-gram token embeddings");
    auto& c = embed_args.config;
    sub->add_option("--corpus", embed_args.corpus, "Gadget manifest")->required();
    sub->add_option("--out", embed_args.out, "Embedding model path")->required();
    sub->add_option("--dim", c.dim, "Vector size")->check(CLI::Range(1, 4096));
    sub->add_option("--maxlen", c.maxlen, "Sequence length")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--window", c.window, "Context window")->check(CLI::Range(1, 1000));
    sub->add_option("--negatives", c.negatives, "Negative samples")->check(CLI::Range(1, 1000));
    sub->add_option("--epochs", c.epochs, "Training epochs")->check(CLI::Range(0, 100000));
    sub->add_option("--learning-rate", c.learning_rate, "Initial learning rate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--min-count", embed_args.min_count, "Drop rarer tokens")
        ->check(CLI::Range(1, 1 << 30));
    sub->callback([&] { action = [&](Context& ctx) { train_embedding(ctx, embed_args); }; });
  }

  EncodeArgs encode_args;
  {
    auto* sub = subcommand("encode", "Turn a gadget manifest into a feature file");
    sub->add_option("--corpus", encode_args.corpus, "Gadget manifest")->required();
    sub->add_option("--embedding", encode_args.embedding, "Embedding model")->required();
    sub->add_option("--mode", encode_args.mode, "pooled or sequence")
        ->check(CLI::IsMember({"pooled", "sequence"}));
    sub->add_option("--out", encode_args.out, "Feature file path")->required();
    sub->callback([&] { action = [&](Context& c) { encode(c, encode_args); }; });
  }

  TrainArgs train_args;
  {
    auto* sub = subcommand("train", "Fit one classifier");
    sub->add_option("--classifier", train_args.classifier, "cnn, nb, svc, lr or rf")
        ->required()
        ->check(CLI::IsMember({"cnn", "nb", "svc", "lr", "rf"}, CLI::ignore_case));
    sub->add_option("--features", train_args.features, "Feature file or trace CSV")->required();
    sub->add_option("--out", train_args.out, "Model path")->required();
    add_model_flags(sub, train_args.model);
    sub->callback([&] { action = [&](Context& c) { train(c, train_args); }; });
  }

  ScanArgs scan_args;
  {
    auto* sub = subcommand("scan", "Score the functions of an assembly file or manifest");
    sub->add_option("--model", scan_args.model, "Model path")->required();
    sub->add_option("--embedding", scan_args.embedding, "Embedding model")->required();
    sub->add_option("--input", scan_args.input, "Assembly file or gadget manifest")->required();
    sub->add_option("--threshold", scan_args.threshold, "Decision threshold");
    sub->add_option("--out", scan_args.out, "Verdict file (default stdout)");
    sub->callback([&] { action = [&](Context& c) { scan(c, scan_args); }; });
  }

  DetectArgs detect_args;
  {
    auto* sub = subcommand("detect", "Score hardware-counter samples");
    sub->add_option("--model", detect_args.model, "Model path")->required();
    sub->add_option("--trace", detect_args.trace, "Trace CSV")->required();
    sub->add_option("--aggregate", detect_args.aggregate, "Emit one majority verdict per pid")
        ->check(CLI::IsMember({"pid"}));
    sub->add_option("--threshold", detect_args.threshold, "Decision threshold");
    sub->add_option("--out", detect_args.out, "Verdict file (default stdout)");
    sub->callback([&] { action = [&](Context& c) { detect(c, detect_args); }; });
  }

  CollectArgs collect_args;
  {
    auto* sub = subcommand("collect", "Sample live per-process counters");
    sub->add_option("--interval-us", collect_args.interval_us, "Sampling interval")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{60'000'000}));
    sub->add_option("--duration-s", collect_args.duration_s, "Collection time")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{86'400}));
    sub->add_option("--pid", collect_args.pids, "Process to watch (repeatable, default all)");
    sub->add_option("--out", collect_args.out, "Trace CSV path")->required();
    sub->callback([&] { action = [&](Context& c) { collect(c, collect_args); }; });
  }

  SynthArgs synth_args;
  {
    auto* sub = subcommand("synth", "Generate a labeled synthetic trace");
    sub->add_option("--benign", synth_args.benign, "Benign samples");
    sub->add_option("--attack", synth_args.attack, "Attack samples");
    sub->add_option("--out", synth_args.out, "Trace CSV path")->required();
    sub->callback([&] { action = [&](Context& c) { synth(c, synth_args); }; });
  }

  EvaluateArgs eval_args;
  {
    auto* sub = subcommand("evaluate", "Cross-validate and test classifiers");
    sub->add_option("--features", eval_args.features, "Feature file or trace CSV")->required();
    sub->add_option("--classifier", eval_args.classifier, "cnn, nb, svc, lr, rf or all")
        ->transform(CLI::IsMember({"cnn", "nb", "svc", "lr", "rf", "all"}, CLI::ignore_case));
    sub->add_option("--kfold", eval_args.kfold, "Cross-validation folds");
    sub->add_option("--beta", eval_args.beta, "F-beta weight");
    sub->add_option("--threshold", eval_args.threshold, "Decision threshold");
    sub->add_flag("--no-cv", eval_args.no_cv, "Skip cross-validation");
    sub->add_option("--report", eval_args.report, "Markdown report (default stdout)");
    sub->add_option("--report-csv", eval_args.report_csv, "CSV report");
    sub->add_option("--roc", eval_args.roc, "ROC curve CSV");
    add_model_flags(sub, eval_args.model);
    sub->callback([&] { action = [&](Context& c) { evaluate(c, eval_args); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ErrorKind::kUsage);
  }
  globals.seed_given = seed_opt->count() > 0;

  Context ctx(out, err, globals);
  try {
    action(ctx);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kInternal);
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace specdet::cli
