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

#include "specdet/embedding.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "specdet/error.hpp"
#include "specdet/text_util.hpp"

namespace specdet::embedding {

Vocabulary::Vocabulary() : tokens_{"<pad>", "<oov>"}, counts_{0, 0} {}

int Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kOovIndex : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::vector<int> Vocabulary::to_indices(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(index_of(t));
  return out;
}

void Vocabulary::add(std::string token, std::int64_t count) {
  if (index_.count(token)) throw DataError("duplicate vocabulary token " + token);
  index_.emplace(token, size());
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
}

Vocabulary build_vocab(const corpus::CorpusManifest& corpus, int min_count) {
  if (corpus.empty()) throw DataError("empty corpus");
  if (min_count < 1) throw UsageError("min_count must be >= 1");
  std::map<std::string, std::int64_t> freq;
  for (const auto& r : corpus.records()) {
    for (const auto& t : r.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  std::int64_t dropped = 0;
  for (auto& [tok, n] : freq) {
    if (n >= min_count) {
      kept.emplace_back(tok, n);
    } else {
      dropped += n;
    }
  }
  // std::map iteration is already lexicographic, so a stable sort on
  // frequency alone yields the (count desc, token asc) order.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary vocab;
  vocab.set_min_count(min_count);
  vocab.set_oov_count(dropped);
  for (auto& [tok, n] : kept) vocab.add(std::move(tok), n);
  return vocab;
}

void EmbeddingConfig::validate() const {
  if (dim < 1) throw UsageError("embedding dim must be >= 1");
  if (maxlen < 1) throw UsageError("maxlen must be >= 1");
  if (window < 1) throw UsageError("window must be >= 1");
  if (negatives < 1) throw UsageError("negatives must be >= 1");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be > 0");
}

EmbeddingMatrix train_skipgram(const corpus::CorpusManifest& corpus, const Vocabulary& vocab,
                               const EmbeddingConfig& config, SkipgramStats* stats) {
  config.validate();
  if (vocab.real_token_count() == 0) {
    throw DataError("vocabulary has no real tokens");
  }
  const int V = vocab.size();
  const int dim = config.dim;
  std::mt19937_64 rng(config.seed);

  EmbeddingMatrix out;
  out.config = config;
  out.vocab = vocab;
  out.vectors = Eigen::MatrixXd::Zero(V, dim);
  std::uniform_real_distribution<double> init(-0.5 / dim, 0.5 / dim);
  for (int r = 1; r < V; ++r) {
    for (int c = 0; c < dim; ++c) out.vectors(r, c) = init(rng);
  }
  // Output (context) vectors, stored one per column.
  Eigen::MatrixXd ctx = Eigen::MatrixXd::Zero(dim, V);
  Eigen::MatrixXd in = out.vectors.transpose();

  std::vector<double> weights(static_cast<std::size_t>(V), 0.0);
  for (int i = 1; i < V; ++i) {
    weights[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(vocab.count(i)), 0.75);
  }
  std::discrete_distribution<int> noise(weights.begin(), weights.end());

  std::vector<std::vector<int>> docs;
  std::int64_t total_tokens = 0;
  for (const auto& r : corpus.records()) {
    docs.push_back(vocab.to_indices(r.tokens));
    total_tokens += static_cast<std::int64_t>(docs.back().size());
  }
  const double total_steps = static_cast<double>(total_tokens) * config.epochs;
  std::int64_t step = 0;

  SkipgramStats local;
  Eigen::MatrixXd negs(dim, config.negatives);
  std::vector<int> neg_idx;
  neg_idx.reserve(static_cast<std::size_t>(config.negatives));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::int64_t pairs = 0;
    for (const auto& doc : docs) {
      const int n = static_cast<int>(doc.size());
      for (int t = 0; t < n; ++t, ++step) {
        const double lr = config.learning_rate *
                          std::max(1e-4, 1.0 - static_cast<double>(step) / total_steps);
        const int center = doc[static_cast<std::size_t>(t)];
        for (int off = -config.window; off <= config.window; ++off) {
          if (off == 0 || t + off < 0 || t + off >= n) continue;
          const int context = doc[static_cast<std::size_t>(t + off)];
          neg_idx.clear();
          for (int k = 0; k < config.negatives; ++k) {
            int s = noise(rng);
            if (s != context) neg_idx.push_back(s);
          }
          const auto k = static_cast<Eigen::Index>(neg_idx.size());
          for (Eigen::Index j = 0; j < k; ++j) negs.col(j) = ctx.col(neg_idx[static_cast<std::size_t>(j)]);
          auto terms = sgns_loss_and_gradient(in.col(center), ctx.col(context), negs.leftCols(k));
          loss_sum += terms.loss;
          ++pairs;
          ctx.col(context) -= lr * terms.context_grad;
          for (Eigen::Index j = 0; j < k; ++j) {
            ctx.col(neg_idx[static_cast<std::size_t>(j)]) -= lr * terms.negative_grad.col(j);
          }
          in.col(center) -= lr * terms.center_grad;
        }
      }
    }
    local.epoch_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
    local.positive_pairs += pairs;
  }

  in.col(kPadIndex).setZero();
  out.vectors = in.transpose();
  if (stats) *stats = std::move(local);
  return out;
}

std::vector<int> sequence_indices(const std::vector<std::string>& tokens,
                                  const EmbeddingMatrix& embedding) {
  const std::size_t keep =
      std::min(tokens.size(), static_cast<std::size_t>(embedding.config.maxlen));
  std::vector<int> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(embedding.vocab.index_of(tokens[i]));
  return out;
}

EncodedSequence encode_indices(const std::vector<int>& indices, const EmbeddingMatrix& embedding) {
  const int maxlen = embedding.config.maxlen;
  EncodedSequence seq;
  seq.matrix = Eigen::MatrixXd::Zero(maxlen, embedding.vectors.cols());
  seq.true_length = static_cast<int>(std::min<std::size_t>(indices.size(), maxlen));
  for (int i = 0; i < seq.true_length; ++i) {
    const int idx = indices[static_cast<std::size_t>(i)];
    if (idx < 0 || idx >= embedding.vectors.rows()) {
      throw DataError("token index " + std::to_string(idx) + " outside vocabulary");
    }
    seq.matrix.row(i) = embedding.vectors.row(idx);
  }
  return seq;
}

EncodedSequence encode_sequence(const std::vector<std::string>& tokens,
                                const EmbeddingMatrix& embedding) {
  return encode_indices(sequence_indices(tokens, embedding), embedding);
}

Eigen::VectorXd pool_features(const EncodedSequence& seq) {
  if (seq.true_length == 0) return Eigen::VectorXd::Zero(seq.matrix.cols());
  return seq.matrix.topRows(seq.true_length).colwise().mean().transpose();
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double denom = a.norm() * b.norm();
  return denom > 0.0 ? a.dot(b) / denom : 0.0;
}

void write_embedding(std::ostream& out, const EmbeddingMatrix& e) {
  const auto& c = e.config;
  out << "specdet-embedding\n"
      << "format_version " << kEmbeddingFormatVersion << '\n'
      << "dim " << c.dim << '\n'
      << "maxlen " << c.maxlen << '\n'
      << "V " << e.vocab.size() << '\n'
      << "window " << c.window << '\n'
      << "negatives " << c.negatives << '\n'
      << "epochs " << c.epochs << '\n'
      << "learning_rate " << format_double(c.learning_rate) << '\n'
      << "seed " << c.seed << '\n'
      << "min_count " << e.vocab.min_count() << '\n'
      << "vocab\n";
  for (int i = 0; i < e.vocab.size(); ++i) {
    out << i << ' ' << e.vocab.token(i) << ' ' << e.vocab.count(i) << '\n';
  }
  out << "vectors\n";
  for (Eigen::Index r = 0; r < e.vectors.rows(); ++r) {
    for (Eigen::Index col = 0; col < e.vectors.cols(); ++col) {
      if (col) out << ' ';
      out << format_double(e.vectors(r, col));
    }
    out << '\n';
  }
}

void save_embedding(const std::filesystem::path& path, const EmbeddingMatrix& embedding) {
  std::ostringstream ss;
  write_embedding(ss, embedding);
  write_file(path, ss.str());
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Reads "<key> <value>" and returns the value text.
  std::string field(std::string_view key) {
    std::string line = next();
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != ' ') {
      fail("expected field '" + std::string(key) + "'");
    }
    return line.substr(key.size() + 1);
  }

  std::int64_t int_field(std::string_view key) {
    std::int64_t v;
    if (!parse_i64(field(key), v)) fail("bad integer for '" + std::string(key) + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError("embedding file line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

EmbeddingMatrix read_embedding(std::istream& in) {
  LineReader r(in);
  if (r.next() != "specdet-embedding") r.fail("not a specdet embedding file");
  const auto version = r.int_field("format_version");
  if (version != kEmbeddingFormatVersion) {
    r.fail("unsupported format_version " + std::to_string(version));
  }
  EmbeddingMatrix e;
  e.config.dim = static_cast<int>(r.int_field("dim"));
  e.config.maxlen = static_cast<int>(r.int_field("maxlen"));
  const auto V = r.int_field("V");
  e.config.window = static_cast<int>(r.int_field("window"));
  e.config.negatives = static_cast<int>(r.int_field("negatives"));
  e.config.epochs = static_cast<int>(r.int_field("epochs"));
  if (!parse_double(r.field("learning_rate"), e.config.learning_rate)) r.fail("bad learning_rate");
  std::uint64_t seed;
  if (!parse_u64(r.field("seed"), seed)) r.fail("bad seed");
  e.config.seed = seed;
  const auto min_count = r.int_field("min_count");
  try {
    e.config.validate();
  } catch (const Error& err) {
    r.fail(err.what());
  }
  if (V < 2) r.fail("vocabulary must hold PAD and OOV");
  if (r.next() != "vocab") r.fail("expected 'vocab'");
  Vocabulary vocab;
  vocab.set_min_count(static_cast<int>(min_count));
  for (std::int64_t i = 0; i < V; ++i) {
    std::istringstream ls(r.next());
    std::int64_t idx, count;
    std::string tok;
    if (!(ls >> idx >> tok >> count) || idx != i) r.fail("bad vocabulary entry");
    if (i == kOovIndex) vocab.set_oov_count(count);
    if (i >= 2) vocab.add(tok, count);
  }
  e.vocab = std::move(vocab);
  if (r.next() != "vectors") r.fail("expected 'vectors'");
  e.vectors.resize(V, e.config.dim);
  for (std::int64_t i = 0; i < V; ++i) {
    std::string line = r.next();
    std::size_t pos = 0;
    for (int c = 0; c < e.config.dim; ++c) {
      if (pos > line.size()) r.fail("too few values in row " + std::to_string(i));
      std::size_t end = line.find(' ', pos);
      if (end == std::string::npos) end = line.size();
      double v;
      if (!parse_double(std::string_view(line).substr(pos, end - pos), v) || !std::isfinite(v)) {
        r.fail("bad vector value in row " + std::to_string(i));
      }
      e.vectors(i, c) = v;
      pos = end + 1;
    }
    if (pos < line.size()) r.fail("too many values in row " + std::to_string(i));
  }
  if (!e.vectors.row(kPadIndex).isZero(0.0)) r.fail("PAD row must be zero");
  return e;
}

EmbeddingMatrix load_embedding(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding " + path.string());
  return read_embedding(in);
}

}  // namespace specdet::embedding
