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

#include "specdet/features.hpp"

#include <cmath>
#include <sstream>

#include "specdet/error.hpp"
#include "specdet/text_util.hpp"

namespace specdet::features {

EmbeddedSequences::EmbeddedSequences(
    std::shared_ptr<const embedding::EmbeddingMatrix> embedding,
    std::vector<std::vector<int>> indices)
    : embedding_(std::move(embedding)), indices_(std::move(indices)) {
  const auto V = static_cast<int>(embedding_->vectors.rows());
  for (const auto& seq : indices_) {
    if (seq.size() > static_cast<std::size_t>(embedding_->config.maxlen)) {
      throw SchemaError("sequence longer than maxlen");
    }
    for (int i : seq) {
      if (i < 0 || i >= V) throw SchemaError("token index " + std::to_string(i) + " out of range");
    }
  }
}

Eigen::MatrixXd EmbeddedSequences::matrix(std::size_t i) const {
  return embedding::encode_indices(indices_.at(i), *embedding_).matrix;
}

ml::Dataset dataset_from_trace(const std::vector<cps::CpsSample>& samples) {
  const auto rows = cps::derive_features(samples);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), cps::kFeatureDim);
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) {
      throw DataError("trace sample " + std::to_string(i + 1) + " has no label");
    }
    X.row(static_cast<Eigen::Index>(i)) = rows[i].vector().transpose();
    y.push_back(*rows[i].label);
  }
  return ml::Dataset::from_vectors(std::move(X), std::move(y));
}

FeatureTable encode_corpus(const corpus::CorpusManifest& corpus,
                           std::shared_ptr<const embedding::EmbeddingMatrix> embedding,
                           FeatureSource mode) {
  FeatureTable t;
  t.source = mode;
  std::vector<int> y;
  for (const auto& r : corpus.records()) {
    t.ids.push_back(r.id);
    y.push_back(r.label);
  }
  if (mode == FeatureSource::kPooled) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(corpus.size()), embedding->config.dim);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto seq = embedding::encode_sequence(corpus.records()[i].tokens, *embedding);
      X.row(static_cast<Eigen::Index>(i)) = embedding::pool_features(seq).transpose();
    }
    t.data = ml::Dataset::from_vectors(std::move(X), std::move(y));
  } else if (mode == FeatureSource::kSequence) {
    for (const auto& r : corpus.records()) {
      t.indices.push_back(embedding::sequence_indices(r.tokens, *embedding));
    }
    t.data = ml::Dataset::from_sequences(std::make_shared<EmbeddedSequences>(embedding, t.indices),
                                         std::move(y));
  } else {
    throw UsageError("corpus encoding supports pooled or sequence mode");
  }
  t.embedding = std::move(embedding);
  return t;
}

ml::Dataset pooled_dataset(const FeatureTable& table) {
  if (table.source != FeatureSource::kSequence || !table.embedding) {
    throw SchemaError("pooling needs a sequence feature table");
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(table.indices.size()), table.embedding->config.dim);
  for (std::size_t i = 0; i < table.indices.size(); ++i) {
    const auto seq = embedding::encode_indices(table.indices[i], *table.embedding);
    X.row(static_cast<Eigen::Index>(i)) = embedding::pool_features(seq).transpose();
  }
  return ml::Dataset::from_vectors(std::move(X), table.data.labels());
}

namespace {

constexpr std::string_view kMagic = "# specdet-features v1 ";

// "key=value" words after the feature kind.
std::string header_value(const std::string& line, const std::string& key) {
  std::istringstream ss(line.substr(kMagic.size()));
  std::string word;
  while (ss >> word) {
    if (word.rfind(key + "=", 0) == 0) return word.substr(key.size() + 1);
  }
  throw DataError("feature file header lacks '" + key + "='");
}

int header_int(const std::string& line, const std::string& key) {
  std::int64_t v;
  if (!parse_i64(header_value(line, key), v) || v < 1) {
    throw DataError("feature file header has a bad '" + key + "'");
  }
  return static_cast<int>(v);
}

int parse_label(const std::string& text, const std::string& at) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw DataError("bad label '" + text + "'" + at);
}

}  // namespace

FeatureTable load_features(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("feature file " + path.string() + " is empty");

  if (lines.front() == cps::kTraceHeader) {
    std::istringstream in(text);
    const auto samples = cps::read_trace(in);
    FeatureTable t;
    t.source = FeatureSource::kTrace;
    for (const auto& s : samples) {
      t.ids.push_back(std::to_string(s.pid) + ":" + s.process_name + "@" +
                      std::to_string(s.timestamp_us));
    }
    t.data = dataset_from_trace(samples);
    return t;
  }

  const std::string& head = lines.front();
  if (head.rfind(kMagic, 0) != 0) {
    throw DataError(path.string() + " is neither a feature file nor a trace CSV");
  }
  std::istringstream hs(head.substr(kMagic.size()));
  std::string kind;
  hs >> kind;
  if (lines.size() < 2) throw DataError("feature file lacks its column header");

  FeatureTable t;
  std::vector<int> y;
  const int dim = header_int(head, "dim");
  if (kind == "vector") {
    t.source = FeatureSource::kPooled;
    std::vector<std::vector<double>> rows;
    for (std::size_t ln = 2; ln < lines.size(); ++ln) {
      if (lines[ln].empty()) continue;
      const std::string at = " at line " + std::to_string(ln + 1);
      const auto f = split_csv_record(lines[ln]);
      if (f.size() != static_cast<std::size_t>(dim) + 2) {
        throw DataError("expected " + std::to_string(dim + 2) + " fields" + at);
      }
      t.ids.push_back(f[0]);
      y.push_back(parse_label(f[1], at));
      std::vector<double> row(static_cast<std::size_t>(dim));
      for (int j = 0; j < dim; ++j) {
        if (!parse_double(f[static_cast<std::size_t>(j) + 2], row[static_cast<std::size_t>(j)]) ||
            !std::isfinite(row[static_cast<std::size_t>(j)])) {
          throw DataError("bad feature value" + at);
        }
      }
      rows.push_back(std::move(row));
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int j = 0; j < dim; ++j) X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    t.data = ml::Dataset::from_vectors(std::move(X), std::move(y));
    return t;
  }
  if (kind == "sequence") {
    t.source = FeatureSource::kSequence;
    const int maxlen = header_int(head, "maxlen");
    std::filesystem::path emb_path = header_value(head, "embedding");
    if (emb_path.is_relative()) emb_path = path.parent_path() / emb_path;
    auto emb = std::make_shared<const embedding::EmbeddingMatrix>(embedding::load_embedding(emb_path));
    if (emb->config.dim != dim || emb->config.maxlen != maxlen) {
      throw SchemaError("embedding " + emb_path.string() + " does not match the feature file shape");
    }
    for (std::size_t ln = 2; ln < lines.size(); ++ln) {
      if (lines[ln].empty()) continue;
      const std::string at = " at line " + std::to_string(ln + 1);
      const auto f = split_csv_record(lines[ln]);
      if (f.size() != 3) throw DataError("expected 3 fields" + at);
      t.ids.push_back(f[0]);
      y.push_back(parse_label(f[1], at));
      std::vector<int> seq;
      std::istringstream ss(f[2]);
      std::string word;
      while (ss >> word) {
        std::int64_t v;
        if (!parse_i64(word, v)) throw DataError("bad token index" + at);
        seq.push_back(static_cast<int>(v));
      }
      t.indices.push_back(std::move(seq));
    }
    t.data = ml::Dataset::from_sequences(std::make_shared<EmbeddedSequences>(emb, t.indices),
                                         std::move(y));
    t.embedding = std::move(emb);
    t.embedding_path = std::move(emb_path);
    return t;
  }
  throw DataError("unknown feature kind '" + kind + "'");
}

void save_features(const std::filesystem::path& path, const FeatureTable& table) {
  std::ostringstream out;
  const auto& data = table.data;
  if (table.source == FeatureSource::kSequence) {
    if (table.embedding_path.empty()) throw UsageError("sequence features need an embedding path");
    const std::string emb = table.embedding_path.generic_string();
    if (emb.find_first_of(" \t") != std::string::npos) {
      throw UsageError("embedding path must not contain whitespace");
    }
    out << kMagic << "sequence maxlen=" << data.schema().maxlen << " dim=" << data.schema().dim
        << " embedding=" << emb << '\n'
        << "id,label,indices\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      out << quote_csv_field(table.ids[i]) << ',' << data.label(i) << ',';
      const auto& seq = table.indices.at(i);
      for (std::size_t k = 0; k < seq.size(); ++k) out << (k ? " " : "") << seq[k];
      out << '\n';
    }
  } else {
    const auto& X = data.X();
    out << kMagic << "vector dim=" << X.cols() << '\n' << "id,label";
    for (Eigen::Index j = 0; j < X.cols(); ++j) out << ",f" << j;
    out << '\n';
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      out << quote_csv_field(table.ids[static_cast<std::size_t>(i)]) << ','
          << data.label(static_cast<std::size_t>(i));
      for (Eigen::Index j = 0; j < X.cols(); ++j) out << ',' << format_double(X(i, j));
      out << '\n';
    }
  }
  write_file(path, out.str());
}

}  // namespace specdet::features
