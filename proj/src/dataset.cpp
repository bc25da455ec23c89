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

#include "specdet/ml/dataset.hpp"

#include "specdet/error.hpp"

namespace specdet::ml {

std::string FeatureSchema::describe() const {
  if (kind == FeatureKind::kVector) return "vector[" + std::to_string(dim) + "]";
  return "sequence[" + std::to_string(maxlen) + "x" + std::to_string(dim) + "]";
}

DenseSequences::DenseSequences(std::vector<Eigen::MatrixXd> items) : items_(std::move(items)) {
  if (items_.empty()) return;
  maxlen_ = static_cast<int>(items_.front().rows());
  dim_ = static_cast<int>(items_.front().cols());
  for (const auto& m : items_) {
    if (m.rows() != maxlen_ || m.cols() != dim_) {
      throw SchemaError("sequence shapes differ within dataset");
    }
  }
}

namespace {

void check_labels(const std::vector<int>& y) {
  for (int v : y) {
    if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
  }
}

}  // namespace

Dataset Dataset::from_vectors(Eigen::MatrixXd X, std::vector<int> y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw DataError("feature rows and labels differ in count");
  }
  check_labels(y);
  Dataset d;
  d.schema_ = {FeatureKind::kVector, static_cast<int>(X.cols()), 0};
  d.X_ = std::move(X);
  d.y_ = std::move(y);
  return d;
}

Dataset Dataset::from_sequences(std::shared_ptr<const SequenceSource> source,
                                std::vector<int> y) {
  if (!source || source->size() != y.size()) {
    throw DataError("sequence count and label count differ");
  }
  check_labels(y);
  Dataset d;
  d.schema_ = {FeatureKind::kSequence, source->dim(), source->maxlen()};
  d.rows_.resize(y.size());
  for (std::size_t i = 0; i < d.rows_.size(); ++i) d.rows_[i] = i;
  d.source_ = std::move(source);
  d.y_ = std::move(y);
  return d;
}

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> c{0, 0};
  for (int v : y_) ++c[static_cast<std::size_t>(v)];
  return c;
}

const Eigen::MatrixXd& Dataset::X() const {
  if (kind() != FeatureKind::kVector) throw SchemaError("dataset holds sequences, not vectors");
  return X_;
}

Eigen::MatrixXd Dataset::sequence(std::size_t i) const {
  if (kind() != FeatureKind::kSequence) throw SchemaError("dataset holds vectors, not sequences");
  return source_->matrix(rows_.at(i));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset d;
  d.schema_ = schema_;
  d.y_.reserve(indices.size());
  for (std::size_t i : indices) d.y_.push_back(y_.at(i));
  if (kind() == FeatureKind::kVector) {
    d.X_.resize(static_cast<Eigen::Index>(indices.size()), X_.cols());
    for (std::size_t k = 0; k < indices.size(); ++k) {
      d.X_.row(static_cast<Eigen::Index>(k)) = X_.row(static_cast<Eigen::Index>(indices[k]));
    }
  } else {
    d.source_ = source_;
    d.rows_.reserve(indices.size());
    for (std::size_t i : indices) d.rows_.push_back(rows_.at(i));
  }
  return d;
}

}  // namespace specdet::ml
