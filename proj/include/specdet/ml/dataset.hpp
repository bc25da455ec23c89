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

#ifndef SPECDET_ML_DATASET_HPP_
#define SPECDET_ML_DATASET_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace specdet::ml {

enum class FeatureKind { kVector, kSequence };

struct FeatureSchema {
  FeatureKind kind = FeatureKind::kVector;
  int dim = 0;     // feature count, or channels per step for sequences
  int maxlen = 0;  // sequence steps; 0 for vectors

  std::string describe() const;
  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Random access to maxlen x dim sequence matrices, materialized on demand.
class SequenceSource {
 public:
  virtual ~SequenceSource() = default;
  virtual std::size_t size() const = 0;
  virtual int maxlen() const = 0;
  virtual int dim() const = 0;
  virtual Eigen::MatrixXd matrix(std::size_t i) const = 0;
};

class DenseSequences final : public SequenceSource {
 public:
  explicit DenseSequences(std::vector<Eigen::MatrixXd> items);
  std::size_t size() const override { return items_.size(); }
  int maxlen() const override { return maxlen_; }
  int dim() const override { return dim_; }
  Eigen::MatrixXd matrix(std::size_t i) const override { return items_.at(i); }

 private:
  std::vector<Eigen::MatrixXd> items_;
  int maxlen_ = 0;
  int dim_ = 0;
};

/// Binary-labeled examples, either fixed-width vectors (one row of X per
/// example) or sequence matrices. Labels are 0 or 1.
class Dataset {
 public:
  Dataset() = default;
  static Dataset from_vectors(Eigen::MatrixXd X, std::vector<int> y);
  static Dataset from_sequences(std::shared_ptr<const SequenceSource> source,
                                std::vector<int> y);

  FeatureKind kind() const { return schema_.kind; }
  const FeatureSchema& schema() const { return schema_; }
  std::size_t size() const { return y_.size(); }
  bool empty() const { return y_.empty(); }
  const std::vector<int>& labels() const { return y_; }
  int label(std::size_t i) const { return y_[i]; }
  std::array<std::size_t, 2> class_counts() const;

  // Vector kind only.
  const Eigen::MatrixXd& X() const;
  // Sequence kind only.
  Eigen::MatrixXd sequence(std::size_t i) const;

  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  FeatureSchema schema_;
  Eigen::MatrixXd X_;
  std::shared_ptr<const SequenceSource> source_;
  std::vector<std::size_t> rows_;  // view into source_
  std::vector<int> y_;
};

}  // namespace specdet::ml

#endif  // SPECDET_ML_DATASET_HPP_
