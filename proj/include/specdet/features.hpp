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

#ifndef SPECDET_FEATURES_HPP_
#define SPECDET_FEATURES_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "specdet/corpus.hpp"
#include "specdet/cps.hpp"
#include "specdet/embedding.hpp"
#include "specdet/ml/dataset.hpp"

namespace specdet::features {

// Sequences expanded from token indices through a shared embedding.
class EmbeddedSequences final : public ml::SequenceSource {
 public:
  EmbeddedSequences(std::shared_ptr<const embedding::EmbeddingMatrix> embedding,
                    std::vector<std::vector<int>> indices);
  std::size_t size() const override { return indices_.size(); }
  int maxlen() const override { return embedding_->config.maxlen; }
  int dim() const override { return embedding_->config.dim; }
  Eigen::MatrixXd matrix(std::size_t i) const override;

 private:
  std::shared_ptr<const embedding::EmbeddingMatrix> embedding_;
  std::vector<std::vector<int>> indices_;
};

enum class FeatureSource { kTrace, kPooled, kSequence };

struct FeatureTable {
  FeatureSource source = FeatureSource::kPooled;
  std::vector<std::string> ids;
  ml::Dataset data;
  // Sequence tables only.
  std::shared_ptr<const embedding::EmbeddingMatrix> embedding;
  std::filesystem::path embedding_path;
  std::vector<std::vector<int>> indices;
};

ml::Dataset dataset_from_trace(const std::vector<cps::CpsSample>& samples);

/// Gadget features for every record: mean-pooled vectors, or token-index
/// sequences that expand to maxlen x dim matrices through `embedding`.
FeatureTable encode_corpus(const corpus::CorpusManifest& corpus,
                           std::shared_ptr<const embedding::EmbeddingMatrix> embedding,
                           FeatureSource mode);

// Mean-pooled vectors of a sequence table, same rows and labels.
ml::Dataset pooled_dataset(const FeatureTable& table);

/// Feature files start with a "# specdet-features v1 <kind> ..." line, then
/// a CSV header and one labeled row per example. A trace CSV is accepted
/// too and turned into {l3_tca, l3_tcm, tot_ins, miss_rate} rows.
FeatureTable load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path, const FeatureTable& table);

}  // namespace specdet::features

#endif  // SPECDET_FEATURES_HPP_
