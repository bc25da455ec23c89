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

#ifndef SPECDET_EMBEDDING_HPP_
#define SPECDET_EMBEDDING_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "specdet/corpus.hpp"
#include "specdet/math.hpp"

namespace specdet::embedding {

inline constexpr int kPadIndex = 0;
inline constexpr int kOovIndex = 1;
inline constexpr int kEmbeddingFormatVersion = 1;

class Vocabulary {
 public:
  // Only the PAD and OOV slots.
  Vocabulary();

  int size() const { return static_cast<int>(tokens_.size()); }
  int real_token_count() const { return size() - 2; }
  int min_count() const { return min_count_; }

  // OOV index when the token is unknown.
  int index_of(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(int index) const { return tokens_.at(static_cast<std::size_t>(index)); }
  // Training-corpus frequency per index; the OOV slot holds the number of
  // occurrences that fell below min_count.
  std::int64_t count(int index) const { return counts_.at(static_cast<std::size_t>(index)); }

  std::vector<int> to_indices(const std::vector<std::string>& tokens) const;

  // Appends a real token; `count` is its corpus frequency.
  void add(std::string token, std::int64_t count);
  void set_oov_count(std::int64_t count) { counts_[kOovIndex] = count; }
  void set_min_count(int min_count) { min_count_ = min_count; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.counts_ == b.counts_ && a.min_count_ == b.min_count_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, int> index_;
  int min_count_ = 1;
};

/// Indexes tokens by descending frequency, ties broken lexicographically,
/// starting at 2. Tokens seen fewer than `min_count` times are dropped.
Vocabulary build_vocab(const corpus::CorpusManifest& corpus, int min_count = 1);

struct EmbeddingConfig {
  int dim = 32;
  int maxlen = 256;
  int window = 5;
  int negatives = 5;
  int epochs = 15;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of its start
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

struct EmbeddingMatrix {
  Eigen::MatrixXd vectors;  // V x dim, row 0 is PAD and stays zero
  EmbeddingConfig config;
  Vocabulary vocab;
};

struct SkipgramStats {
  std::vector<double> epoch_loss;  // mean loss per positive pair
  std::int64_t positive_pairs = 0;
};

// Skip-gram negative-sampling objective for one (center, context, negatives)
// triple: -log s(o.c) - sum_j log s(-n_j.c), where s is the logistic function.
template <typename Scalar>
struct SgnsTerms {
  Scalar loss;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> center_grad;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> context_grad;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> negative_grad;  // dim x k
};

template <typename DerivedC, typename DerivedO, typename DerivedN>
SgnsTerms<typename DerivedC::Scalar> sgns_loss_and_gradient(
    const Eigen::MatrixBase<DerivedC>& center, const Eigen::MatrixBase<DerivedO>& context,
    const Eigen::MatrixBase<DerivedN>& negatives) {
  using Scalar = typename DerivedC::Scalar;
  SgnsTerms<Scalar> t;
  const Scalar pos = context.dot(center);
  t.loss = -log_sigmoid(pos);
  const Scalar pos_coef = sigmoid(pos) - Scalar(1);
  t.center_grad = pos_coef * context;
  t.context_grad = pos_coef * center;
  t.negative_grad.resize(center.size(), negatives.cols());
  for (Eigen::Index j = 0; j < negatives.cols(); ++j) {
    const Scalar neg = negatives.col(j).dot(center);
    t.loss -= log_sigmoid(-neg);
    const Scalar coef = sigmoid(neg);
    t.center_grad += coef * negatives.col(j);
    t.negative_grad.col(j) = coef * center;
  }
  return t;
}

/// Output vectors start at zero, input vectors uniform in
/// [-0.5/dim, 0.5/dim]; the input vectors are returned. Single-threaded and
/// bit-for-bit deterministic for a given seed.
EmbeddingMatrix train_skipgram(const corpus::CorpusManifest& corpus, const Vocabulary& vocab,
                               const EmbeddingConfig& config, SkipgramStats* stats = nullptr);

struct EncodedSequence {
  Eigen::MatrixXd matrix;  // maxlen x dim
  int true_length = 0;
};

// Keeps the first maxlen indices.
std::vector<int> sequence_indices(const std::vector<std::string>& tokens,
                                  const EmbeddingMatrix& embedding);
EncodedSequence encode_indices(const std::vector<int>& indices, const EmbeddingMatrix& embedding);
EncodedSequence encode_sequence(const std::vector<std::string>& tokens,
                                const EmbeddingMatrix& embedding);

// Mean of the first true_length rows; zero when the sequence is empty.
Eigen::VectorXd pool_features(const EncodedSequence& seq);

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

void write_embedding(std::ostream& out, const EmbeddingMatrix& embedding);
void save_embedding(const std::filesystem::path& path, const EmbeddingMatrix& embedding);
EmbeddingMatrix read_embedding(std::istream& in);
EmbeddingMatrix load_embedding(const std::filesystem::path& path);

}  // namespace specdet::embedding

#endif  // SPECDET_EMBEDDING_HPP_
