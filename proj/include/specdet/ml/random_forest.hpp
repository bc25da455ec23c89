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

#ifndef SPECDET_ML_RANDOM_FOREST_HPP_
#define SPECDET_ML_RANDOM_FOREST_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace specdet::ml {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int vote = 0;  // leaf majority label
};

// CART tree on Gini impurity; x[feature] <= threshold goes left.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  /// Grows without a depth limit down to single-sample leaves. At each node
  /// features are visited in a random order until `max_features`
  /// non-constant ones have been evaluated.
  static DecisionTree fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                          const std::vector<std::size_t>& rows, int max_features,
                          std::uint64_t seed);

  int vote(const Eigen::VectorXd& x) const;
  int depth() const;
};

struct ForestParams {
  int trees = 100;
  bool bootstrap = true;
  int max_features = 0;  // 0 means ceil(sqrt(d))
  int threads = 0;       // 0 means hardware concurrency
};

struct RandomForest {
  std::vector<DecisionTree> trees;

  /// Tree t draws from its own RNG seeded with seed ^ t, so the forest does
  /// not depend on how trees are spread over threads.
  static RandomForest fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                          const ForestParams& params, std::uint64_t seed);

  // Fraction of trees voting 1.
  double score(const Eigen::VectorXd& x) const;
};

}  // namespace specdet::ml

#endif  // SPECDET_ML_RANDOM_FOREST_HPP_
