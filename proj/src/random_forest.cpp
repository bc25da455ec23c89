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

#include "specdet/ml/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

namespace specdet::ml {
namespace {

int majority(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::size_t ones = 0;
  for (std::size_t r : rows) ones += static_cast<std::size_t>(y[r]);
  return 2 * ones >= rows.size() ? 1 : 0;
}

bool is_pure(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  for (std::size_t r : rows) {
    if (y[r] != y[rows.front()]) return false;
  }
  return true;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted Gini of the children
};

double gini(double ones, double total) {
  if (total <= 0.0) return 0.0;
  const double p = ones / total;
  return 2.0 * p * (1.0 - p);
}

// Best threshold on one feature; feature stays -1 when it is constant.
Split best_split_on(const Eigen::MatrixXd& X, const std::vector<int>& y,
                    const std::vector<std::size_t>& rows, int feature,
                    std::vector<std::pair<double, int>>& scratch) {
  scratch.clear();
  double total_ones = 0.0;
  for (std::size_t r : rows) {
    scratch.emplace_back(X(static_cast<Eigen::Index>(r), feature), y[r]);
    total_ones += y[r];
  }
  std::sort(scratch.begin(), scratch.end());
  Split best;
  if (scratch.front().first == scratch.back().first) return best;
  const double n = static_cast<double>(scratch.size());
  double left_ones = 0.0;
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    left_ones += scratch[i].second;
    const double lo = scratch[i].first;
    const double hi = scratch[i + 1].first;
    if (lo == hi) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = n - nl;
    const double impurity =
        (nl * gini(left_ones, nl) + nr * gini(total_ones - left_ones, nr)) / n;
    if (best.feature < 0 || impurity < best.impurity) {
      double mid = lo + (hi - lo) / 2.0;
      if (!(mid < hi)) mid = lo;
      best = {feature, mid, impurity};
    }
  }
  return best;
}

}  // namespace

DecisionTree DecisionTree::fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                               const std::vector<std::size_t>& rows, int max_features,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = static_cast<int>(X.cols());
  std::vector<int> features(static_cast<std::size_t>(d));
  std::iota(features.begin(), features.end(), 0);
  std::vector<std::pair<double, int>> scratch;

  DecisionTree tree;
  struct Pending {
    int node;
    std::vector<std::size_t> rows;
  };
  tree.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, rows});
  while (!stack.empty()) {
    Pending work = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(work.node)];
    node.vote = majority(y, work.rows);
    if (work.rows.size() < 2 || is_pure(y, work.rows)) continue;

    std::shuffle(features.begin(), features.end(), rng);
    Split best;
    int evaluated = 0;
    for (int f : features) {
      Split s = best_split_on(X, y, work.rows, f, scratch);
      if (s.feature < 0) continue;
      if (best.feature < 0 || s.impurity < best.impurity) best = s;
      if (++evaluated == max_features) break;
    }
    if (best.feature < 0) continue;  // every feature constant here

    std::vector<std::size_t> left, right;
    for (std::size_t r : work.rows) {
      (X(static_cast<Eigen::Index>(r), best.feature) <= best.threshold ? left : right).push_back(r);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = right_id;
    // `node` may dangle after these.
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    stack.push_back({right_id, std::move(right)});
    stack.push_back({left_id, std::move(left)});
  }
  return tree;
}

int DecisionTree::vote(const Eigen::VectorXd& x) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    i = x(n.feature) <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].vote;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, dep] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, dep);
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    if (n.feature >= 0) {
      stack.emplace_back(n.left, dep + 1);
      stack.emplace_back(n.right, dep + 1);
    }
  }
  return deepest;
}

RandomForest RandomForest::fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                               const ForestParams& params, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  const int max_features =
      params.max_features > 0
          ? params.max_features
          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(X.cols()))));
  RandomForest forest;
  forest.trees.resize(static_cast<std::size_t>(std::max(params.trees, 0)));

  auto grow = [&](std::size_t t) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t] = DecisionTree::fit(X, y, rows, max_features, rng());
  };

  unsigned threads = params.threads > 0 ? static_cast<unsigned>(params.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(forest.trees.size()));
  if (threads <= 1) {
    for (std::size_t t = 0; t < forest.trees.size(); ++t) grow(t);
    return forest;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < forest.trees.size(); t = next++) grow(t);
    });
  }
  for (auto& th : pool) th.join();
  return forest;
}

double RandomForest::score(const Eigen::VectorXd& x) const {
  if (trees.empty()) return 0.0;
  int ones = 0;
  for (const auto& t : trees) ones += t.vote(x);
  return static_cast<double>(ones) / static_cast<double>(trees.size());
}

}  // namespace specdet::ml
