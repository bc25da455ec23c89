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

#ifndef SPECDET_ML_NAIVE_BAYES_HPP_
#define SPECDET_ML_NAIVE_BAYES_HPP_

#include <Eigen/Dense>
#include <vector>

namespace specdet::ml {

// Gaussian class-conditional naive Bayes for two classes.
struct GaussianNb {
  Eigen::Matrix<double, 2, Eigen::Dynamic> means;
  Eigen::Matrix<double, 2, Eigen::Dynamic> variances;  // already smoothed
  Eigen::Vector2d log_prior;

  /// Variances get epsilon = var_smoothing * (largest per-feature variance
  /// of X) added; priors are the training class frequencies.
  static GaussianNb fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                        double var_smoothing);

  // P(y = 1 | x)
  double score(const Eigen::VectorXd& x) const;
};

}  // namespace specdet::ml

#endif  // SPECDET_ML_NAIVE_BAYES_HPP_
