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

#include "specdet/ml/naive_bayes.hpp"

#include <cmath>
#include <numbers>

#include "specdet/math.hpp"

namespace specdet::ml {

GaussianNb GaussianNb::fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                           double var_smoothing) {
  const Eigen::Index d = X.cols();
  GaussianNb nb;
  nb.means = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, d);
  nb.variances = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, d);
  Eigen::Vector2d counts = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    nb.means.row(c) += X.row(i);
    counts(c) += 1.0;
  }
  for (int c = 0; c < 2; ++c) nb.means.row(c) /= counts(c);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    nb.variances.row(c) += (X.row(i) - nb.means.row(c)).array().square().matrix();
  }
  for (int c = 0; c < 2; ++c) nb.variances.row(c) /= counts(c);

  const Eigen::RowVectorXd overall_mean = X.colwise().mean();
  const double max_var =
      d ? ((X.rowwise() - overall_mean).array().square().colwise().mean()).maxCoeff() : 0.0;
  double epsilon = var_smoothing * max_var;
  if (!(epsilon > 0.0)) epsilon = var_smoothing;
  nb.variances.array() += epsilon;
  nb.log_prior = (counts / counts.sum()).array().log();
  return nb;
}

double GaussianNb::score(const Eigen::VectorXd& x) const {
  Eigen::Vector2d joint;
  for (int c = 0; c < 2; ++c) {
    const Eigen::ArrayXd var = variances.row(c).transpose().array();
    const Eigen::ArrayXd diff = x.array() - means.row(c).transpose().array();
    joint(c) = log_prior(c) -
               0.5 * ((2.0 * std::numbers::pi * var).log() + diff.square() / var).sum();
  }
  return sigmoid(joint(1) - joint(0));
}

}  // namespace specdet::ml
