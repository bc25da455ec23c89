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

#ifndef SPECDET_ML_LOGISTIC_REGRESSION_HPP_
#define SPECDET_ML_LOGISTIC_REGRESSION_HPP_

#include <Eigen/Dense>
#include <vector>

#include "specdet/math.hpp"

namespace specdet::ml {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Mean log-loss plus (l2 / 2) * |w|^2; the bias is not penalized.
template <typename DerivedX, typename DerivedW>
typename DerivedX::Scalar logistic_objective(const Eigen::MatrixBase<DerivedX>& X,
                                             const VectorX<typename DerivedX::Scalar>& y,
                                             const Eigen::MatrixBase<DerivedW>& w,
                                             typename DerivedX::Scalar b,
                                             typename DerivedX::Scalar l2) {
  using Scalar = typename DerivedX::Scalar;
  const VectorX<Scalar> z = (X * w).array() + b;
  Scalar loss(0);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // -[y log s(z) + (1 - y) log s(-z)]
    loss -= y(i) * log_sigmoid(z(i)) + (Scalar(1) - y(i)) * log_sigmoid(-z(i));
  }
  return loss / Scalar(z.size()) + Scalar(0.5) * l2 * w.squaredNorm();
}

template <typename Scalar>
struct LogisticGradient {
  VectorX<Scalar> w;
  Scalar b;
};

template <typename DerivedX, typename DerivedW>
LogisticGradient<typename DerivedX::Scalar> logistic_gradient(
    const Eigen::MatrixBase<DerivedX>& X, const VectorX<typename DerivedX::Scalar>& y,
    const Eigen::MatrixBase<DerivedW>& w, typename DerivedX::Scalar b,
    typename DerivedX::Scalar l2) {
  using Scalar = typename DerivedX::Scalar;
  VectorX<Scalar> residual = (X * w).array() + b;
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    residual(i) = sigmoid(residual(i)) - y(i);
  }
  const Scalar n(residual.size());
  return {X.transpose() * residual / n + l2 * w, residual.sum() / n};
}

struct LogisticModel {
  Eigen::VectorXd w;
  double b = 0.0;
  int iterations = 0;

  static LogisticModel zeros(int dim) { return {Eigen::VectorXd::Zero(dim), 0.0, 0}; }

  /// Full-batch accelerated gradient descent with step 1/L, L the Lipschitz
  /// constant of the objective's gradient, until |grad| < tolerance or
  /// max_iter steps.
  static LogisticModel fit(const Eigen::MatrixXd& X, const std::vector<int>& y, double l2,
                           double tolerance, int max_iter);

  double score(const Eigen::VectorXd& x) const { return sigmoid(w.dot(x) + b); }
};

}  // namespace specdet::ml

#endif  // SPECDET_ML_LOGISTIC_REGRESSION_HPP_
