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

#include "specdet/ml/logistic_regression.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace specdet::ml {

LogisticModel LogisticModel::fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                 double l2, double tolerance, int max_iter) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = y[static_cast<std::size_t>(i)];

  // Hessian of the log-loss is bounded by 0.25 * A^T A / n with A = [X 1].
  Eigen::MatrixXd gram(d + 1, d + 1);
  gram.topLeftCorner(d, d) = X.transpose() * X;
  gram.topRightCorner(d, 1) = X.colwise().sum().transpose();
  gram.bottomLeftCorner(1, d) = X.colwise().sum();
  gram(d, d) = static_cast<double>(n);
  gram /= static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = 0.25 * eig.eigenvalues().maxCoeff() + l2;
  const double step = 1.0 / lipschitz;

  // Nesterov momentum, restarted whenever the step goes uphill.
  LogisticModel m = zeros(static_cast<int>(d));
  Eigen::VectorXd yw = m.w;
  double yb = m.b;
  double t = 1.0;
  for (m.iterations = 0; m.iterations < max_iter; ++m.iterations) {
    const auto g = logistic_gradient(X, target, yw, yb, l2);
    if (std::sqrt(g.w.squaredNorm() + g.b * g.b) < tolerance) {
      m.w = yw;
      m.b = yb;
      break;
    }
    const Eigen::VectorXd next_w = yw - step * g.w;
    const double next_b = yb - step * g.b;
    const double uphill = g.w.dot(next_w - m.w) + g.b * (next_b - m.b);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double momentum = (t - 1.0) / t_next;
    if (uphill > 0.0) {
      t_next = 1.0;
      momentum = 0.0;
    }
    yw = next_w + momentum * (next_w - m.w);
    yb = next_b + momentum * (next_b - m.b);
    m.w = next_w;
    m.b = next_b;
    t = t_next;
  }
  return m;
}

}  // namespace specdet::ml
