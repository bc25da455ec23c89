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

#ifndef SPECDET_ML_LINEAR_SVC_HPP_
#define SPECDET_ML_LINEAR_SVC_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "specdet/math.hpp"

namespace specdet::ml {

// Two-parameter logistic map from decision values to probabilities.
struct PlattScaling {
  double a = 1.0;
  double b = 0.0;

  // Fits with the smoothed targets (N+ + 1) / (N+ + 2) and 1 / (N- + 2).
  static PlattScaling fit(const Eigen::VectorXd& decision, const std::vector<int>& y);
  double operator()(double f) const { return sigmoid(a * f + b); }
};

/// Soft-margin linear SVM: 0.5 |w|^2 + C * sum hinge(y_i (w.x_i + b)).
/// Trained by stochastic subgradient steps (Pegasos schedule) over seeded
/// shuffles; the iterate with the lowest objective at an epoch boundary wins.
struct LinearSvc {
  Eigen::VectorXd w;
  double b = 0.0;
  PlattScaling platt;

  static LinearSvc fit(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                       int epochs, std::uint64_t seed);

  double decision(const Eigen::VectorXd& x) const { return w.dot(x) + b; }
  double score(const Eigen::VectorXd& x) const { return platt(decision(x)); }
};

double svc_objective(const Eigen::MatrixXd& X, const std::vector<int>& y,
                     const Eigen::VectorXd& w, double b, double c);

}  // namespace specdet::ml

#endif  // SPECDET_ML_LINEAR_SVC_HPP_
