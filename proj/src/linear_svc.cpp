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

#include "specdet/ml/linear_svc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace specdet::ml {

PlattScaling PlattScaling::fit(const Eigen::VectorXd& decision, const std::vector<int>& y) {
  const Eigen::Index n = decision.size();
  double n_pos = 0.0;
  for (int v : y) n_pos += v;
  const double n_neg = static_cast<double>(n) - n_pos;
  const double hi = (n_pos + 1.0) / (n_pos + 2.0);
  const double lo = 1.0 / (n_neg + 2.0);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)] ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = a * decision(i) + b;
      f -= t(i) * log_sigmoid(z) + (1.0 - t(i)) * log_sigmoid(-z);
    }
    return f;
  };

  PlattScaling p{0.0, std::log((n_pos + 1.0) / (n_neg + 1.0))};
  double f = objective(p.a, p.b);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    Eigen::Matrix2d h = Eigen::Matrix2d::Identity() * 1e-12;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(p.a * decision(i) + p.b);
      const double r = s - t(i);
      const double w = s * (1.0 - s);
      g += r * Eigen::Vector2d(decision(i), 1.0);
      h(0, 0) += w * decision(i) * decision(i);
      h(0, 1) += w * decision(i);
      h(1, 1) += w;
    }
    h(1, 0) = h(0, 1);
    if (g.norm() < 1e-10) break;
    const Eigen::Vector2d dir = -h.ldlt().solve(g);
    double step = 1.0;
    bool moved = false;
    while (step > 1e-10) {
      const double a = p.a + step * dir(0);
      const double b = p.b + step * dir(1);
      const double fn = objective(a, b);
      if (fn < f + 1e-4 * step * g.dot(dir)) {
        p = {a, b};
        f = fn;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return p;
}

double svc_objective(const Eigen::MatrixXd& X, const std::vector<int>& y,
                     const Eigen::VectorXd& w, double b, double c) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double sign = y[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - sign * (X.row(i).dot(w) + b));
  }
  return 0.5 * (w.squaredNorm() + b * b) + c * hinge;
}

LinearSvc LinearSvc::fit(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                         int epochs, std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  // Dividing the objective by C * n gives lambda/2 |w|^2 + mean hinge.
  const double lambda = 1.0 / (c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);

  // The bias is the weight of a constant feature and shares the penalty.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  LinearSvc best;
  best.w = Eigen::VectorXd::Zero(d);
  double best_obj = svc_objective(X, y, best.w, 0.0, c);

  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  double t = 0.0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      t += 1.0;
      const double eta = 1.0 / (lambda * t);
      const double sign = y[static_cast<std::size_t>(i)] ? 1.0 : -1.0;
      const double margin = sign * (X.row(i).dot(w.head(d)) + w(d));
      w *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        w.head(d) += eta * sign * X.row(i).transpose();
        w(d) += eta * sign;
      }
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
    }
    const double obj = svc_objective(X, y, w.head(d), w(d), c);
    if (obj < best_obj) {
      best_obj = obj;
      best.w = w.head(d);
      best.b = w(d);
    }
  }

  Eigen::VectorXd decision(n);
  for (Eigen::Index i = 0; i < n; ++i) decision(i) = X.row(i).dot(best.w) + best.b;
  best.platt = PlattScaling::fit(decision, y);
  return best;
}

}  // namespace specdet::ml
