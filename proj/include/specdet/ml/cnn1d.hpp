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

#ifndef SPECDET_ML_CNN1D_HPP_
#define SPECDET_ML_CNN1D_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "specdet/math.hpp"
#include "specdet/ml/dataset.hpp"

namespace specdet::ml {

/// conv1d (valid, stride 1) -> ReLU -> global max pool -> dense -> logit.
///
/// Inputs are steps x channels matrices. Filter weights are stored as a
/// (kernel * channels) x filters matrix so that one window, flattened
/// step-major, times `conv_w` yields every filter response at that step.
template <typename Scalar>
struct Conv1dNet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int kernel = 5;
  int channels = 0;
  Matrix conv_w;
  Vector conv_b;
  Vector dense_w;
  Scalar dense_b = Scalar(0);

  int filters() const { return static_cast<int>(conv_w.cols()); }
  Eigen::Index parameter_count() const {
    return conv_w.size() + conv_b.size() + dense_w.size() + 1;
  }

  // He-uniform convolution weights, Glorot-uniform dense weights, zero biases.
  static Conv1dNet init(int channels, int filters, int kernel, std::mt19937_64& rng) {
    Conv1dNet net;
    net.kernel = kernel;
    net.channels = channels;
    const double conv_bound = std::sqrt(6.0 / (kernel * channels));
    const double dense_bound = std::sqrt(6.0 / (filters + 1));
    std::uniform_real_distribution<double> conv(-conv_bound, conv_bound);
    std::uniform_real_distribution<double> dense(-dense_bound, dense_bound);
    net.conv_w.resize(kernel * channels, filters);
    for (Eigen::Index j = 0; j < net.conv_w.cols(); ++j) {
      for (Eigen::Index i = 0; i < net.conv_w.rows(); ++i) net.conv_w(i, j) = Scalar(conv(rng));
    }
    net.conv_b = Vector::Zero(filters);
    net.dense_w.resize(filters);
    for (Eigen::Index i = 0; i < filters; ++i) net.dense_w(i) = Scalar(dense(rng));
    return net;
  }

  // Rows are sliding windows of the input, each flattened step-major.
  Matrix windows(const Matrix& seq) const {
    if (seq.cols() != channels) throw std::invalid_argument("channel count mismatch");
    if (seq.rows() < kernel) throw std::invalid_argument("sequence shorter than kernel");
    const Eigen::Index out_len = seq.rows() - kernel + 1;
    Matrix patches(out_len, static_cast<Eigen::Index>(kernel) * channels);
    for (int k = 0; k < kernel; ++k) {
      patches.middleCols(static_cast<Eigen::Index>(k) * channels, channels) =
          seq.middleRows(k, out_len);
    }
    return patches;
  }

  struct Activations {
    Matrix patches;
    Vector pooled;                  // per filter, after ReLU
    Eigen::VectorXi argmax;         // window index of each filter's max
    Scalar logit;
  };

  Activations forward(const Matrix& seq) const {
    Activations a;
    a.patches = windows(seq);
    Matrix response = a.patches * conv_w;
    response.rowwise() += conv_b.transpose();
    a.pooled.resize(filters());
    a.argmax.resize(filters());
    for (int f = 0; f < filters(); ++f) {
      Eigen::Index r;
      const Scalar best = response.col(f).maxCoeff(&r);
      a.argmax(f) = static_cast<int>(r);
      a.pooled(f) = std::max(best, Scalar(0));
    }
    a.logit = dense_w.dot(a.pooled) + dense_b;
    return a;
  }

  Scalar logit(const Matrix& seq) const { return forward(seq).logit; }
  Scalar score(const Matrix& seq) const { return sigmoid(logit(seq)); }

  struct Gradient {
    Matrix conv_w;
    Vector conv_b;
    Vector dense_w;
    Scalar dense_b;

    static Gradient zeros_like(const Conv1dNet& net) {
      return {Matrix::Zero(net.conv_w.rows(), net.conv_w.cols()), Vector::Zero(net.conv_b.size()),
              Vector::Zero(net.dense_w.size()), Scalar(0)};
    }
  };

  // Binary cross-entropy of sigmoid(logit) against `label`; accumulates the
  // parameter gradient into `grad` and returns the loss.
  Scalar accumulate_gradient(const Matrix& seq, int label, Gradient& grad) const {
    const Activations a = forward(seq);
    const Scalar y(label);
    const Scalar loss = -(y * log_sigmoid(a.logit) + (Scalar(1) - y) * log_sigmoid(-a.logit));
    const Scalar dlogit = sigmoid(a.logit) - y;
    grad.dense_w += dlogit * a.pooled;
    grad.dense_b += dlogit;
    for (int f = 0; f < filters(); ++f) {
      if (!(a.pooled(f) > Scalar(0))) continue;
      const Scalar g = dlogit * dense_w(f);
      grad.conv_w.col(f) += g * a.patches.row(a.argmax(f)).transpose();
      grad.conv_b(f) += g;
    }
    return loss;
  }

  void apply(const Gradient& grad, Scalar step) {
    conv_w -= step * grad.conv_w;
    conv_b -= step * grad.conv_b;
    dense_w -= step * grad.dense_w;
    dense_b -= step * grad.dense_b;
  }

  // Flat views used by the finite-difference checks.
  Vector flatten() const {
    Vector v(parameter_count());
    Eigen::Index o = 0;
    v.segment(o, conv_w.size()) = conv_w.reshaped();
    o += conv_w.size();
    v.segment(o, conv_b.size()) = conv_b;
    o += conv_b.size();
    v.segment(o, dense_w.size()) = dense_w;
    o += dense_w.size();
    v(o) = dense_b;
    return v;
  }

  void unflatten(const Vector& v) {
    Eigen::Index o = 0;
    conv_w.reshaped() = v.segment(o, conv_w.size());
    o += conv_w.size();
    conv_b = v.segment(o, conv_b.size());
    o += conv_b.size();
    dense_w = v.segment(o, dense_w.size());
    o += dense_w.size();
    dense_b = v(o);
  }

  static Vector flatten(const Gradient& g) {
    Vector v(g.conv_w.size() + g.conv_b.size() + g.dense_w.size() + 1);
    Eigen::Index o = 0;
    v.segment(o, g.conv_w.size()) = g.conv_w.reshaped();
    o += g.conv_w.size();
    v.segment(o, g.conv_b.size()) = g.conv_b;
    o += g.conv_b.size();
    v.segment(o, g.dense_w.size()) = g.dense_w;
    o += g.dense_w.size();
    v(o) = g.dense_b;
    return v;
  }
};

using Cnn1d = Conv1dNet<double>;

struct CnnParams {
  int filters = 64;
  int kernel = 5;
  int batch = 32;
  int epochs = 10;
  double learning_rate = 1e-3;
};

/// Mini-batch SGD on mean binary cross-entropy, reshuffling every epoch.
Cnn1d fit_cnn(const Dataset& data, const CnnParams& params, std::uint64_t seed,
              std::vector<double>* epoch_loss = nullptr);

}  // namespace specdet::ml

#endif  // SPECDET_ML_CNN1D_HPP_
