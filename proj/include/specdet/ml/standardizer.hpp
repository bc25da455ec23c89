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

#ifndef SPECDET_ML_STANDARDIZER_HPP_
#define SPECDET_ML_STANDARDIZER_HPP_

#include <Eigen/Dense>

namespace specdet::ml {

// Per-feature z-scoring with training-set statistics. Constant features
// get unit scale so they pass through centered.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& X);

  template <typename Derived>
  Eigen::VectorXd apply(const Eigen::MatrixBase<Derived>& x) const {
    return (x - mean).cwiseQuotient(scale);
  }
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& X) const;
};

}  // namespace specdet::ml

#endif  // SPECDET_ML_STANDARDIZER_HPP_
