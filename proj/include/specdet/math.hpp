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

#ifndef SPECDET_MATH_HPP_
#define SPECDET_MATH_HPP_

#include <cmath>

namespace specdet {

// Overflow-free logistic function.
template <typename Scalar>
Scalar sigmoid(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

// log(sigmoid(x)) without cancellation for large |x|.
template <typename Scalar>
Scalar log_sigmoid(Scalar x) {
  using std::exp;
  using std::log1p;
  return x >= Scalar(0) ? -log1p(exp(-x)) : x - log1p(exp(x));
}

}  // namespace specdet

#endif  // SPECDET_MATH_HPP_
