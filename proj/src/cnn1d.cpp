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

#include "specdet/ml/cnn1d.hpp"

#include <numeric>

namespace specdet::ml {

Cnn1d fit_cnn(const Dataset& data, const CnnParams& params, std::uint64_t seed,
              std::vector<double>* epoch_loss) {
  std::mt19937_64 rng(seed);
  Cnn1d net = Cnn1d::init(data.schema().dim, params.filters, params.kernel, rng);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(std::max(params.batch, 1));

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      auto grad = Cnn1d::Gradient::zeros_like(net);
      for (std::size_t k = start; k < end; ++k) {
        loss_sum += net.accumulate_gradient(data.sequence(order[k]), data.label(order[k]), grad);
      }
      net.apply(grad, params.learning_rate / static_cast<double>(end - start));
    }
    if (epoch_loss) epoch_loss->push_back(loss_sum / static_cast<double>(order.size()));
  }
  return net;
}

}  // namespace specdet::ml
