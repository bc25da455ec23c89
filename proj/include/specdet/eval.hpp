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

#ifndef SPECDET_EVAL_HPP_
#define SPECDET_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "specdet/ml/model.hpp"

namespace specdet::eval {

// Spectre is the positive class: tp = (s -> s), fp = (b -> s),
// fn = (s -> b), tn = (b -> b).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

inline constexpr double kDefaultBeta = 0.5;

struct MetricsReport {
  double f1 = 0.0;
  double fbeta = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double gmean = 0.0;
  double avg = 0.0;  // unweighted mean of the six above
  double beta = kDefaultBeta;
  std::optional<double> trt_s;  // train + cross-validate wall time
  std::optional<double> prt_s;  // wall time to score 1000 observations
};

/// F1, F-beta, precision, recall, specificity and geometric mean of
/// recall/specificity. Every 0/0 ratio is taken as 0.
MetricsReport metrics(const ConfusionMatrix& cm, double beta = kDefaultBeta);

// Same formulas starting from precision, recall and specificity directly.
MetricsReport metrics_from_rates(double precision, double recall, double specificity,
                                 double beta = kDefaultBeta);

// Field-wise mean of the metric fields; timing fields are left unset.
MetricsReport mean_report(std::span<const MetricsReport> reports);

struct SplitSpec {
  double train_frac = 0.7;
  double val_frac = 0.1;
  double test_frac = 0.2;
  bool shuffle = true;
  bool stratify = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded permutation cut at floor(train_frac * N) and
/// floor((train_frac + val_frac) * N). With stratify, the permutation
/// interleaves the classes evenly so each contiguous slice keeps the class
/// ratio to within one sample. Needs N >= 10.
SplitIndices split(std::span<const int> labels, const SplitSpec& spec);

struct KFoldSpec {
  int k = 10;
  std::uint64_t seed = 0;
};

// Seeded shuffle dealt into k contiguous folds whose sizes differ by <= 1.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, const KFoldSpec& spec);

struct CvResult {
  std::vector<MetricsReport> folds;
  MetricsReport mean;
  double trt_s = 0.0;
};

/// Trains on k-1 folds and validates on the held-out one, k times. Fold i
/// trains with seed config.seed + i. trt_s is the wall time of all of it.
CvResult kfold_cv(ml::ClassifierKind kind, const ml::Dataset& data, const KFoldSpec& kspec,
                  const ml::TrainConfig& config, double threshold = 0.5,
                  double beta = kDefaultBeta);

struct RocPoint {
  double threshold;  // +inf for the origin
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Sweeps the distinct scores in descending order; tied scores move the
/// curve in one diagonal step. AUC by the trapezoid rule.
RocCurve roc(std::span<const int> y_true, std::span<const double> scores);

// Seconds to score exactly 1000 observations drawn cyclically from `pool`,
// after one untimed warm-up pass over the same 1000.
double time_prediction(const ml::ModelArtifact& model, const ml::Dataset& pool);

std::vector<int> threshold_labels(std::span<const double> scores, double threshold);

}  // namespace specdet::eval

#endif  // SPECDET_EVAL_HPP_
