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

#include "specdet/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "specdet/error.hpp"

namespace specdet::eval {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DataError("confusion: y_true has " + std::to_string(y_true.size()) +
                    " labels but y_pred has " + std::to_string(y_pred.size()));
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw DataError("confusion: labels must be binary");
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn)++;
    } else {
      (p == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

MetricsReport metrics_from_rates(double precision, double recall, double specificity,
                                 double beta) {
  MetricsReport r;
  r.beta = beta;
  r.precision = precision;
  r.recall = recall;
  r.specificity = specificity;
  r.f1 = ratio(2.0 * precision * recall, precision + recall);
  const double b2 = beta * beta;
  r.fbeta = ratio((1.0 + b2) * precision * recall, b2 * precision + recall);
  r.gmean = std::sqrt(recall * specificity);
  r.avg = (r.f1 + r.fbeta + r.precision + r.recall + r.specificity + r.gmean) / 6.0;
  return r;
}

MetricsReport metrics(const ConfusionMatrix& cm, double beta) {
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn);
  const auto tn = static_cast<double>(cm.tn);
  return metrics_from_rates(ratio(tp, tp + fp), ratio(tp, tp + fn), ratio(tn, fp + tn), beta);
}

MetricsReport mean_report(std::span<const MetricsReport> reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  m.beta = reports.front().beta;
  m.f1 = m.fbeta = m.precision = m.recall = m.specificity = m.gmean = m.avg = 0.0;
  for (const auto& r : reports) {
    m.f1 += r.f1;
    m.fbeta += r.fbeta;
    m.precision += r.precision;
    m.recall += r.recall;
    m.specificity += r.specificity;
    m.gmean += r.gmean;
    m.avg += r.avg;
  }
  const auto n = static_cast<double>(reports.size());
  m.f1 /= n;
  m.fbeta /= n;
  m.precision /= n;
  m.recall /= n;
  m.specificity /= n;
  m.gmean /= n;
  m.avg /= n;
  return m;
}

void SplitSpec::validate() const {
  if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0 ||
      std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw UsageError("split fractions must be non-negative and sum to 1");
  }
}

SplitIndices split(std::span<const int> labels, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = labels.size();
  if (n < 10) throw DataError("split needs at least 10 examples, got " + std::to_string(n));
  std::mt19937_64 rng(spec.seed);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.stratify) {
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < n; ++i) {
      const int y = labels[i];
      if (y != 0 && y != 1) throw DataError("split: labels must be binary");
      by_class[y].push_back(i);
    }
    struct Keyed {
      double position;
      std::uint64_t tie;
      std::size_t index;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(n);
    for (auto& members : by_class) {
      if (spec.shuffle) std::shuffle(members.begin(), members.end(), rng);
      const auto m = static_cast<double>(members.size());
      for (std::size_t j = 0; j < members.size(); ++j) {
        keyed.push_back({(static_cast<double>(j) + 0.5) / m, rng(), members[j]});
      }
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
      return a.position != b.position ? a.position < b.position : a.tie < b.tie;
    });
    for (std::size_t i = 0; i < n; ++i) order[i] = keyed[i].index;
  } else if (spec.shuffle) {
    std::shuffle(order.begin(), order.end(), rng);
  }

  const auto cut1 = static_cast<std::size_t>(std::floor(spec.train_frac * static_cast<double>(n) + 1e-9));
  const auto cut2 = static_cast<std::size_t>(
      std::floor((spec.train_frac + spec.val_frac) * static_cast<double>(n) + 1e-9));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut1));
  out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(cut1),
                 order.begin() + static_cast<std::ptrdiff_t>(cut2));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut2), order.end());
  return out;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, const KFoldSpec& spec) {
  if (spec.k < 2) throw UsageError("k must be at least 2");
  const auto k = static_cast<std::size_t>(spec.k);
  if (k > n) {
    throw DataError("k = " + std::to_string(k) + " exceeds dataset size " + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

std::vector<int> threshold_labels(std::span<const double> scores, double threshold) {
  std::vector<int> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s >= threshold ? 1 : 0);
  return out;
}

CvResult kfold_cv(ml::ClassifierKind kind, const ml::Dataset& data, const KFoldSpec& kspec,
                  const ml::TrainConfig& config, double threshold, double beta) {
  const auto folds = kfold_indices(data.size(), kspec);
  CvResult result;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
    }
    ml::TrainConfig fold_config = config;
    fold_config.seed = config.seed + f;
    const auto model = ml::train(kind, data.subset(train_idx), fold_config);
    const auto held_out = data.subset(folds[f]);
    const auto scores = ml::predict_scores(model, held_out);
    const auto pred = threshold_labels(scores, threshold);
    result.folds.push_back(metrics(confusion(held_out.labels(), pred), beta));
  }
  result.trt_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.mean = mean_report(result.folds);
  result.mean.trt_s = result.trt_s;
  return result;
}

RocCurve roc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw DataError("roc: labels and scores differ in length");
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) {
      ++pos;
    } else if (y_true[i] == 0) {
      ++neg;
    } else {
      throw DataError("roc: labels must be binary");
    }
    if (std::isnan(scores[i])) throw DataError("roc: NaN score");
  }
  if (pos == 0 || neg == 0) throw DataError("AUC undefined: y_true holds a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (y_true[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return curve;
}

double time_prediction(const ml::ModelArtifact& model, const ml::Dataset& pool) {
  if (pool.empty()) throw DataError("prediction timing needs a non-empty pool");
  constexpr std::size_t kObservations = 1000;
  std::vector<std::size_t> idx(kObservations);
  for (std::size_t i = 0; i < kObservations; ++i) idx[i] = i % pool.size();
  const ml::Dataset batch = pool.subset(idx);

  volatile double sink = 0.0;
  auto score_all = [&] {
    double acc = 0.0;
    if (batch.kind() == ml::FeatureKind::kVector) {
      const auto& X = batch.X();
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        acc += ml::predict_score(model, Eigen::VectorXd(X.row(i).transpose()));
      }
    } else {
      for (std::size_t i = 0; i < batch.size(); ++i) {
        acc += ml::predict_score(model, batch.sequence(i));
      }
    }
    sink = sink + acc;
  };
  score_all();
  const auto start = std::chrono::steady_clock::now();
  score_all();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return std::max(elapsed, std::numeric_limits<double>::min());
}

}  // namespace specdet::eval
