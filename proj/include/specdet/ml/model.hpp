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

#ifndef SPECDET_ML_MODEL_HPP_
#define SPECDET_ML_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "specdet/ml/cnn1d.hpp"
#include "specdet/ml/dataset.hpp"
#include "specdet/ml/linear_svc.hpp"
#include "specdet/ml/logistic_regression.hpp"
#include "specdet/ml/naive_bayes.hpp"
#include "specdet/ml/random_forest.hpp"
#include "specdet/ml/standardizer.hpp"

namespace specdet::ml {

inline constexpr int kModelFormatVersion = 1;

enum class ClassifierKind { kCnn, kNb, kSvc, kLr, kRf };

inline constexpr ClassifierKind kAllClassifiers[] = {
    ClassifierKind::kCnn, ClassifierKind::kNb, ClassifierKind::kSvc, ClassifierKind::kLr,
    ClassifierKind::kRf};

std::string_view to_string(ClassifierKind kind);
// Accepts cnn, nb, svc, lr, rf (case-insensitive).
ClassifierKind parse_classifier(std::string_view name);
// Table label, e.g. "1D-CNN", "RF".
std::string_view display_name(ClassifierKind kind);

struct TrainConfig {
  std::uint64_t seed = 0;
  bool standardize = false;

  double nb_var_smoothing = 1e-9;

  double lr_l2 = 1e-4;
  double lr_tolerance = 1e-6;
  int lr_max_iter = 10000;

  double svc_c = 1.0;
  int svc_epochs = 50;

  ForestParams forest;
  CnnParams cnn;
};

using ModelParameters =
    std::variant<GaussianNb, LogisticModel, LinearSvc, RandomForest, Cnn1d>;

struct ModelArtifact {
  int format_version = kModelFormatVersion;
  ClassifierKind kind = ClassifierKind::kLr;
  FeatureSchema feature_schema;
  TrainConfig train_config;
  std::optional<Standardizer> standardizer;
  ModelParameters parameters;
};

/// Fits one classifier. Throws DataError("degenerate labels") when the data
/// holds a single class and SchemaError when the data kind does not suit the
/// classifier (CNN needs sequences, the rest need vectors).
ModelArtifact train(ClassifierKind kind, const Dataset& data, const TrainConfig& config);

// Score in [0, 1]. Throws SchemaError when the input does not match.
double predict_score(const ModelArtifact& model, const Eigen::VectorXd& x);
double predict_score(const ModelArtifact& model, const Eigen::MatrixXd& sequence);
// Scores every example of `data`.
std::vector<double> predict_scores(const ModelArtifact& model, const Dataset& data);

// 1 iff score >= threshold.
int predict_label(const ModelArtifact& model, const Eigen::VectorXd& x, double threshold = 0.5);
int predict_label(const ModelArtifact& model, const Eigen::MatrixXd& sequence,
                  double threshold = 0.5);

std::string serialize_model(const ModelArtifact& model);
ModelArtifact deserialize_model(std::string_view text);
void save_model(const ModelArtifact& model, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace specdet::ml

#endif  // SPECDET_ML_MODEL_HPP_
