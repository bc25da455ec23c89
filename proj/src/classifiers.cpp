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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <type_traits>

#include "specdet/error.hpp"
#include "specdet/ml/model.hpp"

namespace specdet::ml {

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kCnn: return "cnn";
    case ClassifierKind::kNb: return "nb";
    case ClassifierKind::kSvc: return "svc";
    case ClassifierKind::kLr: return "lr";
    case ClassifierKind::kRf: return "rf";
  }
  return "?";
}

std::string_view display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kCnn: return "1D-CNN";
    case ClassifierKind::kNb: return "NB";
    case ClassifierKind::kSvc: return "SVC";
    case ClassifierKind::kLr: return "LR";
    case ClassifierKind::kRf: return "RF";
  }
  return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ClassifierKind k : kAllClassifiers) {
    if (to_string(k) == lower) return k;
  }
  throw UsageError("unknown classifier '" + std::string(name) + "' (expected cnn|nb|svc|lr|rf)");
}

namespace {

FeatureKind expected_kind(ClassifierKind kind) {
  return kind == ClassifierKind::kCnn ? FeatureKind::kSequence : FeatureKind::kVector;
}

}  // namespace

ModelArtifact train(ClassifierKind kind, const Dataset& data, const TrainConfig& config) {
  if (data.empty()) throw DataError("cannot train on an empty dataset");
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw DataError("degenerate labels");
  if (data.kind() != expected_kind(kind)) {
    throw SchemaError(std::string(display_name(kind)) + " expects " +
                      (expected_kind(kind) == FeatureKind::kSequence ? "sequence" : "vector") +
                      " features, got " + data.schema().describe());
  }

  ModelArtifact model;
  model.kind = kind;
  model.feature_schema = data.schema();
  model.train_config = config;

  if (kind == ClassifierKind::kCnn) {
    model.parameters = fit_cnn(data, config.cnn, config.seed);
    return model;
  }

  Eigen::MatrixXd X = data.X();
  if (config.standardize) {
    model.standardizer = Standardizer::fit(X);
    X = model.standardizer->apply_rows(X);
  }
  const auto& y = data.labels();
  switch (kind) {
    case ClassifierKind::kNb:
      model.parameters = GaussianNb::fit(X, y, config.nb_var_smoothing);
      break;
    case ClassifierKind::kLr:
      model.parameters =
          LogisticModel::fit(X, y, config.lr_l2, config.lr_tolerance, config.lr_max_iter);
      break;
    case ClassifierKind::kSvc:
      model.parameters = LinearSvc::fit(X, y, config.svc_c, config.svc_epochs, config.seed);
      break;
    case ClassifierKind::kRf:
      model.parameters = RandomForest::fit(X, y, config.forest, config.seed);
      break;
    case ClassifierKind::kCnn:
      break;
  }
  return model;
}

namespace {

double checked(double score) {
  if (!std::isfinite(score)) throw Error(ErrorKind::kInternal, "model produced a non-finite score");
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace

double predict_score(const ModelArtifact& model, const Eigen::VectorXd& x) {
  const auto& schema = model.feature_schema;
  if (schema.kind != FeatureKind::kVector || x.size() != schema.dim) {
    throw SchemaError("input vector[" + std::to_string(x.size()) + "] does not match model schema " +
                      schema.describe());
  }
  const Eigen::VectorXd z = model.standardizer ? model.standardizer->apply(x) : x;
  return checked(std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Cnn1d>) {
          throw SchemaError("CNN model needs sequence input");
        } else {
          return p.score(z);
        }
      },
      model.parameters));
}

double predict_score(const ModelArtifact& model, const Eigen::MatrixXd& sequence) {
  const auto& schema = model.feature_schema;
  if (schema.kind != FeatureKind::kSequence || sequence.rows() != schema.maxlen ||
      sequence.cols() != schema.dim) {
    throw SchemaError("input sequence[" + std::to_string(sequence.rows()) + "x" +
                      std::to_string(sequence.cols()) + "] does not match model schema " +
                      schema.describe());
  }
  const auto* net = std::get_if<Cnn1d>(&model.parameters);
  if (!net) throw SchemaError("only CNN models accept sequence input");
  return checked(net->score(sequence));
}

std::vector<double> predict_scores(const ModelArtifact& model, const Dataset& data) {
  if (data.schema() != model.feature_schema) {
    throw SchemaError("dataset schema " + data.schema().describe() +
                      " does not match model schema " + model.feature_schema.describe());
  }
  std::vector<double> scores;
  scores.reserve(data.size());
  if (data.kind() == FeatureKind::kVector) {
    const auto& X = data.X();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      scores.push_back(predict_score(model, Eigen::VectorXd(X.row(i).transpose())));
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      scores.push_back(predict_score(model, data.sequence(i)));
    }
  }
  return scores;
}

int predict_label(const ModelArtifact& model, const Eigen::VectorXd& x, double threshold) {
  return predict_score(model, x) >= threshold ? 1 : 0;
}

int predict_label(const ModelArtifact& model, const Eigen::MatrixXd& sequence, double threshold) {
  return predict_score(model, sequence) >= threshold ? 1 : 0;
}

}  // namespace specdet::ml
