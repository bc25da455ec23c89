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

#include <cmath>
#include <type_traits>

#include "json.hpp"
#include "specdet/error.hpp"
#include "specdet/ml/model.hpp"
#include "specdet/text_util.hpp"

namespace specdet::ml {
namespace {

using Json = nlohmann::ordered_json;

template <typename Derived>
Json to_json_array(const Eigen::DenseBase<Derived>& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v(i);
    if (!std::isfinite(x)) throw Error(ErrorKind::kInternal, "non-finite model parameter");
    a.push_back(x);
  }
  return a;
}

Eigen::VectorXd vector_from(const Json& a, Eigen::Index expected = -1) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a.at(i).get<double>();
  if (expected >= 0 && v.size() != expected) throw DataError("parameter array has wrong length");
  if (!v.allFinite()) throw DataError("non-finite model parameter");
  return v;
}

// Row-major matrix with explicit shape.
Json matrix_json(const Eigen::MatrixXd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  j["values"] = to_json_array(rm.reshaped());
  return j;
}

Eigen::MatrixXd matrix_from(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows < 0 || cols < 0) throw DataError("negative matrix shape");
  const Eigen::VectorXd v = vector_from(j.at("values"), rows * cols);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  rm.reshaped() = v;
  return rm;
}

Json config_json(const TrainConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["standardize"] = c.standardize;
  j["nb_var_smoothing"] = c.nb_var_smoothing;
  j["lr_l2"] = c.lr_l2;
  j["lr_tolerance"] = c.lr_tolerance;
  j["lr_max_iter"] = c.lr_max_iter;
  j["svc_c"] = c.svc_c;
  j["svc_epochs"] = c.svc_epochs;
  j["rf_trees"] = c.forest.trees;
  j["rf_bootstrap"] = c.forest.bootstrap;
  j["rf_max_features"] = c.forest.max_features;
  j["cnn_filters"] = c.cnn.filters;
  j["cnn_kernel"] = c.cnn.kernel;
  j["cnn_batch"] = c.cnn.batch;
  j["cnn_epochs"] = c.cnn.epochs;
  j["cnn_learning_rate"] = c.cnn.learning_rate;
  return j;
}

TrainConfig config_from(const Json& j) {
  TrainConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.standardize = j.at("standardize").get<bool>();
  c.nb_var_smoothing = j.at("nb_var_smoothing").get<double>();
  c.lr_l2 = j.at("lr_l2").get<double>();
  c.lr_tolerance = j.at("lr_tolerance").get<double>();
  c.lr_max_iter = j.at("lr_max_iter").get<int>();
  c.svc_c = j.at("svc_c").get<double>();
  c.svc_epochs = j.at("svc_epochs").get<int>();
  c.forest.trees = j.at("rf_trees").get<int>();
  c.forest.bootstrap = j.at("rf_bootstrap").get<bool>();
  c.forest.max_features = j.at("rf_max_features").get<int>();
  c.cnn.filters = j.at("cnn_filters").get<int>();
  c.cnn.kernel = j.at("cnn_kernel").get<int>();
  c.cnn.batch = j.at("cnn_batch").get<int>();
  c.cnn.epochs = j.at("cnn_epochs").get<int>();
  c.cnn.learning_rate = j.at("cnn_learning_rate").get<double>();
  return c;
}

Json params_json(const ModelParameters& params) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        Json j;
        if constexpr (std::is_same_v<T, GaussianNb>) {
          j["means"] = matrix_json(p.means);
          j["variances"] = matrix_json(p.variances);
          j["log_prior"] = to_json_array(p.log_prior);
        } else if constexpr (std::is_same_v<T, LogisticModel>) {
          j["w"] = to_json_array(p.w);
          j["b"] = p.b;
          j["iterations"] = p.iterations;
        } else if constexpr (std::is_same_v<T, LinearSvc>) {
          j["w"] = to_json_array(p.w);
          j["b"] = p.b;
          j["platt_a"] = p.platt.a;
          j["platt_b"] = p.platt.b;
        } else if constexpr (std::is_same_v<T, RandomForest>) {
          Json trees = Json::array();
          for (const auto& t : p.trees) {
            Json feature = Json::array(), threshold = Json::array(), left = Json::array(),
                 right = Json::array(), vote = Json::array();
            for (const auto& n : t.nodes) {
              feature.push_back(n.feature);
              threshold.push_back(n.threshold);
              left.push_back(n.left);
              right.push_back(n.right);
              vote.push_back(n.vote);
            }
            Json tj;
            tj["feature"] = std::move(feature);
            tj["threshold"] = std::move(threshold);
            tj["left"] = std::move(left);
            tj["right"] = std::move(right);
            tj["vote"] = std::move(vote);
            trees.push_back(std::move(tj));
          }
          j["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, Cnn1d>) {
          j["kernel"] = p.kernel;
          j["channels"] = p.channels;
          j["conv_w"] = matrix_json(p.conv_w);
          j["conv_b"] = to_json_array(p.conv_b);
          j["dense_w"] = to_json_array(p.dense_w);
          j["dense_b"] = p.dense_b;
        }
        return j;
      },
      params);
}

ModelParameters params_from(ClassifierKind kind, const FeatureSchema& schema, const Json& j) {
  const Eigen::Index dim = schema.dim;
  switch (kind) {
    case ClassifierKind::kNb: {
      GaussianNb nb;
      nb.means = matrix_from(j.at("means"));
      nb.variances = matrix_from(j.at("variances"));
      nb.log_prior = vector_from(j.at("log_prior"), 2);
      if (nb.means.cols() != dim || nb.variances.cols() != dim ||
          !(nb.variances.array() > 0.0).all()) {
        throw DataError("naive Bayes parameters do not match schema");
      }
      return nb;
    }
    case ClassifierKind::kLr: {
      LogisticModel m;
      m.w = vector_from(j.at("w"), dim);
      m.b = j.at("b").get<double>();
      m.iterations = j.at("iterations").get<int>();
      return m;
    }
    case ClassifierKind::kSvc: {
      LinearSvc m;
      m.w = vector_from(j.at("w"), dim);
      m.b = j.at("b").get<double>();
      m.platt.a = j.at("platt_a").get<double>();
      m.platt.b = j.at("platt_b").get<double>();
      return m;
    }
    case ClassifierKind::kRf: {
      RandomForest f;
      for (const auto& tj : j.at("trees")) {
        DecisionTree t;
        const auto& feature = tj.at("feature");
        const std::size_t n = feature.size();
        const auto& threshold = tj.at("threshold");
        const auto& left = tj.at("left");
        const auto& right = tj.at("right");
        const auto& vote = tj.at("vote");
        if (threshold.size() != n || left.size() != n || right.size() != n || vote.size() != n ||
            n == 0) {
          throw DataError("tree arrays differ in length");
        }
        t.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          TreeNode& node = t.nodes[i];
          node.feature = feature[i].get<int>();
          node.threshold = threshold[i].get<double>();
          node.left = left[i].get<int>();
          node.right = right[i].get<int>();
          node.vote = vote[i].get<int>();
          if (node.feature >= dim ||
              (node.feature >= 0 &&
               (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n)))) {
            throw DataError("tree node " + std::to_string(i) + " is malformed");
          }
        }
        f.trees.push_back(std::move(t));
      }
      return f;
    }
    case ClassifierKind::kCnn: {
      Cnn1d net;
      net.kernel = j.at("kernel").get<int>();
      net.channels = j.at("channels").get<int>();
      net.conv_w = matrix_from(j.at("conv_w"));
      net.conv_b = vector_from(j.at("conv_b"), net.conv_w.cols());
      net.dense_w = vector_from(j.at("dense_w"), net.conv_w.cols());
      net.dense_b = j.at("dense_b").get<double>();
      if (net.channels != schema.dim || net.kernel < 1 || net.kernel > schema.maxlen ||
          net.conv_w.rows() != static_cast<Eigen::Index>(net.kernel) * net.channels) {
        throw DataError("CNN parameters do not match schema");
      }
      return net;
    }
  }
  throw DataError("unknown classifier kind");
}

}  // namespace

std::string serialize_model(const ModelArtifact& model) {
  Json j;
  j["format"] = "specdet-model";
  j["format_version"] = model.format_version;
  j["kind"] = std::string(to_string(model.kind));
  Json schema;
  schema["kind"] = model.feature_schema.kind == FeatureKind::kVector ? "vector" : "sequence";
  schema["dim"] = model.feature_schema.dim;
  schema["maxlen"] = model.feature_schema.maxlen;
  j["feature_schema"] = std::move(schema);
  j["train_config"] = config_json(model.train_config);
  if (model.standardizer) {
    Json s;
    s["mean"] = to_json_array(model.standardizer->mean);
    s["scale"] = to_json_array(model.standardizer->scale);
    j["standardization"] = std::move(s);
  } else {
    j["standardization"] = nullptr;
  }
  j["parameters"] = params_json(model.parameters);
  return j.dump() + "\n";
}

ModelArtifact deserialize_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("corrupt model file at byte offset " + std::to_string(e.byte) + ": " +
                    e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != "specdet-model") {
      throw DataError("not a specdet model file");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format_version " + std::to_string(version) +
                      " (expected " + std::to_string(kModelFormatVersion) + ")");
    }
    ModelArtifact m;
    m.format_version = version;
    m.kind = parse_classifier(j.at("kind").get<std::string>());
    const auto& schema = j.at("feature_schema");
    const std::string schema_kind = schema.at("kind").get<std::string>();
    if (schema_kind == "vector") {
      m.feature_schema.kind = FeatureKind::kVector;
    } else if (schema_kind == "sequence") {
      m.feature_schema.kind = FeatureKind::kSequence;
    } else {
      throw DataError("unknown feature schema kind " + schema_kind);
    }
    m.feature_schema.dim = schema.at("dim").get<int>();
    m.feature_schema.maxlen = schema.at("maxlen").get<int>();
    m.train_config = config_from(j.at("train_config"));
    const auto& st = j.at("standardization");
    if (!st.is_null()) {
      Standardizer s;
      s.mean = vector_from(st.at("mean"), m.feature_schema.dim);
      s.scale = vector_from(st.at("scale"), m.feature_schema.dim);
      if (!(s.scale.array() > 0.0).all()) throw DataError("standardization scale must be > 0");
      m.standardizer = std::move(s);
    }
    m.parameters = params_from(m.kind, m.feature_schema, j.at("parameters"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt model file: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("corrupt model file: ") + e.what());
  }
}

void save_model(const ModelArtifact& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

ModelArtifact load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

}  // namespace specdet::ml
