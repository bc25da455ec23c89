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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specdet/error.hpp"
#include "specdet/ml/model.hpp"
#include "specdet/text_util.hpp"
#include "test_util.hpp"

namespace specdet::ml {
namespace {

// Two Gaussian blobs in d dimensions, label 1 shifted by `gap`.
Dataset blobs(int n, int d, double gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, d);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = i % 3 == 0 ? 1 : 0;
    for (int j = 0; j < d; ++j) X(i, j) = g(rng) + (y[static_cast<std::size_t>(i)] ? gap : 0.0);
  }
  return Dataset::from_vectors(std::move(X), std::move(y));
}

Dataset sequences(int n, int steps, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<Eigen::MatrixXd> items;
  std::vector<int> y;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd m(steps, channels);
    for (int k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
    const int label = i % 2;
    if (label) m.row(static_cast<int>(rng() % static_cast<std::uint64_t>(steps))).array() += 2.0;
    items.push_back(m);
    y.push_back(label);
  }
  return Dataset::from_sequences(std::make_shared<DenseSequences>(std::move(items)), std::move(y));
}

TrainConfig small_config() {
  TrainConfig c;
  c.seed = 5;
  c.forest.trees = 15;
  c.cnn.filters = 4;
  c.cnn.kernel = 3;
  c.cnn.epochs = 2;
  return c;
}

Dataset data_for(ClassifierKind kind) {
  return kind == ClassifierKind::kCnn ? sequences(24, 12, 3, 2) : blobs(80, 3, 2.0, 1);
}

// ---------------------------------------------------------------------------

TEST(Kinds, NamesRoundTrip) {
  for (auto k : kAllClassifiers) EXPECT_EQ(parse_classifier(to_string(k)), k);
  EXPECT_EQ(parse_classifier("RF"), ClassifierKind::kRf);
  EXPECT_EQ(display_name(ClassifierKind::kCnn), "1D-CNN");
  EXPECT_THROW(parse_classifier("knn"), UsageError);
}

TEST(Dataset, Validation) {
  EXPECT_THROW(Dataset::from_vectors(Eigen::MatrixXd(2, 1), {0}), DataError);
  EXPECT_THROW(Dataset::from_vectors(Eigen::MatrixXd::Zero(2, 1), {0, 3}), DataError);
  const auto d = blobs(10, 2, 1.0, 1);
  const std::vector<std::size_t> rows = {0, 3, 9};
  const auto s = d.subset(rows);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.X().row(1) == d.X().row(3));
  EXPECT_EQ(s.label(2), d.label(9));
  EXPECT_THROW(d.sequence(0), SchemaError);
}

TEST(Standardizer, ZeroVarianceColumnsKeepScaleOne) {
  Eigen::MatrixXd X(3, 2);
  X << 1, 5, 2, 5, 3, 5;
  const auto s = Standardizer::fit(X);
  EXPECT_DOUBLE_EQ(s.scale(1), 1.0);
  const auto Z = s.apply_rows(X);
  EXPECT_NEAR(Z.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(Z.col(0).squaredNorm() / 3.0, 1.0, 1e-12);
  EXPECT_TRUE(Z.col(1).isZero(0.0));
}

// ---------------------------------------------------------------------------

TEST(NaiveBayes, SymmetricTwoPoints) {
  Eigen::MatrixXd X(2, 1);
  X << 0, 1;
  const auto nb = GaussianNb::fit(X, {0, 1}, 1e-9);
  EXPECT_NEAR(nb.score(Eigen::VectorXd::Constant(1, 0.5)), 0.5, 1e-12);
  double prev = -1.0;
  for (double x = -0.5; x <= 1.5; x += 0.01) {
    const double s = nb.score(Eigen::VectorXd::Constant(1, x));
    EXPECT_GE(s, prev);
    prev = s;
  }
}

// Class posterior from explicit Gaussian density products.
double brute_force_nb(const Eigen::MatrixXd& X, const std::vector<int>& y, double smoothing,
                      const Eigen::VectorXd& x) {
  const auto n = static_cast<double>(X.rows());
  double max_var = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double m = 0.0, v = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) m += X(i, j);
    m /= n;
    for (Eigen::Index i = 0; i < X.rows(); ++i) v += (X(i, j) - m) * (X(i, j) - m);
    max_var = std::max(max_var, v / n);
  }
  const double eps = max_var > 0 ? smoothing * max_var : smoothing;
  double joint[2];
  for (int c = 0; c < 2; ++c) {
    double count = 0.0;
    for (int l : y) count += l == c;
    double density = count / n;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      double m = 0.0, v = 0.0;
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (y[static_cast<std::size_t>(i)] == c) m += X(i, j);
      }
      m /= count;
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (y[static_cast<std::size_t>(i)] == c) v += (X(i, j) - m) * (X(i, j) - m);
      }
      v = v / count + eps;
      density *= std::exp(-(x(j) - m) * (x(j) - m) / (2 * v)) / std::sqrt(2 * std::numbers::pi * v);
    }
    joint[c] = density;
  }
  return joint[1] / (joint[0] + joint[1]);
}

TEST(NaiveBayes, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd X(5, 2);
    for (int k = 0; k < X.size(); ++k) X.data()[k] = g(rng);
    std::vector<int> y = {0, 1, 0, 1, static_cast<int>(rng() % 2)};
    const auto nb = GaussianNb::fit(X, y, 1e-9);
    for (int q = 0; q < 5; ++q) {
      Eigen::VectorXd x(2);
      x << g(rng) * 0.5, g(rng) * 0.5;
      const double want = brute_force_nb(X, y, 1e-9, x);
      if (!std::isfinite(want)) continue;  // densities underflowed in the oracle
      EXPECT_NEAR(nb.score(x), want, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 900);
}

// ---------------------------------------------------------------------------

TEST(Logistic, ZeroModelScoresHalf) {
  const auto m = LogisticModel::zeros(4);
  EXPECT_EQ(m.score(Eigen::VectorXd::Random(4)), 0.5);
  ModelArtifact a;
  a.kind = ClassifierKind::kLr;
  a.feature_schema = {FeatureKind::kVector, 4, 0};
  a.parameters = m;
  EXPECT_EQ(predict_score(a, Eigen::VectorXd(Eigen::VectorXd::Random(4))), 0.5);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + trial % 5, d = 1 + trial % 4;
    Eigen::MatrixXd X(n, d);
    Eigen::VectorXd y(n), w(d);
    for (int k = 0; k < X.size(); ++k) X.data()[k] = g(rng);
    for (int i = 0; i < n; ++i) y(i) = static_cast<double>(rng() % 2);
    for (int j = 0; j < d; ++j) w(j) = g(rng);
    const double b = g(rng), l2 = 0.1;
    const auto grad = logistic_gradient(X, y, w, b, l2);
    const double h = 1e-6;
    for (int j = 0; j <= d; ++j) {
      Eigen::VectorXd wp = w, wm = w;
      double bp = b, bm = b;
      if (j < d) {
        wp(j) += h;
        wm(j) -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (logistic_objective(X, y, wp, bp, l2) - logistic_objective(X, y, wm, bm, l2)) / (2 * h);
      const double an = j < d ? grad.w(j) : grad.b;
      EXPECT_LT(std::abs(fd - an) / std::max(1e-8, std::abs(fd) + std::abs(an)), 1e-4);
    }
  }
}

TEST(Logistic, ConvergesToStationaryPoint) {
  const auto d = blobs(200, 3, 1.0, 4);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) y(i) = d.label(static_cast<std::size_t>(i));
  const auto m = LogisticModel::fit(d.X(), d.labels(), 1e-2, 1e-8, 10000);
  EXPECT_LT(m.iterations, 10000);
  const auto g = logistic_gradient(d.X(), y, m.w, m.b, 1e-2);
  EXPECT_LT(std::sqrt(g.w.squaredNorm() + g.b * g.b), 1e-8);
}

// ---------------------------------------------------------------------------

TEST(Svc, SeparableToyIsFitExactly) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd X(100, 2);
  std::vector<int> y;
  for (int i = 0; i < 100;) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a + b - 1.0) < 0.2 * std::sqrt(2.0)) continue;  // keep margin >= 0.2
    X(i, 0) = a;
    X(i, 1) = b;
    y.push_back(a + b > 1.0 ? 1 : 0);
    ++i;
  }
  const auto svc = LinearSvc::fit(X, y, 1.0, 200, 3);
  int correct = 0;
  for (int i = 0; i < 100; ++i) {
    correct += (svc.score(X.row(i).transpose()) >= 0.5) == (y[static_cast<std::size_t>(i)] == 1);
  }
  EXPECT_EQ(correct, 100);
}

TEST(Svc, PlattScalingIsMonotone) {
  Eigen::VectorXd f(6);
  f << -3, -2, -1, 1, 2, 3;
  const auto p = PlattScaling::fit(f, {0, 0, 1, 0, 1, 1});
  EXPECT_GT(p.a, 0.0);
  EXPECT_LT(p(-3), p(0));
  EXPECT_LT(p(0), p(3));
}

// ---------------------------------------------------------------------------

TEST(Forest, SingleTreeMemorizes) {
  const auto d = blobs(150, 4, 0.3, 9);  // heavily overlapping, still consistent
  ForestParams p;
  p.trees = 1;
  p.bootstrap = false;
  const auto rf = RandomForest::fit(d.X(), d.labels(), p, 2);
  for (Eigen::Index i = 0; i < d.X().rows(); ++i) {
    EXPECT_EQ(rf.score(d.X().row(i).transpose()), d.label(static_cast<std::size_t>(i)));
  }
}

TEST(Forest, UnanimousVoteScoresOne) {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  const auto rf = RandomForest::fit(X, {0, 0, 1, 1}, {.trees = 9, .bootstrap = false}, 1);
  EXPECT_EQ(rf.score(Eigen::VectorXd::Constant(1, 10.0)), 1.0);
  EXPECT_EQ(rf.score(Eigen::VectorXd::Constant(1, -10.0)), 0.0);
}

TEST(Forest, ThreadCountDoesNotChangeTheModel) {
  const auto d = blobs(120, 3, 1.0, 3);
  ForestParams one{.trees = 12, .threads = 1};
  ForestParams four{.trees = 12, .threads = 4};
  TrainConfig c;
  c.forest = one;
  ModelArtifact a = train(ClassifierKind::kRf, d, c);
  c.forest = four;
  ModelArtifact b = train(ClassifierKind::kRf, d, c);
  // thread count is recorded in the config, so compare the trees only
  b.train_config.forest.threads = 1;
  EXPECT_EQ(serialize_model(a), serialize_model(b));
}

// ---------------------------------------------------------------------------

TEST(Cnn, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = Cnn1d::init(3, 2, 3, rng);
    net.conv_b << 0.2, 0.3;  // keep both filters active
    Eigen::MatrixXd seq(8, 3);
    for (int k = 0; k < seq.size(); ++k) seq.data()[k] = g(rng);
    const int label = trial % 2;
    auto grad = Cnn1d::Gradient::zeros_like(net);
    net.accumulate_gradient(seq, label, grad);
    const Eigen::VectorXd analytic = Cnn1d::flatten(grad);
    const Eigen::VectorXd theta = net.flatten();
    auto loss_at = [&](const Eigen::VectorXd& t) {
      Cnn1d probe = net;
      probe.unflatten(t);
      auto scratch = Cnn1d::Gradient::zeros_like(probe);
      return probe.accumulate_gradient(seq, label, scratch);
    };
    const double h = 1e-6;
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp(p) += h;
      tm(p) -= h;
      const double fd = (loss_at(tp) - loss_at(tm)) / (2 * h);
      const double rel = std::abs(fd - analytic(p)) / std::max(1e-8, std::abs(fd) + std::abs(analytic(p)));
      EXPECT_LT(rel, 1e-4) << "trial " << trial << " param " << p;
    }
  }
}

TEST(Cnn, LearnsASpikeDetector) {
  const auto d = sequences(64, 12, 3, 4);
  CnnParams p{.filters = 4, .kernel = 3, .batch = 8, .epochs = 150, .learning_rate = 0.1};
  std::vector<double> loss;
  const auto net = fit_cnn(d, p, 1, &loss);
  ASSERT_EQ(loss.size(), 150u);
  EXPECT_LT(loss.back(), loss.front());
  int correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) correct += (net.score(d.sequence(i)) >= 0.5) == (d.label(i) == 1);
  EXPECT_GE(correct, 58);
}

TEST(Cnn, DefaultHyperparameters) {
  const CnnParams p;
  EXPECT_EQ(p.filters, 64);
  EXPECT_EQ(p.kernel, 5);
  EXPECT_EQ(p.batch, 32);
  EXPECT_EQ(p.epochs, 10);
  EXPECT_EQ(p.learning_rate, 1e-3);
}

// ---------------------------------------------------------------------------

class EveryKind : public ::testing::TestWithParam<ClassifierKind> {};

TEST_P(EveryKind, ScoresAreFiniteProbabilitiesAndRepeatable) {
  const auto kind = GetParam();
  const auto d = data_for(kind);
  const auto m = train(kind, d, small_config());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 50.0);
  for (int i = 0; i < 30; ++i) {
    double s1, s2;
    if (kind == ClassifierKind::kCnn) {
      Eigen::MatrixXd x(12, 3);
      for (int k = 0; k < x.size(); ++k) x.data()[k] = g(rng);
      s1 = predict_score(m, x);
      s2 = predict_score(m, x);
    } else {
      Eigen::VectorXd x(3);
      for (int k = 0; k < 3; ++k) x(k) = g(rng);
      s1 = predict_score(m, x);
      s2 = predict_score(m, x);
    }
    EXPECT_TRUE(std::isfinite(s1));
    EXPECT_GE(s1, 0.0);
    EXPECT_LE(s1, 1.0);
    EXPECT_EQ(s1, s2);
  }
}

TEST_P(EveryKind, SerializationRoundTrip) {
  const auto kind = GetParam();
  const auto d = data_for(kind);
  const auto m = train(kind, d, small_config());
  testing::TempDir dir;
  save_model(m, dir / "m.json");
  const auto back = load_model(dir / "m.json");
  EXPECT_EQ(back.kind, kind);
  EXPECT_EQ(back.feature_schema, m.feature_schema);
  EXPECT_EQ(serialize_model(back), serialize_model(m));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    if (kind == ClassifierKind::kCnn) {
      Eigen::MatrixXd x(12, 3);
      for (int k = 0; k < x.size(); ++k) x.data()[k] = g(rng);
      worst = std::max(worst, std::abs(predict_score(m, x) - predict_score(back, x)));
    } else {
      Eigen::VectorXd x(3);
      for (int k = 0; k < 3; ++k) x(k) = g(rng);
      worst = std::max(worst, std::abs(predict_score(m, x) - predict_score(back, x)));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST_P(EveryKind, SameSeedSameBytes) {
  const auto kind = GetParam();
  const auto d = data_for(kind);
  EXPECT_EQ(serialize_model(train(kind, d, small_config())),
            serialize_model(train(kind, d, small_config())));
}

TEST_P(EveryKind, RejectsWrongDataKind) {
  const auto kind = GetParam();
  const auto wrong = kind == ClassifierKind::kCnn ? blobs(20, 3, 1.0, 1) : sequences(20, 12, 3, 1);
  EXPECT_THROW(train(kind, wrong, small_config()), SchemaError);
}

TEST_P(EveryKind, RejectsSingleClass) {
  const auto kind = GetParam();
  auto d = data_for(kind);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.label(i) == 0) zeros.push_back(i);
  }
  EXPECT_THROW(train(kind, d.subset(zeros), small_config()), DataError);
}

INSTANTIATE_TEST_SUITE_P(Kinds, EveryKind, ::testing::ValuesIn(kAllClassifiers),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Predict, ThresholdRule) {
  ModelArtifact a;
  a.kind = ClassifierKind::kLr;
  a.feature_schema = {FeatureKind::kVector, 1, 0};
  a.parameters = LogisticModel::zeros(1);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  EXPECT_EQ(predict_label(a, x, 0.5), 1);
  EXPECT_EQ(predict_label(a, x, 0.51), 0);
  EXPECT_EQ(predict_label(a, x, 0.0), 1);
  auto& lr = std::get<LogisticModel>(a.parameters);
  lr.b = std::log(0.49 / 0.51);
  EXPECT_EQ(predict_label(a, x, 0.5), 0);
}

TEST(Predict, DimensionMismatchIsSchemaError) {
  const auto m = train(ClassifierKind::kNb, blobs(20, 3, 1.0, 1), small_config());
  EXPECT_THROW(predict_score(m, Eigen::VectorXd(Eigen::VectorXd::Zero(2))), SchemaError);
  EXPECT_THROW(predict_score(m, Eigen::MatrixXd(Eigen::MatrixXd::Zero(12, 3))), SchemaError);
}

TEST(Standardization, RescalingAFeatureKeepsLabels) {
  const auto d = blobs(90, 3, 1.2, 6);
  Eigen::MatrixXd scaled = d.X();
  scaled.col(1) *= 1000.0;
  scaled.col(2) *= 0.001;
  const auto d2 = Dataset::from_vectors(scaled, d.labels());
  auto c = small_config();
  c.standardize = true;
  for (auto kind : {ClassifierKind::kNb, ClassifierKind::kLr, ClassifierKind::kSvc}) {
    const auto a = train(kind, d, c);
    const auto b = train(kind, d2, c);
    ASSERT_TRUE(a.standardizer.has_value());
    for (Eigen::Index i = 0; i < d.X().rows(); ++i) {
      EXPECT_EQ(predict_label(a, Eigen::VectorXd(d.X().row(i).transpose())),
                predict_label(b, Eigen::VectorXd(scaled.row(i).transpose())))
          << to_string(kind) << " row " << i;
    }
  }
}

TEST(ModelFile, Errors) {
  EXPECT_THROW(load_model("/nonexistent/model.json"), IoError);
  const auto m = train(ClassifierKind::kLr, blobs(20, 2, 1.0, 1), small_config());
  std::string text = serialize_model(m);
  const auto pos = text.find("\"format_version\":1");
  ASSERT_NE(pos, std::string::npos);
  std::string v2 = text;
  v2.replace(pos, 18, "\"format_version\":2");
  try {
    deserialize_model(v2);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("format_version"), std::string::npos);
  }
  try {
    deserialize_model(text.substr(0, text.size() / 2));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos);
  }
  EXPECT_THROW(deserialize_model("{\"format\":\"other\"}"), DataError);
}

}  // namespace
}  // namespace specdet::ml
