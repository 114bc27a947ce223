#include <doctest.h>

#include <random>

#include "ceemdes/elm.hpp"
#include "ceemdes/error.hpp"

using namespace ceemdes;

namespace {
Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = nd(g);
  }
  return x;
}

std::vector<std::string> random_labels(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<std::string> y(n);
  for (auto& s : y) s = "c" + std::to_string(g() % 3);
  return y;
}

struct Blobs {
  Eigen::MatrixXd x;
  std::vector<std::string> y;
};

Blobs blobs(std::size_t per_class, std::mt19937_64& g) {
  std::normal_distribution<double> nd(0.0, 0.5);
  Blobs b;
  b.x.resize(static_cast<Eigen::Index>(2 * per_class), 2);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool second = i >= per_class;
    const double c = second ? 4.0 : -4.0;
    b.x(static_cast<Eigen::Index>(i), 0) = c + nd(g);
    b.x(static_cast<Eigen::Index>(i), 1) = c + nd(g);
    b.y.push_back(second ? "b" : "a");
  }
  return b;
}
}  // namespace

TEST_SUITE("elm") {
  TEST_CASE("config validation") {
    ElmConfig c;
    c.hidden_units = 0;
    CHECK_THROWS(c.validate());
    c = {};
    c.ridge_lambda = -1;
    CHECK_THROWS(c.validate());
  }

  TEST_CASE("single-class training predicts that class") {
    auto x = random_matrix(20, 4, 1);
    std::vector<std::string> y(20, "only");
    auto m = elm_train(x, y, {});
    auto p = elm_predict(m, random_matrix(7, 4, 2));
    for (const auto& l : p.labels) CHECK(l == "only");
  }

  TEST_CASE("interpolation with enough hidden units and no ridge") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto x = random_matrix(30, 5, 100 + seed);
      auto y = random_labels(30, 200 + seed);
      ElmConfig c;
      c.hidden_units = 64;
      c.ridge_lambda = 0.0;
      c.rng_seed = seed;
      auto m = elm_train(x, y, c);
      auto p = elm_predict(m, x);
      CHECK(p.labels == y);
      CHECK(evaluate(m, x, y).accuracy_pct == 100.0);
    }
  }

  TEST_CASE("separated blobs are classified perfectly") {
    std::mt19937_64 g(7);
    auto train = blobs(50, g);
    auto test = blobs(20, g);
    ElmConfig c;
    c.rng_seed = 7;
    auto m = elm_train(train.x, train.y, c);
    CHECK(evaluate(m, test.x, test.y).accuracy_pct == 100.0);
  }

  TEST_CASE("singular system without ridge") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(50, 3);
    std::vector<std::string> y(50, "a");
    for (std::size_t i = 0; i < 25; ++i) y[i] = "b";
    ElmConfig c;
    c.hidden_units = 10;
    c.ridge_lambda = 0.0;
    CHECK_THROWS_WITH(elm_train(x, y, c), "singular hidden matrix; increase ridge_lambda");
  }

  TEST_CASE("determinism per seed") {
    auto x = random_matrix(40, 6, 3);
    auto y = random_labels(40, 4);
    ElmConfig c;
    c.rng_seed = 11;
    auto a = elm_train(x, y, c);
    auto b = elm_train(x, y, c);
    CHECK(a.input_weights == b.input_weights);
    CHECK(a.biases == b.biases);
    CHECK(a.output_weights == b.output_weights);
    CHECK(elm_predict(a, x).scores == elm_predict(b, x).scores);
    c.rng_seed = 12;
    CHECK(elm_train(x, y, c).input_weights != a.input_weights);
  }

  TEST_CASE("weights are uniform within the scale") {
    ElmConfig c;
    c.weight_scale = 0.25;
    auto m = elm_train(random_matrix(10, 3, 1), random_labels(10, 1), c);
    CHECK(m.input_weights.cwiseAbs().maxCoeff() <= 0.25);
    CHECK(m.biases.cwiseAbs().maxCoeff() <= 0.25);
    CHECK(m.input_weights.rows() == 200);
    CHECK(m.output_weights.cols() == static_cast<Eigen::Index>(m.n_classes()));
  }

  TEST_CASE("training residual grows with ridge") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (Eigen::Index n : {40, 300}) {
        auto x = random_matrix(n, 5, seed);
        auto y = random_labels(static_cast<std::size_t>(n), seed + 50);
        double prev = -1.0;
        for (double lam : {0.0, 1e-6, 1e-3, 1.0}) {
          ElmConfig c;
          c.hidden_units = 100;
          c.ridge_lambda = lam;
          c.rng_seed = seed;
          auto m = elm_train(x, y, c);
          const double r = elm_training_residual(m, x, y);
          CHECK(r >= prev - 1e-9);
          prev = r;
        }
      }
    }
  }

  TEST_CASE("prediction details") {
    auto x = random_matrix(30, 3, 9);
    auto y = random_labels(30, 9);
    auto m = elm_train(x, y, {});
    // duplicated rows give duplicated predictions
    Eigen::MatrixXd dup(2, 3);
    dup.row(0) = x.row(4);
    dup.row(1) = x.row(4);
    auto p = elm_predict(m, dup);
    CHECK(p.labels[0] == p.labels[1]);
    CHECK(p.scores.row(0) == p.scores.row(1));
    // a row equal to the training mean goes through the bias-only path
    Eigen::MatrixXd mean_row = m.norm_mean.transpose();
    auto q = elm_predict(m, mean_row);
    Eigen::RowVectorXd expect = m.biases.cwiseMax(0.0).transpose() * m.output_weights;
    CHECK((q.scores.row(0) - expect).norm() < 1e-12);
    CHECK_THROWS(elm_predict(m, random_matrix(2, 4, 1)));
  }

  TEST_CASE("rescaled features give the same labels") {
    auto x = random_matrix(60, 4, 21);
    auto y = random_labels(60, 22);
    auto t = random_matrix(30, 4, 23);
    Eigen::Vector4d s(3.0, 0.5, 10.0, 2.0);
    Eigen::MatrixXd xs = x * s.asDiagonal(), ts = t * s.asDiagonal();
    ElmConfig c;
    c.rng_seed = 3;
    auto a = elm_predict(elm_train(x, y, c), t);
    auto b = elm_predict(elm_train(xs, y, c), ts);
    CHECK(a.labels == b.labels);
  }

  TEST_CASE("constant feature columns map to zero") {
    auto x = random_matrix(20, 3, 5);
    x.col(1).setConstant(4.0);
    auto m = elm_train(x, random_labels(20, 5), {});
    CHECK(m.norm_std(1) == 0.0);
    auto z = m.normalize(x);
    CHECK(z.col(1).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("metrics") {
    std::vector<std::string> labels{"a", "b", "c"};
    std::vector<std::string> truth{"a", "a", "b", "b", "c", "c"};
    auto perfect = metrics_from_predictions(labels, truth, truth);
    CHECK(perfect.accuracy_pct == 100.0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(perfect.confusion[i][j] == (i == j ? 2u : 0u));
    }
    std::vector<std::string> constant(6, "b");
    auto chance = metrics_from_predictions(labels, truth, constant);
    CHECK(chance.accuracy_pct == doctest::Approx(100.0 / 3.0));
    CHECK(chance.recall == std::vector<double>{0.0, 1.0, 0.0});
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t row = 0;
      for (auto v : chance.confusion[i]) row += v;
      CHECK(row == 2);
    }
    CHECK_THROWS_WITH(metrics_from_predictions(labels, {}, {}), "empty test set");
  }
}
