#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ceemdes {

struct ElmConfig {
  std::size_t hidden_units = 200;
  double ridge_lambda = 1e-6;
  double weight_scale = 1.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Single-hidden-layer network with a fixed random ReLU layer and closed-form
// ridge output weights.
struct ElmModel {
  Eigen::MatrixXd input_weights;   // [hidden_units x n_features]
  Eigen::VectorXd biases;          // [hidden_units]
  Eigen::MatrixXd output_weights;  // [hidden_units x n_classes]
  std::vector<std::string> label_map;
  Eigen::VectorXd norm_mean;       // per feature
  Eigen::VectorXd norm_std;        // per feature; 0 marks a constant training column
  ElmConfig config;

  std::size_t n_features() const { return static_cast<std::size_t>(input_weights.cols()); }
  std::size_t n_classes() const { return label_map.size(); }

  Eigen::MatrixXd normalize(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd hidden(const Eigen::MatrixXd& x) const;  // on raw features
};

// X is [n x d], one row per sample. Throws "singular hidden matrix; increase
// ridge_lambda" when the normal equations cannot be factorized.
ElmModel elm_train(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                   const ElmConfig& cfg);

struct Prediction {
  std::vector<std::string> labels;
  std::vector<std::size_t> label_index;
  Eigen::MatrixXd scores;  // [n x n_classes]
};

Prediction elm_predict(const ElmModel& model, const Eigen::MatrixXd& x);

// Frobenius norm of H * beta - T on a labelled set.
double elm_training_residual(const ElmModel& model, const Eigen::MatrixXd& x,
                             const std::vector<std::string>& labels);

struct Metrics {
  double accuracy_pct = 0.0;
  std::vector<double> recall;  // per class, label_map order
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<std::string> label_map;
};

Metrics evaluate(const ElmModel& model, const Eigen::MatrixXd& x,
                 const std::vector<std::string>& labels);

Metrics metrics_from_predictions(const std::vector<std::string>& label_map,
                                 const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predicted);

}  // namespace ceemdes
