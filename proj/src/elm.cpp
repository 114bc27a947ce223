#include "ceemdes/elm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ceemdes/error.hpp"

namespace ceemdes {

void ElmConfig::validate() const {
  if (hidden_units < 1) throw Error("hidden_units must be >= 1");
  if (!(ridge_lambda >= 0.0)) throw Error("ridge_lambda must be >= 0");
  if (!(weight_scale > 0.0)) throw Error("weight_scale must be > 0");
}

Eigen::MatrixXd ElmModel::normalize(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != n_features()) {
    throw Error("feature dimension mismatch");
  }
  Eigen::MatrixXd z(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (norm_std(j) > 0.0) {
      z.col(j) = (x.col(j).array() - norm_mean(j)) / norm_std(j);
    } else {
      z.col(j).setZero();
    }
  }
  return z;
}

Eigen::MatrixXd ElmModel::hidden(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd h = normalize(x) * input_weights.transpose();
  h.rowwise() += biases.transpose();
  return h.cwiseMax(0.0);
}

namespace {

Eigen::MatrixXd one_hot(const std::vector<std::string>& labels,
                        const std::vector<std::string>& label_map) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                            static_cast<Eigen::Index>(label_map.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::lower_bound(label_map.begin(), label_map.end(), labels[i]);
    if (it == label_map.end() || *it != labels[i]) throw Error("unknown label: " + labels[i]);
    t(static_cast<Eigen::Index>(i), it - label_map.begin()) = 1.0;
  }
  return t;
}

// Solves (A + lambda I) y = rhs for symmetric positive semi-definite A.
Eigen::MatrixXd solve_ridge(Eigen::MatrixXd a, const Eigen::MatrixXd& rhs, double lambda) {
  a.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
    throw Error("singular hidden matrix; increase ridge_lambda");
  }
  return llt.solve(rhs);
}

}  // namespace

ElmModel elm_train(const Eigen::MatrixXd& x, const std::vector<std::string>& labels,
                   const ElmConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n == 0 || d == 0) throw Error("empty training set");
  if (static_cast<std::size_t>(n) != labels.size()) throw Error("label count mismatch");
  if (!x.allFinite()) throw Error("non-finite feature");

  ElmModel model;
  model.config = cfg;
  model.label_map = labels;
  std::sort(model.label_map.begin(), model.label_map.end());
  model.label_map.erase(std::unique(model.label_map.begin(), model.label_map.end()),
                        model.label_map.end());
  if (model.label_map.size() > static_cast<std::size_t>(n)) throw Error("fewer samples than classes");

  model.norm_mean = x.colwise().mean().transpose();
  model.norm_std.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (x.col(j).array() - model.norm_mean(j)).square().mean();
    const double sd = std::sqrt(var);
    model.norm_std(j) = sd > 1e-12 * std::max(1.0, std::abs(model.norm_mean(j))) ? sd : 0.0;
  }

  const auto l = static_cast<Eigen::Index>(cfg.hidden_units);
  std::mt19937_64 gen(cfg.rng_seed);
  std::uniform_real_distribution<double> uni(-cfg.weight_scale, cfg.weight_scale);
  model.input_weights.resize(l, d);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) model.input_weights(i, j) = uni(gen);
  }
  model.biases.resize(l);
  for (Eigen::Index i = 0; i < l; ++i) model.biases(i) = uni(gen);

  const Eigen::MatrixXd h = model.hidden(x);
  const Eigen::MatrixXd t = one_hot(labels, model.label_map);
  if (n >= l) {
    model.output_weights = solve_ridge(h.transpose() * h, h.transpose() * t, cfg.ridge_lambda);
  } else {
    // Fewer samples than hidden units: the dual form gives the minimum-norm
    // solution and stays well-posed at lambda = 0.
    model.output_weights = h.transpose() * solve_ridge(h * h.transpose(), t, cfg.ridge_lambda);
  }
  return model;
}

Prediction elm_predict(const ElmModel& model, const Eigen::MatrixXd& x) {
  Prediction p;
  p.scores = model.hidden(x) * model.output_weights;
  const auto n = static_cast<std::size_t>(p.scores.rows());
  p.labels.resize(n);
  p.label_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < p.scores.cols(); ++c) {
      if (p.scores(static_cast<Eigen::Index>(i), c) > p.scores(static_cast<Eigen::Index>(i), best)) {
        best = c;
      }
    }
    p.label_index[i] = static_cast<std::size_t>(best);
    p.labels[i] = model.label_map[static_cast<std::size_t>(best)];
  }
  return p;
}

double elm_training_residual(const ElmModel& model, const Eigen::MatrixXd& x,
                             const std::vector<std::string>& labels) {
  const Eigen::MatrixXd t = one_hot(labels, model.label_map);
  return (model.hidden(x) * model.output_weights - t).norm();
}

Metrics metrics_from_predictions(const std::vector<std::string>& label_map,
                                 const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predicted) {
  if (truth.empty()) throw Error("empty test set");
  if (truth.size() != predicted.size()) throw Error("label count mismatch");
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < label_map.size(); ++c) index[label_map[c]] = c;

  Metrics m;
  m.label_map = label_map;
  const std::size_t k = label_map.size();
  m.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto ti = index.find(truth[i]);
    const auto pi = index.find(predicted[i]);
    if (ti == index.end() || pi == index.end()) throw Error("unknown label: " + truth[i]);
    ++m.confusion[ti->second][pi->second];
    if (ti->second == pi->second) ++correct;
  }
  m.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
  m.recall.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t support = 0;
    for (std::size_t v : m.confusion[c]) support += v;
    m.recall[c] = support > 0 ? static_cast<double>(m.confusion[c][c]) / static_cast<double>(support)
                              : 0.0;
  }
  return m;
}

Metrics evaluate(const ElmModel& model, const Eigen::MatrixXd& x,
                 const std::vector<std::string>& labels) {
  if (x.rows() == 0) throw Error("empty test set");
  const auto p = elm_predict(model, x);
  return metrics_from_predictions(model.label_map, labels, p.labels);
}

}  // namespace ceemdes
