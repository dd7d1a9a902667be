#include "firerisk/logistic.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "firerisk/error.hpp"

namespace firerisk {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> design(const Dataset& d) {
  return {d.x.data(), static_cast<Eigen::Index>(d.n_rows), static_cast<Eigen::Index>(d.n_cols)};
}

// Row-wise softmax of X W^T + b, computed stably.
RowMatrix probabilities(const LogisticModel& m, const Dataset& d) {
  const auto k = static_cast<Eigen::Index>(m.n_classes());
  const auto p = static_cast<Eigen::Index>(m.n_features());
  Eigen::Map<const RowMatrix> w(m.weights().data(), k, p);
  Eigen::Map<const Eigen::RowVectorXd> b(m.weights().data() + k * p, k);
  RowMatrix z = design(d) * w.transpose();
  z.rowwise() += b;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double mx = z.row(r).maxCoeff();
    z.row(r) = (z.row(r).array() - mx).exp();
    z.row(r) /= z.row(r).sum();
  }
  return z;
}

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.n_rows = rows.size();
  out.n_cols = n_cols;
  out.x.reserve(rows.size() * n_cols);
  out.y.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto src = row(r);
    out.x.insert(out.x.end(), src.begin(), src.end());
    out.y.push_back(y.at(r));
  }
  return out;
}

void Dataset::validate(int n_classes) const {
  if (x.size() != n_rows * n_cols) throw ShapeError("Dataset: x has " + std::to_string(x.size()) + " values");
  if (!y.empty() && y.size() != n_rows) throw ShapeError("Dataset: y has " + std::to_string(y.size()) + " labels");
  for (int v : y) {
    if (v < 0 || v >= n_classes) throw ValidationError("Dataset: label " + std::to_string(v) + " out of range");
  }
}

int argmax_class(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

LogisticModel::LogisticModel(std::size_t n_features, int n_classes)
    : n_features_(n_features), n_classes_(n_classes), w_(static_cast<std::size_t>(n_classes) * (n_features + 1), 0.0) {
  if (n_classes < 2) throw ValidationError("LogisticModel: need at least 2 classes");
}

std::vector<double> LogisticModel::predict_scores(const Dataset& data) const {
  if (data.n_cols != n_features_) throw ShapeError("predict_scores: feature count mismatch");
  const RowMatrix p = probabilities(*this, data);
  return {p.data(), p.data() + p.size()};
}

std::vector<int> LogisticModel::predict_class(const Dataset& data) const {
  const auto s = predict_scores(data);
  const auto k = static_cast<std::size_t>(n_classes_);
  std::vector<int> out(data.n_rows);
  for (std::size_t r = 0; r < data.n_rows; ++r) out[r] = argmax_class(std::span(s).subspan(r * k, k));
  return out;
}

double loss_and_gradient(const LogisticModel& m, const Dataset& d, double l2, std::vector<double>* gradient) {
  if (d.n_cols != m.n_features()) throw ShapeError("loss_and_gradient: feature count mismatch");
  d.validate(m.n_classes());
  if (d.y.size() != d.n_rows) throw ShapeError("loss_and_gradient: labels required");
  const auto k = static_cast<Eigen::Index>(m.n_classes());
  const auto p = static_cast<Eigen::Index>(m.n_features());
  const auto n = static_cast<Eigen::Index>(d.n_rows);
  Eigen::Map<const RowMatrix> w(m.weights().data(), k, p);

  RowMatrix prob = probabilities(m, d);
  double nll = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    nll -= std::log(std::max(prob(r, d.y[static_cast<std::size_t>(r)]), 1e-300));
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  const double loss = nll * inv_n + 0.5 * l2 * w.squaredNorm();

  if (gradient) {
    for (Eigen::Index r = 0; r < n; ++r) prob(r, d.y[static_cast<std::size_t>(r)]) -= 1.0;
    gradient->assign(m.weights().size(), 0.0);
    Eigen::Map<RowMatrix> gw(gradient->data(), k, p);
    Eigen::Map<Eigen::RowVectorXd> gb(gradient->data() + k * p, k);
    gw = inv_n * (prob.transpose() * design(d)) + l2 * w;
    gb = inv_n * prob.colwise().sum();
  }
  return loss;
}

LogisticFit fit_multinomial_logistic(const Dataset& data, const LogisticOptions& opt) {
  data.validate(opt.n_classes);
  if (!(opt.learning_rate > 0.0)) throw ValidationError("fit_multinomial_logistic: learning rate must be > 0");
  LogisticFit fit{LogisticModel(data.n_cols, opt.n_classes), {}};
  std::vector<double> grad, trial_grad;
  double loss = loss_and_gradient(fit.model, data, opt.l2, &grad);
  fit.loss_history.push_back(loss);
  double lr = opt.learning_rate;
  LogisticModel trial = fit.model;

  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    double trial_loss = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < grad.size(); ++i) trial.weights()[i] = fit.model.weights()[i] - lr * grad[i];
      trial_loss = loss_and_gradient(trial, data, opt.l2, &trial_grad);
      if (!std::isfinite(trial_loss)) {
        std::ostringstream msg;
        msg << "logistic regression diverged: non-finite loss at epoch " << epoch << " (step " << lr
            << ", previous loss " << loss << ")";
        throw Error(msg.str());
      }
      if (trial_loss <= loss) {
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;
    const double decrease = loss - trial_loss;
    std::swap(fit.model, trial);
    std::swap(grad, trial_grad);
    loss = trial_loss;
    fit.loss_history.push_back(loss);
    if (decrease <= opt.tolerance * std::max(1.0, std::abs(loss))) break;
  }
  return fit;
}

}  // namespace firerisk
