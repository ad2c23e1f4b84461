// core/src/lasso.cc

// Copyright 2026 The artikit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include "artikit/error.h"
#include "artikit/linalg.h"

namespace artikit {

namespace {

// One output column of the Lasso. Holds either the Gram matrix or the centred
// design, never both.
class CoordinateDescent {
 public:
  CoordinateDescent(const Matrix& xc, const Matrix* gram, const Vector& diag, double alpha)
      : xc_(xc), gram_(gram), diag_(diag), alpha_(alpha), n_(static_cast<double>(xc.rows())) {}

  struct Result {
    Vector w;
    int sweeps = 0;
    bool converged = false;
    double kkt = 0.0;
    std::vector<double> trace;
  };

  Result solve(const Vector& yc, const Vector& xty, int max_iter, double tol, bool record) {
    const Eigen::Index d = xc_.cols();
    Result res;
    res.w = Vector::Zero(d);
    Vector& w = res.w;
    Vector gw = Vector::Zero(d);  // Gram mode: G w
    Vector r = yc;                // residual mode: yc - Xc w
    const double yy = yc.squaredNorm() / n_;

    auto gradient = [&](Eigen::Index j) {
      return gram_ != nullptr ? xty(j) - gw(j) : xc_.col(j).dot(r) / n_;
    };
    auto objective = [&]() {
      const double fit = gram_ != nullptr ? 0.5 * (yy - 2.0 * w.dot(xty) + w.dot(gw))
                                          : 0.5 * r.squaredNorm() / n_;
      return fit + alpha_ * w.lpNorm<1>();
    };

    if (record) res.trace.push_back(objective());
    for (int sweep = 1; sweep <= max_iter; ++sweep) {
      double max_change = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (!(diag_(j) > 0.0)) continue;
        const double rho = gradient(j) + diag_(j) * w(j);
        const double updated = soft_threshold(rho, alpha_) / diag_(j);
        const double delta = updated - w(j);
        if (delta == 0.0) continue;
        w(j) = updated;
        if (gram_ != nullptr) {
          gw.noalias() += delta * gram_->col(j);
        } else {
          r.noalias() -= delta * xc_.col(j);
        }
        max_change = std::max(max_change, std::abs(delta));
      }
      res.sweeps = sweep;
      if (record) res.trace.push_back(objective());
      if (max_change < tol) {
        // Refresh the incrementally maintained quantities before checking.
        if (gram_ != nullptr) {
          gw.noalias() = *gram_ * w;
        } else {
          r.noalias() = yc - xc_ * w;
        }
        res.kkt = kkt_violation(w, gradient);
        if (res.kkt <= 10.0 * tol) {
          res.converged = true;
          return res;
        }
      }
    }
    if (gram_ != nullptr) {
      gw.noalias() = *gram_ * w;
    } else {
      r.noalias() = yc - xc_ * w;
    }
    res.kkt = kkt_violation(w, gradient);
    res.converged = res.kkt <= 10.0 * tol;
    return res;
  }

 private:
  template <typename Gradient>
  double kkt_violation(const Vector& w, Gradient&& gradient) const {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (!(diag_(j) > 0.0)) continue;
      const double g = gradient(j);
      const double v = w(j) == 0.0 ? std::max(0.0, std::abs(g) - alpha_)
                                   : std::abs(g - alpha_ * (w(j) > 0.0 ? 1.0 : -1.0));
      worst = std::max(worst, v);
    }
    return worst;
  }

  const Matrix& xc_;
  const Matrix* gram_;
  const Vector& diag_;
  double alpha_;
  double n_;
};

}  // namespace

double lasso_objective(const Matrix& x, const Vector& y, const Vector& w, double b, double alpha) {
  const Vector r = y - x * w - Vector::Constant(y.size(), b);
  return 0.5 * r.squaredNorm() / static_cast<double>(y.size()) + alpha * w.lpNorm<1>();
}

LassoFit fit_lasso(const Matrix& x, const Matrix& y, const LassoConfig& cfg, LassoUpdate update) {
  if (x.rows() != y.rows()) {
    fail(ErrorCode::kShapeMismatch, "X has " + std::to_string(x.rows()) + " rows, Y has " +
                                        std::to_string(y.rows()));
  }
  if (x.rows() < 2) fail(ErrorCode::kShapeMismatch, "Lasso needs at least 2 rows");
  if (!(cfg.alpha >= 0.0) || cfg.max_iter < 1 || !(cfg.tol >= 0.0)) {
    fail(ErrorCode::kInvalidConfig, "Lasso needs alpha >= 0, max_iter >= 1, tol >= 0");
  }
  if (!x.allFinite() || !y.allFinite()) fail(ErrorCode::kNonFiniteValue, "design contains non-finite values");

  const double n = static_cast<double>(x.rows());
  const Eigen::Index d = x.cols();
  const RowVector x_mean = cfg.fit_intercept ? RowVector(x.colwise().mean()) : RowVector::Zero(d);
  const RowVector y_mean =
      cfg.fit_intercept ? RowVector(y.colwise().mean()) : RowVector::Zero(y.cols());
  const Matrix xc = x.rowwise() - x_mean;
  const Matrix yc = y.rowwise() - y_mean;

  const bool use_gram = update == LassoUpdate::kGram ||
                        (update == LassoUpdate::kAuto && x.rows() >= 2 * d);
  Matrix gram;
  Vector diag;
  if (use_gram) {
    gram = xc.transpose() * xc / n;
    diag = gram.diagonal();
  } else {
    diag = xc.colwise().squaredNorm().transpose() / n;
  }
  const Matrix xty = xc.transpose() * yc / n;

  CoordinateDescent solver(xc, use_gram ? &gram : nullptr, diag, cfg.alpha);
  LassoFit fit;
  fit.map.weights = Matrix::Zero(d, y.cols());
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    auto res = solver.solve(yc.col(k), xty.col(k), cfg.max_iter, cfg.tol, cfg.record_objective);
    fit.map.weights.col(k) = res.w;
    fit.diagnostics.iterations = std::max(fit.diagnostics.iterations, res.sweeps);
    fit.diagnostics.max_kkt_violation = std::max(fit.diagnostics.max_kkt_violation, res.kkt);
    fit.diagnostics.converged = fit.diagnostics.converged && res.converged;
    if (cfg.record_objective) fit.diagnostics.objective_trace.push_back(std::move(res.trace));
  }
  fit.map.bias = (y_mean - x_mean * fit.map.weights).transpose();
  fit.map.training_meta = {{"solver", "lasso_cd"},
                           {"alpha", cfg.alpha},
                           {"tol", cfg.tol},
                           {"max_iter", cfg.max_iter},
                           {"sweeps", fit.diagnostics.iterations},
                           {"converged", fit.diagnostics.converged},
                           {"rows", x.rows()}};
  return fit;
}

}  // namespace artikit
