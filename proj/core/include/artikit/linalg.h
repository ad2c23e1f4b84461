// core/include/artikit/linalg.h

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

#ifndef ARTIKIT_LINALG_H_
#define ARTIKIT_LINALG_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artikit/types.h"

namespace artikit {

/// y = x^T W + b for a row vector x of length d_in.
struct AffineMap {
  Matrix weights;  // d_in x d_out
  Vector bias;     // d_out
  std::string source;
  nlohmann::json training_meta = nlohmann::json::object();

  Eigen::Index d_in() const { return weights.rows(); }
  Eigen::Index d_out() const { return weights.cols(); }

  static AffineMap identity(Eigen::Index n);
};

/// X W + 1 b^T. Throws ShapeMismatch.
Matrix apply(const AffineMap& map, const Matrix& x);

/// The map x -> outer(inner(x)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

/// Minimises ||Y - X W - 1 b^T||_F^2 + ridge ||W||_F^2 with an unpenalised
/// intercept, via the centred normal equations and an LDL^T factorisation.
/// Throws SingularDesign when ridge == 0 and X^T X is numerically singular.
AffineMap fit_least_squares(const Matrix& x, const Matrix& y, double ridge);

/// scale * trace(Xc^T Xc) / D, the probe's default ridge. Proportional to the
/// feature scale squared, so probe predictions are scale invariant.
double default_ridge(const Matrix& x, double scale = 1e-4);

struct LassoConfig {
  double alpha = 0.01;
  int max_iter = 1000;
  double tol = 1e-6;
  bool fit_intercept = true;
  bool record_objective = false;  // keep the per-sweep objective trace
};

enum class LassoUpdate {
  kAuto,      // Gram updates when N >= 2 D, residual updates otherwise
  kResidual,  // O(N D) per sweep, residual maintained incrementally
  kGram,      // O(D^2) per sweep after a one-off X^T X
};

struct LassoDiagnostics {
  bool converged = true;
  int iterations = 0;               // largest sweep count over output columns
  double max_kkt_violation = 0.0;   // worst over columns
  std::vector<std::vector<double>> objective_trace;  // per output column
};

struct LassoFit {
  AffineMap map;
  LassoDiagnostics diagnostics;
};

/// Solves, independently for each output column k,
///   (1 / 2N) ||y_k - X w - b||^2 + alpha ||w||_1
/// by cyclic coordinate descent with exact soft-threshold updates. Sweeps stop
/// once the largest coefficient change is below tol and the KKT conditions
/// hold within 10 * tol. Hitting max_iter first sets converged = false and
/// returns the last iterate.
LassoFit fit_lasso(const Matrix& x, const Matrix& y, const LassoConfig& cfg,
                   LassoUpdate update = LassoUpdate::kAuto);

/// (1 / 2N) ||y - X w - b||^2 + alpha ||w||_1
double lasso_objective(const Matrix& x, const Vector& y, const Vector& w, double b, double alpha);

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

nlohmann::json affine_map_to_json(const AffineMap& map);
AffineMap affine_map_from_json(const nlohmann::json& j);
void save_affine_map(const AffineMap& map, const std::filesystem::path& path);
AffineMap load_affine_map(const std::filesystem::path& path);

}  // namespace artikit

#endif  // ARTIKIT_LINALG_H_
