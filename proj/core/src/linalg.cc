// core/src/linalg.cc

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

#include "artikit/linalg.h"

#include <cmath>

#include "artikit/akf.h"
#include "artikit/error.h"

namespace artikit {

AffineMap AffineMap::identity(Eigen::Index n) {
  AffineMap m;
  m.weights = Matrix::Identity(n, n);
  m.bias = Vector::Zero(n);
  return m;
}

Matrix apply(const AffineMap& map, const Matrix& x) {
  if (x.cols() != map.d_in() || map.bias.size() != map.d_out()) {
    fail(ErrorCode::kShapeMismatch,
         "input has " + std::to_string(x.cols()) + " columns, map expects " +
             std::to_string(map.d_in()));
  }
  Matrix out = x * map.weights;
  out.rowwise() += map.bias.transpose();
  return out;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  if (inner.d_out() != outer.d_in()) {
    fail(ErrorCode::kShapeMismatch, "cannot compose: inner output width " +
                                        std::to_string(inner.d_out()) + " vs outer input " +
                                        std::to_string(outer.d_in()));
  }
  AffineMap m;
  m.weights = inner.weights * outer.weights;
  m.bias = outer.weights.transpose() * inner.bias + outer.bias;
  m.source = inner.source;
  return m;
}

double default_ridge(const Matrix& x, double scale) {
  if (x.cols() == 0) return 0.0;
  const RowVector mean = x.colwise().mean();
  const double trace = (x.rowwise() - mean).squaredNorm();
  return scale * trace / static_cast<double>(x.cols());
}

AffineMap fit_least_squares(const Matrix& x, const Matrix& y, double ridge) {
  if (x.rows() != y.rows()) {
    fail(ErrorCode::kShapeMismatch, "X has " + std::to_string(x.rows()) + " rows, Y has " +
                                        std::to_string(y.rows()));
  }
  if (x.rows() < 2) fail(ErrorCode::kShapeMismatch, "least squares needs at least 2 rows");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    fail(ErrorCode::kInvalidConfig, "ridge must be a finite non-negative number");
  }
  if (!x.allFinite() || !y.allFinite()) fail(ErrorCode::kNonFiniteValue, "design contains non-finite values");

  const RowVector x_mean = x.colwise().mean();
  const RowVector y_mean = y.colwise().mean();
  const Matrix xc = x.rowwise() - x_mean;
  const Matrix yc = y.rowwise() - y_mean;

  const Eigen::Index d = x.cols();
  Matrix gram = Matrix::Zero(d, d);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += ridge;

  Eigen::LDLT<Matrix> ldlt(gram);
  const double max_pivot = ldlt.vectorD().cwiseAbs().maxCoeff();
  const double min_pivot = ldlt.vectorD().minCoeff();
  const double tolerance = 1e-12 * static_cast<double>(d) * std::max(max_pivot, 1e-300);
  if (ldlt.info() != Eigen::Success || !(min_pivot > tolerance)) {
    fail(ErrorCode::kSingularDesign,
         ridge == 0.0 ? "X^T X is rank deficient; retry with ridge > 0"
                      : "regularised normal equations are singular");
  }

  AffineMap map;
  map.weights = ldlt.solve(xc.transpose() * yc);
  map.bias = (y_mean - x_mean * map.weights).transpose();
  map.training_meta = {{"solver", "least_squares"}, {"ridge", ridge}, {"rows", x.rows()}};
  return map;
}

nlohmann::json affine_map_to_json(const AffineMap& map) {
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(map.weights.size()));
  for (Eigen::Index i = 0; i < map.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.weights.cols(); ++j) weights.push_back(map.weights(i, j));
  }
  std::vector<double> bias(map.bias.data(), map.bias.data() + map.bias.size());
  return {{"d_in", map.d_in()},   {"d_out", map.d_out()},   {"weights", weights},
          {"bias", bias},         {"source", map.source},   {"training_meta", map.training_meta}};
}

AffineMap affine_map_from_json(const nlohmann::json& j) {
  try {
    AffineMap map;
    const auto d_in = j.at("d_in").get<Eigen::Index>();
    const auto d_out = j.at("d_out").get<Eigen::Index>();
    const auto weights = j.at("weights").get<std::vector<double>>();
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (d_in < 1 || d_out < 1 || static_cast<Eigen::Index>(weights.size()) != d_in * d_out ||
        static_cast<Eigen::Index>(bias.size()) != d_out) {
      fail(ErrorCode::kDimensionMismatch, "affine map dimensions disagree with its arrays");
    }
    map.weights.resize(d_in, d_out);
    for (Eigen::Index i = 0; i < d_in; ++i) {
      for (Eigen::Index k = 0; k < d_out; ++k) {
        map.weights(i, k) = weights[static_cast<std::size_t>(i * d_out + k)];
      }
    }
    map.bias = Eigen::Map<const Vector>(bias.data(), d_out);
    map.source = j.value("source", std::string());
    map.training_meta = j.value("training_meta", nlohmann::json::object());
    if (!map.weights.allFinite() || !map.bias.allFinite()) {
      fail(ErrorCode::kNonFiniteValue, "affine map has non-finite entries");
    }
    return map;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedMetadata, std::string("bad affine map JSON: ") + e.what());
  }
}

void save_affine_map(const AffineMap& map, const std::filesystem::path& path) {
  write_text_file(path, affine_map_to_json(map).dump(1) + "\n");
}

AffineMap load_affine_map(const std::filesystem::path& path) {
  try {
    return affine_map_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedMetadata, path.string() + ": " + e.what());
  }
}

}  // namespace artikit
