// core/src/stats.cc

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

#include "artikit/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "artikit/error.h"

namespace artikit {

namespace {

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::kInvalidConfig, "incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) fail(ErrorCode::kInvalidConfig, "t distribution needs dof > 0");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided(t, dof);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

std::string_view paired_test_name(PairedTestKind kind) {
  return kind == PairedTestKind::kPairedT ? "paired_t" : "wilcoxon_signed_rank";
}

std::string_view test_flag_name(TestFlag flag) {
  switch (flag) {
    case TestFlag::kNone: return "none";
    case TestFlag::kAllDifferencesZero: return "AllDifferencesZero";
    case TestFlag::kZeroVarianceDifferences: return "ZeroVarianceDifferences";
  }
  return "none";
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences) {
  std::vector<double> d;
  for (double v : differences) {
    if (v != 0.0) d.push_back(v);
  }
  WilcoxonResult res;
  res.n_used = static_cast<int>(d.size());
  if (d.empty()) return res;  // p = 1

  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(d[i]) < std::abs(d[j]); });
  // Doubled mid-ranks are integers.
  std::vector<long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const long doubled = static_cast<long>(i + 1 + j + 1);  // 2 * mean of ranks i+1..j+1
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) w2 += rank2[i];
  }
  res.w_plus = 0.5 * static_cast<double>(w2);

  if (n <= 25) {
    res.exact = true;
    const long total = std::accumulate(rank2.begin(), rank2.end(), 0L);
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : rank2) {
      for (long s = reach; s >= 0; --s) {
        if (count[static_cast<std::size_t>(s)] != 0.0) {
          count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
        }
      }
      reach += r;
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    double lower = 0.0, upper = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s <= w2) lower += count[static_cast<std::size_t>(s)];
      if (s >= w2) upper += count[static_cast<std::size_t>(s)];
    }
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    return res;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  const double diff = res.w_plus - mean;
  const double corrected = diff == 0.0 ? 0.0 : diff - std::copysign(0.5, diff);
  res.p_value = var > 0.0 ? std::min(1.0, normal_two_sided(corrected / std::sqrt(var))) : 1.0;
  return res;
}

PairedComparison paired_test(std::span<const double> a, std::span<const double> b,
                             PairedTestKind test, std::vector<std::string> labels) {
  if (a.size() != b.size()) fail(ErrorCode::kShapeMismatch, "paired samples differ in length");
  if (a.size() < 3) fail(ErrorCode::kTooFewPairs, "paired test needs at least 3 pairs");
  if (!labels.empty() && labels.size() != a.size()) {
    fail(ErrorCode::kShapeMismatch, "one label per pair expected");
  }
  const std::size_t n = a.size();
  PairedComparison out;
  out.labels = std::move(labels);
  out.test = test;
  out.a_scores = Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(n));
  out.b_scores = Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(n));
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  out.mean_diff = mean_of(d);

  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
    out.flag = TestFlag::kAllDifferencesZero;
    out.p_value = 1.0;
    out.statistic = 0.0;
    out.n_used = test == PairedTestKind::kPairedT ? static_cast<int>(n) : 0;
    return out;
  }

  if (test == PairedTestKind::kWilcoxonSignedRank) {
    const auto w = wilcoxon_signed_rank(d);
    out.statistic = w.w_plus;
    out.p_value = w.p_value;
    out.n_used = w.n_used;
    out.exact = w.exact;
    return out;
  }

  out.n_used = static_cast<int>(n);
  const double var = sample_variance(d, out.mean_diff);
  if (!(var > 0.0)) {
    out.flag = TestFlag::kZeroVarianceDifferences;
    out.statistic = std::copysign(std::numeric_limits<double>::infinity(), out.mean_diff);
    out.p_value = 0.0;
    return out;
  }
  out.statistic = out.mean_diff / std::sqrt(var / static_cast<double>(n));
  out.p_value = student_t_two_sided(out.statistic, static_cast<double>(n - 1));
  return out;
}

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorCode::kTooFewPairs, "Welch test needs at least 2 values per sample");
  }
  WelchResult r;
  r.mean_a = mean_of(a);
  r.mean_b = mean_of(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = sample_variance(a, r.mean_a) / na;
  const double vb = sample_variance(b, r.mean_b) / nb;
  const double se2 = va + vb;
  if (!(se2 > 0.0)) {
    r.t = r.mean_a == r.mean_b ? 0.0
                               : std::copysign(std::numeric_limits<double>::infinity(), r.mean_a - r.mean_b);
    r.dof = na + nb - 2.0;
    r.p_value = r.mean_a == r.mean_b ? 1.0 : 0.0;
    return r;
  }
  r.t = (r.mean_a - r.mean_b) / std::sqrt(se2);
  r.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.p_value = student_t_two_sided(r.t, r.dof);
  return r;
}

WithinAcross within_across(const Matrix& matrix, std::span<const std::string> cells,
                           const std::vector<bool>& include) {
  const auto s = static_cast<std::size_t>(matrix.rows());
  if (matrix.cols() != matrix.rows() || cells.size() != s || include.size() != s) {
    fail(ErrorCode::kShapeMismatch, "need a square matrix with one cell label per speaker");
  }
  WithinAcross out;
  for (std::size_t a = 0; a < s; ++a) {
    if (!include[a]) continue;
    for (std::size_t b = 0; b < s; ++b) {
      if (a == b || !include[b]) continue;
      const double v = matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (std::isnan(v)) continue;  // pair failed upstream
      (cells[a] == cells[b] ? out.within : out.across).push_back(v);
    }
  }
  if (out.across.empty()) fail(ErrorCode::kEmptyCell, "cohort spans a single cell; no across pairs");
  if (out.within.empty()) fail(ErrorCode::kEmptyCell, "every cell holds one speaker; no within pairs");
  out.test = welch_test(out.within, out.across);
  out.within_mean = out.test.mean_a;
  out.across_mean = out.test.mean_b;
  return out;
}

WithinAcross within_across(const Matrix& matrix, std::span<const SpeakerMeta> speakers,
                           Partition partition, std::string_view corpus) {
  std::vector<std::string> cells(speakers.size());
  std::vector<bool> include(speakers.size(), false);
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    const auto& sp = speakers[i];
    const bool corpus_ok = corpus.empty() || sp.corpus == corpus;
    if (partition == Partition::kDialect) {
      if (sp.group == Group::kEnUS) {
        cells[i] = "EN.US";
      } else if (sp.group == Group::kEnBJ || sp.group == Group::kEnSH) {
        cells[i] = "EN.BJ+EN.SH";
      }
    } else if (sp.gender != Gender::kUnknown) {
      cells[i] = std::string(gender_name(sp.gender));
    }
    include[i] = corpus_ok && !cells[i].empty();
  }
  return within_across(matrix, cells, include);
}

}  // namespace artikit
