// tests/stats_test.cc

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

#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "artikit/error.h"
#include "artikit/rng.h"
#include "artikit/stats.h"
#include "oracles.h"
#include "test_util.h"

namespace artikit {
namespace {

using testing::code_of;

const std::vector<double> kDiffs{0.5, -0.2, 0.8, 1.1, -0.1, 0.4, 0.9, 0.3, 0.6, 0.2};

double t_statistic(const std::vector<double>& d) {
  const double n = static_cast<double>(d.size());
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return mean / std::sqrt(ss / (n - 1) / n);
}

// Special functions ----------------------------------------------------------------

TEST(SpecialFunctions, IncompleteBetaAgainstBoost) {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
    for (double b : {0.5, 1.0, 3.0, 12.0}) {
      for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0}) {
        EXPECT_NEAR(incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12)
            << a << " " << b << " " << x;
      }
    }
  }
}

TEST(SpecialFunctions, StudentTAgainstQuadratureAndBoost) {
  for (double dof : {1.0, 2.0, 4.5, 9.0, 27.0, 200.0}) {
    const boost::math::students_t dist(dof);
    for (double t : {0.0, 0.3, 1.0, 2.2, 5.0, -3.1}) {
      EXPECT_NEAR(student_t_two_sided(t, dof), oracle::t_two_sided_by_quadrature(t, dof), 1e-9)
          << dof << " " << t;
      EXPECT_NEAR(student_t_cdf(t, dof), boost::math::cdf(dist, t), 1e-10);
    }
  }
}

TEST(SpecialFunctions, NormalTail) {
  const boost::math::normal n;
  for (double z : {0.0, 0.5, 1.96, 3.0, -4.0}) {
    EXPECT_NEAR(normal_two_sided(z), 2.0 * boost::math::cdf(boost::math::complement(n, std::abs(z))),
                1e-14);
  }
}

// Paired tests --------------------------------------------------------------------

TEST(PairedT, WorkedDifferencesAgainstQuadrature) {
  const std::vector<double> zeros(kDiffs.size(), 0.0);
  const PairedComparison c = paired_test(kDiffs, zeros);
  const double t = t_statistic(kDiffs);
  EXPECT_NEAR(c.statistic, t, 1e-12);
  EXPECT_NEAR(c.p_value, oracle::t_two_sided_by_quadrature(t, 9.0), 1e-6);
  const boost::math::students_t dist(9.0);
  EXPECT_NEAR(c.p_value, 2.0 * boost::math::cdf(boost::math::complement(dist, t)), 1e-10);
  EXPECT_NEAR(c.mean_diff, 0.45, 1e-12);
  EXPECT_EQ(c.n_used, 10);
  EXPECT_EQ(c.test, PairedTestKind::kPairedT);
}

TEST(PairedT, IdenticalInputs) {
  const std::vector<double> a{0.8, 0.9, 0.85, 0.7};
  const PairedComparison c = paired_test(a, a);
  EXPECT_EQ(c.mean_diff, 0.0);
  EXPECT_EQ(c.p_value, 1.0);
  EXPECT_EQ(c.flag, TestFlag::kAllDifferencesZero);
  EXPECT_EQ(paired_test(a, a, PairedTestKind::kWilcoxonSignedRank).p_value, 1.0);
}

TEST(PairedT, ConstantShiftIsFlagged) {
  std::vector<double> ones(10, 1.0), zero(10, 0.0);
  const PairedComparison c = paired_test(ones, zero);
  EXPECT_EQ(c.flag, TestFlag::kZeroVarianceDifferences);
  EXPECT_EQ(c.p_value, 0.0);
  EXPECT_TRUE(std::isinf(c.statistic) && c.statistic > 0);
  EXPECT_LT(paired_test(zero, ones).statistic, 0.0);
}

TEST(PairedT, Antisymmetry) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal() + 0.3;
    }
    for (const auto kind : {PairedTestKind::kPairedT, PairedTestKind::kWilcoxonSignedRank}) {
      const auto ab = paired_test(a, b, kind);
      const auto ba = paired_test(b, a, kind);
      EXPECT_EQ(ab.mean_diff, -ba.mean_diff);
      EXPECT_EQ(ab.p_value, ba.p_value);
    }
  }
}

TEST(PairedT, CommonShiftLeavesPValue) {
  // The shift perturbs the differences by rounding only.
  Rng rng(2);
  std::vector<double> a(15), b(15), a2(15), b2(15);
  for (std::size_t i = 0; i < 15; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    a2[i] = a[i] + 4.0;
    b2[i] = b[i] + 4.0;
  }
  for (const auto kind : {PairedTestKind::kPairedT, PairedTestKind::kWilcoxonSignedRank}) {
    EXPECT_NEAR(paired_test(a, b, kind).p_value, paired_test(a2, b2, kind).p_value, 1e-12);
  }
}

TEST(PairedT, Errors) {
  const std::vector<double> two{1, 2}, three{1, 2, 3};
  EXPECT_EQ(code_of([&] { paired_test(two, two); }), ErrorCode::kTooFewPairs);
  EXPECT_EQ(code_of([&] { paired_test(three, two); }), ErrorCode::kShapeMismatch);
}

TEST(PairedT, MeanDiffAndLabels) {
  const std::vector<double> a{0.9, 0.8, 0.7}, b{0.85, 0.6, 0.75};
  const auto c = paired_test(a, b, PairedTestKind::kPairedT, {"x", "y", "z"});
  EXPECT_NEAR(c.mean_diff, (0.05 + 0.2 - 0.05) / 3.0, 1e-12);
  EXPECT_EQ(c.labels.size(), 3u);
  EXPECT_GE(c.p_value, 0.0);
  EXPECT_LE(c.p_value, 1.0);
}

// Wilcoxon ------------------------------------------------------------------------

TEST(Wilcoxon, ExactMatchesEnumeration) {
  Rng rng(3);
  for (int n = 3; n <= 12; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> d(static_cast<std::size_t>(n));
      for (double& v : d) {
        // Coarse values force ties and the occasional zero.
        v = std::round(4.0 * rng.normal()) / 4.0 + 0.25;
      }
      const WilcoxonResult w = wilcoxon_signed_rank(d);
      if (w.n_used == 0) continue;
      EXPECT_TRUE(w.exact);
      EXPECT_NEAR(w.p_value, oracle::wilcoxon_by_enumeration(d), 1e-12) << "n " << n;
    }
  }
}

TEST(Wilcoxon, KnownSmallCase) {
  // All five differences positive: W+ = 15, the most extreme of 32 patterns.
  const std::vector<double> d{1, 2, 3, 4, 5};
  const WilcoxonResult w = wilcoxon_signed_rank(d);
  EXPECT_EQ(w.w_plus, 15.0);
  EXPECT_NEAR(w.p_value, 2.0 / 32.0, 1e-15);
}

TEST(Wilcoxon, LargeSampleUsesNormalApproximation) {
  Rng rng(4);
  std::vector<double> d(40);
  for (double& v : d) v = rng.normal() + 0.5;
  const WilcoxonResult w = wilcoxon_signed_rank(d);
  EXPECT_FALSE(w.exact);
  // No ties: the textbook z with continuity correction.
  const double n = 40;
  const double mean = n * (n + 1) / 4, sd = std::sqrt(n * (n + 1) * (2 * n + 1) / 24);
  const double z = (std::abs(w.w_plus - mean) - 0.5) / sd;
  EXPECT_NEAR(w.p_value, normal_two_sided(z), 1e-12);
}

// Welch / within-across -------------------------------------------------------------

TEST(Welch, AgainstDirectFormula) {
  const std::vector<double> a{0.91, 0.88, 0.93, 0.95, 0.90}, b{0.82, 0.85, 0.80};
  const WelchResult w = welch_test(a, b);
  auto moments = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, s / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double sa = va / 5, sb = vb / 3;
  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double dof = (sa + sb) * (sa + sb) / (sa * sa / 4 + sb * sb / 2);
  EXPECT_NEAR(w.t, t, 1e-12);
  EXPECT_NEAR(w.dof, dof, 1e-9);
  const boost::math::students_t dist(dof);
  EXPECT_NEAR(w.p_value, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 1e-9);
  EXPECT_EQ(code_of([] { welch_test(std::vector<double>{1.0}, std::vector<double>{1, 2}); }),
            ErrorCode::kTooFewPairs);
}

TEST(WithinAcrossTest, SplitsDirectedPairs) {
  Matrix m(4, 4);
  m << 1, 0.9, 0.5, 0.4,  //
      0.8, 1, 0.45, 0.35, //
      0.3, 0.2, 1, 0.95,  //
      0.25, 0.15, 0.85, 1;
  const std::vector<std::string> cells{"a", "a", "b", "b"};
  const WithinAcross w = within_across(m, cells, std::vector<bool>(4, true));
  EXPECT_EQ(w.within.size(), 4u);
  EXPECT_EQ(w.across.size(), 8u);
  EXPECT_NEAR(w.within_mean, (0.9 + 0.8 + 0.95 + 0.85) / 4, 1e-12);
  EXPECT_NEAR(w.across_mean, (0.5 + 0.4 + 0.45 + 0.35 + 0.3 + 0.2 + 0.25 + 0.15) / 8, 1e-12);
  EXPECT_LT(w.test.p_value, 0.01);
  // Excluding speaker 3 drops its row and column.
  const WithinAcross sub = within_across(m, cells, {true, true, true, false});
  EXPECT_EQ(sub.within.size(), 2u);
  EXPECT_EQ(sub.across.size(), 4u);
}

TEST(WithinAcrossTest, SkipsNan) {
  Matrix m = Matrix::Constant(4, 4, 0.9);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  const std::vector<std::string> cells{"a", "a", "b", "b"};
  EXPECT_EQ(within_across(m, cells, std::vector<bool>(4, true)).within.size(), 3u);
}

TEST(WithinAcrossTest, OneCellIsEmptyCell) {
  const Matrix m = Matrix::Constant(3, 3, 0.9);
  const std::vector<std::string> cells(3, "a");
  EXPECT_EQ(code_of([&] { within_across(m, cells, std::vector<bool>(3, true)); }),
            ErrorCode::kEmptyCell);
}

std::vector<SpeakerMeta> metas() {
  // Mixed corpora: only EMA-MAE counts for dialect, only HPRC for gender.
  const struct {
    const char* id;
    Group g;
    Gender s;
    const char* corpus;
  } rows[] = {{"m1", Group::kEnUS, Gender::kMale, "EMA-MAE"},
              {"m2", Group::kEnUS, Gender::kFemale, "EMA-MAE"},
              {"m3", Group::kEnBJ, Gender::kMale, "EMA-MAE"},
              {"m4", Group::kEnSH, Gender::kFemale, "EMA-MAE"},
              {"h1", Group::kEnUS, Gender::kMale, "HPRC"},
              {"h2", Group::kEnUS, Gender::kMale, "HPRC"},
              {"h3", Group::kEnUS, Gender::kFemale, "HPRC"},
              {"h4", Group::kEnUS, Gender::kFemale, "HPRC"}};
  std::vector<SpeakerMeta> out;
  for (const auto& r : rows) {
    SpeakerMeta m;
    m.speaker_id = r.id;
    m.group = r.g;
    m.gender = r.s;
    m.corpus = r.corpus;
    out.push_back(m);
  }
  return out;
}

TEST(WithinAcrossTest, CohortRules) {
  const Matrix m = Matrix::Constant(8, 8, 0.9);
  const auto speakers = metas();
  const WithinAcross d = within_across(m, speakers, Partition::kDialect, "EMA-MAE");
  // Cells {m1, m2} and {m3, m4}: 2 + 2 within, 8 across.
  EXPECT_EQ(d.within.size(), 4u);
  EXPECT_EQ(d.across.size(), 8u);
  const WithinAcross g = within_across(m, speakers, Partition::kGender, "HPRC");
  EXPECT_EQ(g.within.size(), 4u);
  EXPECT_EQ(g.across.size(), 8u);
  // No corpus filter: gender over all 8 speakers, 4 male and 4 female.
  const WithinAcross all = within_across(m, speakers, Partition::kGender, "");
  EXPECT_EQ(all.within.size(), 2u * 4 * 3);
  EXPECT_EQ(all.across.size(), 2u * 4 * 4);
  EXPECT_EQ(code_of([&] { within_across(m, speakers, Partition::kDialect, "HPRC"); }),
            ErrorCode::kEmptyCell);
}

}  // namespace
}  // namespace artikit
