// core/include/artikit/stats.h

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

#ifndef ARTIKIT_STATS_H_
#define ARTIKIT_STATS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artikit/types.h"

namespace artikit {

/// Regularised incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);
/// Student-t CDF with (possibly fractional) dof.
double student_t_cdf(double t, double dof);
/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided(double t, double dof);
double normal_two_sided(double z);

enum class PairedTestKind { kPairedT, kWilcoxonSignedRank };
std::string_view paired_test_name(PairedTestKind kind);

enum class TestFlag {
  kNone,
  kAllDifferencesZero,       // p defined as 1
  kZeroVarianceDifferences,  // constant nonzero shift; t is infinite, p -> 0
};
std::string_view test_flag_name(TestFlag flag);

struct PairedComparison {
  std::vector<std::string> labels;
  Vector a_scores;
  Vector b_scores;
  double mean_diff = 0.0;  // mean(a - b)
  double statistic = 0.0;  // t, or W+ for Wilcoxon
  double p_value = 1.0;    // two-sided
  PairedTestKind test = PairedTestKind::kPairedT;
  TestFlag flag = TestFlag::kNone;
  int n_used = 0;          // pairs entering the statistic
  bool exact = false;      // Wilcoxon exact null distribution
};

/// Two-sided paired comparison of a against b. Throws TooFewPairs (n < 3)
/// and ShapeMismatch.
PairedComparison paired_test(std::span<const double> a, std::span<const double> b,
                             PairedTestKind test = PairedTestKind::kPairedT,
                             std::vector<std::string> labels = {});

struct WilcoxonResult {
  double w_plus = 0.0;
  double p_value = 1.0;
  int n_used = 0;
  bool exact = false;
};

/// Signed-rank test on paired differences. Zeros are dropped, ties get
/// mid-ranks. n <= 25 uses the exact permutation distribution of the observed
/// ranks; larger n uses the tie-corrected normal approximation with
/// continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences);

struct WelchResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Unequal-variance two-sample t-test. Throws TooFewPairs when either side
/// has fewer than 2 values.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

struct WithinAcross {
  std::vector<double> within;
  std::vector<double> across;
  double within_mean = 0.0;
  double across_mean = 0.0;
  WelchResult test;  // within vs across
};

/// Splits the directed off-diagonal entries of a speaker matrix among
/// included speakers into same-cell and cross-cell pairs. Throws EmptyCell.
WithinAcross within_across(const Matrix& matrix, std::span<const std::string> cells,
                           const std::vector<bool>& include);

enum class Partition { kDialect, kGender };

/// Cohort rules: dialect compares {EN.BJ + EN.SH} against EN.US, gender
/// compares M against F. A non-empty `corpus` restricts the cohort to that
/// corpus (EMA-MAE and HPRC respectively in the reference analysis).
WithinAcross within_across(const Matrix& matrix, std::span<const SpeakerMeta> speakers,
                           Partition partition, std::string_view corpus);

}  // namespace artikit

#endif  // ARTIKIT_STATS_H_
