// core/include/artikit/report.h

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

#ifndef ARTIKIT_REPORT_H_
#define ARTIKIT_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "artikit/types.h"

namespace artikit {

/// Six significant digits ("%.6g"); NaN is written as "nan".
std::string format_float(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // InvalidReport if absent
};

/// Fields must not contain commas, quotes or newlines (InvalidReport).
std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Square labelled matrix: header "<corner>,l1,...,ln", one row per label.
CsvTable matrix_table(const std::string& corner, const std::vector<std::string>& labels,
                      const Matrix& m);
void read_matrix_table(const CsvTable& table, std::vector<std::string>& labels, Matrix& m);

std::string svg_heatmap(const Matrix& values, const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels, const std::string& title);
std::string svg_bar_chart(const std::vector<std::string>& labels, const Vector& values,
                          const std::string& title);

struct ScatterPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

/// Data-to-pixel transform shared by both axes so that the identity line is
/// the geometric diagonal of the plot square.
struct ScatterFrame {
  double lo = 0.0;
  double hi = 1.0;
  double left = 60.0;
  double top = 40.0;
  double size = 400.0;

  static ScatterFrame fit(const std::vector<ScatterPoint>& points);
  double px(double x) const { return left + (x - lo) / (hi - lo) * size; }
  double py(double y) const { return top + size - (y - lo) / (hi - lo) * size; }
};

std::string svg_scatter(const std::vector<ScatterPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

/// Everything the charts need, as written by a pipeline run.
struct ReportBundle {
  std::vector<std::string> speakers;
  Matrix transfer;
  std::vector<std::string> groups;
  Matrix group_values;
  std::vector<std::string> channels;
  Vector channel_scores;
  std::vector<ScatterPoint> preference;  // optional
  std::string preference_x;
  std::string preference_y;
};

/// Loads transfer/matrix.csv, transfer/group_matrix.csv,
/// transfer/articulator_scores.csv and, when present, preference.csv.
ReportBundle read_report_bundle(const std::filesystem::path& run_dir);

/// Writes charts/*.svg under `run_dir`; returns the files written.
std::vector<std::filesystem::path> emit_charts(const ReportBundle& bundle,
                                               const std::filesystem::path& run_dir);

}  // namespace artikit

#endif  // ARTIKIT_REPORT_H_
