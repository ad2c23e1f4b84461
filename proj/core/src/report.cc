// core/src/report.cc

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

#include "artikit/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "artikit/akf.h"
#include "artikit/error.h"

namespace artikit {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" +
         fixed(height, 0) + "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 const std::string& extra = "") {
  return "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) + "\" text-anchor=\"" + anchor +
         "\"" + extra + ">" + xml_escape(s) + "</text>\n";
}

// Sequential blue scale, t in [0, 1].
std::string color_for(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(247 - t * (247 - 8)));
  const int g = static_cast<int>(std::lround(251 - t * (251 - 48)));
  const int b = static_cast<int>(std::lround(255 - t * (255 - 107)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

double parse_number(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::kInvalidReport, "not a number: '" + field + "'");
  }
}

}  // namespace

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) fail(ErrorCode::kInvalidReport, "missing CSV column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string to_csv(const CsvTable& table) {
  auto emit_row = [](std::string& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].find_first_of(",\"\n\r") != std::string::npos) {
        fail(ErrorCode::kInvalidReport, "CSV field needs quoting: '" + row[i] + "'");
      }
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  std::string out;
  emit_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      fail(ErrorCode::kInvalidReport, "CSV row width differs from header");
    }
    emit_row(out, row);
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_text_file(path, to_csv(table));
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        fail(ErrorCode::kInvalidReport, "CSV row width differs from header");
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) fail(ErrorCode::kInvalidReport, "empty CSV");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) fail(ErrorCode::kInvalidReport, "missing " + path.string());
    fail(e.code(), path.string() + ": " + e.what());
  }
}

CsvTable matrix_table(const std::string& corner, const std::vector<std::string>& labels,
                      const Matrix& m) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "matrix table needs a square matrix and one label per row");
  }
  CsvTable t;
  t.header.push_back(corner);
  t.header.insert(t.header.end(), labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<std::string> row{labels[i]};
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(format_float(m(static_cast<Eigen::Index>(i), j)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void read_matrix_table(const CsvTable& table, std::vector<std::string>& labels, Matrix& m) {
  labels.assign(table.header.begin() + 1, table.header.end());
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (static_cast<Eigen::Index>(table.rows.size()) != n) {
    fail(ErrorCode::kInvalidReport, "matrix CSV is not square");
  }
  m.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    if (row[0] != labels[static_cast<std::size_t>(i)]) {
      fail(ErrorCode::kInvalidReport, "matrix CSV row label '" + row[0] + "' out of order");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = parse_number(row[static_cast<std::size_t>(j + 1)]);
  }
}

std::string svg_heatmap(const Matrix& values, const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels, const std::string& title) {
  if (values.size() == 0) fail(ErrorCode::kInvalidReport, "empty heatmap");
  if (static_cast<std::size_t>(values.rows()) != row_labels.size() ||
      static_cast<std::size_t>(values.cols()) != col_labels.size()) {
    fail(ErrorCode::kInvalidReport, "heatmap labels do not match the matrix shape");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values.data()[i];
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double cell = 44.0, left = 90.0, top = 50.0;
  const double width = left + cell * static_cast<double>(values.cols()) + 20.0;
  const double height = top + cell * static_cast<double>(values.rows()) + 70.0;
  std::string svg = svg_open(width, height);
  svg += text(width / 2, 22, title, "middle", " font-size=\"14\"");
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      const double x = left + cell * static_cast<double>(j), y = top + cell * static_cast<double>(i);
      const double t = std::isfinite(v) && hi > lo ? (v - lo) / (hi - lo) : 0.5;
      svg += "<rect class=\"cell\" x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) + "\" width=\"" +
             fixed(cell, 2) + "\" height=\"" + fixed(cell, 2) + "\" fill=\"" +
             (std::isfinite(v) ? color_for(t) : std::string("#cccccc")) + "\"/>\n";
      svg += text(x + cell / 2, y + cell / 2 + 4,
                  std::isfinite(v) ? fixed(v, 3) : std::string("n/a"), "middle",
                  std::string(" class=\"value\" fill=\"") + (t > 0.6 ? "#ffffff" : "#000000") + "\"");
    }
  }
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    svg += text(left - 6, top + cell * static_cast<double>(i) + cell / 2 + 4, row_labels[i], "end");
  }
  for (std::size_t j = 0; j < col_labels.size(); ++j) {
    const double x = left + cell * static_cast<double>(j) + cell / 2;
    const double y = top + cell * static_cast<double>(values.rows()) + 12;
    svg += "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) +
           "\" text-anchor=\"start\" transform=\"rotate(45 " + fixed(x, 2) + " " + fixed(y, 2) +
           ")\">" + xml_escape(col_labels[j]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string svg_bar_chart(const std::vector<std::string>& labels, const Vector& values,
                          const std::string& title) {
  if (values.size() == 0) fail(ErrorCode::kInvalidReport, "empty score vector");
  if (static_cast<std::size_t>(values.size()) != labels.size()) {
    fail(ErrorCode::kInvalidReport, "one label per bar expected");
  }
  const double bar = 36.0, left = 50.0, top = 40.0, plot_h = 240.0;
  double hi = 0.0, lo = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::isfinite(values(i))) {
      hi = std::max(hi, values(i));
      lo = std::min(lo, values(i));
    }
  }
  if (hi == lo) hi = lo + 1.0;
  const double width = left + bar * static_cast<double>(values.size()) + 20.0;
  const double height = top + plot_h + 50.0;
  auto py = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
  std::string svg = svg_open(width, height);
  svg += text(width / 2, 22, title, "middle", " font-size=\"14\"");
  svg += "<line x1=\"" + fixed(left, 2) + "\" y1=\"" + fixed(py(0), 2) + "\" x2=\"" +
         fixed(width - 20, 2) + "\" y2=\"" + fixed(py(0), 2) + "\" stroke=\"#000000\"/>\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = std::isfinite(values(i)) ? values(i) : 0.0;
    const double x = left + bar * static_cast<double>(i) + 4;
    const double y0 = std::min(py(v), py(0)), h = std::abs(py(v) - py(0));
    svg += "<rect class=\"bar\" x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y0, 2) + "\" width=\"" +
           fixed(bar - 8, 2) + "\" height=\"" + fixed(h, 2) + "\" fill=\"#3b6ea5\"/>\n";
    svg += text(x + (bar - 8) / 2, y0 - 4, fixed(values(i), 3), "middle", " class=\"value\"");
    svg += text(x + (bar - 8) / 2, top + plot_h + 18, labels[static_cast<std::size_t>(i)]);
  }
  svg += "</svg>\n";
  return svg;
}

ScatterFrame ScatterFrame::fit(const std::vector<ScatterPoint>& points) {
  ScatterFrame f;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : points) {
    lo = std::min({lo, p.x, p.y});
    hi = std::max({hi, p.x, p.y});
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorCode::kInvalidReport, "scatter needs finite coordinates");
  }
  const double pad = hi > lo ? 0.05 * (hi - lo) : 0.05;
  f.lo = lo - pad;
  f.hi = hi + pad;
  return f;
}

std::string svg_scatter(const std::vector<ScatterPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
  if (points.empty()) fail(ErrorCode::kInvalidReport, "empty scatter");
  const ScatterFrame f = ScatterFrame::fit(points);
  const double width = f.left + f.size + 30, height = f.top + f.size + 50;
  std::string svg = svg_open(width, height);
  svg += text(width / 2, 22, title, "middle", " font-size=\"14\"");
  svg += "<rect x=\"" + fixed(f.left, 2) + "\" y=\"" + fixed(f.top, 2) + "\" width=\"" +
         fixed(f.size, 2) + "\" height=\"" + fixed(f.size, 2) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";
  svg += "<line class=\"identity\" x1=\"" + fixed(f.px(f.lo), 3) + "\" y1=\"" + fixed(f.py(f.lo), 3) +
         "\" x2=\"" + fixed(f.px(f.hi), 3) + "\" y2=\"" + fixed(f.py(f.hi), 3) +
         "\" stroke=\"#888888\" stroke-dasharray=\"5,4\"/>\n";
  for (const auto& p : points) {
    svg += "<circle class=\"point\" cx=\"" + fixed(f.px(p.x), 3) + "\" cy=\"" + fixed(f.py(p.y), 3) +
           "\" r=\"4\" fill=\"#c0392b\"><title>" + xml_escape(p.label) + "</title></circle>\n";
  }
  svg += text(f.left, f.top + f.size + 16, format_float(f.lo), "start");
  svg += text(f.left + f.size, f.top + f.size + 16, format_float(f.hi), "end");
  svg += text(f.left + f.size / 2, f.top + f.size + 36, x_label);
  const double yx = f.left - 36, yy = f.top + f.size / 2;
  svg += "<text x=\"" + fixed(yx, 2) + "\" y=\"" + fixed(yy, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         fixed(yx, 2) + " " + fixed(yy, 2) + ")\">" + xml_escape(y_label) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

ReportBundle read_report_bundle(const std::filesystem::path& run_dir) {
  ReportBundle b;
  read_matrix_table(read_csv(run_dir / "transfer" / "matrix.csv"), b.speakers, b.transfer);
  read_matrix_table(read_csv(run_dir / "transfer" / "group_matrix.csv"), b.groups, b.group_values);
  const CsvTable scores = read_csv(run_dir / "transfer" / "articulator_scores.csv");
  const auto ch = scores.column("channel"), sc = scores.column("score");
  b.channel_scores.resize(static_cast<Eigen::Index>(scores.rows.size()));
  for (std::size_t i = 0; i < scores.rows.size(); ++i) {
    b.channels.push_back(scores.rows[i][ch]);
    b.channel_scores(static_cast<Eigen::Index>(i)) = parse_number(scores.rows[i][sc]);
  }
  const auto pref_path = run_dir / "preference.csv";
  if (std::filesystem::exists(pref_path)) {
    const CsvTable pref = read_csv(pref_path);
    const auto id = pref.column("speaker_id"), sa = pref.column("source_a"),
               sb = pref.column("source_b"), ca = pref.column("corr_a"), cb = pref.column("corr_b");
    for (const auto& row : pref.rows) {
      b.preference.push_back({row[id], parse_number(row[ca]), parse_number(row[cb])});
      b.preference_x = row[sa];
      b.preference_y = row[sb];
    }
  }
  return b;
}

std::vector<std::filesystem::path> emit_charts(const ReportBundle& bundle,
                                               const std::filesystem::path& run_dir) {
  const auto dir = run_dir / "charts";
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& svg) {
    write_text_file(dir / name, svg);
    written.push_back(dir / name);
  };
  put("transfer_matrix.svg", svg_heatmap(bundle.transfer, bundle.speakers, bundle.speakers,
                                         "Speaker transferability (row -> column)"));
  put("group_matrix.svg", svg_heatmap(bundle.group_values, bundle.groups, bundle.groups,
                                      "Group transferability"));
  put("articulator_scores.svg",
      svg_bar_chart(bundle.channels, bundle.channel_scores, "Per-channel transfer correlation"));
  if (!bundle.preference.empty()) {
    put("preference.svg", svg_scatter(bundle.preference, bundle.preference_x, bundle.preference_y,
                                      "Probe correlation per speaker"));
  }
  return written;
}

}  // namespace artikit
