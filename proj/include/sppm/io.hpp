#ifndef SPPM_IO_HPP
#define SPPM_IO_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sppm/problem.hpp"

namespace sppm {

// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw ConfigError(path + ": unknown key '" + item.key() + "'");
  }
}

// Problem instance document: {"n", "d", "A" (n rows of d), "b", "lambdas"}.
inline RegressionProblem problem_from_json(const nlohmann::json& j) {
  require_keys(j, {"n", "d", "A", "b", "lambdas"}, "problem");
  RegressionProblem p;
  try {
    p.n = j.at("n").get<std::size_t>();
    p.d = j.at("d").get<std::size_t>();
    p.rows = j.at("A").get<std::vector<Vec>>();
    p.targets = j.at("b").get<Vec>();
    p.lambdas = j.at("lambdas").get<Vec>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  if (p.n == 0 || p.d == 0) throw ConfigError("problem: n and d must be positive");
  if (p.rows.size() != p.n) throw ConfigError("problem: A must have n rows");
  for (const auto& row : p.rows)
    if (row.size() != p.d) throw ConfigError("problem: every row of A must have d entries");
  if (p.targets.size() != p.n) throw ConfigError("problem: b must have n entries");
  if (p.lambdas.size() != p.n) throw ConfigError("problem: lambdas must have n entries");
  for (double l : p.lambdas)
    if (!(l > 0.0)) throw ConfigError("problem: lambdas must be positive");
  return p;
}

inline RegressionProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return problem_from_json(j);
}

inline nlohmann::json problem_to_json(const RegressionProblem& p) {
  return nlohmann::json{
      {"n", p.n}, {"d", p.d}, {"A", p.rows}, {"b", p.targets}, {"lambdas", p.lambdas}};
}

// Line series on a log10 y-axis chart.
struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

inline std::string escape_xml(const std::string& s) {
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

// Self-contained SVG line chart; y-axis is log10, nonpositive or non-finite
// samples break the polyline. No external assets are referenced.
inline std::string render_log_chart(const std::string& title, const std::string& x_label,
                                    const std::string& y_label,
                                    const std::vector<Series>& series) {
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const double width = 880.0, height = 540.0;
  const double left = 80.0, right = width - 210.0, top = 50.0, bottom = height - 60.0;

  double x_max = 1.0, y_lo = 0.0, y_hi = 0.0;
  bool have = false;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.ys.size(); ++k) {
      x_max = std::max(x_max, s.xs[k]);
      const double y = s.ys[k];
      if (!std::isfinite(y) || y <= 0.0) continue;
      const double ly = std::log10(y);
      if (!have) {
        y_lo = y_hi = ly;
        have = true;
      } else {
        y_lo = std::min(y_lo, ly);
        y_hi = std::max(y_hi, ly);
      }
    }
  if (!have) {
    y_lo = -1.0;
    y_hi = 1.0;
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (y_hi - y_lo < 1.0) y_hi = y_lo + 1.0;

  auto px = [&](double x) { return left + (right - left) * (x / x_max); };
  auto py = [&](double ly) { return bottom - (bottom - top) * ((ly - y_lo) / (y_hi - y_lo)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<text x=\"" << (left + right) / 2.0 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << escape_xml(title) << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (left + right) / 2.0 << "\" y=\"" << height - 18.0
      << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  svg << "<text transform=\"translate(22," << (top + bottom) / 2.0
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(y_label) << "</text>\n";

  // Decade gridlines.
  const int decades = int(y_hi - y_lo);
  const int stride = std::max(1, (decades + 7) / 8);
  for (int e = int(y_lo); e <= int(y_hi); e += stride) {
    const double y = py(double(e));
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8.0 << "\" y=\"" << y + 4.0
        << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double x = x_max * double(t) / 5.0;
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << bottom << "\" x2=\"" << px(x) << "\" y2=\""
        << bottom + 5.0 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << bottom + 20.0 << "\" text-anchor=\"middle\">"
        << format_double(std::round(x)) << "</text>\n";
  }

  // Polylines, split at gaps.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 10];
    std::ostringstream points;
    bool open = false;
    auto flush = [&]() {
      if (open) svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
                    << "points=\"" << points.str() << "\"/>\n";
      points.str("");
      open = false;
    };
    for (std::size_t k = 0; k < series[s].ys.size(); ++k) {
      const double y = series[s].ys[k];
      if (!std::isfinite(y) || y <= 0.0) {
        flush();
        continue;
      }
      points << px(series[s].xs[k]) << "," << py(std::log10(y)) << " ";
      open = true;
    }
    flush();
    const double ly = top + 10.0 + 20.0 * double(s);
    svg << "<line x1=\"" << right + 14.0 << "\" y1=\"" << ly << "\" x2=\"" << right + 44.0
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << right + 50.0 << "\" y=\"" << ly + 4.0 << "\">"
        << escape_xml(series[s].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sppm

#endif  // SPPM_IO_HPP
