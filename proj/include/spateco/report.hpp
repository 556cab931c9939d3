#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "spateco/econometrics.hpp"

namespace spateco {

/// Significance stars from the normal approximation:
/// |t| >= 2.576 -> ***, >= 1.960 -> **, >= 1.645 -> *.
inline std::string significance_stars(double t) {
  const double a = std::abs(t);
  if (a >= 2.576) return "***";
  if (a >= 1.960) return "**";
  if (a >= 1.645) return "*";
  return "";
}

/// Cell in the published style: coefficient to three decimals, stars, then
/// the t-statistic in parentheses to two decimals.
inline std::string render_cell(double value, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f%s (%.2f)", value, significance_stars(t).c_str(), t);
  return buf;
}

/// Column-per-model regression table.
struct RegressionTable {
  std::vector<std::string> model_names;      // column headers
  std::vector<std::string> row_names;        // regressor rows, then summary rows
  std::vector<std::vector<std::string>> cells;  // rows x models, empty when absent
  std::vector<std::string> footnotes;
};

/// Assemble a table from fits sharing regressor sets up to the quadratic
/// column. A spatial-parameter row (rho/lambda) is included when any fit has
/// one; the published tables omit it, so the row sits after the regressors.
inline RegressionTable summarize(const std::vector<SpatialFit>& fits, const ModelSpec& spec) {
  RegressionTable t;
  std::vector<std::string> rows;
  for (const auto& fit : fits)
    for (const auto& name : fit.names)
      if (std::find(rows.begin(), rows.end(), name) == rows.end()) {
        // keep declared order: focal, focal2, controls
        rows.push_back(name);
      }
  // Re-sort rows to the declared order of the widest fit.
  std::vector<std::string> declared = {spec.focal, spec.focal + "2"};
  declared.insert(declared.end(), spec.controls.begin(), spec.controls.end());
  std::vector<std::string> ordered;
  for (const auto& name : declared)
    if (std::find(rows.begin(), rows.end(), name) != rows.end()) ordered.push_back(name);
  for (const auto& name : rows)
    if (std::find(ordered.begin(), ordered.end(), name) == ordered.end()) ordered.push_back(name);

  bool any_spatial = false;
  for (const auto& fit : fits) any_spatial = any_spatial || fit.spatial_parameter.has_value();

  t.model_names.reserve(fits.size());
  for (std::size_t m = 0; m < fits.size(); ++m)
    t.model_names.push_back("(" + std::to_string(m + 1) + ") " + spec.dependent);

  t.row_names = ordered;
  if (any_spatial) t.row_names.push_back("spatial");
  t.row_names.push_back("Observations");
  t.row_names.push_back("R-squared");

  t.cells.assign(t.row_names.size(), std::vector<std::string>(fits.size()));
  for (std::size_t m = 0; m < fits.size(); ++m) {
    const SpatialFit& fit = fits[m];
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
      const auto it = std::find(ordered.begin(), ordered.end(), fit.names[j]);
      const std::size_t row = static_cast<std::size_t>(it - ordered.begin());
      t.cells[row][m] = render_cell(fit.coefficients[j], fit.t_statistics[j]);
    }
    std::size_t row = ordered.size();
    if (any_spatial) {
      if (fit.spatial_parameter)
        t.cells[row][m] = render_cell(*fit.spatial_parameter, fit.spatial_t);
      ++row;
    }
    t.cells[row++][m] = std::to_string(fit.nobs);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", fit.r_squared);
    t.cells[row][m] = buf;
  }

  t.footnotes = {"t-statistics in parentheses", "*** p<0.01, ** p<0.05, * p<0.1"};
  return t;
}

/// Fixed-width text rendering.
inline std::string render_text(const RegressionTable& t) {
  std::vector<std::size_t> widths;
  widths.push_back(std::string("VARIABLES").size());
  for (const auto& r : t.row_names) widths[0] = std::max(widths[0], r.size());
  for (std::size_t m = 0; m < t.model_names.size(); ++m) {
    std::size_t w = t.model_names[m].size();
    for (const auto& row : t.cells) w = std::max(w, row[m].size());
    widths.push_back(w);
  }

  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  out << pad("VARIABLES", widths[0]);
  for (std::size_t m = 0; m < t.model_names.size(); ++m)
    out << "  " << pad(t.model_names[m], widths[m + 1]);
  out << '\n';
  for (std::size_t r = 0; r < t.row_names.size(); ++r) {
    out << pad(t.row_names[r], widths[0]);
    for (std::size_t m = 0; m < t.model_names.size(); ++m)
      out << "  " << pad(t.cells[r][m], widths[m + 1]);
    out << '\n';
  }
  out << '\n';
  for (const auto& f : t.footnotes) out << f << '\n';
  return out.str();
}

}  // namespace spateco
