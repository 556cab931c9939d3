#include <catch2/catch_amalgamated.hpp>

#include "spateco/json_io.hpp"
#include "spateco/report.hpp"

using namespace spateco;

TEST_CASE("cell rendering reproduces the published style byte-exactly") {
  CHECK(render_cell(0.020, 3.05) == "0.020*** (3.05)");
  CHECK(render_cell(0.041, 1.48) == "0.041 (1.48)");
  CHECK(render_cell(-0.030, -1.88) == "-0.030* (-1.88)");
  CHECK(render_cell(-0.104, -2.25) == "-0.104** (-2.25)");
  CHECK(render_cell(0.000, 8.76) == "0.000*** (8.76)");
}

TEST_CASE("stars are a pure function of |t| thresholds") {
  CHECK(significance_stars(2.576) == "***");
  CHECK(significance_stars(-2.576) == "***");
  CHECK(significance_stars(2.5759) == "**");
  CHECK(significance_stars(1.960) == "**");
  CHECK(significance_stars(1.9599) == "*");
  CHECK(significance_stars(1.645) == "*");
  CHECK(significance_stars(1.6449) == "");
  CHECK(significance_stars(0.0) == "");
}

namespace {

SpatialFit fake_fit(bool quadratic, bool spatial) {
  SpatialFit f;
  f.kind = spatial ? ModelKind::SlmFixedEffects : ModelKind::OlsFixedEffects;
  f.names = quadratic ? std::vector<std::string>{"LQagman", "LQagman2", "GDP"}
                      : std::vector<std::string>{"LQagman", "GDP"};
  f.coefficients = quadratic ? std::vector<double>{0.041, -0.007, 0.0003}
                             : std::vector<double>{0.020, 0.0003};
  f.t_statistics = quadratic ? std::vector<double>{1.48, -0.78, 8.78}
                             : std::vector<double>{3.05, 8.76};
  f.standard_errors.assign(f.names.size(), 0.01);
  if (spatial) {
    f.spatial_parameter = 0.4;
    f.spatial_se = 0.05;
    f.spatial_t = 8.0;
  }
  f.sigma2 = 0.001;
  f.log_likelihood = 900.0;
  f.r_squared = 0.566;
  f.nobs = 474;
  return f;
}

}  // namespace

TEST_CASE("summarize lays out the two-column table") {
  ModelSpec spec;
  spec.name = "agman";
  spec.dependent = "y";
  spec.focal = "LQagman";
  spec.include_quadratic = true;
  spec.controls = {"GDP"};

  const auto table = summarize({fake_fit(false, true), fake_fit(true, true)}, spec);
  REQUIRE(table.model_names.size() == 2);
  CHECK(table.model_names[0] == "(1) y");
  CHECK(table.model_names[1] == "(2) y");
  REQUIRE(table.row_names.size() >= 5);
  CHECK(table.row_names[0] == "LQagman");
  CHECK(table.row_names[1] == "LQagman2");
  CHECK(table.row_names[2] == "GDP");
  CHECK(table.cells[0][0] == "0.020*** (3.05)");
  CHECK(table.cells[0][1] == "0.041 (1.48)");
  CHECK(table.cells[1][0] == "");  // linear column has no quadratic row
  CHECK(table.cells[1][1] == "-0.007 (-0.78)");

  // Observations and R-squared rows close the table
  const auto& rows = table.row_names;
  CHECK(rows[rows.size() - 2] == "Observations");
  CHECK(rows[rows.size() - 1] == "R-squared");
  CHECK(table.cells[rows.size() - 2][0] == "474");
  CHECK(table.cells[rows.size() - 1][0] == "0.566");

  const std::string text = render_text(table);
  CHECK(text.find("t-statistics in parentheses") != std::string::npos);
  CHECK(text.find("*** p<0.01, ** p<0.05, * p<0.1") != std::string::npos);
  CHECK(text.find("0.020*** (3.05)") != std::string::npos);
}

TEST_CASE("fit JSON carries the documented fields") {
  const auto j = fit_to_json(fake_fit(false, true), "m1");
  CHECK(j["name"] == "m1");
  CHECK(j["spatial_param"]["value"] == 0.4);
  CHECK(j["coefficients"][0]["name"] == "LQagman");
  CHECK(j["coefficients"][0]["stars"] == "***");
  CHECK(j["nobs"] == 474);
  CHECK(j.contains("sigma2"));
  CHECK(j.contains("loglik"));
  CHECK(j.contains("r2"));

  const auto ols = fit_to_json(fake_fit(false, false), "m0");
  CHECK(!ols.contains("spatial_param"));
}
