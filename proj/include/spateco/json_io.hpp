#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spateco/econometrics.hpp"
#include "spateco/intensity.hpp"
#include "spateco/report.hpp"
#include "spateco/spatial.hpp"

namespace spateco {

using Json = nlohmann::ordered_json;

/// Global + local Moran results as one document. The per-city array carries
/// the Moran-scatter coordinates (z standardized, spatial lag of the
/// standardized value).
inline Json moran_to_json(const std::string& variable, int year, const MoranResult& global,
                          const LisaResult& local, const std::vector<std::string>& warnings) {
  Json j;
  j["variable"] = variable;
  j["year"] = year;
  j["global"] = {
      {"moran_i", global.statistic},   {"expectation", global.expectation},
      {"variance", global.variance},   {"z_score", global.z_score},
      {"pseudo_p", global.pseudo_p},   {"permutations", global.permutations},
  };
  j["cities"] = Json::array();
  for (const auto& c : local.cities) {
    j["cities"].push_back({
        {"city", c.city},
        {"local_i", c.local_i},
        {"z", c.z_std},
        {"lag", c.lag_std},
        {"quadrant", to_string(c.quadrant)},
        {"pseudo_p", c.pseudo_p},
    });
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

/// Weight report: each indicator with both normalization modes, plus the
/// scatter-degree eigenvalue when that method produced the weights.
inline Json weights_to_json(const std::string& method, const std::vector<IndicatorSpec>& specs,
                            const WeightVector& w) {
  const WeightVector unit = w.rescaled(WeightMode::UnitNorm);
  const WeightVector sum1 = w.rescaled(WeightMode::SumOne);
  Json j;
  j["method"] = method;
  if (w.lambda_max) j["lambda_max"] = *w.lambda_max;
  j["indicators"] = Json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    j["indicators"].push_back({
        {"name", specs[i].name},
        {"dimension", to_string(specs[i].dimension)},
        {"weight_unit_norm", unit.weights[i]},
        {"weight_sum_one", sum1.weights[i]},
    });
  }
  return j;
}

inline Json fit_to_json(const SpatialFit& fit, const std::string& name) {
  Json j;
  j["name"] = name;
  j["model"] = to_string(fit.kind);
  if (fit.spatial_parameter) {
    j["spatial_param"] = {
        {"value", *fit.spatial_parameter},
        {"se", fit.spatial_se},
        {"t", fit.spatial_t},
    };
  }
  j["coefficients"] = Json::array();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    j["coefficients"].push_back({
        {"name", fit.names[i]},
        {"value", fit.coefficients[i]},
        {"se", fit.standard_errors[i]},
        {"t", fit.t_statistics[i]},
        {"stars", significance_stars(fit.t_statistics[i])},
    });
  }
  j["sigma2"] = fit.sigma2;
  j["loglik"] = fit.log_likelihood;
  j["r2"] = fit.r_squared;
  j["nobs"] = fit.nobs;
  return j;
}

inline Json lm_to_json(const LmDiagnostics& lm) {
  return Json{
      {"lm_lag", {{"statistic", lm.lm_lag}, {"p", lm.lm_lag_p}}},
      {"lm_error", {{"statistic", lm.lm_error}, {"p", lm.lm_error_p}}},
      {"robust_lm_lag", {{"statistic", lm.robust_lm_lag}, {"p", lm.robust_lm_lag_p}}},
      {"robust_lm_error", {{"statistic", lm.robust_lm_error}, {"p", lm.robust_lm_error_p}}},
  };
}

}  // namespace spateco
