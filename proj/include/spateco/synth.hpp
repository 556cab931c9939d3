#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/indices.hpp"
#include "spateco/matrix.hpp"
#include "spateco/numerics.hpp"
#include "spateco/panel.hpp"
#include "spateco/rng.hpp"
#include "spateco/spatial.hpp"

namespace spateco {

/// Output-density generator parameters: land output density per city-period is
/// omega * (labor density)^beta1 * (capital density)^beta2 times multiplicative
/// lognormal noise exp(sigma * eps). Input densities are drawn from lognormals
/// with meanlog 0 and sdlog 0.5.
struct DensityParams {
  double omega = 1.0;  // Hicks-neutral level, > 0
  double beta1 = 0.0;  // labor-density elasticity
  double beta2 = 0.0;  // capital-density elasticity
  double sigma = 0.0;  // lognormal noise dispersion, >= 0
  std::size_t n_cities = 1;
  std::size_t n_periods = 1;
};

/// Spatial-lag DGP: per period, y_t = (I - rho W)^{-1} (X_t beta + mu + eps_t)
/// with city effects mu drawn once from N(0, fe_spread^2) and eps iid
/// N(0, sigma^2).
struct SlmDgpParams {
  double rho = 0.0;
  std::vector<double> beta;
  double fe_spread = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Spatial-error DGP: y_t = X_t beta + mu + u_t with u_t = (I - lambda W)^{-1} v_t.
struct SemDgpParams {
  double lambda = 0.0;
  std::vector<double> beta;
  double fe_spread = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<std::string> default_city_axis(std::size_t n) {
  std::vector<std::string> cities(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "C%02zu", i + 1);
    cities[i] = buf;
  }
  return cities;
}

inline std::vector<int> default_year_axis(std::size_t t, int first_year = 1) {
  std::vector<int> years(t);
  for (std::size_t i = 0; i < t; ++i) years[i] = first_year + static_cast<int>(i);
  return years;
}

inline void validate_spatial_param(double value, const SpatialWeights& w, const char* name) {
  if (!w.standardized)
    throw Error(ErrorKind::InvalidArgument, "generator needs a row-standardized W");
  for (double lam : w.spectrum)
    if (std::abs(1.0 - value * lam) < 1e-12)
      throw Error(ErrorKind::SingularReducedForm,
                  std::string(name) + " sits at a reciprocal eigenvalue of W");
  const double lam_min = w.spectrum.front();
  if (lam_min < 0.0 && (value <= 1.0 / lam_min || value >= 1.0))
    throw Error(ErrorKind::InvalidArgument,
                std::string(name) + " outside the admissible interval (1/lambda_min, 1)");
}

/// Solve (I - c W) x = b by dense elimination.
inline std::vector<double> reduced_form_solve(const SpatialWeights& w, double c,
                                              const std::vector<double>& b) {
  const std::size_t n = w.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = -c * w.weights(i, j);
    a(i, i) += 1.0;
  }
  try {
    return solve_linear(std::move(a), b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankDeficient)
      throw Error(ErrorKind::SingularReducedForm, "I - c W is singular");
    throw;
  }
}

}  // namespace detail

/// Deterministic kernel of the density model.
inline double output_density(const DensityParams& p, double labor_density,
                             double capital_density) {
  return p.omega * std::pow(labor_density, p.beta1) * std::pow(capital_density, p.beta2);
}

/// Panel with variables density, labor_density, capital_density over
/// n_cities x n_periods. Pure function of (params, seed).
inline PanelDataset gen_density_panel(const DensityParams& p, std::uint64_t seed) {
  if (p.omega <= 0.0) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  if (p.sigma < 0.0) throw Error(ErrorKind::InvalidArgument, "sigma must be nonnegative");
  if (p.n_cities == 0 || p.n_periods == 0)
    throw Error(ErrorKind::InvalidArgument, "empty panel requested");

  PanelDataset ds(detail::default_city_axis(p.n_cities), detail::default_year_axis(p.n_periods),
                  {"density", "labor_density", "capital_density"});
  Rng rng(seed);
  for (std::size_t ci = 0; ci < p.n_cities; ++ci) {
    Rng stream = rng.substream(ci);
    for (std::size_t yi = 0; yi < p.n_periods; ++yi) {
      const double labor = stream.lognormal(0.0, 0.5);
      const double capital = stream.lognormal(0.0, 0.5);
      const double noise = (p.sigma > 0.0) ? std::exp(p.sigma * stream.normal()) : 1.0;
      ds.set_at(ci, yi, 0, output_density(p, labor, capital) * noise);
      ds.set_at(ci, yi, 1, labor);
      ds.set_at(ci, yi, 2, capital);
    }
  }
  return ds;
}

/// Panel with variables y, x1..xK from the spatial-lag DGP. The exogenous
/// design may be supplied per period (n x K each); otherwise standard normal
/// columns are drawn.
inline PanelDataset gen_slm_panel(const SlmDgpParams& p, const SpatialWeights& w,
                                  std::size_t n_periods,
                                  const std::vector<Matrix>* x_periods = nullptr) {
  detail::validate_spatial_param(p.rho, w, "rho");
  const std::size_t n = w.size();
  const std::size_t k = p.beta.size();
  if (n_periods == 0 || n == 0 || k == 0)
    throw Error(ErrorKind::InvalidArgument, "empty DGP requested");
  if (x_periods &&
      (x_periods->size() != n_periods || (*x_periods)[0].rows() != n || (*x_periods)[0].cols() != k))
    throw Error(ErrorKind::DimensionMismatch, "exogenous design shape mismatch");

  std::vector<std::string> vars = {"y"};
  for (std::size_t j = 0; j < k; ++j) vars.push_back("x" + std::to_string(j + 1));
  PanelDataset ds(w.cities, detail::default_year_axis(n_periods), vars);

  Rng rng(p.seed);
  Rng mu_stream = rng.substream(0);
  std::vector<double> mu(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) mu[i] = mu_stream.normal(0.0, p.fe_spread);

  for (std::size_t t = 0; t < n_periods; ++t) {
    Rng stream = rng.substream(t + 1);
    Matrix xt(n, k);
    if (x_periods) {
      xt = (*x_periods)[t];
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) xt(i, j) = stream.normal();
    }
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double xb = 0.0;
      for (std::size_t j = 0; j < k; ++j) xb += xt(i, j) * p.beta[j];
      rhs[i] = xb + mu[i] + ((p.sigma > 0.0) ? stream.normal(0.0, p.sigma) : 0.0);
    }
    const auto y = (p.rho != 0.0) ? detail::reduced_form_solve(w, p.rho, rhs) : rhs;
    for (std::size_t i = 0; i < n; ++i) {
      ds.set_at(i, t, 0, y[i]);
      for (std::size_t j = 0; j < k; ++j) ds.set_at(i, t, 1 + j, xt(i, j));
    }
  }
  return ds;
}

/// Panel with variables y, x1..xK from the spatial-error DGP.
inline PanelDataset gen_sem_panel(const SemDgpParams& p, const SpatialWeights& w,
                                  std::size_t n_periods,
                                  const std::vector<Matrix>* x_periods = nullptr) {
  detail::validate_spatial_param(p.lambda, w, "lambda");
  const std::size_t n = w.size();
  const std::size_t k = p.beta.size();
  if (n_periods == 0 || n == 0 || k == 0)
    throw Error(ErrorKind::InvalidArgument, "empty DGP requested");
  if (x_periods &&
      (x_periods->size() != n_periods || (*x_periods)[0].rows() != n || (*x_periods)[0].cols() != k))
    throw Error(ErrorKind::DimensionMismatch, "exogenous design shape mismatch");

  std::vector<std::string> vars = {"y"};
  for (std::size_t j = 0; j < k; ++j) vars.push_back("x" + std::to_string(j + 1));
  PanelDataset ds(w.cities, detail::default_year_axis(n_periods), vars);

  Rng rng(p.seed);
  Rng mu_stream = rng.substream(0);
  std::vector<double> mu(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) mu[i] = mu_stream.normal(0.0, p.fe_spread);

  for (std::size_t t = 0; t < n_periods; ++t) {
    Rng stream = rng.substream(t + 1);
    Matrix xt(n, k);
    if (x_periods) {
      xt = (*x_periods)[t];
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) xt(i, j) = stream.normal();
    }
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = (p.sigma > 0.0) ? stream.normal(0.0, p.sigma) : 0.0;
    const auto u = (p.lambda != 0.0) ? detail::reduced_form_solve(w, p.lambda, v) : v;
    for (std::size_t i = 0; i < n; ++i) {
      double xb = 0.0;
      for (std::size_t j = 0; j < k; ++j) xb += xt(i, j) * p.beta[j];
      ds.set_at(i, t, 0, xb + mu[i] + u[i]);
      for (std::size_t j = 0; j < k; ++j) ds.set_at(i, t, 1 + j, xt(i, j));
    }
  }
  return ds;
}

/// Ring-plus-chords contiguity over n cities: a connected, deterministic
/// stand-in for a real adjacency map, used by the bundled demo inputs.
inline std::vector<std::pair<std::string, std::string>> demo_edges(
    const std::vector<std::string>& cities) {
  std::vector<std::pair<std::string, std::string>> edges;
  const std::size_t n = cities.size();
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(cities[i], cities[(i + 1) % n]);
  for (std::size_t i = 0; i + 5 < n; i += 5) edges.emplace_back(cities[i], cities[i + 5]);
  for (std::size_t i = 2; i + 7 < n; i += 9) edges.emplace_back(cities[i], cities[i + 7]);
  return edges;
}

/// Demo panel: sector employment with city-specific specialization, land-use
/// indicators with trends, control variables, a manufacturing location
/// quotient, and an outcome y following the spatial-lag DGP with rho = 0.4 on
/// the demo adjacency. All draws derive from the one seed.
inline PanelDataset gen_demo_panel(std::uint64_t seed, std::size_t n_cities = 30,
                                   std::size_t n_periods = 16, int first_year = 2003) {
  const auto cities = detail::default_city_axis(n_cities);
  const auto years = detail::default_year_axis(n_periods, first_year);
  const SpatialWeights w = build_weights(demo_edges(cities), cities, true);

  const std::vector<std::string> sectors = {"emp_manufacturing", "emp_transport",
                                            "emp_information",   "emp_finance",
                                            "emp_leasing",       "emp_research"};
  const std::vector<std::string> indicators = {"ind_pop_density",     "ind_plot_ratio",
                                               "ind_gdp_per_area",    "ind_fiscal_per_area",
                                               "ind_green_coverage",  "ind_pollution_per_area"};
  const std::vector<std::string> controls = {"GDP", "ABUND", "TEC", "EDUC", "URBAN", "STR"};

  std::vector<std::string> vars = sectors;
  vars.insert(vars.end(), indicators.begin(), indicators.end());
  vars.insert(vars.end(), controls.begin(), controls.end());
  vars.push_back("LQagman");
  vars.push_back("y");
  PanelDataset ds(cities, years, vars);

  Rng rng(seed);

  // Employment: lognormal city scale, sector mix with a persistent
  // manufacturing tilt so location quotients spread out.
  Rng emp_stream = rng.substream(1);
  std::vector<double> city_scale(n_cities), man_tilt(n_cities);
  for (std::size_t i = 0; i < n_cities; ++i) {
    city_scale[i] = emp_stream.lognormal(4.0, 0.6);
    man_tilt[i] = emp_stream.lognormal(0.0, 0.45);
  }
  for (std::size_t ci = 0; ci < n_cities; ++ci) {
    Rng stream = emp_stream.substream(ci + 1);
    for (std::size_t yi = 0; yi < n_periods; ++yi) {
      const double growth = 1.0 + 0.02 * static_cast<double>(yi);
      for (std::size_t s = 0; s < sectors.size(); ++s) {
        const double base = (s == 0) ? 2.2 * man_tilt[ci] : 0.35;
        const double wobble = stream.lognormal(0.0, 0.12);
        ds.set(cities[ci], years[yi], sectors[s], city_scale[ci] * growth * base * wobble);
      }
    }
  }

  // Indicators: smooth trends plus noise; pollution declines (negative
  // orientation in the demo config).
  Rng ind_stream = rng.substream(2);
  for (std::size_t ci = 0; ci < n_cities; ++ci) {
    Rng stream = ind_stream.substream(ci);
    const double level = stream.lognormal(0.0, 0.3);
    for (std::size_t yi = 0; yi < n_periods; ++yi) {
      const double trend = 1.0 + 0.05 * static_cast<double>(yi);
      ds.set(cities[ci], years[yi], "ind_pop_density", 800.0 * level * trend * stream.lognormal(0.0, 0.08));
      ds.set(cities[ci], years[yi], "ind_plot_ratio", 0.9 * level * trend * stream.lognormal(0.0, 0.06));
      ds.set(cities[ci], years[yi], "ind_gdp_per_area", 3.0 * level * trend * stream.lognormal(0.0, 0.1));
      ds.set(cities[ci], years[yi], "ind_fiscal_per_area", 0.4 * level * trend * stream.lognormal(0.0, 0.1));
      ds.set(cities[ci], years[yi], "ind_green_coverage", 30.0 + 8.0 * stream.uniform01());
      ds.set(cities[ci], years[yi], "ind_pollution_per_area",
             5.0 * level / trend * stream.lognormal(0.0, 0.1));
    }
  }

  // Controls: independent draws with mild persistence in levels.
  Rng ctl_stream = rng.substream(3);
  for (std::size_t ci = 0; ci < n_cities; ++ci) {
    Rng stream = ctl_stream.substream(ci);
    const double gdp_level = stream.lognormal(1.0, 0.4);
    for (std::size_t yi = 0; yi < n_periods; ++yi) {
      const double growth = 1.0 + 0.06 * static_cast<double>(yi);
      ds.set(cities[ci], years[yi], "GDP", 10.0 * gdp_level * growth * stream.lognormal(0.0, 0.05));
      ds.set(cities[ci], years[yi], "ABUND", 0.2 + 0.6 * stream.uniform01());
      ds.set(cities[ci], years[yi], "TEC", 5.0 * gdp_level * growth * stream.lognormal(0.0, 0.2));
      ds.set(cities[ci], years[yi], "EDUC", 8.0 + 4.0 * stream.uniform01());
      ds.set(cities[ci], years[yi], "URBAN", 0.4 + 0.5 * stream.uniform01());
      ds.set(cities[ci], years[yi], "STR", 0.6 + 0.9 * stream.uniform01());
    }
  }

  // Focal regressor: the manufacturing location quotient of the synthetic
  // employment, stored as a panel variable so regressions can reference it.
  for (std::size_t yi = 0; yi < n_periods; ++yi) {
    const EmploymentTable t = extract_employment(ds, years[yi], sectors);
    const IndexSeries lq = location_quotient(t, "emp_manufacturing");
    for (std::size_t ci = 0; ci < n_cities; ++ci)
      ds.set(cities[ci], years[yi], "LQagman", lq.values[ci]);
  }

  // Outcome: spatial-lag DGP over (LQagman, controls) with Table-6-sized
  // coefficients; scale chosen so the signal dominates the noise.
  const std::vector<double> beta = {0.02, 0.0001, -0.1, -0.001, 0.002, 0.106, 0.078};
  const double rho = 0.4;
  Rng y_stream = rng.substream(4);
  std::vector<double> mu(n_cities);
  for (std::size_t i = 0; i < n_cities; ++i) mu[i] = y_stream.normal(0.0, 0.05);
  for (std::size_t yi = 0; yi < n_periods; ++yi) {
    Rng stream = y_stream.substream(yi + 1);
    std::vector<double> rhs(n_cities, 0.0);
    for (std::size_t ci = 0; ci < n_cities; ++ci) {
      const std::vector<std::string> xvars = {"LQagman", "GDP", "ABUND", "TEC",
                                              "EDUC",    "URBAN", "STR"};
      double xb = 0.0;
      for (std::size_t j = 0; j < xvars.size(); ++j)
        xb += beta[j] * *ds.value(cities[ci], years[yi], xvars[j]);
      rhs[ci] = xb + mu[ci] + stream.normal(0.0, 0.02);
    }
    const auto y = detail::reduced_form_solve(w, rho, rhs);
    for (std::size_t ci = 0; ci < n_cities; ++ci) ds.set(cities[ci], years[yi], "y", y[ci]);
  }
  return ds;
}

}  // namespace spateco
