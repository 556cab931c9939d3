#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/matrix.hpp"
#include "spateco/numerics.hpp"
#include "spateco/panel.hpp"
#include "spateco/spatial.hpp"

namespace spateco {

/// Regression specification: dependent variable, one focal regressor with an
/// optional squared term, and a list of controls. City fixed effects are
/// always on; year effects are optional and off by default.
struct ModelSpec {
  std::string name;
  std::string dependent;
  std::string focal;
  bool include_quadratic = false;
  std::vector<std::string> controls;
  bool year_effects = false;
};

/// Stacked estimation arrays after listwise deletion, ordered city-major then
/// year. The quadratic column, when present, sits right after the focal one
/// and is its elementwise square.
struct DesignMatrices {
  std::vector<double> y;
  Matrix x;
  std::vector<std::string> column_names;
  std::vector<std::size_t> row_city;
  std::vector<std::size_t> row_year;
  std::vector<std::string> cities;  // kept cities, panel order
  std::vector<int> years;           // kept years, ascending
  std::string dependent;
  bool balanced = false;
  bool year_effects = false;

  std::size_t rows() const { return y.size(); }
  std::size_t cols() const { return x.cols(); }
};

enum class ModelKind { OlsFixedEffects, SlmFixedEffects, SemFixedEffects };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::OlsFixedEffects: return "OLS-FE";
    case ModelKind::SlmFixedEffects: return "SLM-FE";
    case ModelKind::SemFixedEffects: return "SEM-FE";
  }
  return "?";
}

/// Estimation result. For spatial models `spatial_parameter` carries rho
/// (SLM) or lambda (SEM); R-squared is the squared correlation between fitted
/// and observed within-transformed outcomes (a pseudo R-squared for the
/// spatial fits). `residuals` are within-transform residuals, kept for the
/// LM diagnostics.
struct SpatialFit {
  ModelKind kind = ModelKind::OlsFixedEffects;
  std::optional<double> spatial_parameter;
  double spatial_se = std::numeric_limits<double>::quiet_NaN();
  double spatial_t = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_statistics;
  double sigma2 = 0.0;
  double log_likelihood = 0.0;
  double r_squared = 0.0;
  std::size_t nobs = 0;
  std::vector<double> residuals;
};

struct LmDiagnostics {
  double lm_lag = 0.0, lm_lag_p = 1.0;
  double lm_error = 0.0, lm_error_p = 1.0;
  double robust_lm_lag = 0.0, robust_lm_lag_p = 1.0;
  double robust_lm_error = 0.0, robust_lm_error_p = 1.0;
};

/// Build stacked design matrices from the panel. Rows with any missing cell
/// among the referenced variables are dropped listwise.
inline DesignMatrices build_design(const PanelDataset& ds, const ModelSpec& spec) {
  for (const auto& c : spec.controls)
    if (c == spec.focal)
      throw Error(ErrorKind::InvalidArgument, "focal regressor " + c + " repeats in controls");
  std::set<std::string> ctl(spec.controls.begin(), spec.controls.end());
  if (ctl.size() != spec.controls.size())
    throw Error(ErrorKind::InvalidArgument, "duplicate control variable");

  std::vector<std::string> needed = {spec.dependent, spec.focal};
  needed.insert(needed.end(), spec.controls.begin(), spec.controls.end());
  std::vector<std::size_t> var_idx;
  for (const auto& v : needed) {
    if (!ds.has_variable(v)) throw Error(ErrorKind::UnknownVariable, "variable " + v + " not in panel");
    var_idx.push_back(ds.variable_index(v));
  }

  struct Row {
    std::size_t ci, yi;
    std::vector<double> vals;  // dependent first
  };
  std::vector<Row> rows;
  for (std::size_t ci = 0; ci < ds.cities().size(); ++ci) {
    for (std::size_t yi = 0; yi < ds.years().size(); ++yi) {
      Row r{ci, yi, {}};
      r.vals.reserve(var_idx.size());
      bool complete = true;
      for (std::size_t v : var_idx) {
        const auto cell = ds.value_at(ci, yi, v);
        if (!cell) {
          complete = false;
          break;
        }
        r.vals.push_back(*cell);
      }
      if (complete) rows.push_back(std::move(r));
    }
  }

  DesignMatrices d;
  d.dependent = spec.dependent;
  d.year_effects = spec.year_effects;
  d.column_names.push_back(spec.focal);
  if (spec.include_quadratic) d.column_names.push_back(spec.focal + "2");
  for (const auto& c : spec.controls) d.column_names.push_back(c);

  const std::size_t k = d.column_names.size();
  if (rows.size() < k + 2)
    throw Error(ErrorKind::InsufficientObservations,
                std::to_string(rows.size()) + " usable rows for " + std::to_string(k) +
                    " regressors");

  std::set<std::size_t> city_set, year_set;
  for (const auto& r : rows) {
    city_set.insert(r.ci);
    year_set.insert(r.yi);
  }
  std::vector<std::size_t> city_map(ds.cities().size(), SIZE_MAX);
  std::vector<std::size_t> year_map(ds.years().size(), SIZE_MAX);
  for (std::size_t ci : city_set) {
    city_map[ci] = d.cities.size();
    d.cities.push_back(ds.cities()[ci]);
  }
  for (std::size_t yi : year_set) {
    year_map[yi] = d.years.size();
    d.years.push_back(ds.years()[yi]);
  }

  d.y.resize(rows.size());
  d.x = Matrix(rows.size(), k);
  d.row_city.resize(rows.size());
  d.row_year.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    d.y[r] = row.vals[0];
    const double focal = row.vals[1];
    std::size_t col = 0;
    d.x(r, col++) = focal;
    if (spec.include_quadratic) d.x(r, col++) = focal * focal;
    for (std::size_t c = 0; c < spec.controls.size(); ++c) d.x(r, col++) = row.vals[2 + c];
    d.row_city[r] = city_map[row.ci];
    d.row_year[r] = year_map[row.yi];
  }

  d.balanced = rows.size() == d.cities.size() * d.years.size();
  return d;
}

/// Trim an unbalanced design to the larger of two balanced blocks: drop the
/// incomplete cities (keeping every year) or drop the incomplete years
/// (keeping every city). Ties keep more cities.
inline DesignMatrices balance_to_block(const DesignMatrices& d) {
  if (d.balanced) return d;
  const std::size_t nc = d.cities.size();
  const std::size_t ny = d.years.size();
  std::vector<std::vector<bool>> present(nc, std::vector<bool>(ny, false));
  for (std::size_t r = 0; r < d.rows(); ++r) present[d.row_city[r]][d.row_year[r]] = true;

  std::vector<bool> city_full(nc, true);
  std::vector<bool> year_full(ny, true);
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t t = 0; t < ny; ++t) {
      if (!present[c][t]) {
        city_full[c] = false;
        year_full[t] = false;
      }
    }
  const std::size_t cities_kept = std::count(city_full.begin(), city_full.end(), true);
  const std::size_t years_kept = std::count(year_full.begin(), year_full.end(), true);
  const std::size_t obs_drop_cities = cities_kept * ny;
  const std::size_t obs_drop_years = nc * years_kept;
  if (obs_drop_cities == 0 && obs_drop_years == 0)
    throw Error(ErrorKind::UnbalancedPanel, "no balanced block exists");

  const bool drop_years = obs_drop_years >= obs_drop_cities;  // ties keep more cities
  std::vector<bool> keep_city(nc, true), keep_year(ny, true);
  if (drop_years)
    for (std::size_t t = 0; t < ny; ++t) keep_year[t] = year_full[t];
  else
    for (std::size_t c = 0; c < nc; ++c) keep_city[c] = city_full[c];

  DesignMatrices out;
  out.dependent = d.dependent;
  out.year_effects = d.year_effects;
  out.column_names = d.column_names;
  std::vector<std::size_t> cmap(nc, SIZE_MAX), ymap(ny, SIZE_MAX);
  for (std::size_t c = 0; c < nc; ++c)
    if (keep_city[c]) {
      cmap[c] = out.cities.size();
      out.cities.push_back(d.cities[c]);
    }
  for (std::size_t t = 0; t < ny; ++t)
    if (keep_year[t]) {
      ymap[t] = out.years.size();
      out.years.push_back(d.years[t]);
    }

  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (!keep_city[d.row_city[r]] || !keep_year[d.row_year[r]]) continue;
    out.y.push_back(d.y[r]);
    out.row_city.push_back(cmap[d.row_city[r]]);
    out.row_year.push_back(ymap[d.row_year[r]]);
  }
  out.x = Matrix(out.y.size(), d.cols());
  std::size_t rr = 0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (!keep_city[d.row_city[r]] || !keep_year[d.row_year[r]]) continue;
    for (std::size_t j = 0; j < d.cols(); ++j) out.x(rr, j) = d.x(r, j);
    ++rr;
  }
  out.balanced = out.y.size() == out.cities.size() * out.years.size();
  if (!out.balanced) throw Error(ErrorKind::UnbalancedPanel, "balancing pass failed");
  return out;
}

namespace detail {

/// Demean a stacked vector by city (and, for two-way effects on balanced
/// panels, by year with the grand mean added back).
inline std::vector<double> within(const DesignMatrices& d, const std::vector<double>& v) {
  std::vector<double> out = v;
  std::vector<double> mean(d.cities.size(), 0.0);
  std::vector<std::size_t> count(d.cities.size(), 0);
  for (std::size_t r = 0; r < v.size(); ++r) {
    mean[d.row_city[r]] += v[r];
    ++count[d.row_city[r]];
  }
  for (std::size_t c = 0; c < mean.size(); ++c) mean[c] /= static_cast<double>(count[c]);
  for (std::size_t r = 0; r < v.size(); ++r) out[r] -= mean[d.row_city[r]];

  if (d.year_effects) {
    if (!d.balanced)
      throw Error(ErrorKind::UnbalancedPanel, "year effects require a balanced panel");
    std::vector<double> ymean(d.years.size(), 0.0);
    double grand = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      ymean[d.row_year[r]] += v[r];
      grand += v[r];
    }
    const double per_year = static_cast<double>(d.cities.size());
    for (double& m : ymean) m /= per_year;
    grand /= static_cast<double>(v.size());
    // City means of the raw data were already removed; subtracting year means
    // re-adds the grand mean once, hence the correction term.
    for (std::size_t r = 0; r < v.size(); ++r) out[r] -= ymean[d.row_year[r]] - grand;
  }
  return out;
}

inline Matrix within_columns(const DesignMatrices& d, const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  std::vector<double> col(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m(r, j);
    const auto w = within(d, col);
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, j) = w[r];
  }
  return out;
}

/// Apply W to a stacked vector year by year (requires a balanced design whose
/// city axis equals the weights' axis).
inline std::vector<double> spatial_lag(const DesignMatrices& d, const SpatialWeights& w,
                                       const std::vector<double>& v) {
  const std::size_t nc = d.cities.size();
  const std::size_t ny = d.years.size();
  std::vector<double> by_year(nc * ny, 0.0);
  for (std::size_t r = 0; r < v.size(); ++r)
    by_year[d.row_year[r] * nc + d.row_city[r]] = v[r];

  std::vector<double> lag(v.size(), 0.0);
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::size_t t = d.row_year[r];
    double s = 0.0;
    const std::size_t i = d.row_city[r];
    for (std::size_t j = 0; j < nc; ++j) s += w.weights(i, j) * by_year[t * nc + j];
    lag[r] = s;
  }
  return lag;
}

inline void check_spatial_inputs(const DesignMatrices& d, const SpatialWeights& w) {
  if (!d.balanced)
    throw Error(ErrorKind::UnbalancedPanel,
                "spatial fits require a balanced panel; run the balancing pass first");
  if (!w.standardized)
    throw Error(ErrorKind::InvalidArgument, "spatial fits require a row-standardized W");
  if (d.cities != w.cities)
    throw Error(ErrorKind::AxisMismatch, "design city axis does not match the weight matrix");
  if (w.spectrum.empty() || w.spectrum.front() >= 0.0)
    throw Error(ErrorKind::EmptyWeights, "weight matrix spectrum is degenerate");
}

inline double corr_squared(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return (sab * sab) / (saa * sbb);
}

constexpr double kGaussianConstant = 1.8378770664093454836;  // ln(2*pi)

inline double mle_sigma2(double rss, std::size_t nt) {
  return std::max(rss / static_cast<double>(nt), 1e-300);
}

}  // namespace detail

/// Within-transformed OLS (city fixed effects). sigma2 is the maximum
/// likelihood RSS/NT; standard errors use the degrees-of-freedom corrected
/// variance accounting for the absorbed effects.
inline SpatialFit fit_ols_fe(const DesignMatrices& d) {
  const std::size_t nt = d.rows();
  const std::size_t k = d.cols();
  const auto yd = detail::within(d, d.y);
  const Matrix xd = detail::within_columns(d, d.x);

  LeastSquaresResult ls;
  try {
    ls = least_squares(xd, yd);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankDeficient)
      throw Error(ErrorKind::RankDeficientDesign,
                  "column " + (e.index() >= 0 ? d.column_names[e.index()] : std::string("?")) +
                      " has no within-city variation or is collinear",
                  e.index());
    throw;
  }

  SpatialFit fit;
  fit.kind = ModelKind::OlsFixedEffects;
  fit.names = d.column_names;
  fit.coefficients = ls.coefficients;
  fit.nobs = nt;
  fit.residuals = ls.residuals;
  fit.sigma2 = ls.rss / static_cast<double>(nt);

  double tss = 0.0;
  for (double v : yd) tss += v * v;
  fit.r_squared = (tss > 0.0) ? 1.0 - ls.rss / tss : 0.0;
  fit.log_likelihood = -0.5 * static_cast<double>(nt) *
                       (detail::kGaussianConstant + 1.0 + std::log(detail::mle_sigma2(ls.rss, nt)));

  std::size_t dof = nt;
  dof -= d.cities.size();
  if (d.year_effects && d.years.size() > 1) dof -= d.years.size() - 1;
  dof = (dof > k) ? dof - k : 1;
  const double s2 = ls.rss / static_cast<double>(dof);
  const Matrix xtx_inv = xtx_inverse_from_r(ls.r);
  fit.standard_errors.resize(k);
  fit.t_statistics.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    fit.standard_errors[j] = std::sqrt(s2 * xtx_inv(j, j));
    fit.t_statistics[j] = fit.coefficients[j] / fit.standard_errors[j];
  }
  return fit;
}

/// Concentrated log-likelihood profile for one spatial model, exposed so the
/// optimum can be audited against a dense grid.
struct ConcentratedProfile {
  double lo = 0.0;  // admissible interval, endpoints already inset
  double hi = 0.0;
  std::function<double(double)> log_likelihood;
};

namespace detail {

struct SlmWork {
  std::vector<double> yd, wyd;
  Matrix xd;
  std::vector<double> e0, e1, b0, b1;
  double t_periods = 0.0;
};

inline SlmWork slm_work(const DesignMatrices& d, const SpatialWeights& w) {
  check_spatial_inputs(d, w);
  SlmWork work;
  const auto wy = spatial_lag(d, w, d.y);
  work.yd = within(d, d.y);
  work.wyd = within(d, wy);
  work.xd = within_columns(d, d.x);
  work.t_periods = static_cast<double>(d.years.size());
  try {
    auto ls0 = least_squares(work.xd, work.yd);
    auto ls1 = least_squares(work.xd, work.wyd);
    work.e0 = std::move(ls0.residuals);
    work.b0 = std::move(ls0.coefficients);
    work.e1 = std::move(ls1.residuals);
    work.b1 = std::move(ls1.coefficients);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankDeficient)
      throw Error(ErrorKind::RankDeficientDesign,
                  "column " + (e.index() >= 0 ? d.column_names[e.index()] : std::string("?")) +
                      " has no within-city variation or is collinear",
                  e.index());
    throw;
  }
  return work;
}

constexpr double kIntervalInset = 1e-6;

inline std::pair<double, double> spatial_interval(const SpatialWeights& w) {
  const double lambda_min = w.spectrum.front();
  return {1.0 / lambda_min + kIntervalInset, 1.0 - kIntervalInset};
}

inline double log_det_term(const std::vector<double>& spectrum, double rho) {
  double s = 0.0;
  for (double lam : spectrum) s += std::log(std::abs(1.0 - rho * lam));
  return s;
}

inline ConcentratedProfile slm_profile_from_work(std::shared_ptr<SlmWork> work,
                                                 const SpatialWeights& w, std::size_t nt) {
  const auto [lo, hi] = spatial_interval(w);
  ConcentratedProfile p;
  p.lo = lo;
  p.hi = hi;
  p.log_likelihood = [work, spectrum = w.spectrum, nt](double rho) {
    double rss = 0.0;
    for (std::size_t i = 0; i < work->e0.size(); ++i) {
      const double e = work->e0[i] - rho * work->e1[i];
      rss += e * e;
    }
    const double s2 = mle_sigma2(rss, nt);
    return -0.5 * static_cast<double>(nt) * (kGaussianConstant + 1.0 + std::log(s2)) +
           work->t_periods * log_det_term(spectrum, rho);
  };
  return p;
}

}  // namespace detail

/// L(rho) = -(NT/2)(ln 2pi + 1) - (NT/2) ln sigma2(rho) + T sum_i ln|1 - rho lambda_i|,
/// with sigma2(rho) = ||e0 - rho e1||^2 / NT from the two auxiliary
/// regressions. At rho = 0 this equals the OLS-FE Gaussian log-likelihood.
inline ConcentratedProfile slm_profile(const DesignMatrices& d, const SpatialWeights& w) {
  auto work = std::make_shared<detail::SlmWork>(detail::slm_work(d, w));
  return detail::slm_profile_from_work(std::move(work), w, d.rows());
}

/// L(lambda) for the error model: spatially filter y and X at the candidate
/// lambda, regress, and add the same log-determinant term.
inline ConcentratedProfile sem_profile(const DesignMatrices& d, const SpatialWeights& w) {
  detail::check_spatial_inputs(d, w);
  auto yd = std::make_shared<std::vector<double>>(detail::within(d, d.y));
  auto wyd = std::make_shared<std::vector<double>>(detail::within(d, detail::spatial_lag(d, w, d.y)));
  auto xd = std::make_shared<Matrix>(detail::within_columns(d, d.x));
  Matrix wx(d.rows(), d.cols());
  {
    std::vector<double> col(d.rows());
    for (std::size_t j = 0; j < d.cols(); ++j) {
      for (std::size_t r = 0; r < d.rows(); ++r) col[r] = d.x(r, j);
      const auto lag = detail::spatial_lag(d, w, col);
      for (std::size_t r = 0; r < d.rows(); ++r) wx(r, j) = lag[r];
    }
  }
  auto wxd = std::make_shared<Matrix>(detail::within_columns(d, wx));

  const auto [lo, hi] = detail::spatial_interval(w);
  const std::size_t nt = d.rows();
  const double t_periods = static_cast<double>(d.years.size());
  const auto names = d.column_names;

  ConcentratedProfile p;
  p.lo = lo;
  p.hi = hi;
  p.log_likelihood = [yd, wyd, xd, wxd, spectrum = w.spectrum, nt, t_periods, names](double lambda) {
    const std::size_t m = yd->size();
    const std::size_t k = xd->cols();
    std::vector<double> ystar(m);
    for (std::size_t i = 0; i < m; ++i) ystar[i] = (*yd)[i] - lambda * (*wyd)[i];
    Matrix xstar(m, k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) xstar(i, j) = (*xd)(i, j) - lambda * (*wxd)(i, j);
    double rss = 0.0;
    try {
      rss = least_squares(xstar, ystar).rss;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::RankDeficient)
        throw Error(ErrorKind::RankDeficientDesign,
                    "column " + (e.index() >= 0 ? names[e.index()] : std::string("?")) +
                        " has no within-city variation or is collinear",
                    e.index());
      throw;
    }
    const double s2 = detail::mle_sigma2(rss, nt);
    return -0.5 * static_cast<double>(nt) * (detail::kGaussianConstant + 1.0 + std::log(s2)) +
           t_periods * detail::log_det_term(spectrum, lambda);
  };
  return p;
}

namespace detail {

inline double optimize_profile(const ConcentratedProfile& p) {
  double est = 0.0;
  try {
    est = maximize_1d(p.log_likelihood, p.lo, p.hi, 201, 1e-8);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonFiniteEvaluation)
      throw Error(ErrorKind::NonConvergence, std::string("likelihood evaluation failed: ") + e.what());
    throw;
  }
  if (est - p.lo <= kIntervalInset || p.hi - est <= kIntervalInset)
    throw Error(ErrorKind::BoundarySolution,
                "spatial parameter " + std::to_string(est) + " sits at the search boundary");
  return est;
}

/// Standard errors from the negative inverse numerical Hessian of the full
/// log-likelihood at (theta, beta, sigma2). Returns an empty matrix when the
/// Hessian is not usable (singular or non-finite), leaving the SEs as NaN.
inline Matrix spatial_covariance(const std::function<double(const std::vector<double>&)>& loglik,
                                 const std::vector<double>& at) {
  try {
    Matrix h = numerical_hessian(loglik, at, 1e-5);
    for (std::size_t i = 0; i < h.rows(); ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) {
        if (!std::isfinite(h(i, j))) return Matrix();
        h(i, j) = -h(i, j);
      }
    return invert(h);
  } catch (const Error&) {
    return Matrix();
  }
}

}  // namespace detail

/// Maximum-likelihood spatial lag model with city fixed effects.
inline SpatialFit fit_slm_fe(const DesignMatrices& d, const SpatialWeights& w) {
  auto work_ptr = std::make_shared<detail::SlmWork>(detail::slm_work(d, w));
  const detail::SlmWork& work = *work_ptr;
  const ConcentratedProfile profile = detail::slm_profile_from_work(work_ptr, w, d.rows());
  const double rho = detail::optimize_profile(profile);

  const std::size_t nt = d.rows();
  const std::size_t k = d.cols();
  SpatialFit fit;
  fit.kind = ModelKind::SlmFixedEffects;
  fit.spatial_parameter = rho;
  fit.names = d.column_names;
  fit.nobs = nt;

  fit.coefficients.resize(k);
  for (std::size_t j = 0; j < k; ++j) fit.coefficients[j] = work.b0[j] - rho * work.b1[j];
  fit.residuals.resize(nt);
  double rss = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    fit.residuals[i] = work.e0[i] - rho * work.e1[i];
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.sigma2 = rss / static_cast<double>(nt);
  fit.log_likelihood = profile.log_likelihood(rho);

  std::vector<double> fitted(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    double xb = 0.0;
    for (std::size_t j = 0; j < k; ++j) xb += work.xd(i, j) * fit.coefficients[j];
    fitted[i] = rho * work.wyd[i] + xb;
  }
  fit.r_squared = detail::corr_squared(fitted, work.yd);

  // Full log-likelihood in (rho, beta, sigma2) for the numerical Hessian.
  const double t_periods = work.t_periods;
  auto loglik = [&](const std::vector<double>& theta) {
    const double r = theta[0];
    const double s2 = theta[k + 1];
    if (s2 <= 0.0) return -1e30;
    double q = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      double xb = 0.0;
      for (std::size_t j = 0; j < k; ++j) xb += work.xd(i, j) * theta[1 + j];
      const double e = work.yd[i] - r * work.wyd[i] - xb;
      q += e * e;
    }
    return -0.5 * static_cast<double>(nt) * (detail::kGaussianConstant + std::log(s2)) +
           t_periods * detail::log_det_term(w.spectrum, r) - q / (2.0 * s2);
  };
  std::vector<double> at(k + 2);
  at[0] = rho;
  for (std::size_t j = 0; j < k; ++j) at[1 + j] = fit.coefficients[j];
  at[k + 1] = fit.sigma2;
  const Matrix cov = detail::spatial_covariance(loglik, at);

  fit.standard_errors.assign(k, std::numeric_limits<double>::quiet_NaN());
  fit.t_statistics.assign(k, std::numeric_limits<double>::quiet_NaN());
  if (cov.rows() == k + 2) {
    if (cov(0, 0) > 0.0) {
      fit.spatial_se = std::sqrt(cov(0, 0));
      fit.spatial_t = rho / fit.spatial_se;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (cov(1 + j, 1 + j) > 0.0) {
        fit.standard_errors[j] = std::sqrt(cov(1 + j, 1 + j));
        fit.t_statistics[j] = fit.coefficients[j] / fit.standard_errors[j];
      }
    }
  }
  return fit;
}

/// Maximum-likelihood spatial error model with city fixed effects.
inline SpatialFit fit_sem_fe(const DesignMatrices& d, const SpatialWeights& w) {
  detail::check_spatial_inputs(d, w);
  const ConcentratedProfile profile = sem_profile(d, w);
  const double lambda = detail::optimize_profile(profile);

  const std::size_t nt = d.rows();
  const std::size_t k = d.cols();
  const auto yd = detail::within(d, d.y);
  const auto wyd = detail::within(d, detail::spatial_lag(d, w, d.y));
  const Matrix xd = detail::within_columns(d, d.x);
  Matrix wxd(nt, k);
  {
    std::vector<double> col(nt);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t r = 0; r < nt; ++r) col[r] = d.x(r, j);
      const auto lag = detail::spatial_lag(d, w, col);
      for (std::size_t r = 0; r < nt; ++r) col[r] = lag[r];
      const auto lagd = detail::within(d, col);
      for (std::size_t r = 0; r < nt; ++r) wxd(r, j) = lagd[r];
    }
  }

  std::vector<double> ystar(nt);
  Matrix xstar(nt, k);
  for (std::size_t i = 0; i < nt; ++i) {
    ystar[i] = yd[i] - lambda * wyd[i];
    for (std::size_t j = 0; j < k; ++j) xstar(i, j) = xd(i, j) - lambda * wxd(i, j);
  }
  const auto ls = least_squares(xstar, ystar);

  SpatialFit fit;
  fit.kind = ModelKind::SemFixedEffects;
  fit.spatial_parameter = lambda;
  fit.names = d.column_names;
  fit.nobs = nt;
  fit.coefficients = ls.coefficients;
  fit.residuals = ls.residuals;
  fit.sigma2 = ls.rss / static_cast<double>(nt);
  fit.log_likelihood = profile.log_likelihood(lambda);

  std::vector<double> fitted(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    double xb = 0.0;
    for (std::size_t j = 0; j < k; ++j) xb += xd(i, j) * fit.coefficients[j];
    fitted[i] = xb;
  }
  fit.r_squared = detail::corr_squared(fitted, yd);

  const double t_periods = static_cast<double>(d.years.size());
  auto loglik = [&](const std::vector<double>& theta) {
    const double l = theta[0];
    const double s2 = theta[k + 1];
    if (s2 <= 0.0) return -1e30;
    double q = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      double filtered = yd[i] - l * wyd[i];
      for (std::size_t j = 0; j < k; ++j)
        filtered -= (xd(i, j) - l * wxd(i, j)) * theta[1 + j];
      q += filtered * filtered;
    }
    return -0.5 * static_cast<double>(nt) * (detail::kGaussianConstant + std::log(s2)) +
           t_periods * detail::log_det_term(w.spectrum, l) - q / (2.0 * s2);
  };
  std::vector<double> at(k + 2);
  at[0] = lambda;
  for (std::size_t j = 0; j < k; ++j) at[1 + j] = fit.coefficients[j];
  at[k + 1] = fit.sigma2;
  const Matrix cov = detail::spatial_covariance(loglik, at);

  fit.standard_errors.assign(k, std::numeric_limits<double>::quiet_NaN());
  fit.t_statistics.assign(k, std::numeric_limits<double>::quiet_NaN());
  if (cov.rows() == k + 2) {
    if (cov(0, 0) > 0.0) {
      fit.spatial_se = std::sqrt(cov(0, 0));
      fit.spatial_t = lambda / fit.spatial_se;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (cov(1 + j, 1 + j) > 0.0) {
        fit.standard_errors[j] = std::sqrt(cov(1 + j, 1 + j));
        fit.t_statistics[j] = fit.coefficients[j] / fit.standard_errors[j];
      }
    }
  }
  return fit;
}

/// Pooled Anselin LM diagnostics (lag, error, and robust variants) on the
/// within-transformed OLS residuals, each against chi-square(1).
inline LmDiagnostics lm_tests(const SpatialFit& ols, const DesignMatrices& d,
                              const SpatialWeights& w) {
  detail::check_spatial_inputs(d, w);
  if (ols.kind != ModelKind::OlsFixedEffects || ols.residuals.size() != d.rows())
    throw Error(ErrorKind::InvalidArgument, "lm_tests needs the OLS-FE fit of the same design");

  const std::size_t nt = d.rows();
  const std::size_t nc = d.cities.size();
  const double t_periods = static_cast<double>(d.years.size());
  const auto& e = ols.residuals;
  const double sigma2 = dot(e, e) / static_cast<double>(nt);

  double trw = 0.0;  // tr(W'W + WW)
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      trw += w.weights(i, j) * (w.weights(i, j) + w.weights(j, i));
  const double tt = t_periods * trw;
  if (tt <= 0.0) throw Error(ErrorKind::EmptyWeights, "weight matrix has no nonzero entries");

  const auto yd = detail::within(d, d.y);
  const auto we = detail::spatial_lag(d, w, e);
  const double d_e = dot(e, we) / sigma2;
  const auto wy = detail::spatial_lag(d, w, yd);
  const double d_y = dot(e, wy) / sigma2;

  const Matrix xd = detail::within_columns(d, d.x);
  std::vector<double> xb(nt, 0.0);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) xb[i] += xd(i, j) * ols.coefficients[j];
  const auto wxb = detail::spatial_lag(d, w, xb);
  const auto proj = least_squares(xd, wxb);
  const double j_term = dot(proj.residuals, proj.residuals) / sigma2 + tt;

  LmDiagnostics lm;
  lm.lm_error = d_e * d_e / tt;
  lm.lm_lag = d_y * d_y / j_term;
  const double gap = std::max(j_term - tt, 1e-300);
  lm.robust_lm_lag = (d_y - d_e) * (d_y - d_e) / gap;
  const double re_num = d_e - (tt / j_term) * d_y;
  lm.robust_lm_error = re_num * re_num / (tt * (1.0 - tt / j_term) + 1e-300);
  lm.lm_lag_p = chi_square_1_sf(lm.lm_lag);
  lm.lm_error_p = chi_square_1_sf(lm.lm_error);
  lm.robust_lm_lag_p = chi_square_1_sf(lm.robust_lm_lag);
  lm.robust_lm_error_p = chi_square_1_sf(lm.robust_lm_error);
  return lm;
}

}  // namespace spateco
