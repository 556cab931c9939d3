#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/numerics.hpp"
#include "spateco/panel.hpp"

namespace spateco {

enum class Orientation { Positive, Negative };
enum class Dimension { LandUseIntensity, EconomicBenefit, EcologicalBenefit };

struct IndicatorSpec {
  std::string name;          // panel variable
  Orientation orientation = Orientation::Positive;
  Dimension dimension = Dimension::LandUseIntensity;
};

/// Indicator panel rescaled to [0, 1], min/max pooled over all cities and
/// years jointly so that scores stay comparable across periods.
struct NormalizedPanel {
  std::vector<std::string> cities;
  std::vector<int> years;
  std::vector<IndicatorSpec> indicators;
  std::vector<double> values;  // (city, year, indicator), row-major

  double at(std::size_t ci, std::size_t yi, std::size_t j) const {
    return values[(ci * years.size() + yi) * indicators.size() + j];
  }
  double& at(std::size_t ci, std::size_t yi, std::size_t j) {
    return values[(ci * years.size() + yi) * indicators.size() + j];
  }
};

enum class WeightMode { UnitNorm, SumOne };

/// Nonnegative indicator weights. `lambda_max` is set by the scatter-degree
/// construction and absent for entropy weights.
struct WeightVector {
  std::vector<double> weights;
  WeightMode mode = WeightMode::UnitNorm;
  std::optional<double> lambda_max;

  WeightVector rescaled(WeightMode target) const {
    if (target == mode) return *this;
    WeightVector out = *this;
    out.mode = target;
    double denom = 0.0;
    if (target == WeightMode::SumOne) {
      for (double w : weights) denom += w;
    } else {
      for (double w : weights) denom += w * w;
      denom = std::sqrt(denom);
    }
    if (denom <= 0.0)
      throw Error(ErrorKind::DegenerateSpectrum, "weight vector cannot be rescaled from zero");
    for (double& w : out.weights) w /= denom;
    return out;
  }
};

/// City x year intensity scores.
struct IntensityScores {
  std::vector<std::string> cities;
  std::vector<int> years;
  std::vector<double> values;  // (city, year), row-major

  double at(std::size_t ci, std::size_t yi) const { return values[ci * years.size() + yi]; }
  double& at(std::size_t ci, std::size_t yi) { return values[ci * years.size() + yi]; }
};

enum class Stability { Stable, Fluctuating, Jumping };
enum class IntensityBand { High, Moderate, Low };

struct DynamicClass {
  std::string city;
  Stability stability = Stability::Stable;
  IntensityBand intensity = IntensityBand::Low;
  int max_sequence_difference = 0;
  double mean_rank = 0.0;
};

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Fluctuating: return "fluctuating";
    case Stability::Jumping: return "jumping";
  }
  return "?";
}
inline const char* to_string(IntensityBand b) {
  switch (b) {
    case IntensityBand::High: return "high";
    case IntensityBand::Moderate: return "moderate";
    case IntensityBand::Low: return "low";
  }
  return "?";
}
inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::LandUseIntensity: return "land-use-intensity";
    case Dimension::EconomicBenefit: return "economic-benefit";
    case Dimension::EcologicalBenefit: return "ecological-benefit";
  }
  return "?";
}

/// Min-max normalization of the indicator variables, pooled over the whole
/// panel. Positive indicators map max to 1; negative indicators are reversed.
inline NormalizedPanel normalize(const PanelDataset& ds, const std::vector<IndicatorSpec>& specs) {
  NormalizedPanel np;
  np.cities = ds.cities();
  np.years = ds.years();
  np.indicators = specs;
  np.values.assign(np.cities.size() * np.years.size() * specs.size(), 0.0);

  for (std::size_t j = 0; j < specs.size(); ++j) {
    const std::size_t vi = ds.variable_index(specs[j].name);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < np.cities.size(); ++ci)
      for (std::size_t yi = 0; yi < np.years.size(); ++yi) {
        const auto v = ds.value_at(ci, yi, vi);
        if (!v)
          throw Error(ErrorKind::MissingValues,
                      "indicator " + specs[j].name + " is missing at (" + np.cities[ci] + ", " +
                          std::to_string(np.years[yi]) + ")");
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    if (hi <= lo)
      throw Error(ErrorKind::ConstantIndicator,
                  "indicator " + specs[j].name + " is constant over the panel");
    const double span = hi - lo;
    for (std::size_t ci = 0; ci < np.cities.size(); ++ci)
      for (std::size_t yi = 0; yi < np.years.size(); ++yi) {
        const double v = *ds.value_at(ci, yi, vi);
        np.at(ci, yi, j) = (specs[j].orientation == Orientation::Positive) ? (v - lo) / span
                                                                           : (hi - v) / span;
      }
  }
  return np;
}

/// Scatter-degree ("vertical and horizontal") weights: with A_k the
/// city x indicator matrix of period k, form H = sum_k A_k' A_k and take the
/// unit-norm eigenvector of the largest eigenvalue. H is entrywise
/// nonnegative, so the dominant eigenvector can be taken nonnegative; rounding
/// residue within 1e-10 of zero is clamped.
inline WeightVector vh_weights(const NormalizedPanel& np) {
  const std::size_t m = np.indicators.size();
  const std::size_t n = np.cities.size();
  const std::size_t periods = np.years.size();
  if (m == 0 || n < 2 || periods < 1)
    throw Error(ErrorKind::InvalidArgument,
                "scatter-degree weights need >=2 cities, >=1 period, >=1 indicator");

  Matrix h(m, m);
  for (std::size_t yi = 0; yi < periods; ++yi)
    for (std::size_t ci = 0; ci < n; ++ci)
      for (std::size_t a = 0; a < m; ++a) {
        const double va = np.at(ci, yi, a);
        for (std::size_t b = 0; b < m; ++b) h(a, b) += va * np.at(ci, yi, b);
      }

  double norm = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) norm += std::abs(h(a, b));
  if (norm == 0.0)
    throw Error(ErrorKind::DegenerateSpectrum, "cross-product matrix is identically zero");

  const EigResult eig = eig_sym(SymMatrix(h));
  const std::size_t top = m - 1;

  WeightVector w;
  w.mode = WeightMode::UnitNorm;
  w.lambda_max = eig.values[top];
  w.weights.resize(m);
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    w.weights[j] = eig.vectors(j, top);
    sum += w.weights[j];
  }
  if (sum < 0.0)
    for (double& x : w.weights) x = -x;

  constexpr double kClampEps = 1e-10;
  double norm2 = 0.0;
  for (double& x : w.weights) {
    if (std::abs(x) < kClampEps) x = 0.0;
    norm2 += x * x;
  }
  norm2 = std::sqrt(norm2);
  for (double& x : w.weights) x /= norm2;
  return w;
}

/// Entropy weights over the pooled city-year observations: indicators with
/// higher information entropy (flatter distribution) get lower weight.
inline WeightVector entropy_weights(const NormalizedPanel& np) {
  const std::size_t m = np.indicators.size();
  const std::size_t n = np.cities.size() * np.years.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "no indicators");
  if (n < 2)
    throw Error(ErrorKind::SingleObservation, "entropy weights need at least two observations");

  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> d(m, 0.0);
  double d_total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double colsum = 0.0;
    for (std::size_t ci = 0; ci < np.cities.size(); ++ci)
      for (std::size_t yi = 0; yi < np.years.size(); ++yi) colsum += np.at(ci, yi, j);
    if (colsum <= 0.0)
      throw Error(ErrorKind::AllZeroIndicator,
                  "indicator " + np.indicators[j].name + " is zero everywhere");
    double entropy = 0.0;
    for (std::size_t ci = 0; ci < np.cities.size(); ++ci)
      for (std::size_t yi = 0; yi < np.years.size(); ++yi) {
        const double p = np.at(ci, yi, j) / colsum;
        if (p > 0.0) entropy -= p * std::log(p);
      }
    entropy /= log_n;
    d[j] = std::max(0.0, 1.0 - entropy);  // guard rounding at e_j == 1
    d_total += d[j];
  }
  if (d_total <= 0.0)
    throw Error(ErrorKind::DegenerateSpectrum, "all indicators carry maximum entropy");

  WeightVector w;
  w.mode = WeightMode::SumOne;
  w.weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) w.weights[j] = d[j] / d_total;
  return w;
}

/// Scores are plain inner products of the weights with the normalized rows.
inline IntensityScores score(const NormalizedPanel& np, const WeightVector& w) {
  if (w.weights.size() != np.indicators.size())
    throw Error(ErrorKind::DimensionMismatch,
                "weight length " + std::to_string(w.weights.size()) + " != indicator count " +
                    std::to_string(np.indicators.size()));
  IntensityScores s;
  s.cities = np.cities;
  s.years = np.years;
  s.values.assign(np.cities.size() * np.years.size(), 0.0);
  for (std::size_t ci = 0; ci < np.cities.size(); ++ci)
    for (std::size_t yi = 0; yi < np.years.size(); ++yi) {
      double acc = 0.0;
      for (std::size_t j = 0; j < w.weights.size(); ++j)
        acc += w.weights[j] * np.at(ci, yi, j);
      s.at(ci, yi) = acc;
    }
  return s;
}

/// Per-year descending-score ranks (rank 1 = most intensive, ties broken by
/// city identifier). Used by dynamic_classify and exposed for reporting.
inline std::vector<std::vector<int>> score_ranks(const IntensityScores& s) {
  const std::size_t n = s.cities.size();
  std::vector<std::vector<int>> ranks(s.years.size(), std::vector<int>(n, 0));
  for (std::size_t yi = 0; yi < s.years.size(); ++yi) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (s.at(a, yi) != s.at(b, yi)) return s.at(a, yi) > s.at(b, yi);
      return s.cities[a] < s.cities[b];
    });
    for (std::size_t pos = 0; pos < n; ++pos) ranks[yi][order[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

/// Dynamic classification: stability from the spread of a city's yearly rank
/// (0-5 stable, 6-10 fluctuating, >10 jumping), intensity from its mean rank
/// (<=10 high, <=20 moderate, else low).
inline std::vector<DynamicClass> dynamic_classify(const IntensityScores& s) {
  if (s.cities.size() < 2 || s.years.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "dynamic classification needs >=2 cities and >=2 years");
  const auto ranks = score_ranks(s);

  std::vector<DynamicClass> out(s.cities.size());
  for (std::size_t ci = 0; ci < s.cities.size(); ++ci) {
    int rmin = std::numeric_limits<int>::max();
    int rmax = std::numeric_limits<int>::min();
    double rsum = 0.0;
    for (std::size_t yi = 0; yi < s.years.size(); ++yi) {
      const int r = ranks[yi][ci];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      rsum += r;
    }
    DynamicClass& c = out[ci];
    c.city = s.cities[ci];
    c.max_sequence_difference = rmax - rmin;
    c.mean_rank = rsum / static_cast<double>(s.years.size());
    c.stability = (c.max_sequence_difference <= 5)    ? Stability::Stable
                  : (c.max_sequence_difference <= 10) ? Stability::Fluctuating
                                                      : Stability::Jumping;
    c.intensity = (c.mean_rank <= 10.0)   ? IntensityBand::High
                  : (c.mean_rank <= 20.0) ? IntensityBand::Moderate
                                          : IntensityBand::Low;
  }
  return out;
}

}  // namespace spateco
