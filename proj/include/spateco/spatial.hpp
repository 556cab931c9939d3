#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/matrix.hpp"
#include "spateco/numerics.hpp"
#include "spateco/rng.hpp"

namespace spateco {

/// Spatial weights over a city axis. Built from an undirected edge list, so
/// the underlying adjacency is symmetric; rows of a standardized matrix sum
/// to one except for isolated cities, whose rows stay zero.
///
/// The cached spectrum always refers to the row-standardized matrix. It is
/// computed on the similar symmetric form D^{-1/2} A D^{-1/2} (isolated
/// degrees contribute zero), which guarantees real eigenvalues and lets the
/// econometrics module reuse them for log-determinants.
struct SpatialWeights {
  std::vector<std::string> cities;
  Matrix weights;           // n x n, zero diagonal
  bool standardized = false;
  std::vector<double> spectrum;  // eigenvalues of the standardized matrix, ascending

  std::size_t size() const { return cities.size(); }

  std::vector<std::string> isolated_cities() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) {
      double rowsum = 0.0;
      for (std::size_t j = 0; j < size(); ++j) rowsum += weights(i, j);
      if (rowsum == 0.0) out.push_back(cities[i]);
    }
    return out;
  }
};

inline SpatialWeights build_weights(const std::vector<std::pair<std::string, std::string>>& edges,
                                    const std::vector<std::string>& cities, bool standardize) {
  SpatialWeights w;
  w.cities = cities;
  const std::size_t n = cities.size();
  Matrix adj(n, n);

  auto index_of = [&](const std::string& c) {
    for (std::size_t i = 0; i < n; ++i)
      if (cities[i] == c) return i;
    throw Error(ErrorKind::UnknownCity, "edge endpoint " + c + " is not on the city axis");
  };
  for (const auto& [a, b] : edges) {
    if (a == b) throw Error(ErrorKind::SelfLoop, "self-loop at " + a);
    const std::size_t i = index_of(a);
    const std::size_t j = index_of(b);
    adj(i, j) = 1.0;
    adj(j, i) = 1.0;
  }

  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += adj(i, j);

  w.standardized = standardize;
  if (standardize) {
    w.weights = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) w.weights(i, j) = adj(i, j) / degree[i];
    }
  } else {
    w.weights = adj;
  }

  // Spectrum of D^{-1/2} A D^{-1/2}, similar to the row-standardized matrix.
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (degree[j] == 0.0) continue;
      sym(i, j) = adj(i, j) / std::sqrt(degree[i] * degree[j]);
    }
  }
  w.spectrum = eig_sym(SymMatrix(sym)).values;
  return w;
}

struct MoranResult {
  double statistic = 0.0;
  double expectation = 0.0;   // -1/(n-1)
  double variance = 0.0;      // under the normality assumption
  double z_score = 0.0;
  double pseudo_p = 1.0;      // one-tailed permutation p
  std::size_t permutations = 0;
};

enum class Quadrant { HH, LL, HL, LH };

inline const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::HH: return "HH";
    case Quadrant::LL: return "LL";
    case Quadrant::HL: return "HL";
    case Quadrant::LH: return "LH";
  }
  return "?";
}

struct LisaCity {
  std::string city;
  double local_i = 0.0;
  double z_std = 0.0;       // (x_i - mean) / sigma, Moran-scatter x coordinate
  double lag_std = 0.0;     // spatial lag of the standardized value, scatter y
  Quadrant quadrant = Quadrant::HH;
  double pseudo_p = 1.0;
};

struct LisaResult {
  std::vector<LisaCity> cities;
  std::size_t permutations = 0;
};

namespace detail {

inline void check_moran_inputs(const std::vector<double>& x, const SpatialWeights& w) {
  const std::size_t n = w.size();
  if (x.size() != n)
    throw Error(ErrorKind::AxisMismatch, "value vector length does not match the city axis");
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "Moran statistics need n >= 3");
  bool constant = true;
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] != x[0]) {
      constant = false;
      break;
    }
  if (constant) throw Error(ErrorKind::ConstantVector, "input vector is constant");
  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s0 += w.weights(i, j);
  if (s0 <= 0.0) throw Error(ErrorKind::EmptyWeights, "weight matrix has no nonzero entries");
}

inline double moran_statistic(const std::vector<double>& z, const Matrix& w, double s0,
                              double z2sum) {
  const std::size_t n = z.size();
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] == 0.0) continue;
    double lag = 0.0;
    for (std::size_t j = 0; j < n; ++j) lag += w(i, j) * z[j];
    cross += z[i] * lag;
  }
  return (static_cast<double>(n) / s0) * (cross / z2sum);
}

}  // namespace detail

/// Global Moran's I with the analytic moments under the normality assumption
/// and a one-tailed permutation pseudo-p (toward the observed deviation from
/// the expectation). Deterministic given (seed, permutations): replicate r
/// draws from substream r of the seed, independent of evaluation order.
inline MoranResult global_moran(const std::vector<double>& x, const SpatialWeights& w,
                                std::size_t permutations, std::uint64_t seed) {
  detail::check_moran_inputs(x, w);
  const std::size_t n = w.size();

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> z(n);
  double z2sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = x[i] - mean;
    z2sum += z[i] * z[i];
  }

  double s0 = 0.0, s1 = 0.0;
  std::vector<double> rowsum(n, 0.0), colsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double wij = w.weights(i, j);
      s0 += wij;
      const double pair = wij + w.weights(j, i);
      s1 += 0.5 * pair * pair;
      rowsum[i] += wij;
      colsum[j] += wij;
    }
  double s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rowsum[i] + colsum[i];
    s2 += t * t;
  }

  MoranResult res;
  res.permutations = permutations;
  res.statistic = detail::moran_statistic(z, w.weights, s0, z2sum);
  const double nn = static_cast<double>(n);
  res.expectation = -1.0 / (nn - 1.0);
  const double e2 = (nn * nn * s1 - nn * s2 + 3.0 * s0 * s0) / ((nn * nn - 1.0) * s0 * s0);
  res.variance = e2 - res.expectation * res.expectation;
  res.z_score = (res.statistic - res.expectation) / std::sqrt(res.variance);

  const bool upper_tail = res.statistic >= res.expectation;
  std::size_t as_extreme = 0;
  Rng root(seed);
  std::vector<double> zp(n);
  for (std::size_t r = 0; r < permutations; ++r) {
    Rng stream = root.substream(r);
    const auto perm = stream.permutation(n);
    for (std::size_t i = 0; i < n; ++i) zp[i] = z[perm[i]];
    const double ip = detail::moran_statistic(zp, w.weights, s0, z2sum);
    if (upper_tail ? (ip >= res.statistic) : (ip <= res.statistic)) ++as_extreme;
  }
  res.pseudo_p = static_cast<double>(1 + as_extreme) / static_cast<double>(permutations + 1);
  return res;
}

/// Local Moran's I with conditional permutation (city i held fixed, the
/// remaining values permuted over the other locations). Zero deviations and
/// zero lags count as positive for quadrant assignment.
inline LisaResult local_moran(const std::vector<double>& x, const SpatialWeights& w,
                              std::size_t permutations, std::uint64_t seed) {
  detail::check_moran_inputs(x, w);
  const std::size_t n = w.size();

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> z(n);
  double z2sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = x[i] - mean;
    z2sum += z[i] * z[i];
  }
  const double m2 = z2sum / static_cast<double>(n);
  const double sigma = std::sqrt(m2);

  LisaResult res;
  res.permutations = permutations;
  res.cities.resize(n);
  Rng root(seed);

  for (std::size_t i = 0; i < n; ++i) {
    double lag = 0.0;
    double rowsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lag += w.weights(i, j) * z[j];
      rowsum += w.weights(i, j);
    }
    LisaCity& c = res.cities[i];
    c.city = w.cities[i];
    c.local_i = z[i] / m2 * lag;
    c.z_std = z[i] / sigma;
    c.lag_std = lag / sigma;
    const bool zi_pos = z[i] >= 0.0;
    const bool lag_pos = lag >= 0.0;
    c.quadrant = zi_pos ? (lag_pos ? Quadrant::HH : Quadrant::HL)
                        : (lag_pos ? Quadrant::LH : Quadrant::LL);

    // Conditional permutation: expectation of I_i under it is
    // -row_i /(n-1) * z_i^2-ish; the tail direction follows the observed
    // deviation from -rowsum/(n-1) scaled like the statistic itself.
    const double expectation = -(z[i] * z[i] / m2) * rowsum / (static_cast<double>(n) - 1.0);
    const bool upper_tail = c.local_i >= expectation;

    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);

    std::size_t as_extreme = 0;
    Rng stream_i = root.substream(i);
    for (std::size_t r = 0; r < permutations; ++r) {
      Rng stream = stream_i.substream(r);
      const auto perm = stream.permutation(n - 1);
      double lag_p = 0.0;
      std::size_t pos = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        lag_p += w.weights(i, j) * z[others[perm[pos]]];
        ++pos;
      }
      const double ip = z[i] / m2 * lag_p;
      if (upper_tail ? (ip >= c.local_i) : (ip <= c.local_i)) ++as_extreme;
    }
    c.pseudo_p = static_cast<double>(1 + as_extreme) / static_cast<double>(permutations + 1);
  }
  return res;
}

}  // namespace spateco
