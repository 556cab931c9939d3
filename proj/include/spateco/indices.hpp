#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/panel.hpp"

namespace spateco {

enum class IndexKind { LQ, RDI, COGG };

/// Per-city index values for one year.
struct IndexSeries {
  std::vector<std::string> cities;
  int year = 0;
  std::vector<double> values;
  IndexKind kind = IndexKind::LQ;
};

/// Co-agglomeration formula variant. The default combines the balance of the
/// two location quotients with their combined height; the reduced variants
/// keep one term.
enum class CoggFormula { BalancePlusHeight, BalanceOnly, HeightOnly };

/// Location quotient of `sector`: the city's employment share in the sector
/// relative to the reference table's share. The reference defaults to the
/// table itself (region as universe); pass a wider table to compare against
/// a national benchmark.
inline IndexSeries location_quotient(const EmploymentTable& t, const std::string& sector,
                                     const EmploymentTable* reference = nullptr) {
  const EmploymentTable& ref = reference ? *reference : t;
  const std::size_t s = t.sector_index(sector);
  const std::size_t rs = ref.sector_index(sector);

  double ref_sector_total = 0.0;
  double ref_grand_total = 0.0;
  for (std::size_t i = 0; i < ref.cities.size(); ++i) {
    ref_sector_total += ref.employment(i, rs);
    for (std::size_t j = 0; j < ref.sectors.size(); ++j) ref_grand_total += ref.employment(i, j);
  }
  if (ref_sector_total <= 0.0)
    throw Error(ErrorKind::ZeroSectorTotal, "sector " + sector + " has zero reference total");
  const double ref_share = ref_sector_total / ref_grand_total;

  IndexSeries out;
  out.cities = t.cities;
  out.year = t.year;
  out.kind = IndexKind::LQ;
  out.values.resize(t.cities.size());
  for (std::size_t i = 0; i < t.cities.size(); ++i) {
    double city_total = 0.0;
    for (std::size_t j = 0; j < t.sectors.size(); ++j) city_total += t.employment(i, j);
    if (city_total <= 0.0)
      throw Error(ErrorKind::ZeroCityTotal, "city " + t.cities[i] + " has zero total employment");
    out.values[i] = (t.employment(i, s) / city_total) / ref_share;
  }
  return out;
}

/// Relative diversification index over a sector subset:
/// RDI_i = 1 - sum_j S_ij^2 with S_ij the within-subset employment share.
inline IndexSeries rdi(const EmploymentTable& t, const std::vector<std::string>& sectors) {
  std::vector<std::size_t> idx;
  idx.reserve(sectors.size());
  for (const auto& s : sectors) idx.push_back(t.sector_index(s));

  IndexSeries out;
  out.cities = t.cities;
  out.year = t.year;
  out.kind = IndexKind::RDI;
  out.values.resize(t.cities.size());
  for (std::size_t i = 0; i < t.cities.size(); ++i) {
    double total = 0.0;
    for (std::size_t j : idx) total += t.employment(i, j);
    if (total <= 0.0)
      throw Error(ErrorKind::ZeroSubsetTotal,
                  "city " + t.cities[i] + " has zero employment over the sector subset");
    double herf = 0.0;
    for (std::size_t j : idx) {
      const double share = t.employment(i, j) / total;
      herf += share * share;
    }
    out.values[i] = 1.0 - herf;
  }
  return out;
}

/// Co-agglomeration of two industries from their location-quotient series.
/// Default: [1 - |a-b|/(a+b)] + (a+b).
inline IndexSeries coagglomeration(const IndexSeries& lq_m, const IndexSeries& lq_s,
                                   CoggFormula formula = CoggFormula::BalancePlusHeight) {
  if (lq_m.cities != lq_s.cities)
    throw Error(ErrorKind::AxisMismatch, "location-quotient series have different city axes");
  if (lq_m.year != lq_s.year)
    throw Error(ErrorKind::AxisMismatch, "location-quotient series are for different years");

  IndexSeries out;
  out.cities = lq_m.cities;
  out.year = lq_m.year;
  out.kind = IndexKind::COGG;
  out.values.resize(lq_m.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double a = lq_m.values[i];
    const double b = lq_s.values[i];
    if (a < 0.0 || b < 0.0)
      throw Error(ErrorKind::InvalidArgument, "negative location quotient for " + out.cities[i]);
    const double height = a + b;
    if (height <= 0.0)
      throw Error(ErrorKind::BothZero, "both location quotients are zero for " + out.cities[i]);
    const double balance = 1.0 - std::abs(a - b) / height;
    switch (formula) {
      case CoggFormula::BalancePlusHeight: out.values[i] = balance + height; break;
      case CoggFormula::BalanceOnly: out.values[i] = balance; break;
      case CoggFormula::HeightOnly: out.values[i] = height; break;
    }
  }
  return out;
}

/// Four-tier specialization classification:
/// tier 1: LQ > 2, tier 2: 1.5 < LQ <= 2, tier 3: 1.0 <= LQ <= 1.5,
/// tier 4: LQ < 1. Every finite LQ lands in exactly one tier.
inline std::vector<int> classify_lq_tiers(const IndexSeries& lq) {
  std::vector<int> tiers(lq.values.size());
  for (std::size_t i = 0; i < lq.values.size(); ++i) {
    const double v = lq.values[i];
    if (v > 2.0)
      tiers[i] = 1;
    else if (v > 1.5)
      tiers[i] = 2;
    else if (v >= 1.0)
      tiers[i] = 3;
    else
      tiers[i] = 4;
  }
  return tiers;
}

}  // namespace spateco
