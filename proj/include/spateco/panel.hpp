#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "spateco/csv.hpp"
#include "spateco/error.hpp"
#include "spateco/matrix.hpp"

namespace spateco {

enum class PanelSchema { Long, Wide };

/// City x year x variable panel with explicit missing markers. Values are
/// immutable in spirit: construction and loading fill the cube, after which
/// the dataset is shared read-only.
class PanelDataset {
 public:
  PanelDataset(std::vector<std::string> cities, std::vector<int> years,
               std::vector<std::string> variables)
      : cities_(std::move(cities)), years_(std::move(years)), variables_(std::move(variables)) {
    validate_axes();
    values_.assign(cities_.size() * years_.size() * variables_.size(), std::nullopt);
    for (std::size_t i = 0; i < cities_.size(); ++i) city_index_[cities_[i]] = i;
    for (std::size_t i = 0; i < years_.size(); ++i) year_index_[years_[i]] = i;
    for (std::size_t i = 0; i < variables_.size(); ++i) var_index_[variables_[i]] = i;
  }

  const std::vector<std::string>& cities() const { return cities_; }
  const std::vector<int>& years() const { return years_; }
  const std::vector<std::string>& variables() const { return variables_; }

  bool has_city(const std::string& c) const { return city_index_.count(c) > 0; }
  bool has_year(int y) const { return year_index_.count(y) > 0; }
  bool has_variable(const std::string& v) const { return var_index_.count(v) > 0; }

  std::size_t city_index(const std::string& c) const {
    auto it = city_index_.find(c);
    if (it == city_index_.end()) throw Error(ErrorKind::UnknownCity, "unknown city " + c);
    return it->second;
  }
  std::size_t year_index(int y) const {
    auto it = year_index_.find(y);
    if (it == year_index_.end())
      throw Error(ErrorKind::MissingYear, "year " + std::to_string(y) + " not on axis");
    return it->second;
  }
  std::size_t variable_index(const std::string& v) const {
    auto it = var_index_.find(v);
    if (it == var_index_.end()) throw Error(ErrorKind::UnknownVariable, "unknown variable " + v);
    return it->second;
  }

  std::optional<double> value(const std::string& city, int year, const std::string& var) const {
    return values_[flat(city_index(city), year_index(year), variable_index(var))];
  }
  std::optional<double> value_at(std::size_t ci, std::size_t yi, std::size_t vi) const {
    return values_[flat(ci, yi, vi)];
  }

  void set(const std::string& city, int year, const std::string& var, std::optional<double> v) {
    values_[flat(city_index(city), year_index(year), variable_index(var))] = v;
  }
  void set_at(std::size_t ci, std::size_t yi, std::size_t vi, std::optional<double> v) {
    values_[flat(ci, yi, vi)] = v;
  }

  bool operator==(const PanelDataset& other) const {
    return cities_ == other.cities_ && years_ == other.years_ &&
           variables_ == other.variables_ && values_ == other.values_;
  }

 private:
  void validate_axes() const {
    std::set<std::string> cs(cities_.begin(), cities_.end());
    if (cs.size() != cities_.size())
      throw Error(ErrorKind::InvalidArgument, "city identifiers are not unique");
    for (std::size_t i = 1; i < years_.size(); ++i)
      if (years_[i] <= years_[i - 1])
        throw Error(ErrorKind::InvalidArgument, "years are not strictly increasing");
    std::set<std::string> vs(variables_.begin(), variables_.end());
    if (vs.size() != variables_.size())
      throw Error(ErrorKind::InvalidArgument, "variable names are not unique");
  }

  std::size_t flat(std::size_t ci, std::size_t yi, std::size_t vi) const {
    return (ci * years_.size() + yi) * variables_.size() + vi;
  }

  std::vector<std::string> cities_;
  std::vector<int> years_;
  std::vector<std::string> variables_;
  std::vector<std::optional<double>> values_;
  std::unordered_map<std::string, std::size_t> city_index_;
  std::unordered_map<int, std::size_t> year_index_;
  std::unordered_map<std::string, std::size_t> var_index_;
};

/// City x sector employment slice for one year.
struct EmploymentTable {
  int year = 0;
  std::vector<std::string> cities;
  std::vector<std::string> sectors;
  Matrix employment;  // cities x sectors, persons

  std::size_t sector_index(const std::string& s) const {
    for (std::size_t j = 0; j < sectors.size(); ++j)
      if (sectors[j] == s) return j;
    throw Error(ErrorKind::UnknownSector, "unknown sector " + s);
  }
};

namespace detail {

inline bool is_missing_cell(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN" || cell == "nan";
}

inline int parse_year(const std::string& cell, std::size_t row) {
  double v = 0.0;
  if (!csv::parse_double(cell, v) || v != static_cast<double>(static_cast<int>(v)))
    throw Error(ErrorKind::NonNumericValue,
                "row " + std::to_string(row) + ": year '" + cell + "' is not an integer");
  return static_cast<int>(v);
}

}  // namespace detail

/// Load a panel CSV. Long schema columns are exactly city,year,variable,value;
/// wide schema is city,year followed by one column per variable. Blank and NA
/// cells become missing markers; duplicate (city,year,variable) observations
/// are an error.
inline PanelDataset load_panel(const std::string& path, PanelSchema schema) {
  const csv::Table t = csv::read_file(path);

  std::vector<std::string> cities;
  std::vector<std::string> variables;
  std::set<int> year_set;
  std::set<std::string> city_seen;

  auto note_city = [&](const std::string& c) {
    if (!city_seen.count(c)) {
      city_seen.insert(c);
      cities.push_back(c);
    }
  };

  if (schema == PanelSchema::Long) {
    const std::vector<std::string> expect = {"city", "year", "variable", "value"};
    if (t.header != expect)
      throw Error(ErrorKind::MalformedHeader,
                  path + ": long schema requires header city,year,variable,value");
    std::set<std::string> var_seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row.size() != 4)
        throw Error(ErrorKind::MalformedHeader,
                    path + ": row " + std::to_string(r + 2) + " has " +
                        std::to_string(row.size()) + " fields, expected 4");
      note_city(row[0]);
      year_set.insert(detail::parse_year(row[1], r + 2));
      if (!var_seen.count(row[2])) {
        var_seen.insert(row[2]);
        variables.push_back(row[2]);
      }
    }
  } else {
    if (t.header.size() < 3 || t.header[0] != "city" || t.header[1] != "year")
      throw Error(ErrorKind::MalformedHeader,
                  path + ": wide schema requires header city,year,<variables...>");
    variables.assign(t.header.begin() + 2, t.header.end());
    std::set<std::string> var_check(variables.begin(), variables.end());
    if (var_check.size() != variables.size())
      throw Error(ErrorKind::MalformedHeader, path + ": duplicate variable column");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row.size() != t.header.size())
        throw Error(ErrorKind::MalformedHeader,
                    path + ": row " + std::to_string(r + 2) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(t.header.size()));
      note_city(row[0]);
      year_set.insert(detail::parse_year(row[1], r + 2));
    }
  }

  std::vector<int> years(year_set.begin(), year_set.end());
  PanelDataset ds(cities, years, variables);

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> filled;
  auto put = [&](const std::string& city, int year, const std::string& var,
                 const std::string& cell, std::size_t row, const std::string& col) {
    const std::size_t ci = ds.city_index(city);
    const std::size_t yi = ds.year_index(year);
    const std::size_t vi = ds.variable_index(var);
    if (!filled.insert({ci, yi, vi}).second)
      throw Error(ErrorKind::DuplicateObservation,
                  path + ": row " + std::to_string(row) + " duplicates (" + city + "," +
                      std::to_string(year) + "," + var + ")");
    if (detail::is_missing_cell(cell)) return;
    double v = 0.0;
    if (!csv::parse_double(cell, v))
      throw Error(ErrorKind::NonNumericValue,
                  path + ": row " + std::to_string(row) + " column " + col + ": '" + cell +
                      "' is not numeric");
    ds.set_at(ci, yi, vi, v);
  };

  if (schema == PanelSchema::Long) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      put(row[0], detail::parse_year(row[1], r + 2), row[2], row[3], r + 2, "value");
    }
  } else {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      const int year = detail::parse_year(row[1], r + 2);
      for (std::size_t j = 2; j < row.size(); ++j)
        put(row[0], year, t.header[j], row[j], r + 2, t.header[j]);
    }
  }
  return ds;
}

/// Write the canonical long-schema CSV (city-major, then year, then variable).
/// Missing values are written as empty cells.
inline void save_panel(const PanelDataset& ds, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(ds.cities().size() * ds.years().size() * ds.variables().size());
  for (std::size_t ci = 0; ci < ds.cities().size(); ++ci)
    for (std::size_t yi = 0; yi < ds.years().size(); ++yi)
      for (std::size_t vi = 0; vi < ds.variables().size(); ++vi) {
        const auto v = ds.value_at(ci, yi, vi);
        rows.push_back({ds.cities()[ci], std::to_string(ds.years()[yi]), ds.variables()[vi],
                        v ? csv::format_double(*v) : std::string{}});
      }
  csv::write_file(path, {"city", "year", "variable", "value"}, rows);
}

/// Fill missing values per (city, variable) series: interior gaps by linear
/// interpolation in year index, leading/trailing gaps by nearest observed
/// value. Observed values are untouched. A series with no observation at all
/// is an error.
inline PanelDataset interpolate_missing(const PanelDataset& ds) {
  PanelDataset out = ds;
  const std::size_t ny = ds.years().size();
  for (std::size_t ci = 0; ci < ds.cities().size(); ++ci) {
    for (std::size_t vi = 0; vi < ds.variables().size(); ++vi) {
      std::vector<std::size_t> obs;
      for (std::size_t yi = 0; yi < ny; ++yi)
        if (ds.value_at(ci, yi, vi)) obs.push_back(yi);
      if (obs.empty())
        throw Error(ErrorKind::AllMissingSeries,
                    "(" + ds.cities()[ci] + ", " + ds.variables()[vi] + ") has no observations");
      if (obs.size() == ny) continue;

      for (std::size_t yi = 0; yi < ny; ++yi) {
        if (ds.value_at(ci, yi, vi)) continue;
        auto next = std::lower_bound(obs.begin(), obs.end(), yi);
        double filled = 0.0;
        if (next == obs.begin()) {
          filled = *ds.value_at(ci, obs.front(), vi);
        } else if (next == obs.end()) {
          filled = *ds.value_at(ci, obs.back(), vi);
        } else {
          const std::size_t hi = *next;
          const std::size_t lo = *(next - 1);
          const double vlo = *ds.value_at(ci, lo, vi);
          const double vhi = *ds.value_at(ci, hi, vi);
          const double t = static_cast<double>(yi - lo) / static_cast<double>(hi - lo);
          filled = vlo + t * (vhi - vlo);
        }
        out.set_at(ci, yi, vi, filled);
      }
    }
  }
  return out;
}

/// Slice one year's employment by the declared sector variables.
/// Requires all cells present (run interpolate_missing first if needed).
inline EmploymentTable extract_employment(const PanelDataset& ds, int year,
                                          const std::vector<std::string>& sectors) {
  if (!ds.has_year(year))
    throw Error(ErrorKind::MissingYear, "year " + std::to_string(year) + " not in panel");
  for (const auto& s : sectors)
    if (!ds.has_variable(s))
      throw Error(ErrorKind::UnknownSector, "sector variable " + s + " not in panel");

  EmploymentTable t;
  t.year = year;
  t.cities = ds.cities();
  t.sectors = sectors;
  t.employment = Matrix(t.cities.size(), sectors.size());
  const std::size_t yi = ds.year_index(year);
  for (std::size_t ci = 0; ci < t.cities.size(); ++ci) {
    for (std::size_t j = 0; j < sectors.size(); ++j) {
      const auto v = ds.value_at(ci, yi, ds.variable_index(sectors[j]));
      if (!v)
        throw Error(ErrorKind::MissingValues,
                    "(" + t.cities[ci] + ", " + std::to_string(year) + ", " + sectors[j] +
                        ") is missing");
      if (*v < 0.0)
        throw Error(ErrorKind::InvalidArgument,
                    "negative employment at (" + t.cities[ci] + ", " + sectors[j] + ")");
      t.employment(ci, j) = *v;
    }
  }
  return t;
}

}  // namespace spateco
