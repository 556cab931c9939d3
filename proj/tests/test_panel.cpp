#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spateco/panel.hpp"
#include "test_support.hpp"

using namespace spateco;
using test_support::KindIs;
using test_support::scratch_path;
using test_support::write_text;

TEST_CASE("load_panel long schema") {
  const auto path = scratch_path("long_basic.csv");
  write_text(path,
             "city,year,variable,value\n"
             "A,2003,x,1.5\n"
             "A,2004,x,2.5\n"
             "B,2003,x,3.5\n"
             "B,2004,x,4.5\n");
  const auto ds = load_panel(path.string(), PanelSchema::Long);
  CHECK(ds.cities() == std::vector<std::string>{"A", "B"});
  CHECK(ds.years() == std::vector<int>{2003, 2004});
  CHECK(ds.variables() == std::vector<std::string>{"x"});
  CHECK(*ds.value("A", 2003, "x") == 1.5);
  CHECK(*ds.value("B", 2004, "x") == 4.5);
}

TEST_CASE("blank and NA cells become missing markers") {
  const auto path = scratch_path("long_missing.csv");
  write_text(path,
             "city,year,variable,value\n"
             "A,2003,x,1.0\n"
             "A,2004,x,\n"
             "A,2005,x,NA\n");
  const auto ds = load_panel(path.string(), PanelSchema::Long);
  CHECK(ds.value("A", 2003, "x").has_value());
  CHECK(!ds.value("A", 2004, "x").has_value());
  CHECK(!ds.value("A", 2005, "x").has_value());
}

TEST_CASE("duplicate observations are rejected") {
  const auto path = scratch_path("long_dup.csv");
  write_text(path,
             "city,year,variable,value\n"
             "A,2003,x,1.0\n"
             "A,2003,x,2.0\n");
  REQUIRE_THROWS_MATCHES(load_panel(path.string(), PanelSchema::Long), Error,
                         KindIs(ErrorKind::DuplicateObservation));
}

TEST_CASE("malformed headers and non-numeric values are named") {
  const auto bad_header = scratch_path("bad_header.csv");
  write_text(bad_header, "town,year,variable,value\nA,2003,x,1\n");
  REQUIRE_THROWS_MATCHES(load_panel(bad_header.string(), PanelSchema::Long), Error,
                         KindIs(ErrorKind::MalformedHeader));

  const auto bad_value = scratch_path("bad_value.csv");
  write_text(bad_value, "city,year,variable,value\nA,2003,x,abc\n");
  try {
    load_panel(bad_value.string(), PanelSchema::Long);
    FAIL("expected NonNumericValue");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonNumericValue);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("wide schema loads and mirrors the long content") {
  const auto path = scratch_path("wide.csv");
  write_text(path,
             "city,year,gdp,pop\n"
             "A,2003,10,100\n"
             "A,2004,11,\n"
             "B,2003,20,200\n"
             "B,2004,21,201\n");
  const auto ds = load_panel(path.string(), PanelSchema::Wide);
  CHECK(ds.variables() == std::vector<std::string>{"gdp", "pop"});
  CHECK(*ds.value("B", 2004, "gdp") == 21.0);
  CHECK(!ds.value("A", 2004, "pop").has_value());
}

TEST_CASE("interpolate_missing fills gaps per the declared rules") {
  PanelDataset ds({"A"}, {2003, 2004, 2005}, {"x", "z"});
  ds.set("A", 2003, "x", 1.0);
  ds.set("A", 2005, "x", 3.0);
  ds.set("A", 2004, "z", 5.0);
  ds.set("A", 2005, "z", 7.0);

  const auto filled = interpolate_missing(ds);
  SECTION("interior gap is the linear midpoint") {
    CHECK(*filled.value("A", 2004, "x") == Catch::Approx(2.0));
  }
  SECTION("leading gap carries the nearest observed value") {
    CHECK(*filled.value("A", 2003, "z") == 5.0);
    CHECK(*filled.value("A", 2004, "z") == 5.0);
    CHECK(*filled.value("A", 2005, "z") == 7.0);
  }
  SECTION("observed values are bit-identical") {
    CHECK(*filled.value("A", 2003, "x") == 1.0);
    CHECK(*filled.value("A", 2005, "x") == 3.0);
  }
  SECTION("idempotent") {
    const auto twice = interpolate_missing(filled);
    CHECK(twice == filled);
  }
}

TEST_CASE("fully observed series come back unchanged") {
  PanelDataset ds({"A", "B"}, {1, 2}, {"x"});
  ds.set("A", 1, "x", 0.123456789012345);
  ds.set("A", 2, "x", -5.5);
  ds.set("B", 1, "x", 1e-12);
  ds.set("B", 2, "x", 3.0);
  CHECK(interpolate_missing(ds) == ds);
}

TEST_CASE("all-missing series is an error naming the pair") {
  PanelDataset ds({"A"}, {1, 2}, {"x"});
  try {
    interpolate_missing(ds);
    FAIL("expected AllMissingSeries");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AllMissingSeries);
    CHECK(std::string(e.what()).find("A") != std::string::npos);
    CHECK(std::string(e.what()).find("x") != std::string::npos);
  }
}

TEST_CASE("interpolation preserves monotonicity inside a bracketed gap") {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> years;
    for (int y = 0; y < 12; ++y) years.push_back(2000 + y);
    PanelDataset ds({"A"}, years, {"x"});
    const double lo = dist(rng);
    const double hi = dist(rng);
    ds.set("A", 2000, "x", lo);
    ds.set("A", 2011, "x", hi);
    const auto filled = interpolate_missing(ds);
    for (int y = 2000; y < 2011; ++y) {
      const double a = *filled.value("A", y, "x");
      const double b = *filled.value("A", y + 1, "x");
      if (hi >= lo)
        CHECK(b >= a - 1e-12);
      else
        CHECK(b <= a + 1e-12);
    }
  }
}

TEST_CASE("save/load round-trips panels including missing cells") {
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  std::uniform_int_distribution<int> coin(0, 4);
  for (int rep = 0; rep < 10; ++rep) {
    PanelDataset ds({"A", "B", "C"}, {2001, 2002, 2003}, {"u", "v"});
    for (const auto& c : ds.cities())
      for (int y : ds.years())
        for (const auto& var : ds.variables())
          if (coin(rng) != 0) ds.set(c, y, var, dist(rng));
    const auto path = scratch_path("roundtrip.csv");
    save_panel(ds, path.string());
    const auto back = load_panel(path.string(), PanelSchema::Long);
    REQUIRE(back == ds);
  }
}

TEST_CASE("extract_employment slices and validates") {
  PanelDataset ds({"A", "B"}, {2003}, {"emp_mfg", "emp_fin", "other"});
  ds.set("A", 2003, "emp_mfg", 10.0);
  ds.set("A", 2003, "emp_fin", 5.0);
  ds.set("B", 2003, "emp_mfg", 20.0);
  ds.set("B", 2003, "emp_fin", 2.0);

  const auto t = extract_employment(ds, 2003, {"emp_mfg", "emp_fin"});
  CHECK(t.employment(0, 0) == 10.0);
  CHECK(t.employment(1, 1) == 2.0);
  CHECK(t.sectors == std::vector<std::string>{"emp_mfg", "emp_fin"});

  REQUIRE_THROWS_MATCHES(extract_employment(ds, 2003, {"emp_oil"}), Error,
                         KindIs(ErrorKind::UnknownSector));
  REQUIRE_THROWS_MATCHES(extract_employment(ds, 1999, {"emp_mfg"}), Error,
                         KindIs(ErrorKind::MissingYear));
}
