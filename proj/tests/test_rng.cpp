#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "spateco/rng.hpp"

using spateco::Rng;

TEST_CASE("rng is deterministic and substreams are order-independent") {
  Rng a(12345);
  Rng b(12345);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  // substream(k) does not depend on what the parent drew before
  Rng parent1(777);
  (void)parent1.normal();
  (void)parent1.normal();
  Rng parent2(777);
  Rng s1 = parent1.substream(5);
  Rng s2 = parent2.substream(5);
  for (int i = 0; i < 10; ++i) REQUIRE(s1.next_u64() == s2.next_u64());

  // distinct substreams differ
  Rng p(1);
  CHECK(p.substream(0).next_u64() != p.substream(1).next_u64());
}

TEST_CASE("uniform01 stays in [0,1) and normals have the right moments") {
  Rng rng(2024);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(sum / n == Catch::Approx(0.5).margin(0.005));
  CHECK(sum2 / n == Catch::Approx(1.0 / 3.0).margin(0.005));

  double nsum = 0.0, nsum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    nsum += z;
    nsum2 += z * z;
  }
  CHECK(nsum / n == Catch::Approx(0.0).margin(0.01));
  CHECK(nsum2 / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("permutation is a bijection and covers all orders") {
  Rng rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = rng.permutation(17);
    std::vector<bool> seen(17, false);
    for (std::size_t v : p) {
      REQUIRE(v < 17);
      REQUIRE(!seen[v]);
      seen[v] = true;
    }
  }
  // all 6 orders of n=3 appear over many draws
  std::set<std::vector<std::size_t>> orders;
  for (int rep = 0; rep < 500; ++rep) orders.insert(rng.permutation(3));
  CHECK(orders.size() == 6);
}
