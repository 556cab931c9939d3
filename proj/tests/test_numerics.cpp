#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spateco/numerics.hpp"
#include "test_support.hpp"

using namespace spateco;
using test_support::KindIs;

namespace {

double frobenius(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

// Cofactor-expansion determinant, independent of the library's linear algebra.
double det_cofactor(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    det += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * det_cofactor(minor);
  }
  return det;
}

}  // namespace

TEST_CASE("eig_sym handles diagonal cases") {
  SECTION("identity") {
    const auto res = eig_sym(SymMatrix(Matrix::identity(3)));
    for (double v : res.values) CHECK(v == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("diag(3,1,2) sorts ascending") {
    Matrix m(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    const auto res = eig_sym(SymMatrix(m));
    CHECK(res.values[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(res.values[1] == Catch::Approx(2.0).margin(1e-12));
    CHECK(res.values[2] == Catch::Approx(3.0).margin(1e-12));
    // eigenvector of the top value is the first axis
    CHECK(std::abs(res.vectors(0, 2)) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("eig_sym reconstruction, orthonormality and Eigen agreement") {
  std::mt19937 rng(7101);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix a = test_support::random_symmetric(rng, n, 2.0);
      const auto res = eig_sym(SymMatrix(a));
      const double norm = frobenius(a);

      // A v_k = lambda_k v_k
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = res.vectors(i, k);
        const auto av = matvec(a, v);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = av[i] - res.values[k] * v[i];
          resid += d * d;
        }
        CHECK(std::sqrt(resid) <= 1e-9 * std::max(norm, 1.0));
      }

      // V'V = I
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d += res.vectors(i, k) * res.vectors(i, l);
          CHECK(std::abs(d - (k == l ? 1.0 : 0.0)) <= 1e-9);
        }

      // eigenvalues match the independent solver
      const auto [oracle_vals, oracle_vecs] = test_support::eigen_eig_sym(a);
      for (std::size_t k = 0; k < n; ++k)
        CHECK(res.values[k] == Catch::Approx(oracle_vals[k]).margin(1e-9 * std::max(norm, 1.0)));

      // trace identity
      double trace = 0.0, sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trace += a(i, i);
        sum += res.values[i];
      }
      CHECK(sum == Catch::Approx(trace).margin(1e-9 * std::max(norm, 1.0)));

      if (n <= 4) {
        double prod = 1.0;
        for (double v : res.values) prod *= v;
        CHECK(prod == Catch::Approx(det_cofactor(a)).margin(1e-9 * std::pow(std::max(norm, 1.0), n)));
      }
    }
  }
}

TEST_CASE("SymMatrix rejects asymmetric input") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0 + 1e-6;
  REQUIRE_THROWS_MATCHES(SymMatrix(m), Error, KindIs(ErrorKind::AsymmetricInput));
}

TEST_CASE("least_squares exact cases") {
  SECTION("identity design returns y") {
    const auto res = least_squares(Matrix::identity(3), {1.0, -2.0, 5.0});
    CHECK(res.coefficients[0] == Catch::Approx(1.0));
    CHECK(res.coefficients[1] == Catch::Approx(-2.0));
    CHECK(res.coefficients[2] == Catch::Approx(5.0));
    CHECK(res.rss == Catch::Approx(0.0).margin(1e-24));
  }
  SECTION("exactly determined 2x2 has zero residuals") {
    Matrix x(2, 2);
    x(0, 0) = 2.0;
    x(0, 1) = 1.0;
    x(1, 0) = -1.0;
    x(1, 1) = 3.0;
    const auto res = least_squares(x, {4.0, 5.0});
    CHECK(std::abs(res.residuals[0]) <= 1e-12);
    CHECK(std::abs(res.residuals[1]) <= 1e-12);
  }
}

TEST_CASE("least_squares noiseless recovery and residual orthogonality") {
  std::mt19937 rng(4242);
  std::normal_distribution<double> dist(0.0, 1.0);
  const std::size_t m = 100, k = 4;
  Matrix x(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = dist(rng);
  const std::vector<double> beta = {1.5, -0.25, 3.0, 0.0625};
  std::vector<double> y(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) y[i] += x(i, j) * beta[j];

  const auto res = least_squares(x, y);
  for (std::size_t j = 0; j < k; ++j)
    CHECK(res.coefficients[j] == Catch::Approx(beta[j]).margin(1e-10));

  // add noise: residuals orthogonal to the column space
  for (double& v : y) v += dist(rng);
  const auto noisy = least_squares(x, y);
  double xnorm = frobenius(x);
  double ynorm = 0.0;
  for (double v : y) ynorm += v * v;
  ynorm = std::sqrt(ynorm);
  for (std::size_t j = 0; j < k; ++j) {
    double xr = 0.0;
    for (std::size_t i = 0; i < m; ++i) xr += x(i, j) * noisy.residuals[i];
    CHECK(std::abs(xr) <= 1e-8 * xnorm * ynorm);
  }

  // (X'X)^{-1} from R matches the independent inverse
  const Eigen::MatrixXd xe = test_support::to_eigen(x);
  const Eigen::MatrixXd oracle = (xe.transpose() * xe).inverse();
  const Matrix ours = xtx_inverse_from_r(noisy.r);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      CHECK(ours(i, j) == Catch::Approx(oracle(i, j)).margin(1e-10));
}

TEST_CASE("least_squares flags rank deficiency with the offending column") {
  Matrix x(5, 3);
  std::mt19937 rng(99);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = dist(rng);
    x(i, 1) = 2.0 * x(i, 0);  // exact collinearity
    x(i, 2) = dist(rng);
  }
  try {
    least_squares(x, {1, 2, 3, 4, 5});
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
    CHECK(e.index() == 1);
  }
}

TEST_CASE("maximize_1d") {
  SECTION("quadratic peak") {
    const double x = maximize_1d([](double v) { return -(v - 0.3) * (v - 0.3); }, -1.0, 1.0, 41,
                                 1e-10);
    CHECK(x == Catch::Approx(0.3).margin(1e-8));
  }
  SECTION("constant function returns a point with the constant value") {
    const double x = maximize_1d([](double) { return 2.5; }, 0.0, 1.0, 11, 1e-10);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  SECTION("bimodal objective finds the global peak") {
    auto f = [](double v) {
      return std::exp(-20.0 * (v - 0.7) * (v - 0.7)) + 0.8 * std::exp(-20.0 * (v + 0.5) * (v + 0.5));
    };
    const double x = maximize_1d(f, -1.0, 1.0, 51, 1e-10);
    CHECK(x == Catch::Approx(0.7).margin(1e-4));
    // argmax invariant to positive rescaling
    const double x2 = maximize_1d([&](double v) { return 3.0 * f(v); }, -1.0, 1.0, 51, 1e-10);
    CHECK(x2 == Catch::Approx(x).margin(1e-8));
  }
  SECTION("returned point beats every grid point") {
    auto f = [](double v) { return std::sin(5.0 * v) + 0.3 * v; };
    const double x = maximize_1d(f, -2.0, 2.0, 101, 1e-9);
    for (int i = 0; i < 101; ++i) {
      const double g = -2.0 + 4.0 * i / 100.0;
      CHECK(f(x) >= f(g) - 1e-12);
    }
  }
  SECTION("non-finite evaluation is an error") {
    REQUIRE_THROWS_MATCHES(
        maximize_1d([](double v) { return std::log(v); }, -1.0, 1.0, 11, 1e-8), Error,
        KindIs(ErrorKind::NonFiniteEvaluation));
  }
}

TEST_CASE("numerical_hessian matches an analytic quadratic") {
  // f(x) = -x'Ax/2 with known symmetric A: Hessian is -A.
  Matrix a(3, 3);
  const double vals[3][3] = {{4.0, 1.0, -0.5}, {1.0, 3.0, 0.25}, {-0.5, 0.25, 5.0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = vals[i][j];
  auto f = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) s += x[i] * a(i, j) * x[j];
    return -0.5 * s;
  };
  const Matrix h = numerical_hessian(f, {0.3, -0.2, 0.9}, 1e-5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(h(i, j) == Catch::Approx(-a(i, j)).margin(1e-5));
}

TEST_CASE("solve_linear and invert agree with the independent solver") {
  std::mt19937 rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 2 + rep % 6;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
    std::vector<double> b(n);
    for (double& v : b) v = dist(rng);

    const Eigen::MatrixXd ae = test_support::to_eigen(a);
    const Eigen::VectorXd be = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
    const Eigen::VectorXd xe = ae.fullPivLu().solve(be);
    const auto x = solve_linear(a, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == Catch::Approx(xe(i)).margin(1e-9));

    const Eigen::MatrixXd inv_oracle = ae.inverse();
    const Matrix inv = invert(a);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(inv(i, j) == Catch::Approx(inv_oracle(i, j)).margin(1e-8));
  }
}

TEST_CASE("distribution helpers") {
  CHECK(chi_square_1_sf(3.841458820694124) == Catch::Approx(0.05).margin(1e-6));
  CHECK(chi_square_1_sf(0.0) == 1.0);
  CHECK(normal_two_sided_p(1.959963984540054) == Catch::Approx(0.05).margin(1e-9));
}
