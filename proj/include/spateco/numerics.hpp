#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spateco/error.hpp"
#include "spateco/matrix.hpp"

namespace spateco {

/// Symmetric matrix wrapper. Construction validates |a_ij - a_ji| against
/// 1e-12 * max|a| and throws AsymmetricInput on violation.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw Error(ErrorKind::AsymmetricInput, "matrix is not square");
    double maxabs = 0.0;
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j)
        maxabs = std::max(maxabs, std::abs(m_(i, j)));
    const double tol = 1e-12 * maxabs;
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i + 1; j < m_.cols(); ++j)
        if (std::abs(m_(i, j) - m_(j, i)) > tol)
          throw Error(ErrorKind::AsymmetricInput,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") differs from its transpose beyond tolerance");
  }

  std::size_t order() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct EigResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector for values[k]
};

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Matrices in this toolkit are at most a few dozen rows, where Jacobi is
/// accurate and has no failure modes worth trading for a faster method.
/// Eigenvalues are returned ascending with mutually orthonormal vectors.
inline EigResult eig_sym(const SymMatrix& sym) {
  const std::size_t n = sym.order();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);
  if (n == 0) return {{}, v};

  double fro = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  fro = std::sqrt(fro);
  const double stop = 1e-15 * std::max(fro, 1.0);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

struct LeastSquaresResult {
  std::vector<double> coefficients;
  std::vector<double> residuals;
  double rss = 0.0;
  Matrix r;  // upper-triangular factor, kept for (X'X)^{-1} = R^{-1} R^{-T}
};

/// Linear least squares by Householder QR (no pivoting; the designs here are
/// small and either well-conditioned or exactly deficient).
///
/// Throws RankDeficient when a diagonal of R collapses relative to the
/// corresponding column norm; Error::index() names the offending column.
inline LeastSquaresResult least_squares(const Matrix& x, const std::vector<double>& y) {
  const std::size_t m = x.rows();
  const std::size_t k = x.cols();
  if (y.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "least_squares: y length != rows");
  if (m < k)
    throw Error(ErrorKind::RankDeficient, "fewer rows than columns");

  Matrix a = x;
  std::vector<double> b = y;
  std::vector<double> colnorm(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += x(i, j) * x(i, j);
    colnorm[j] = std::sqrt(s);
  }

  for (std::size_t j = 0; j < k; ++j) {
    double sigma = 0.0;
    for (std::size_t i = j; i < m; ++i) sigma += a(i, j) * a(i, j);
    sigma = std::sqrt(sigma);
    if (sigma <= 1e-12 * std::max(colnorm[j], 1e-300) || sigma == 0.0)
      throw Error(ErrorKind::RankDeficient,
                  "column " + std::to_string(j) + " is linearly dependent",
                  static_cast<long>(j));
    if (a(j, j) > 0.0) sigma = -sigma;

    std::vector<double> u(m - j);
    u[0] = a(j, j) - sigma;
    for (std::size_t i = j + 1; i < m; ++i) u[i - j] = a(i, j);
    double unorm2 = 0.0;
    for (double ui : u) unorm2 += ui * ui;
    a(j, j) = sigma;
    for (std::size_t i = j + 1; i < m; ++i) a(i, j) = 0.0;
    if (unorm2 == 0.0) continue;

    for (std::size_t col = j + 1; col < k; ++col) {
      double proj = 0.0;
      for (std::size_t i = j; i < m; ++i) proj += u[i - j] * a(i, col);
      const double f = 2.0 * proj / unorm2;
      for (std::size_t i = j; i < m; ++i) a(i, col) -= f * u[i - j];
    }
    double projb = 0.0;
    for (std::size_t i = j; i < m; ++i) projb += u[i - j] * b[i];
    const double fb = 2.0 * projb / unorm2;
    for (std::size_t i = j; i < m; ++i) b[i] -= fb * u[i - j];
  }

  LeastSquaresResult out;
  out.coefficients.assign(k, 0.0);
  for (std::size_t jj = k; jj-- > 0;) {
    double s = b[jj];
    for (std::size_t col = jj + 1; col < k; ++col) s -= a(jj, col) * out.coefficients[col];
    const double diag = a(jj, jj);
    if (std::abs(diag) <= 1e-12 * std::max(colnorm[jj], 1e-300))
      throw Error(ErrorKind::RankDeficient,
                  "column " + std::to_string(jj) + " is linearly dependent",
                  static_cast<long>(jj));
    out.coefficients[jj] = s / diag;
  }

  out.residuals = y;
  for (std::size_t i = 0; i < m; ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < k; ++j) fit += x(i, j) * out.coefficients[j];
    out.residuals[i] -= fit;
  }
  out.rss = dot(out.residuals, out.residuals);

  out.r = Matrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) out.r(i, j) = a(i, j);
  return out;
}

/// (X'X)^{-1} from the R factor of a QR decomposition.
inline Matrix xtx_inverse_from_r(const Matrix& r) {
  const std::size_t k = r.rows();
  // Back-substitute for R^{-1}, then form R^{-1} R^{-T}.
  Matrix rinv(k, k);
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t i = k; i-- > 0;) {
      double s = (i == col) ? 1.0 : 0.0;
      for (std::size_t j = i + 1; j < k; ++j) s -= r(i, j) * rinv(j, col);
      rinv(i, col) = s / r(i, i);
    }
  }
  Matrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += rinv(i, l) * rinv(j, l);
      out(i, j) = s;
    }
  return out;
}

/// Solve the square system A x = b by Gauss elimination with partial
/// pivoting. Throws RankDeficient when a pivot vanishes.
inline std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "solve_linear: shape mismatch");
  double maxabs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) maxabs = std::max(maxabs, std::abs(a(i, j)));

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) <= 1e-14 * std::max(maxabs, 1e-300))
      throw Error(ErrorKind::RankDeficient, "singular system at pivot " + std::to_string(col),
                  static_cast<long>(col));
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

/// Inverse of a square matrix by Gauss-Jordan with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::DimensionMismatch, "invert: not square");
  Matrix inv = Matrix::identity(n);
  double maxabs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) maxabs = std::max(maxabs, std::abs(a(i, j)));

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) <= 1e-14 * std::max(maxabs, 1e-300))
      throw Error(ErrorKind::RankDeficient, "singular matrix", static_cast<long>(col));
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    const double d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = a(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// One-dimensional maximization: coarse grid scan, then golden-section
/// refinement on the bracketing cell. The returned point is guaranteed to
/// score at least as high as every grid point.
inline double maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                          std::size_t grid, double tol) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "maximize_1d: lo >= hi");
  if (grid < 2) grid = 2;

  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw Error(ErrorKind::NonFiniteEvaluation,
                  "objective is not finite at x = " + std::to_string(x));
    return v;
  };

  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> xs(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
    const double v = eval(xs[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[std::min(best + 1, grid - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = eval(mid);
  // Never return a point worse than the best grid sample.
  return (fmid >= best_val) ? mid : xs[best];
}

/// Central-difference Hessian of f at x. Step per coordinate is
/// rel_step * max(1, |x_i|).
inline Matrix numerical_hessian(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x, double rel_step = 1e-5) {
  const std::size_t n = x.size();
  Matrix h(n, n);
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) step[i] = rel_step * std::max(1.0, std::abs(x[i]));

  const double f0 = f(x);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += step[i];
    xm[i] -= step[i];
    h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (step[i] * step[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += step[i];
      xpp[j] += step[j];
      xpm[i] += step[i];
      xpm[j] -= step[j];
      xmp[i] -= step[i];
      xmp[j] += step[j];
      xmm[i] -= step[i];
      xmm[j] -= step[j];
      const double v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step[i] * step[j]);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

/// Survival function of the chi-square distribution with one degree of
/// freedom: P(X > x) = erfc(sqrt(x/2)).
inline double chi_square_1_sf(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

/// Two-sided standard normal p-value for a t statistic treated as normal.
inline double normal_two_sided_p(double t) {
  return std::erfc(std::abs(t) / std::sqrt(2.0));
}

}  // namespace spateco
