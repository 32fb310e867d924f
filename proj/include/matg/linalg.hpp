#pragma once

// Small dense linear algebra for 2x2 and 3x3 real matrices.
//
// Storage is always a 3x3 row-major block; `n` selects the active leading
// block. Everything here is value-typed and allocation free.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string>

#include "matg/error.hpp"

namespace matg {

/// Relative Frobenius tolerance used for payload equality everywhere.
inline constexpr double kPayloadTol = 1e-9;

struct Vec {
  int n = 3;
  std::array<double, 3> v{};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  static Vec zero(int n) { return Vec{n, {}}; }
  static Vec unit(int n, int i) {
    Vec e{n, {}};
    e[i] = 1.0;
    return e;
  }
  static Vec of(std::initializer_list<double> xs) {
    Vec r{static_cast<int>(xs.size()), {}};
    int i = 0;
    for (double x : xs) r[i++] = x;
    return r;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
  return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(Vec a, const Vec& b) {
  for (int i = 0; i < a.n; ++i) a[i] += b[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  for (int i = 0; i < a.n; ++i) a[i] -= b[i];
  return a;
}
inline Vec operator*(double s, Vec a) {
  for (int i = 0; i < a.n; ++i) a[i] *= s;
  return a;
}
inline Vec operator-(const Vec& a) { return -1.0 * a; }
inline Vec cross(const Vec& a, const Vec& b) {
  return Vec{3, {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}
inline Vec normalized(const Vec& a) {
  const double l = norm(a);
  return l > 0 ? (1.0 / l) * a : a;
}

struct Matrix {
  int n = 3;
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }

  static Matrix zero(int n) { return Matrix{n, {}}; }
  static Matrix identity(int n) {
    Matrix m{n, {}};
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diag(const Vec& d) {
    Matrix m{d.n, {}};
    for (int i = 0; i < d.n; ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix diag(std::initializer_list<double> d) { return diag(Vec::of(d)); }
  /// Row-major construction; the list length must be 4 or 9.
  static Matrix rows(std::initializer_list<double> xs) {
    const int n = xs.size() == 4 ? 2 : 3;
    Matrix m{n, {}};
    int k = 0;
    for (double x : xs) {
      m(k / n, k % n) = x;
      ++k;
    }
    return m;
  }
  static Matrix from_columns(const Vec& c0, const Vec& c1) {
    Matrix m{2, {}};
    for (int i = 0; i < 2; ++i) {
      m(i, 0) = c0[i];
      m(i, 1) = c1[i];
    }
    return m;
  }
  static Matrix from_columns(const Vec& c0, const Vec& c1, const Vec& c2) {
    Matrix m{3, {}};
    for (int i = 0; i < 3; ++i) {
      m(i, 0) = c0[i];
      m(i, 1) = c1[i];
      m(i, 2) = c2[i];
    }
    return m;
  }

  Vec col(int j) const {
    Vec c{n, {}};
    for (int i = 0; i < n; ++i) c[i] = (*this)(i, j);
    return c;
  }
  Vec row(int i) const {
    Vec r{n, {}};
    for (int j = 0; j < n; ++j) r[j] = (*this)(i, j);
    return r;
  }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.n != y.n) throw Error(ErrorCode::DimensionMismatch, "matrix product of mixed dimensions");
  Matrix r = Matrix::zero(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double xik = x(i, k);
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}
inline Vec operator*(const Matrix& m, const Vec& v) {
  Vec r{m.n, {}};
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[i] += m(i, j) * v[j];
  return r;
}
inline Matrix operator+(Matrix x, const Matrix& y) {
  for (std::size_t k = 0; k < 9; ++k) x.a[k] += y.a[k];
  return x;
}
inline Matrix operator-(Matrix x, const Matrix& y) {
  for (std::size_t k = 0; k < 9; ++k) x.a[k] -= y.a[k];
  return x;
}
inline Matrix operator*(double s, Matrix x) {
  for (double& e : x.a) e *= s;
  return x;
}

inline Matrix transpose(const Matrix& m) {
  Matrix t{m.n, {}};
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) t(i, j) = m(j, i);
  return t;
}

inline double trace(const Matrix& m) {
  double s = 0;
  for (int i = 0; i < m.n; ++i) s += m(i, i);
  return s;
}

inline double det(const Matrix& m) {
  if (m.n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline double frobenius(const Matrix& m) {
  double s = 0;
  for (double e : m.a) s += e * e;
  return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
  double s = 0;
  for (double e : m.a) s = std::max(s, std::abs(e));
  return s;
}

/// Payload equality: ||x - y||_F <= tol * max(1, ||y||_F).
inline bool approx_equal(const Matrix& x, const Matrix& y, double tol = kPayloadTol) {
  if (x.n != y.n) return false;
  return frobenius(x - y) <= tol * std::max(1.0, frobenius(y));
}

inline Matrix inverse(const Matrix& m) {
  const double d = det(m);
  const double scale = std::pow(std::max(frobenius(m), 1e-300), m.n);
  if (!std::isfinite(d) || std::abs(d) <= 1e-12 * std::max(1.0, scale))
    throw Error(ErrorCode::SingularMatrix, "matrix is not invertible (|det| too small)");
  Matrix r{m.n, {}};
  if (m.n == 2) {
    r(0, 0) = m(1, 1) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    r(1, 1) = m(0, 0) / d;
    return r;
  }
  r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
  r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
  r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
  r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
  r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
  r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
  r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
  r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
  r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
  return r;
}

inline bool is_invertible(const Matrix& m) {
  const double scale = std::pow(std::max(frobenius(m), 1e-300), m.n);
  return std::abs(det(m)) > 1e-12 * std::max(1.0, scale);
}

/// ||m^T m - I||_F, the distance used by every orthogonality test.
inline double orthogonality_defect(const Matrix& m) {
  return frobenius(transpose(m) * m - Matrix::identity(m.n));
}

inline bool is_orthogonal(const Matrix& m, double tol = kPayloadTol) {
  return orthogonality_defect(m) < tol;
}

inline Matrix rotation2(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Matrix::rows({c, -s, s, c});
}

/// Right-handed rotation by `angle` about `axis` (Rodrigues).
inline Matrix rotation3(const Vec& axis, double angle) {
  const Vec k = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1 - c;
  return Matrix::rows({t * k[0] * k[0] + c, t * k[0] * k[1] - s * k[2], t * k[0] * k[2] + s * k[1],
                       t * k[0] * k[1] + s * k[2], t * k[1] * k[1] + c, t * k[1] * k[2] - s * k[0],
                       t * k[0] * k[2] - s * k[1], t * k[1] * k[2] + s * k[0], t * k[2] * k[2] + c});
}

inline Matrix outer(const Vec& a, const Vec& b) {
  Matrix m{a.n, {}};
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m(i, j) = a[i] * b[j];
  return m;
}

/// Any unit vector orthogonal to the unit vector `a` (3D).
inline Vec any_perpendicular(const Vec& a) {
  const Vec trial = std::abs(a[0]) < 0.6 ? Vec::unit(3, 0) : Vec::unit(3, 1);
  return normalized(cross(a, trial));
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver

struct EigSym {
  Vec values;      // ascending
  Matrix vectors;  // column j pairs with values[j]; orthonormal
};

namespace detail {

inline void sort_eig(EigSym& e) {
  const int n = e.values.n;
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.begin() + n, [&](int i, int j) { return e.values[i] < e.values[j]; });
  EigSym s{Vec{n, {}}, Matrix{n, {}}};
  for (int k = 0; k < n; ++k) {
    s.values[k] = e.values[idx[static_cast<std::size_t>(k)]];
    for (int i = 0; i < n; ++i) s.vectors(i, k) = e.vectors(i, idx[static_cast<std::size_t>(k)]);
  }
  e = s;
}

inline EigSym eig2(const Matrix& c) {
  const double a = c(0, 0), b = c(0, 1), d = c(1, 1);
  const double mean = 0.5 * (a + d), half = 0.5 * (a - d);
  const double rad = std::hypot(half, b);
  EigSym e{Vec{2, {mean - rad, mean + rad}}, Matrix::identity(2)};
  if (rad > 0) {
    // angle of the eigenvector belonging to the larger eigenvalue
    const double phi = 0.5 * std::atan2(b, half);
    const Vec big = Vec::of({std::cos(phi), std::sin(phi)});
    const Vec small = Vec::of({-std::sin(phi), std::cos(phi)});
    e.vectors = Matrix::from_columns(small, big);
  }
  return e;
}

// Eigenvector of a well separated eigenvalue: the largest cross product of
// two rows of (C - lambda I) spans its null space.
inline Vec separated_eigenvector(const Matrix& c, double lambda) {
  Matrix m = c - lambda * Matrix::identity(3);
  const Vec r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
  const std::array<Vec, 3> cand{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  std::size_t best = 0;
  double best_norm = -1;
  for (std::size_t i = 0; i < 3; ++i) {
    const double l = dot(cand[i], cand[i]);
    if (l > best_norm) {
      best_norm = l;
      best = i;
    }
  }
  if (best_norm <= 0) return Vec::unit(3, 0);
  return normalized(cand[best]);
}

// Second eigenvector inside the plane orthogonal to `v0`.
inline Vec second_eigenvector(const Matrix& c, const Vec& v0, double lambda) {
  const Vec u = any_perpendicular(v0);
  const Vec w = cross(v0, u);
  const Matrix m = c - lambda * Matrix::identity(3);
  const Vec mu = m * u, mw = m * w;
  const double m00 = dot(u, mu), m01 = dot(u, mw), m11 = dot(w, mw);
  const double a00 = std::abs(m00), a01 = std::abs(m01), a11 = std::abs(m11);
  if (a00 >= a11) {
    const double mx = std::max(a00, a01);
    if (mx <= 0) return u;
    // null vector of the row (m00, m01)
    return normalized(m01 * u - m00 * w);
  }
  const double mx = std::max(a11, a01);
  if (mx <= 0) return u;
  return normalized(m11 * u - m01 * w);
}

}  // namespace detail

/// Closed-form eigen-decomposition of a symmetric positive definite 2x2/3x3
/// matrix: trigonometric root formula, robust eigenvector construction, then a
/// Rayleigh-quotient pass on the eigenvalues.
inline EigSym eig_sym(const Matrix& c) {
  const double scale = std::max(max_abs(c), 1e-300);
  if (frobenius(c - transpose(c)) >= 1e-9 * std::max(1.0, scale))
    throw Error(ErrorCode::NotSymmetric, "eig_sym input is not symmetric");
  // Symmetrize exactly before solving.
  Matrix s = 0.5 * (c + transpose(c));
  EigSym e{Vec{s.n, {}}, Matrix::identity(s.n)};
  if (s.n == 2) {
    e = detail::eig2(s);
  } else {
    const double q = trace(s) / 3.0;
    Matrix b = s - q * Matrix::identity(3);
    const double p = std::sqrt(trace(b * b) / 6.0);
    if (p <= 1e-15 * scale) {
      e.values = Vec::of({q, q, q});
      e.vectors = Matrix::identity(3);
    } else {
      b = (1.0 / p) * b;
      const double half_det = std::clamp(det(b) / 2.0, -1.0, 1.0);
      const double phi = std::acos(half_det) / 3.0;
      const double l_hi = q + 2 * p * std::cos(phi);
      const double l_lo = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
      const double l_mid = 3 * q - l_hi - l_lo;
      Vec v0, v1;
      double l0, l1, l2;
      if (half_det >= 0) {
        l0 = l_hi;
        l1 = l_mid;
        l2 = l_lo;
      } else {
        l0 = l_lo;
        l1 = l_mid;
        l2 = l_hi;
      }
      v0 = detail::separated_eigenvector(s, l0);
      v1 = detail::second_eigenvector(s, v0, l1);
      // re-orthogonalize against v0 before closing the frame
      v1 = normalized(v1 - dot(v1, v0) * v0);
      const Vec v2 = cross(v0, v1);
      e.vectors = Matrix::from_columns(v0, v1, v2);
      e.values = Vec::of({l0, l1, l2});
    }
  }
  // Rayleigh quotients
  for (int k = 0; k < s.n; ++k) {
    const Vec v = e.vectors.col(k);
    e.values[k] = dot(v, s * v);
  }
  detail::sort_eig(e);
  if (e.values[0] <= 0)
    throw Error(ErrorCode::NotPositiveDefinite, "eig_sym input is not positive definite");
  return e;
}

/// f(C) = V f(Lambda) V^T for symmetric positive definite C.
template <class F>
Matrix spectral_map(const EigSym& e, F&& f) {
  const int n = e.values.n;
  Matrix r = Matrix::zero(n);
  for (int k = 0; k < n; ++k) {
    const Vec v = e.vectors.col(k);
    r = r + f(e.values[k]) * outer(v, v);
  }
  return r;
}

struct Polar {
  Matrix rotation;  // orthogonal factor
  Matrix stretch;   // symmetric positive definite factor
};

/// m = R U with U = sqrt(m^T m).
inline Polar polar_right(const Matrix& m) {
  const EigSym e = eig_sym(transpose(m) * m);
  const Matrix u = spectral_map(e, [](double x) { return std::sqrt(x); });
  const Matrix u_inv = spectral_map(e, [](double x) { return 1.0 / std::sqrt(x); });
  return Polar{m * u_inv, u};
}

/// m = S R with S = sqrt(m m^T).
inline Polar polar_left(const Matrix& m) {
  const EigSym e = eig_sym(m * transpose(m));
  const Matrix s = spectral_map(e, [](double x) { return std::sqrt(x); });
  const Matrix s_inv = spectral_map(e, [](double x) { return 1.0 / std::sqrt(x); });
  return Polar{s_inv * m, s};
}

/// True when m is a nonzero scalar multiple of an orthogonal matrix.
inline bool is_conformal(const Matrix& m, double tol = kPayloadTol) {
  const Matrix c = transpose(m) * m;
  const double s = trace(c) / m.n;
  if (s <= 0) return false;
  return frobenius(c - s * Matrix::identity(m.n)) <= tol * s;
}

// ---------------------------------------------------------------------------
// Random sampling helpers (all take an explicit engine for reproducibility)

using Rng = std::mt19937_64;

inline Matrix random_rotation(int n, Rng& rng) {
  if (n == 2) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    return rotation2(u(rng));
  }
  std::normal_distribution<double> g(0.0, 1.0);
  double q[4];
  double l = 0;
  do {
    l = 0;
    for (double& x : q) {
      x = g(rng);
      l += x * x;
    }
  } while (l < 1e-12);
  l = std::sqrt(l);
  const double w = q[0] / l, x = q[1] / l, y = q[2] / l, z = q[3] / l;
  return Matrix::rows({1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                       2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                       2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)});
}

inline Matrix random_gaussian(int n, Rng& rng, double sigma = 1.0) {
  std::normal_distribution<double> g(0.0, sigma);
  Matrix m = Matrix::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

inline Vec random_unit(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v{n, {}};
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
  } while (norm(v) < 1e-9);
  return normalized(v);
}

inline std::string to_string(const Matrix& m) {
  std::string s = "[";
  char buf[48];
  for (int i = 0; i < m.n; ++i) {
    s += i ? "; " : "";
    for (int j = 0; j < m.n; ++j) {
      std::snprintf(buf, sizeof buf, "%s%.6g", j ? " " : "", m(i, j));
      s += buf;
    }
  }
  return s + "]";
}

}  // namespace matg
