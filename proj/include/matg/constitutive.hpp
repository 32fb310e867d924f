#pragma once

// Hyperelastic stored-energy functions and their first Piola stresses.
//
//   NeoHookean(mu, lambda):       mu/2 (tr C - n) - mu ln J + lambda/2 ln^2 J
//   StVenantKirchhoff(mu, lambda): lambda/2 (tr E)^2 + mu tr(E^2),  E = (C - I)/2
//   MooneyRivlin(c1, c2, lambda): c1 (I1 - n) + c2 (I2 - n(n-1)/2)
//                                 - 2 (c1 + (n-1) c2) ln J + lambda/2 ln^2 J
//
// with C = F^T F, J = det F, I2 = ((tr C)^2 - tr C^2) / 2. All three vanish
// with zero stress at F = I. A model may be pre-composed with a fixed matrix D:
// psi(F) = scale * psi_base(F D).

#include <cmath>
#include <string>

#include "matg/linalg.hpp"

namespace matg {

enum class EnergyFamily { NeoHookean, StVenantKirchhoff, MooneyRivlin };

inline std::string to_string(EnergyFamily f) {
  switch (f) {
    case EnergyFamily::NeoHookean: return "neo_hookean";
    case EnergyFamily::StVenantKirchhoff: return "st_venant_kirchhoff";
    case EnergyFamily::MooneyRivlin: return "mooney_rivlin";
  }
  return "?";
}

struct ConstitutiveModel {
  EnergyFamily family = EnergyFamily::NeoHookean;
  int dim = 3;
  // NeoHookean / StVenantKirchhoff: (mu, lambda, unused); MooneyRivlin: (c1, c2, lambda)
  double p1 = 1.0, p2 = 1.0, p3 = 0.0;
  Matrix pre = Matrix::identity(3);
  double scale = 1.0;

  static ConstitutiveModel neo_hookean(int n, double mu, double lambda) {
    return validated({EnergyFamily::NeoHookean, n, mu, lambda, 0.0, Matrix::identity(n), 1.0});
  }
  static ConstitutiveModel st_venant_kirchhoff(int n, double mu, double lambda) {
    return validated({EnergyFamily::StVenantKirchhoff, n, mu, lambda, 0.0, Matrix::identity(n), 1.0});
  }
  static ConstitutiveModel mooney_rivlin(int n, double c1, double c2, double lambda) {
    return validated({EnergyFamily::MooneyRivlin, n, c1, c2, lambda, Matrix::identity(n), 1.0});
  }

  /// Same material seen through F -> F d (stacks with an existing pre-map).
  ConstitutiveModel precomposed(const Matrix& d) const {
    ConstitutiveModel m = *this;
    m.pre = d * pre;
    return validated(m);
  }

  ConstitutiveModel scaled(double s) const {
    ConstitutiveModel m = *this;
    m.scale *= s;
    return validated(m);
  }

  static ConstitutiveModel validated(ConstitutiveModel m) {
    if (m.dim != 2 && m.dim != 3) throw Error(ErrorCode::DimensionMismatch, "constitutive models are 2D or 3D");
    if (m.pre.n != m.dim || !is_invertible(m.pre) || det(m.pre) <= 0)
      throw Error(ErrorCode::InvalidBody, "pre-composition matrix must have positive determinant");
    if (!(m.scale > 0)) throw Error(ErrorCode::InvalidBody, "energy scale must be positive");
    const bool ok = m.family == EnergyFamily::MooneyRivlin ? (m.p1 > 0 && m.p2 > 0 && m.p3 >= 0) : (m.p1 > 0 && m.p2 >= 0);
    if (!ok) throw Error(ErrorCode::InvalidBody, "invalid constitutive parameters for " + to_string(m.family));
    return m;
  }
};

namespace detail {

inline double base_energy(const ConstitutiveModel& m, const Matrix& f) {
  const int n = f.n;
  const double j = det(f);
  if (!(j > 0)) throw Error(ErrorCode::NonPositiveDeterminant, "energy needs det F > 0");
  const double lj = std::log(j);
  const Matrix c = transpose(f) * f;
  switch (m.family) {
    case EnergyFamily::NeoHookean: return 0.5 * m.p1 * (trace(c) - n) - m.p1 * lj + 0.5 * m.p2 * lj * lj;
    case EnergyFamily::StVenantKirchhoff: {
      const Matrix e = 0.5 * (c - Matrix::identity(n));
      const double tr = trace(e);
      return 0.5 * m.p2 * tr * tr + m.p1 * trace(e * e);
    }
    case EnergyFamily::MooneyRivlin: {
      const double i1 = trace(c);
      const double i2 = 0.5 * (i1 * i1 - trace(c * c));
      return m.p1 * (i1 - n) + m.p2 * (i2 - 0.5 * n * (n - 1)) - 2 * (m.p1 + (n - 1) * m.p2) * lj + 0.5 * m.p3 * lj * lj;
    }
  }
  return 0;
}

inline Matrix base_stress(const ConstitutiveModel& m, const Matrix& f) {
  const int n = f.n;
  const double j = det(f);
  if (!(j > 0)) throw Error(ErrorCode::NonPositiveDeterminant, "stress needs det F > 0");
  const double lj = std::log(j);
  const Matrix f_it = transpose(inverse(f));
  switch (m.family) {
    case EnergyFamily::NeoHookean: return m.p1 * (f - f_it) + (m.p2 * lj) * f_it;
    case EnergyFamily::StVenantKirchhoff: {
      const Matrix e = 0.5 * (transpose(f) * f - Matrix::identity(n));
      const Matrix s = (m.p2 * trace(e)) * Matrix::identity(n) + (2 * m.p1) * e;
      return f * s;
    }
    case EnergyFamily::MooneyRivlin: {
      const Matrix c = transpose(f) * f;
      const double i1 = trace(c);
      return (2 * m.p1) * f + (2 * m.p2) * (i1 * f - f * c) - (2 * (m.p1 + (n - 1) * m.p2)) * f_it + (m.p3 * lj) * f_it;
    }
  }
  return Matrix::zero(n);
}

}  // namespace detail

inline double energy(const ConstitutiveModel& m, const Matrix& f) {
  if (f.n != m.dim) throw Error(ErrorCode::DimensionMismatch, "deformation gradient dimension differs from model");
  if (!(det(f) > 0)) throw Error(ErrorCode::NonPositiveDeterminant, "energy needs det F > 0");
  return m.scale * detail::base_energy(m, f * m.pre);
}

/// dpsi/dF.
inline Matrix first_piola(const ConstitutiveModel& m, const Matrix& f) {
  if (f.n != m.dim) throw Error(ErrorCode::DimensionMismatch, "deformation gradient dimension differs from model");
  if (!(det(f) > 0)) throw Error(ErrorCode::NonPositiveDeterminant, "stress needs det F > 0");
  return m.scale * (detail::base_stress(m, f * m.pre) * transpose(m.pre));
}

}  // namespace matg
