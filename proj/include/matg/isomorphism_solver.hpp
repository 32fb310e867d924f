#pragma once

// Numeric material isomorphisms: find P with psi_1(F P) = psi_2(F) over a
// sample of deformation gradients, by damped least squares over GL(n).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "matg/constitutive.hpp"
#include "matg/material_body.hpp"
#include "matg/matrix_group.hpp"
#include "matg/parallel.hpp"

namespace matg {

struct SampleSet {
  std::vector<Matrix> gradients;
  std::size_t size() const { return gradients.size(); }
};

inline std::size_t default_sample_count(int n) { return n == 3 ? 24 : 16; }

inline double condition_number(const Matrix& f) {
  const EigSym e = eig_sym(transpose(f) * f);
  return std::sqrt(e.values[f.n - 1] / e.values[0]);
}

/// Random gradients I + 0.3 N with det > 0.2 and condition number <= 10.
inline Matrix random_gradient(int n, Rng& rng) {
  for (;;) {
    const Matrix f = Matrix::identity(n) + random_gaussian(n, rng, 0.3);
    if (det(f) > 0.2 && condition_number(f) <= 10) return f;
  }
}

/// 4 volumetric states, 6 uniaxial/shear modes, then random gradients.
inline SampleSet make_training_samples(int n, std::size_t count, unsigned long long seed) {
  const std::size_t minimum = n == 3 ? 12 : 6;
  if (count < minimum) throw Error(ErrorCode::InvalidBody, "too few samples for the transplant parameter count");
  SampleSet s;
  for (double v : {0.8, 0.9, 1.1, 1.25}) s.gradients.push_back(v * Matrix::identity(n));
  auto shear = [n](int i, int j, double g) {
    Matrix m = Matrix::identity(n);
    m(i, j) = g;
    return m;
  };
  auto stretch = [n](int i, double l) {
    Matrix m = Matrix::identity(n);
    m(i, i) = l;
    return m;
  };
  const int last = n - 1;
  const std::vector<Matrix> modes{stretch(0, 1.3), stretch(1, 0.8),   stretch(last, 1.15),
                                  shear(0, 1, 0.3), shear(1, 0, -0.25), shear(last, 0, 0.2)};
  for (const Matrix& m : modes) s.gradients.push_back(m);
  Rng rng(seed);
  while (s.gradients.size() < count) s.gradients.push_back(random_gradient(n, rng));
  s.gradients.resize(count);
  return s;
}

/// Held-out set: random gradients only.
inline SampleSet make_holdout_samples(int n, std::size_t count, unsigned long long seed) {
  SampleSet s;
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) s.gradients.push_back(random_gradient(n, rng));
  return s;
}

struct SolverOptions {
  double tol = 1e-8;        // held-out RMS energy mismatch for convergence
  int random_starts = 8;    // in addition to the identity start
  double start_spread = 0.2;
  int max_iterations = 300;
  unsigned long long seed = 12345;
  bool analytic_gradient = true;
  double min_det = 0.05;
  std::size_t samples = 0;  // 0 = default for the dimension
};

struct TransplantSolution {
  Matrix p;
  double residual = std::numeric_limits<double>::infinity();        // held-out RMS
  double train_residual = std::numeric_limits<double>::infinity();  // training RMS
  bool converged = false;
  int iterations = 0;
  int best_start = -1;
};

/// RMS of psi_1(F_k P) - psi_2(F_k) over the samples.
inline double transplant_rms(const ConstitutiveModel& m1, const ConstitutiveModel& m2, const SampleSet& s, const Matrix& p) {
  double acc = 0;
  for (const Matrix& f : s.gradients) {
    const double r = energy(m1, f * p) - energy(m2, f);
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(s.size()));
}

/// Objective sum_k r_k^2 and its gradient with respect to the entries of P.
inline std::pair<double, Matrix> transplant_objective(const ConstitutiveModel& m1, const ConstitutiveModel& m2,
                                                      const SampleSet& s, const Matrix& p) {
  double value = 0;
  Matrix grad = Matrix::zero(p.n);
  for (const Matrix& f : s.gradients) {
    const double r = energy(m1, f * p) - energy(m2, f);
    value += r * r;
    grad = grad + (2 * r) * (transpose(f) * first_piola(m1, f * p));
  }
  return {value, grad};
}

namespace detail {

struct LmResult {
  Matrix p;
  double cost;
  int iterations;
};

inline Eigen::VectorXd residuals(const ConstitutiveModel& m1, const std::vector<double>& target, const SampleSet& s, const Matrix& p) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) r(static_cast<Eigen::Index>(k)) = energy(m1, s.gradients[k] * p) - target[k];
  return r;
}

inline Eigen::MatrixXd jacobian(const ConstitutiveModel& m1, const std::vector<double>& target, const SampleSet& s,
                                const Matrix& p, bool analytic) {
  const int n = p.n;
  Eigen::MatrixXd j(static_cast<Eigen::Index>(s.size()), n * n);
  if (analytic) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      const Matrix row = transpose(s.gradients[k]) * first_piola(m1, s.gradients[k] * p);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) j(static_cast<Eigen::Index>(k), a * n + b) = row(a, b);
    }
    return j;
  }
  const double h = 1e-6 * std::max(1.0, max_abs(p));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Matrix pp = p, pm = p;
      pp(a, b) += h;
      pm(a, b) -= h;
      j.col(a * n + b) = (residuals(m1, target, s, pp) - residuals(m1, target, s, pm)) / (2 * h);
    }
  return j;
}

// Levenberg-Marquardt with multiplicative damping mu * diag(J^T J).
inline LmResult levenberg_marquardt(const ConstitutiveModel& m1, const std::vector<double>& target, const SampleSet& s,
                                    Matrix p, const SolverOptions& opt) {
  const int n = p.n;
  double mu = 1e-3;
  Eigen::VectorXd r = residuals(m1, target, s, p);
  double cost = r.squaredNorm();
  int it = 0;
  for (; it < opt.max_iterations && cost > 1e-30; ++it) {
    const Eigen::MatrixXd j = jacobian(m1, target, s, p, opt.analytic_gradient);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    if (g.norm() < 1e-300) break;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int i = 0; i < n * n; ++i) a(i, i) += mu * std::max(jtj(i, i), 1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      Matrix trial = p;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) trial(i, k) += step(i * n + k);
      if (!(det(trial) > opt.min_det) || !step.allFinite()) {
        mu *= 4;
        continue;
      }
      const Eigen::VectorXd rt = residuals(m1, target, s, trial);
      const double ct = rt.squaredNorm();
      if (ct < cost) {
        const double rel = (cost - ct) / std::max(cost, 1e-300);
        p = trial;
        r = rt;
        cost = ct;
        mu = std::max(mu / 3, 1e-12);
        improved = true;
        if (rel < 1e-14 && step.norm() < 1e-14 * std::max(1.0, max_abs(p))) it = opt.max_iterations;
      } else {
        mu *= 4;
      }
    }
    if (!improved) break;
  }
  return {p, cost, it};
}

}  // namespace detail

/// Multi-start least squares for P with psi_1(F P) = psi_2(F). The answer is
/// determined only up to right multiplication by symmetries of m1.
inline TransplantSolution solve_transplant(const ConstitutiveModel& m1, const ConstitutiveModel& m2, const SolverOptions& opt = {},
                                           const SampleSet* training = nullptr, const SampleSet* holdout = nullptr) {
  if (m1.dim != m2.dim) throw Error(ErrorCode::DimensionMismatch, "models have different dimensions");
  const int n = m1.dim;
  const std::size_t count = opt.samples ? opt.samples : default_sample_count(n);
  const SampleSet train = training ? *training : make_training_samples(n, count, opt.seed);
  const SampleSet held = holdout ? *holdout : make_holdout_samples(n, count, opt.seed + 1);
  std::vector<double> target;
  for (const Matrix& f : train.gradients) target.push_back(energy(m2, f));

  std::vector<Matrix> starts{Matrix::identity(n)};
  Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  while (static_cast<int>(starts.size()) < opt.random_starts + 1) {
    const Matrix s = Matrix::identity(n) + random_gaussian(n, rng, opt.start_spread);
    if (det(s) > opt.min_det) starts.push_back(s);
  }
  std::vector<detail::LmResult> results(starts.size(), detail::LmResult{Matrix::identity(n), 0, 0});
  parallel_for(starts.size(), [&](std::size_t i) { results[i] = detail::levenberg_marquardt(m1, target, train, starts[i], opt); });

  TransplantSolution best;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double train_rms = std::sqrt(results[i].cost / static_cast<double>(train.size()));
    if (train_rms < best.train_residual) {
      best.p = results[i].p;
      best.train_residual = train_rms;
      best.iterations = results[i].iterations;
      best.best_start = static_cast<int>(i);
    }
    if (train_rms < 1e-13) break;  // later starts cannot do meaningfully better
  }
  best.residual = transplant_rms(m1, m2, held, best.p);
  best.converged = best.residual < opt.tol && det(best.p) > 0;
  return best;
}

struct SymmetryOptions {
  double tol = 1e-8;  // RMS mismatch relative to the RMS energy of the samples
  int haar_probes = 1000;
  unsigned long long seed = 777;
};

struct SymmetrySearch {
  MatrixGroup group = MatrixGroup::trivial(3);
  bool continuous_detected = false;
};

namespace detail {

inline std::vector<Vec> fibonacci_directions(int count) {
  std::vector<Vec> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(1.0 - z * z);
    out.push_back(Vec::of({r * std::cos(golden * i), r * std::sin(golden * i), z}));
  }
  return out;
}

}  // namespace detail

/// Orthogonal symmetries of a model detected by energy residuals: SO(n) when
/// every Haar probe passes, else an axis group when all probe angles about one
/// direction pass, else the closure of the passing finite candidates.
inline SymmetrySearch sample_symmetry_group(const ConstitutiveModel& m, const SampleSet& samples, const SymmetryOptions& opt = {}) {
  const int n = m.dim;
  double scale = 0;
  for (const Matrix& f : samples.gradients) scale += std::pow(energy(m, f), 2);
  scale = std::max(std::sqrt(scale / static_cast<double>(samples.size())), 1e-300);
  auto passes = [&](const Matrix& q) { return transplant_rms(m, m, samples, q) < opt.tol * scale; };

  SymmetrySearch out;
  out.group = MatrixGroup::trivial(n);
  Rng rng(opt.seed);
  bool all = true;
  for (int i = 0; i < opt.haar_probes && all; ++i) all = passes(random_rotation(n, rng));
  if (all) {
    out.group = MatrixGroup::special_orthogonal(n);
    out.continuous_detected = true;
    return out;
  }
  std::vector<Vec> dirs;
  if (n == 3) {
    dirs = {Vec::unit(3, 0), Vec::unit(3, 1), Vec::unit(3, 2)};
    for (const Vec& v : detail::fibonacci_directions(64)) dirs.push_back(v);
    for (const Vec& a : dirs) {
      bool path = true;
      for (double ang : {0.37, 1.3, 2.9}) path = path && passes(rotation3(a, ang));
      if (!path) continue;
      out.continuous_detected = true;
      const bool flips = passes(rotation3(any_perpendicular(a), std::numbers::pi));
      out.group = MatrixGroup::axis_rotation(a, flips, false);
      return out;
    }
  }
  std::vector<Matrix> gens;
  if (n == 2) {
    for (int order : {2, 3, 4, 6}) {
      const Matrix r = rotation2(2 * std::numbers::pi / order);
      if (passes(r)) gens.push_back(r);
    }
  } else {
    for (int k = 0; k < 3; ++k)
      for (int q = 1; q <= 3; ++q) {
        const Matrix r = rotation3(Vec::unit(3, k), q * std::numbers::pi / 2);
        if (passes(r)) gens.push_back(r);
      }
    const double s = 1 / std::sqrt(2.0);
    std::vector<Vec> extra{Vec::of({s, s, 0}), Vec::of({s, -s, 0}), Vec::of({s, 0, s}),
                           Vec::of({s, 0, -s}), Vec::of({0, s, s}),  Vec::of({0, s, -s})};
    for (const Vec& a : extra)
      if (passes(rotation3(a, std::numbers::pi))) gens.push_back(rotation3(a, std::numbers::pi));
    for (const Vec& a : {Vec::of({1, 1, 1}), Vec::of({1, 1, -1}), Vec::of({1, -1, 1}), Vec::of({-1, 1, 1})})
      if (passes(rotation3(a, 2 * std::numbers::pi / 3))) gens.push_back(rotation3(a, 2 * std::numbers::pi / 3));
    for (std::size_t i = 3; i < dirs.size(); ++i)
      if (passes(rotation3(dirs[i], std::numbers::pi))) gens.push_back(rotation3(dirs[i], std::numbers::pi));
  }
  if (!gens.empty()) out.group = MatrixGroup::generated(n, gens);
  return out;
}

/// Replaces numeric points by symbolic data: the first point of each new
/// material becomes an archetype, later points get transplants from the first
/// archetype that reproduces them within tolerance.
struct SymbolizeReport {
  BodyGrid body;
  std::vector<double> residuals;  // held-out RMS per point (0 for archetypes)
};

inline SymbolizeReport symbolize_body(const BodyGrid& body, const SolverOptions& opt = {}, const SymmetryOptions& sym = {}) {
  struct Archetype {
    ConstitutiveModel model;
    MatrixGroup group;
    std::string label;
  };
  std::vector<Archetype> archetypes;
  std::vector<MaterialPoint> points;
  SymbolizeReport rep;
  const int n = body.dim();
  const SampleSet samples = make_training_samples(n, default_sample_count(n), opt.seed);
  for (const MaterialPoint& p : body.points()) {
    if (p.is_symbolic()) {
      points.push_back(p);
      rep.residuals.push_back(0);
      continue;
    }
    const ConstitutiveModel& m = p.numeric().model;
    std::optional<SymbolicData> found;
    double res = 0;
    for (const Archetype& a : archetypes) {
      const TransplantSolution s = solve_transplant(a.model, m, opt);
      if (s.converged) {
        found = SymbolicData{a.group, s.p, a.label};
        res = s.residual;
        break;
      }
    }
    if (!found) {
      Archetype a{m, sample_symmetry_group(m, samples, sym).group, "numeric_" + std::to_string(archetypes.size())};
      found = SymbolicData{a.group, Matrix::identity(n), a.label};
      archetypes.push_back(std::move(a));
    }
    points.push_back(MaterialPoint{p.id, p.pos, *found});
    rep.residuals.push_back(res);
  }
  rep.body = BodyGrid(n, body.shape(), std::move(points), body.name());
  return rep;
}

}  // namespace matg
