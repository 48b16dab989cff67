#pragma once

// Finite-difference reference for -Delta_alpha in the reduced picture.
//
// Tridiagonal matrix with the ghost-node Robin row at the origin and a
// Neumann row at r_max. It is symmetric in the trapezoid-weighted product;
// the LAPACK calls work on W^{1/2} A W^{-1/2}.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pointwave/errors.hpp"
#include "pointwave/radial.hpp"

namespace pointwave::oracle {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> lower;  // lower[i] = A(i+1, i)
  std::vector<double> upper;  // upper[i] = A(i, i+1)
};

inline Tridiagonal robin_matrix(const RadialGrid& g, double beta) {
  const int n = g.n_r;
  const double h = g.h(), ih2 = 1.0 / (h * h);
  Tridiagonal t;
  t.diag.assign(n + 1, 2.0 * ih2);
  t.lower.assign(n, -ih2);
  t.upper.assign(n, -ih2);
  t.diag[0] = (2.0 + 2.0 * h * beta) * ih2;
  t.upper[0] = -2.0 * ih2;
  t.lower[n - 1] = -2.0 * ih2;
  return t;
}

// Dirichlet at the origin: unknowns at nodes 1..N.
inline Tridiagonal dirichlet_matrix(const RadialGrid& g) {
  const int n = g.n_r;
  const double h = g.h(), ih2 = 1.0 / (h * h);
  Tridiagonal t;
  t.diag.assign(n, 2.0 * ih2);
  t.lower.assign(n - 1, -ih2);
  t.upper.assign(n - 1, -ih2);
  t.lower[n - 2] = -2.0 * ih2;
  return t;
}

struct OracleOperator {
  RadialGrid grid;
  double beta = 0.0;
  Tridiagonal matrix;
  std::vector<double> weights;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column m at [m * size, (m+1) * size), weighted-orthonormal

  std::size_t size() const { return grid.size(); }
  const double* vector(std::size_t m) const { return vectors.data() + m * size(); }

  std::vector<double> apply(const std::vector<double>& u) const {
    const std::size_t n = size();
    if (u.size() != n) throw ShapeError("oracle apply: size mismatch");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = matrix.diag[i] * u[i];
      if (i > 0) s += matrix.lower[i - 1] * u[i - 1];
      if (i + 1 < n) s += matrix.upper[i] * u[i + 1];
      out[i] = s;
    }
    return out;
  }
};

inline OracleOperator build(const Coupling& c, const RadialGrid& g) {
  if (g.n_r < 16) throw InvalidParameter("oracle needs n_r >= 16");
  OracleOperator op;
  op.grid = g;
  op.beta = c.beta();
  op.matrix = robin_matrix(g, op.beta);
  op.weights = trapezoid_weights(g);

  const int n = static_cast<int>(g.size());
  std::vector<double> d = op.matrix.diag;
  std::vector<double> e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = -std::sqrt(op.matrix.lower[i] * op.matrix.upper[i]);
  std::vector<double> w(n), z(static_cast<std::size_t>(n) * n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  // MRRR; faster than QR iteration and exact enough at n ~ 3000
  const int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &found,
                                  w.data(), z.data(), n, n, support.data(), &tryrac);
  if (info != 0 || found != n) throw Error("oracle: dstemr failed with info " + std::to_string(info));
  d = w;
  op.values = d;
  op.vectors.resize(z.size());
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      op.vectors[static_cast<std::size_t>(m) * n + i] = z[static_cast<std::size_t>(m) * n + i] / std::sqrt(op.weights[i]);
  return op;
}

// Eigenbasis propagation of u'' = -A u: oscillating modes for mu > 0,
// cosh/sinh for mu < 0, linear for mu = 0.
inline PhaseState oracle_propagate(const OracleOperator& op, double t, const PhaseState& s) {
  require_same_grid(op.grid, s.grid());
  const std::size_t n = op.size();
  const auto u = s.position.full_profile();
  const auto v = s.velocity.full_profile();
  std::vector<double> uo(n, 0.0), vo(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double* e = op.vector(m);
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a += op.weights[j] * u[j] * e[j];
      b += op.weights[j] * v[j] * e[j];
    }
    const double mu = op.values[m];
    double at, bt;
    if (mu > 0.0) {
      const double w = std::sqrt(mu);
      at = a * std::cos(w * t) + b * std::sin(w * t) / w;
      bt = -a * w * std::sin(w * t) + b * std::cos(w * t);
    } else if (mu < 0.0) {
      const double w = std::sqrt(-mu);
      at = a * std::cosh(w * t) + b * std::sinh(w * t) / w;
      bt = a * w * std::sinh(w * t) + b * std::cosh(w * t);
    } else {
      at = a + t * b;
      bt = b;
    }
    for (std::size_t j = 0; j < n; ++j) {
      uo[j] += at * e[j];
      vo[j] += bt * e[j];
    }
  }
  return PhaseState(split_at_origin(op.grid, std::move(uo)), split_at_origin(op.grid, std::move(vo)));
}

inline double oracle_energy(const OracleOperator& op, const PhaseState& s) {
  const auto u = s.position.full_profile();
  const auto v = s.velocity.full_profile();
  const auto au = op.apply(u);
  double e = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) e += op.weights[j] * (v[j] * v[j] + u[j] * au[j]);
  return 0.5 * e;
}

namespace detail {

inline std::vector<double> solve_shifted(const Tridiagonal& t, double lambda, std::vector<double> rhs) {
  const int n = static_cast<int>(t.diag.size());
  std::vector<double> d = t.diag, dl = t.lower, du = t.upper;
  for (double& x : d) x += lambda;
  const int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(), n);
  if (info != 0) throw SingularResolvent("oracle: singular tridiagonal solve");
  return rhs;
}

} // namespace detail

inline ChargedField oracle_resolvent(const OracleOperator& op, double lambda, const ChargedField& f) {
  require_same_grid(op.grid, f.grid());
  for (double mu : op.values)
    if (std::abs(mu + lambda) < 1e-8) throw SingularResolvent("oracle: lambda within 1e-8 of an eigenvalue");
  return split_at_origin(op.grid, detail::solve_shifted(op.matrix, lambda, f.full_profile()));
}

struct Eigenpair {
  double value;
  std::vector<double> vector;
};

inline std::vector<Eigenpair> oracle_spectrum(const OracleOperator& op) {
  std::vector<Eigenpair> out;
  out.reserve(op.size());
  for (std::size_t m = 0; m < op.size(); ++m)
    out.push_back({op.values[m], std::vector<double>(op.vector(m), op.vector(m) + op.size())});
  return out;
}

// (A_point + lambda)^{-1} - (A_free + lambda)^{-1} as a dense symmetric matrix
// in weighted coordinates, the free resolvent embedded with a zero origin row.
inline std::vector<double> resolvent_difference(const Coupling& c, const RadialGrid& g, double lambda) {
  const int n = static_cast<int>(g.size());
  const auto pt = robin_matrix(g, c.beta());
  const auto fr = dirichlet_matrix(g);
  const auto w = trapezoid_weights(g);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int col = 0; col < n; ++col) {
    std::vector<double> e(n, 0.0);
    e[col] = 1.0;
    const auto p = detail::solve_shifted(pt, lambda, e);
    std::vector<double> f(n, 0.0);
    if (col > 0) {
      std::vector<double> ef(n - 1, 0.0);
      ef[col - 1] = 1.0;
      const auto q = detail::solve_shifted(fr, lambda, ef);
      for (int i = 1; i < n; ++i) f[i] = q[i - 1];
    }
    // conjugate by W^{1/2} so the result is symmetric
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(col) * n + i] = std::sqrt(w[i]) * (p[i] - f[i]) / std::sqrt(w[col]);
  }
  return out;
}

inline std::vector<double> singular_values(std::vector<double> a, int n) {
  std::vector<double> s(n);
  const int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', n, n, a.data(), n, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("oracle: dgesdd failed with info " + std::to_string(info));
  return s;
}

// sigma_2 / sigma_1 of the resolvent difference
inline double krein_rank_ratio(const Coupling& c, const RadialGrid& g, double lambda) {
  const auto sv = singular_values(resolvent_difference(c, g, lambda), static_cast<int>(g.size()));
  return sv[1] / sv[0];
}

// Upper bound on sigma_2 / sigma_1 without a dense SVD: for the symmetric
// difference D and any unit v, sigma_2 <= |D - (v^T D v) v v^T|_F.
// v comes from power iteration.
inline double krein_rank_bound(const Coupling& c, const RadialGrid& g, double lambda, int iterations = 30) {
  const auto d = resolvent_difference(c, g, lambda);
  const std::size_t n = g.size();
  auto apply = [&](const std::vector<double>& x) {
    std::vector<double> y(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
      const double* a = d.data() + col * n;
      for (std::size_t i = 0; i < n; ++i) y[i] += a[i] * x[col];
    }
    return y;
  };
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double rq = 0.0;
  for (int it = 0; it < iterations; ++it) {
    auto y = apply(v);
    double nrm = 0.0;
    for (double x : y) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / nrm;
  }
  const auto dv = apply(v);
  for (std::size_t i = 0; i < n; ++i) rq += v[i] * dv[i];
  double res = 0.0;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      const double r = d[col * n + i] - rq * v[i] * v[col];
      res += r * r;
    }
  return std::sqrt(res) / std::abs(rq);
}

// Least-squares fit of u_j = a sin(k r_j) + b cos(k r_j) over nodes in [r_lo, r_hi];
// returns the phase atan2(b, a) wrapped to (-pi/2, pi/2].
inline double fit_phase(const RadialGrid& g, const double* u, double k, double r_lo, double r_hi) {
  double ss = 0, sc = 0, cc = 0, us = 0, uc = 0;
  for (int j = 0; j <= g.n_r; ++j) {
    const double r = g.r(j);
    if (r < r_lo || r > r_hi) continue;
    const double s = std::sin(k * r), co = std::cos(k * r);
    ss += s * s;
    sc += s * co;
    cc += co * co;
    us += u[j] * s;
    uc += u[j] * co;
  }
  const double det = ss * cc - sc * sc;
  const double a = (us * cc - uc * sc) / det;
  const double b = (uc * ss - us * sc) / det;
  double d = std::atan2(b, a);
  while (d > pi / 2) d -= pi;
  while (d <= -pi / 2) d += pi;
  return d;
}

// Wavenumber of an oracle eigenvalue via the lattice dispersion relation.
inline double lattice_wavenumber(const RadialGrid& g, double mu) {
  const double h = g.h();
  return 2.0 * std::asin(std::min(1.0, 0.5 * h * std::sqrt(std::max(mu, 0.0)))) / h;
}

} // namespace pointwave::oracle
