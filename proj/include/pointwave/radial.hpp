#pragma once

// s-wave reduction of radial fields on [0, r_max].
//
// A radial field phi(r) on R^3 is stored through its reduced profile
// u(r) = sqrt(4 pi) r phi(r). The Coulomb field G = 1/(4 pi |x|) reduces to
// the constant 1/sqrt(4 pi), so a field phi = phi_reg + Q G has the profile
// u = u_reg + Q/sqrt(4 pi) with u_reg(0) = 0.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "pointwave/errors.hpp"

namespace pointwave {

inline constexpr double pi = std::numbers::pi;
inline const double sqrt_4pi = std::sqrt(4.0 * std::numbers::pi);

enum class Regime { positive, zero, negative };

struct Coupling {
  double alpha = 0.0;
  Regime regime = Regime::zero;
  // (4 pi alpha)^2 and 4 pi |alpha|, only for the negative regime
  std::optional<double> lambda0;
  std::optional<double> kappa;

  // Robin coefficient of the reduced problem, u'(0) = beta u(0)
  double beta() const { return 4.0 * pi * alpha; }
};

inline Coupling make_coupling(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidParameter("coupling alpha must be finite");
  Coupling c;
  c.alpha = alpha;
  if (alpha > 0.0) {
    c.regime = Regime::positive;
  } else if (alpha < 0.0) {
    c.regime = Regime::negative;
    const double k = -4.0 * pi * alpha;
    c.kappa = k;
    c.lambda0 = k * k;
  }
  return c;
}

struct RadialGrid {
  double r_max = 1.0;
  int n_r = 1;

  double h() const { return r_max / n_r; }
  double r(int i) const { return i * h(); }
  std::size_t size() const { return static_cast<std::size_t>(n_r) + 1; }

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

inline RadialGrid make_grid(double r_max, int n_r) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidParameter("r_max must be positive");
  if (n_r < 4) throw InvalidParameter("n_r must be at least 4");
  return RadialGrid{r_max, n_r};
}

struct ReducedField {
  RadialGrid grid;
  std::vector<double> u;

  ReducedField() = default;
  explicit ReducedField(const RadialGrid& g) : grid(g), u(g.size(), 0.0) {}
  ReducedField(const RadialGrid& g, std::vector<double> samples) : grid(g), u(std::move(samples)) {
    if (u.size() != grid.size()) throw ShapeError("reduced field sample count does not match grid");
  }

  template <class F>
  static ReducedField sample(const RadialGrid& g, F&& profile) {
    ReducedField f(g);
    for (int i = 0; i <= g.n_r; ++i) f.u[i] = profile(g.r(i));
    return f;
  }
};

struct ChargedField {
  ReducedField regular;  // u_reg, regular.u[0] == 0
  double charge = 0.0;   // Q

  ChargedField() = default;
  explicit ChargedField(const RadialGrid& g) : regular(g) {}
  ChargedField(ReducedField reg, double q) : regular(std::move(reg)), charge(q) {
    if (!regular.u.empty()) regular.u[0] = 0.0;
  }

  const RadialGrid& grid() const { return regular.grid; }

  // u = u_reg + Q/sqrt(4 pi)
  std::vector<double> full_profile() const {
    std::vector<double> u = regular.u;
    const double c = charge / sqrt_4pi;
    for (double& x : u) x += c;
    return u;
  }
};

struct PhaseState {
  ChargedField position;
  ChargedField velocity;

  PhaseState() = default;
  explicit PhaseState(const RadialGrid& g) : position(g), velocity(g) {}
  PhaseState(ChargedField p, ChargedField v) : position(std::move(p)), velocity(std::move(v)) {
    if (!(position.grid() == velocity.grid())) throw ShapeError("phase state components on different grids");
  }

  const RadialGrid& grid() const { return position.grid(); }
};

inline void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!(a == b)) throw ShapeError("grid mismatch");
}

// Exact split of a full profile at the origin node: Q = sqrt(4 pi) u[0].
// Inverse of ChargedField::full_profile up to one rounding per node.
inline ChargedField split_at_origin(const RadialGrid& g, std::vector<double> u) {
  if (u.size() != g.size()) throw ShapeError("profile sample count does not match grid");
  const double u0 = u[0];
  for (double& x : u) x -= u0;
  return ChargedField(ReducedField(g, std::move(u)), sqrt_4pi * u0);
}

// Reduced profile of G_lambda = exp(-sqrt(lambda)|x|)/(4 pi |x|).
inline ReducedField sample_g_lambda(double lambda, const RadialGrid& g) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("lambda must be >= 0");
  const double k = std::sqrt(lambda);
  return ReducedField::sample(g, [k](double r) { return std::exp(-k * r) / sqrt_4pi; });
}

// Charge from a quadratic through (r1,u1),(r2,u2),(r3,u3) evaluated at r = 0.
inline ChargedField decompose_coulomb(const ReducedField& full) {
  const auto& u = full.u;
  if (u.size() != full.grid.size()) throw ShapeError("profile sample count does not match grid");
  const double u_origin = 3.0 * u[1] - 3.0 * u[2] + u[3];
  const double q = sqrt_4pi * u_origin;
  std::vector<double> reg(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) reg[i] = u[i] - u_origin;
  reg[0] = 0.0;
  return ChargedField(ReducedField(full.grid, std::move(reg)), q);
}

// phi_reg(0): slope of u_reg at the origin over sqrt(4 pi), one-sided three-point rule.
inline double reg_origin_value(const ChargedField& f) {
  const auto& u = f.regular.u;
  const double h = f.grid().h();
  const double slope = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  return slope / sqrt_4pi;
}

// (phi_lambda, Q) with phi_lambda = phi_reg - Q (G_lambda - G).
inline std::pair<ReducedField, double> to_lambda_representation(const ChargedField& f, double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be > 0");
  const RadialGrid& g = f.grid();
  const double k = std::sqrt(lambda);
  ReducedField out(g);
  for (int i = 0; i <= g.n_r; ++i) {
    const double g_minus = (std::exp(-k * g.r(i)) - 1.0) / sqrt_4pi;
    out.u[i] = f.regular.u[i] - f.charge * g_minus;
  }
  return {std::move(out), f.charge};
}

// Inverse of to_lambda_representation.
inline ChargedField from_lambda_representation(const ReducedField& phi_lambda, double q, double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be > 0");
  const RadialGrid& g = phi_lambda.grid;
  const double k = std::sqrt(lambda);
  ReducedField reg(g);
  for (int i = 0; i <= g.n_r; ++i)
    reg.u[i] = phi_lambda.u[i] + q * (std::exp(-k * g.r(i)) - 1.0) / sqrt_4pi;
  return ChargedField(std::move(reg), q);
}

/// Trapezoid weights of the uniform grid; these define the discrete L^2 product.
inline std::vector<double> trapezoid_weights(const RadialGrid& g) {
  std::vector<double> w(g.size(), g.h());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

inline double l2(std::span<const double> a, std::span<const double> b, double h) {
  if (a.size() != b.size()) throw ShapeError("l2: sample count mismatch");
  double s = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) s += a[i] * b[i];
  return s * h;
}

inline double l2(const ReducedField& a, const ReducedField& b) {
  require_same_grid(a.grid, b.grid);
  return l2(a.u, b.u, a.grid.h());
}

// Midpoint quadrature of u_a' u_b' with forward differences.
inline double h1_seminorm(std::span<const double> a, std::span<const double> b, double h) {
  if (a.size() != b.size()) throw ShapeError("h1: sample count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) s += (a[i + 1] - a[i]) * (b[i + 1] - b[i]);
  return s / h;
}

enum class InnerKind { l2, h1_seminorm, against_g_lambda0 };

// against_g_lambda0 uses only `a` and needs a negative-regime coupling.
inline double inner(InnerKind kind, const ChargedField& a, const ChargedField& b,
                    const Coupling* c = nullptr) {
  require_same_grid(a.grid(), b.grid());
  const double h = a.grid().h();
  switch (kind) {
    case InnerKind::l2:
      return l2(a.full_profile(), b.full_profile(), h);
    case InnerKind::h1_seminorm:
      return h1_seminorm(a.regular.u, b.regular.u, h);
    case InnerKind::against_g_lambda0: {
      if (c == nullptr || !c->lambda0) throw InvalidParameter("against_g_lambda0 needs a negative coupling");
      const auto g = sample_g_lambda(*c->lambda0, a.grid());
      return l2(a.full_profile(), g.u, h);
    }
  }
  return 0.0;
}

} // namespace pointwave
