#pragma once

// Evolution groups on the finite-energy phase space.
//
// The point flow acts mode by mode in the eigenbasis of the reduced operator.
// On modes with mu > 0 it is the C_alpha conjugate of exp(i omega t):
// w = omega a - i b is multiplied by exp(i omega t). The bound pair evolves by
// exp(t Lambda_0), the zero mode (alpha = 0) by free translation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointwave/errors.hpp"
#include "pointwave/radial.hpp"
#include "pointwave/spectral.hpp"

namespace pointwave {

struct BoundChannelState {
  double x = 0.0;
  double xdot = 0.0;
};

// exp(t Lambda_0) with Lambda_0 (x, xdot) = (xdot, lambda0 x)
inline BoundChannelState lambda0_flow(double lambda0, double t, BoundChannelState z) {
  if (!(lambda0 > 0.0)) throw InvalidParameter("lambda0_flow: lambda0 must be > 0");
  const double w = std::sqrt(lambda0);
  const double ch = std::cosh(w * t), sh = std::sinh(w * t);
  return {ch * z.x + sh / w * z.xdot, w * sh * z.x + ch * z.xdot};
}

// Modal coordinates of a phase state: a = <u, e_m>, b = <v, e_m>.
struct ModalState {
  std::vector<double> a;
  std::vector<double> b;
};

inline ModalState to_modal(const SpectralBasis& basis, const PhaseState& s) {
  return {basis.forward(s.position.full_profile()), basis.forward(s.velocity.full_profile())};
}

inline PhaseState from_modal(const SpectralBasis& basis, const ModalState& m) {
  const RadialGrid& g = basis.grid();
  return PhaseState(split_at_origin(g, basis.inverse(m.a)), split_at_origin(g, basis.inverse(m.b)));
}

namespace detail {

inline void evolve_mode(const Mode& md, double t, double& a, double& b) {
  switch (md.kind) {
    case ModeKind::band:
    case ModeKind::above: {
      const double w = md.omega();
      const cplx z = cplx(w * a, -b) * std::polar(1.0, w * t);
      a = z.real() / w;
      b = -z.imag();
      break;
    }
    case ModeKind::bound: {
      const auto z = lambda0_flow(-md.mu, t, {a, b});
      a = z.x;
      b = z.xdot;
      break;
    }
    case ModeKind::zero:
      a += t * b;
      break;
  }
}

} // namespace detail

inline void evolve_modal(const SpectralBasis& basis, double t, ModalState& m) {
  for (std::size_t k = 0; k < basis.size(); ++k) detail::evolve_mode(basis.mode(k), t, m.a[k], m.b[k]);
}

// Time after which the truncation boundary can influence the field at radius r.
inline double lightcone_horizon(const RadialGrid& g, double r) { return g.r_max - r; }

inline std::optional<std::string> lightcone_warning(const RadialGrid& g, double support_radius, double t) {
  const double need = support_radius + 2.0 * std::abs(t);
  if (need <= g.r_max) return std::nullopt;
  return "horizon t = " + std::to_string(t) + " exceeds the truncation light cone; r_max >= " +
         std::to_string(need) + " required";
}

// Largest radius where either profile exceeds rel_tol times its maximum.
inline double support_radius(const PhaseState& s, double rel_tol = 1e-10) {
  const auto u = s.position.full_profile(), v = s.velocity.full_profile();
  double umax = 0.0, vmax = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    umax = std::max(umax, std::abs(u[j]));
    vmax = std::max(vmax, std::abs(v[j]));
  }
  for (std::size_t j = u.size(); j-- > 0;)
    if (std::abs(u[j]) > rel_tol * umax || std::abs(v[j]) > rel_tol * vmax) return s.grid().r(static_cast<int>(j));
  return 0.0;
}

inline PhaseState propagate_point(const Model& model, double t, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  auto m = to_modal(model.point, s);
  evolve_modal(model.point, t, m);
  return from_modal(model.point, m);
}

// Free flow in the Dirichlet basis. Node 0 of the velocity lies outside the
// free space and is dropped.
inline PhaseState propagate_free(const Model& model, double t, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  if (s.position.charge != 0.0) throw InvalidState("propagate_free: position carries a Coulomb charge");
  auto u = s.position.regular.u;
  auto v = s.velocity.full_profile();
  v[0] = 0.0;
  ModalState m{model.free.forward(u), model.free.forward(v)};
  evolve_modal(model.free, t, m);
  return from_modal(model.free, m);
}

inline BoundChannelState bound_channel(const Model& model, const PhaseState& s) {
  const auto e = model.bound_vector();
  const double h = model.grid.h();
  return {l2(s.position.full_profile(), e, h), l2(s.velocity.full_profile(), e, h)};
}

struct DomainReport {
  bool in_domain = false;
  double defect = 0.0;
};

inline DomainReport domain_membership(const Coupling& c, const PhaseState& s, double tol);

// (phi_dot, Delta phi_reg), the second derivative taken through the reduced operator
inline PhaseState apply_generator(const Model& model, const PhaseState& s, double domain_tol = 1e-3) {
  require_same_grid(model.grid, s.grid());
  const auto dom = domain_membership(model.coupling, s, domain_tol);
  if (!dom.in_domain)
    throw DomainError("apply_generator: boundary condition defect " + std::to_string(dom.defect) + " exceeds " +
                      std::to_string(domain_tol));
  auto lap = functional_calculus(model, [](double mu) { return -mu; }, s.position);
  return PhaseState(s.velocity, std::move(lap));
}

inline DomainReport domain_membership(const Coupling& c, const PhaseState& s, double tol) {
  const double defect = std::abs(c.alpha * s.position.charge - reg_origin_value(s.position));
  const auto& u = s.position.regular.u;
  const double h = s.grid().h();
  double h2 = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    h2 += h * d2 * d2;
  }
  return {std::isfinite(h2) && defect <= tol, defect};
}

enum class Projection { position_Pi_nr, velocity_P_nr, full_P_ac };

namespace detail {

inline ChargedField remove_direction(const ChargedField& f, std::span<const double> e) {
  auto u = f.full_profile();
  const double c = l2(u, e, f.grid().h());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] -= c * e[j];
  return split_at_origin(f.grid(), std::move(u));
}

} // namespace detail

// Removes the runaway (alpha < 0) or zero-energy (alpha = 0) direction.
inline PhaseState project_nonrunaway(const Model& model, const PhaseState& s, Projection which) {
  require_same_grid(model.grid, s.grid());
  std::optional<std::size_t> idx;
  if (model.coupling.regime == Regime::negative) idx = model.bound_index();
  else if (model.coupling.regime == Regime::zero) idx = model.zero_index();
  if (!idx) return s;
  const auto e = model.point.vector(*idx);
  PhaseState out = s;
  if (which != Projection::velocity_P_nr) out.position = detail::remove_direction(s.position, e);
  if (which != Projection::position_Pi_nr) out.velocity = detail::remove_direction(s.velocity, e);
  return out;
}

inline PhaseState project_ac(const Model& model, const PhaseState& s) {
  return project_nonrunaway(model, s, Projection::full_P_ac);
}

// sqrt(|<<s, s>>|) in the D1 (+) L2 metric: gradient of the regular part, the
// charge weighted by |alpha|, and the L2 velocity.
inline double phase_norm(const Coupling& c, const PhaseState& s) {
  const double h = s.grid().h();
  const auto v = s.velocity.full_profile();
  const double e = l2(v, v, h) + h1_seminorm(s.position.regular.u, s.position.regular.u, h) +
                   std::abs(c.alpha) * s.position.charge * s.position.charge;
  return std::sqrt(e);
}

// Discrete L2 norm of both full profiles.
inline double l2_state_norm(const PhaseState& s) {
  const double h = s.grid().h();
  const auto u = s.position.full_profile(), v = s.velocity.full_profile();
  return std::sqrt(l2(u, u, h) + l2(v, v, h));
}

inline PhaseState difference(const PhaseState& a, const PhaseState& b) {
  require_same_grid(a.grid(), b.grid());
  auto du = a.position.full_profile(), dv = a.velocity.full_profile();
  const auto bu = b.position.full_profile(), bv = b.velocity.full_profile();
  for (std::size_t j = 0; j < du.size(); ++j) {
    du[j] -= bu[j];
    dv[j] -= bv[j];
  }
  return PhaseState(split_at_origin(a.grid(), std::move(du)), split_at_origin(a.grid(), std::move(dv)));
}

struct CoreApproximationReport {
  std::vector<double> lambdas;
  std::vector<double> initial_distances;
  std::vector<double> distances;
  bool decreasing = false;
};

// phi_n = phi_reg + Q G_{lambda_n} with lambda_n = 4^{-n}: L2 fields with the
// same charge, converging to phi in D1 as lambda_n -> 0.
inline CoreApproximationReport core_approximation_check(const Model& model, const PhaseState& s, double t,
                                                        int n_levels) {
  if (n_levels < 1) throw InvalidParameter("core approximation needs at least one level");
  const RadialGrid& g = model.grid;
  const auto target = propagate_point(model, t, s);
  CoreApproximationReport rep;
  for (int n = 1; n <= n_levels; ++n) {
    const double lambda = std::pow(4.0, -n);
    const double k = std::sqrt(lambda);
    auto reg = s.position.regular;
    for (int i = 0; i <= g.n_r; ++i) reg.u[i] += s.position.charge * std::expm1(-k * g.r(i)) / sqrt_4pi;
    PhaseState approx(ChargedField(std::move(reg), s.position.charge), s.velocity);
    rep.lambdas.push_back(lambda);
    rep.initial_distances.push_back(phase_norm(model.coupling, difference(approx, s)));
    rep.distances.push_back(phase_norm(model.coupling, difference(propagate_point(model, t, approx), target)));
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.distances.size(); ++i)
    if (!(rep.distances[i] < rep.distances[i - 1])) rep.decreasing = false;
  return rep;
}

} // namespace pointwave
