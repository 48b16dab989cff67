#pragma once

// Two-space scattering for the point flow against the free flow.
//
// The free space is the Dirichlet problem on nodes 1..N with the product
// <<s1, s2>>_0 = <v1, v2> + h1(u1, u2). Both flows are conjugated to unitary
// groups on complex profiles by C_alpha and C, so
//   Omega_time(T) = C^{-1} exp(-i B T) C C^{-1} C_alpha exp(i B_alpha T) P_ac.
// The stationary operator maps the point mode sin(theta j + delta) to
// exp(-i sigma delta) sin(theta j) at the same theta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "pointwave/constants.hpp"
#include "pointwave/dynamics.hpp"
#include "pointwave/errors.hpp"
#include "pointwave/geometry.hpp"
#include "pointwave/radial.hpp"
#include "pointwave/spectral.hpp"

namespace pointwave {

enum class Direction { plus, minus };

inline double direction_sign(Direction d) { return d == Direction::plus ? 1.0 : -1.0; }

// <<s1, s2>>_0 on free states
inline double free_product(const PhaseState& s1, const PhaseState& s2) {
  const double h = s1.grid().h();
  return l2(s1.velocity.full_profile(), s2.velocity.full_profile(), h) +
         h1_seminorm(s1.position.full_profile(), s2.position.full_profile(), h);
}

inline double free_norm(const PhaseState& s) { return std::sqrt(std::max(free_product(s, s), 0.0)); }

// Energy norm of the non-runaway part of a point state.
inline double ac_norm(const Model& model, const PhaseState& s) {
  const PhaseState ac = project_ac(model, s);
  return std::sqrt(std::max(energy_product(model.coupling, ac, ac), 0.0));
}

// (phi_reg, phi_dot) read in the free space; the velocity loses its origin node.
inline PhaseState restrict_to_free(const PhaseState& s) {
  auto v = s.velocity.full_profile();
  v[0] = 0.0;
  return PhaseState(ChargedField(s.position.regular, 0.0), ChargedField(ReducedField(s.grid(), std::move(v)), 0.0));
}

enum class Identification { J_alpha, J_alpha_prime, J_simple, J_simple_prime };

// J_alpha = C^{-1} C_alpha: the complex profile of the point state read as a
// free one (for alpha = 0, (phi_reg, phi_dot)). J_alpha_prime = C_alpha^{-1} C.
// J_simple = (phi_reg, phi_dot), J_simple_prime = (phi, phi_dot).
inline PhaseState identify(const Model& model, Identification which, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  switch (which) {
    case Identification::J_alpha:
      if (model.coupling.regime == Regime::zero) return restrict_to_free(s);
      return c_map_free_inverse(model, detail::c_map_in(model.point, project_ac(model, s)));
    case Identification::J_alpha_prime:
      return c_map_inverse(model, c_map_free(model, s));
    case Identification::J_simple:
      return restrict_to_free(s);
    case Identification::J_simple_prime:
      return s;
  }
  return s;
}

namespace detail {

inline cplx moller_multiplier(Direction d, double delta) {
  return std::polar(1.0, -direction_sign(d) * moller_phase_sign * delta);
}

// sum_p d_p n_p sin(theta_p j) over the band modes of the point basis
inline std::vector<cplx> synthesize_free_type(const SpectralBasis& pb, const std::vector<cplx>& d) {
  const int n = pb.grid().n_r;
  std::vector<cplx> f(pb.grid().size(), 0.0);
  for (std::size_t p = 0; p < pb.size(); ++p) {
    if (d[p] == cplx(0.0)) continue;
    const Mode& md = pb.mode(p);
    const cplx c = d[p] * md.norm;
    for (int j = 1; j <= n; ++j) f[j] += c * std::sin(md.theta * j);
  }
  return f;
}

// transpose of synthesize_free_type in the trapezoid product
inline std::vector<cplx> analyze_free_type(const SpectralBasis& pb, const std::vector<cplx>& f) {
  const int n = pb.grid().n_r;
  const auto w = trapezoid_weights(pb.grid());
  std::vector<cplx> d(pb.size(), 0.0);
  for (std::size_t p = 0; p < pb.size(); ++p) {
    const Mode& md = pb.mode(p);
    if (md.kind != ModeKind::band) continue;
    cplx s = 0.0;
    for (int j = 1; j <= n; ++j) s += w[j] * f[j] * std::sin(md.theta * j);
    d[p] = s * md.norm;
  }
  return d;
}

} // namespace detail

// C^{-1} Omega(-Delta, -Delta_alpha) C_alpha P_ac
inline PhaseState moller_stationary(const Model& model, Direction dir, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  const auto w = detail::c_map_in(model.point, project_ac(model, s));
  auto c = model.point.forward(w.w);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const Mode& md = model.point.mode(p);
    c[p] = md.kind == ModeKind::band ? c[p] * detail::moller_multiplier(dir, md.phase) : cplx(0.0);
  }
  return c_map_free_inverse(model, ComplexHalfLineField(model.grid, detail::synthesize_free_type(model.point, c)));
}

// Adjoint of moller_stationary with respect to <<.,.>>_0 and <<.,.>>_alpha.
inline PhaseState moller_stationary_adjoint(const Model& model, Direction dir, const PhaseState& free_state) {
  require_same_grid(model.grid, free_state.grid());
  const auto g = c_map_free(model, free_state);
  auto d = detail::analyze_free_type(model.point, g.w);
  for (std::size_t p = 0; p < d.size(); ++p) {
    const Mode& md = model.point.mode(p);
    d[p] = md.kind == ModeKind::band ? d[p] * std::conj(detail::moller_multiplier(dir, md.phase)) : cplx(0.0);
  }
  return c_map_inverse(model, ComplexHalfLineField(model.grid, model.point.inverse(d)));
}

// U^{-T} J U_alpha^T P_ac s with T signed by the direction.
inline PhaseState moller_time_single(const Model& model, Direction dir, double T, const PhaseState& s,
                                     Identification which = Identification::J_alpha) {
  const double t = direction_sign(dir) * T;
  // re-projecting removes the runaway component that roundoff seeds for alpha < 0
  const PhaseState evolved = project_ac(model, propagate_point(model, t, project_ac(model, s)));
  return propagate_free(model, -t, identify(model, which, evolved));
}

struct MollerReport {
  Direction direction = Direction::plus;
  std::vector<double> times;
  std::vector<double> defects;     // against the stationary operator
  std::vector<double> increments;  // distance between successive time-limit states
  double isometry_defect = 0.0;
  double intertwining_defect = 0.0;
  double extrapolated_defect = 0.0;  // Aitken estimate of the limit of `defects`
};

inline double required_rmax(const PhaseState& s, double t_max) { return support_radius(s) + 2.0 * t_max; }

inline std::pair<PhaseState, MollerReport> moller_time(const Model& model, Direction dir,
                                                       const std::vector<double>& schedule, const PhaseState& s) {
  if (schedule.empty()) throw InvalidParameter("moller_time: empty time schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1])) throw InvalidParameter("moller_time: times must be strictly increasing");
  const double need = required_rmax(s, schedule.back());
  if (need > model.grid.r_max)
    throw InvalidParameter("moller_time: schedule leaves the truncation light cone; r_max >= " +
                           std::to_string(need) + " required");

  MollerReport rep;
  rep.direction = dir;
  rep.times = schedule;
  const PhaseState stat = moller_stationary(model, dir, s);
  PhaseState last(model.grid);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    PhaseState cur = moller_time_single(model, dir, schedule[i], s);
    rep.defects.push_back(free_norm(difference(cur, stat)));
    if (i > 0) rep.increments.push_back(free_norm(difference(cur, last)));
    last = std::move(cur);
  }
  const double n_in = ac_norm(model, s);
  rep.isometry_defect = n_in > 0.0 ? std::abs(free_norm(last) - n_in) / n_in : free_norm(last);

  const double t1 = 1.0;
  const auto a = moller_stationary(model, dir, propagate_point(model, t1, s));
  const auto b = propagate_free(model, t1, stat);
  rep.intertwining_defect = free_norm(difference(a, b));

  const auto& d = rep.defects;
  if (d.size() >= 3) {
    const double d0 = d[d.size() - 3], d1 = d[d.size() - 2], d2 = d.back();
    const double den = (d2 - d1) - (d1 - d0);
    rep.extrapolated_defect = den != 0.0 ? d2 - (d2 - d1) * (d2 - d1) / den : d2;
  } else {
    rep.extrapolated_defect = d.back();
  }
  return {std::move(last), std::move(rep)};
}

struct ScatteringReport {
  double isometry = 0.0;         // max | |Omega s| - |P_ac s| | / |P_ac s|
  double adjoint_pairing = 0.0;  // max |<<Omega s1, f>>_0 - <<s1, Omega^* f>>|
  double adjoint_identity = 0.0; // max |Omega^* Omega s - P_ac s| / |P_ac s|
  double intertwining = 0.0;
  std::vector<double> times;
  std::vector<double> equivalence;   // |(J_alpha - J) U_alpha^T P_ac s|, first sample
  double identification_gap = 0.0;   // J- vs J_alpha-based time limits at the largest T
};

inline ScatteringReport verify_scattering(const Model& model, const std::vector<PhaseState>& samples,
                                          const std::vector<double>& schedule, Direction dir = Direction::plus) {
  ScatteringReport rep;
  rep.times = schedule;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PhaseState& s = samples[i];
    const double n_ac = ac_norm(model, s);
    if (n_ac == 0.0) continue;
    const PhaseState o = moller_stationary(model, dir, s);
    rep.isometry = std::max(rep.isometry, std::abs(free_norm(o) - n_ac) / n_ac);

    const PhaseState back = moller_stationary_adjoint(model, dir, o);
    const PhaseState pac = project_ac(model, s);
    const double err = std::sqrt(std::max(energy_product(model.coupling, difference(back, pac), difference(back, pac)), 0.0));
    rep.adjoint_identity = std::max(rep.adjoint_identity, err / n_ac);

    const PhaseState& other = samples[(i + 1) % samples.size()];
    const PhaseState f = identify(model, Identification::J_simple, other);
    const double lhs = free_product(o, f);
    const double rhs = energy_product(model.coupling, pac, moller_stationary_adjoint(model, dir, f));
    rep.adjoint_pairing = std::max(rep.adjoint_pairing, std::abs(lhs - rhs) / (n_ac * std::max(free_norm(f), 1e-300)));

    const double t1 = 1.0;
    const auto a = moller_stationary(model, dir, propagate_point(model, t1, s));
    const auto b = propagate_free(model, t1, o);
    rep.intertwining = std::max(rep.intertwining, free_norm(difference(a, b)) / n_ac);
  }
  if (!samples.empty() && !schedule.empty()) {
    const PhaseState& s = samples.front();
    const PhaseState pac = project_ac(model, s);
    for (double T : schedule) {
      const PhaseState e = project_ac(model, propagate_point(model, direction_sign(dir) * T, pac));
      rep.equivalence.push_back(free_norm(difference(identify(model, Identification::J_alpha, e),
                                                     identify(model, Identification::J_simple, e))));
    }
    const double T = schedule.back();
    const auto a = moller_time_single(model, dir, T, s, Identification::J_alpha);
    const auto b = moller_time_single(model, dir, T, s, Identification::J_simple);
    rep.identification_gap = free_norm(difference(a, b)) / std::max(ac_norm(model, s), 1e-300);
  }
  return rep;
}

} // namespace pointwave
