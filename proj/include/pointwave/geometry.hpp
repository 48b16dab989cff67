#pragma once

// Energy, scalar products, C maps, complex structures and symplectic forms.
//
// On the grid F_alpha(u, u) = h1(u_reg) + alpha Q^2 is exactly the quadratic
// form of the reduced operator, so in modal coordinates
//   F_alpha = sum_m mu_m a_m^2,  <<s, s>> = sum_m (mu_m a_m^2 + b_m^2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pointwave/dynamics.hpp"
#include "pointwave/errors.hpp"
#include "pointwave/radial.hpp"
#include "pointwave/spectral.hpp"

namespace pointwave {

inline double energy(const Coupling& c, const PhaseState& s) {
  const double h = s.grid().h();
  const auto v = s.velocity.full_profile();
  const auto& ur = s.position.regular.u;
  const double q = s.position.charge;
  return 0.5 * l2(v, v, h) + 0.5 * h1_seminorm(ur, ur, h) + 0.5 * c.alpha * q * q;
}

enum class FormVariant { full, nr };

inline double form_F(const Coupling& c, FormVariant variant, const ChargedField& a, const ChargedField& b) {
  require_same_grid(a.grid(), b.grid());
  const double h = a.grid().h();
  const double grad = h1_seminorm(a.regular.u, b.regular.u, h);
  if (variant == FormVariant::full) return grad + c.alpha * a.charge * b.charge;
  if (c.regime != Regime::negative) throw InvalidParameter("form_F: nr variant needs alpha < 0");
  const auto g = sample_g_lambda(*c.lambda0, a.grid());
  const double pa = l2(a.regular.u, g.u, h), pb = l2(b.regular.u, g.u, h);
  return grad - 4.0 * pi * std::pow(*c.lambda0, 1.5) * pa * pb;
}

// <v1, v2> + F_alpha(u1, u2), indefinite for alpha < 0
inline double energy_product(const Coupling& c, const PhaseState& s1, const PhaseState& s2) {
  require_same_grid(s1.grid(), s2.grid());
  const double h = s1.grid().h();
  return l2(s1.velocity.full_profile(), s2.velocity.full_profile(), h) +
         form_F(c, FormVariant::full, s1.position, s2.position);
}

enum class ProductVariant { alpha_pos, nr, zero };

// The nr product is evaluated on the projections onto the non-runaway subspace,
// where F_alpha and F_alpha^nr coincide.
inline double scalar_product(const Model& model, ProductVariant variant, const PhaseState& s1,
                             const PhaseState& s2) {
  const Coupling& c = model.coupling;
  switch (variant) {
    case ProductVariant::alpha_pos:
      if (c.regime != Regime::positive) throw InvalidParameter("scalar_product: alpha_pos needs alpha > 0");
      return energy_product(c, s1, s2);
    case ProductVariant::zero:
      if (c.regime != Regime::zero) throw InvalidParameter("scalar_product: zero variant needs alpha = 0");
      return energy_product(c, s1, s2);
    case ProductVariant::nr:
      if (c.regime != Regime::negative) throw InvalidParameter("scalar_product: nr variant needs alpha < 0");
      return energy_product(c, project_ac(model, s1), project_ac(model, s2));
  }
  return 0.0;
}

inline ProductVariant matching_product(const Coupling& c) {
  switch (c.regime) {
    case Regime::positive: return ProductVariant::alpha_pos;
    case Regime::zero: return ProductVariant::zero;
    case Regime::negative: return ProductVariant::nr;
  }
  return ProductVariant::alpha_pos;
}

inline double scalar_product(const Model& model, const PhaseState& s1, const PhaseState& s2) {
  return scalar_product(model, matching_product(model.coupling), s1, s2);
}

struct ComplexHalfLineField {
  RadialGrid grid;
  std::vector<cplx> w;

  ComplexHalfLineField() = default;
  ComplexHalfLineField(const RadialGrid& g, std::vector<cplx> samples) : grid(g), w(std::move(samples)) {
    if (w.size() != grid.size()) throw ShapeError("complex field sample count does not match grid");
  }
};

inline double complex_norm2(const ComplexHalfLineField& f) {
  const double h = f.grid.h();
  double s = 0.5 * (std::norm(f.w.front()) + std::norm(f.w.back()));
  for (std::size_t i = 1; i + 1 < f.w.size(); ++i) s += std::norm(f.w[i]);
  return s * h;
}

// [f, g] = sum f conj(g) with trapezoid weights, so that Im [C s1, C s2] = <<s1, J s2>>
inline cplx complex_inner(const ComplexHalfLineField& f, const ComplexHalfLineField& g) {
  require_same_grid(f.grid, g.grid);
  const auto wts = trapezoid_weights(f.grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.w.size(); ++i) s += wts[i] * f.w[i] * std::conj(g.w[i]);
  return s;
}

namespace detail {

inline bool oscillating(const Mode& m) { return m.kind == ModeKind::band || m.kind == ModeKind::above; }

inline ComplexHalfLineField c_map_in(const SpectralBasis& basis, const PhaseState& s) {
  const auto m = to_modal(basis, s);
  std::vector<cplx> c(basis.size(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (oscillating(basis.mode(k))) c[k] = cplx(basis.mode(k).omega() * m.a[k], -m.b[k]);
  return ComplexHalfLineField(basis.grid(), basis.inverse(c));
}

inline PhaseState c_map_inverse_in(const SpectralBasis& basis, const ComplexHalfLineField& f) {
  const auto c = basis.forward(f.w);
  ModalState m{std::vector<double>(basis.size(), 0.0), std::vector<double>(basis.size(), 0.0)};
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (!oscillating(basis.mode(k))) continue;
    m.a[k] = c[k].real() / basis.mode(k).omega();
    m.b[k] = -c[k].imag();
  }
  return from_modal(basis, m);
}

// index of the non-oscillating mode of the point basis, if any
inline std::optional<std::size_t> special_mode(const Model& model) {
  if (auto b = model.bound_index()) return b;
  return model.zero_index();
}

} // namespace detail

// C_alpha(phi, phi_dot) = (-Delta_alpha)^{1/2} phi - i phi_dot on the non-runaway part.
inline ComplexHalfLineField c_map(const Model& model, const PhaseState& s, double tol = 1e-8) {
  require_same_grid(model.grid, s.grid());
  if (const auto k = detail::special_mode(model)) {
    const auto e = model.point.vector(*k);
    const double h = model.grid.h();
    const double x = l2(s.position.full_profile(), e, h), xd = l2(s.velocity.full_profile(), e, h);
    const double scale = std::max(l2_state_norm(s), 1e-300);
    if (std::abs(x) + std::abs(xd) > tol * scale)
      throw InvalidState("c_map: state has a component along the " +
                         std::string(model.bound_index() ? "runaway" : "zero-energy") + " direction");
  }
  return detail::c_map_in(model.point, s);
}

inline PhaseState c_map_inverse(const Model& model, const ComplexHalfLineField& f) {
  require_same_grid(model.grid, f.grid);
  return detail::c_map_inverse_in(model.point, f);
}

// C(phi, phi_dot) = (-Delta)^{1/2} phi - i phi_dot in the free Dirichlet basis
inline ComplexHalfLineField c_map_free(const Model& model, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  if (s.position.charge != 0.0) throw InvalidState("c_map_free: position carries a Coulomb charge");
  auto v = s.velocity.full_profile();
  v[0] = 0.0;
  PhaseState t(s.position, split_at_origin(model.grid, std::move(v)));
  return detail::c_map_in(model.free, t);
}

inline PhaseState c_map_free_inverse(const Model& model, const ComplexHalfLineField& f) {
  require_same_grid(model.grid, f.grid);
  return detail::c_map_inverse_in(model.free, f);
}

inline BoundChannelState j_map(BoundChannelState z) { return {z.xdot, -z.x}; }

// J = C^{-1} i C on the non-runaway part, j on the bound (alpha < 0) or
// zero-mode (alpha = 0) pair.
inline PhaseState complex_structure(const Model& model, const PhaseState& s) {
  require_same_grid(model.grid, s.grid());
  const PhaseState ac = project_ac(model, s);
  auto w = detail::c_map_in(model.point, ac);
  for (auto& x : w.w) x *= cplx(0.0, 1.0);
  PhaseState out = c_map_inverse(model, w);
  if (const auto k = detail::special_mode(model)) {
    const auto e = model.point.vector(*k);
    const double h = model.grid.h();
    const BoundChannelState z{l2(s.position.full_profile(), e, h), l2(s.velocity.full_profile(), e, h)};
    const auto jz = j_map(z);
    auto u = out.position.full_profile(), v = out.velocity.full_profile();
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += jz.x * e[i];
      v[i] += jz.xdot * e[i];
    }
    out = PhaseState(split_at_origin(model.grid, std::move(u)), split_at_origin(model.grid, std::move(v)));
  }
  return out;
}

// Omega(s1, s2) = <<psi1, J psi2>> + (z1, j z2)
inline double symplectic_form(const Model& model, const PhaseState& s1, const PhaseState& s2) {
  const PhaseState p1 = project_ac(model, s1);
  const PhaseState p2 = project_ac(model, s2);
  double omega = energy_product(model.coupling, p1, complex_structure(model, p2));
  if (const auto k = detail::special_mode(model)) {
    const auto e = model.point.vector(*k);
    const double h = model.grid.h();
    const double x1 = l2(s1.position.full_profile(), e, h), xd1 = l2(s1.velocity.full_profile(), e, h);
    const double x2 = l2(s2.position.full_profile(), e, h), xd2 = l2(s2.velocity.full_profile(), e, h);
    const auto jz2 = j_map({x2, xd2});
    omega += x1 * jz2.x + xd1 * jz2.xdot;
  }
  return omega;
}

// omega = <phi1, phi_dot2> - <phi2, phi_dot1>, for positions that vanish at r_max
inline double symplectic_form_standard(const PhaseState& s1, const PhaseState& s2, double tol = 1e-8) {
  require_same_grid(s1.grid(), s2.grid());
  const auto u1 = s1.position.full_profile(), u2 = s2.position.full_profile();
  if (std::abs(u1.back()) > tol || std::abs(u2.back()) > tol)
    throw InvalidState("standard symplectic form needs positions with a cut Coulomb tail");
  const double h = s1.grid().h();
  return l2(u1, s2.velocity.full_profile(), h) - l2(u2, s1.velocity.full_profile(), h);
}

// Coordinates (x, x_dot) along the bound or zero-energy mode; zero when absent.
inline BoundChannelState special_pair(const Model& model, const PhaseState& s) {
  const auto k = detail::special_mode(model);
  if (!k) return {};
  const auto e = model.point.vector(*k);
  const double h = model.grid.h();
  return {l2(s.position.full_profile(), e, h), l2(s.velocity.full_profile(), e, h)};
}

// Real part of the Hermitian product: <<psi1, psi2>> + (z1, z2), (z1, z2) = x1 x2 + xd1 xd2.
// Positive definite in every regime.
inline double hermitian_real(const Model& model, const PhaseState& s1, const PhaseState& s2) {
  const double ac = energy_product(model.coupling, project_ac(model, s1), project_ac(model, s2));
  const auto z1 = special_pair(model, s1), z2 = special_pair(model, s2);
  return ac + z1.x * z2.x + z1.xdot * z2.xdot;
}

inline double hermitian_norm(const Model& model, const PhaseState& s) {
  return std::sqrt(std::max(hermitian_real(model, s, s), 0.0));
}

// 1/2 (L0 z, z), L0 = diag(-lambda0, 1)
inline double bound_hamiltonian(double lambda0, BoundChannelState z) {
  return 0.5 * (-lambda0 * z.x * z.x + z.xdot * z.xdot);
}

struct EnergySplit {
  double nonrunaway = 0.0;  // 1/2 [psi, psi]
  double bound = 0.0;       // 1/2 (L0 z, z), lattice lambda0
};

inline EnergySplit energy_split(const Model& model, const PhaseState& s) {
  const PhaseState ac = project_ac(model, s);
  EnergySplit out;
  out.nonrunaway = 0.5 * energy_product(model.coupling, ac, ac);
  if (const auto b = model.bound_index()) out.bound = bound_hamiltonian(-model.point.mode(*b).mu, bound_channel(model, s));
  if (model.zero_index()) out.bound = 0.5 * std::pow(special_pair(model, s).xdot, 2);
  return out;
}

// 1/2 (|B^{1/2} v|^2 + |B^{3/2} u|^2) on the non-runaway part, B = (-Delta_alpha)^{1/2},
// plus 1/2 (L0 z, z) on the bound pair.
inline double hamiltonian(const Model& model, const PhaseState& s) {
  const auto m = to_modal(model.point, project_ac(model, s));
  double hm = 0.0;
  for (std::size_t k = 0; k < model.point.size(); ++k) {
    const Mode& md = model.point.mode(k);
    if (!detail::oscillating(md)) continue;
    const double w = md.omega();
    hm += 0.5 * w * (w * w * m.a[k] * m.a[k] + m.b[k] * m.b[k]);
  }
  if (const auto b = model.bound_index()) hm += bound_hamiltonian(-model.point.mode(*b).mu, bound_channel(model, s));
  return hm;
}

} // namespace pointwave
