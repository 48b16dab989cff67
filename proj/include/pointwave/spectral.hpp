#pragma once

// Generalized-eigenfunction transform of the reduced point-interaction
// Laplacian on the grid [0, r_max].
//
// The reduced operator is -u'' with u'(0) = 4 pi alpha u(0) (Robin) and
// u'(r_max) = 0. On the uniform grid with the ghost-node boundary rows its
// eigenvectors are known in closed form:
//
//   band modes     u_j = sin(theta j + delta_h(theta)),  0 < theta < pi,
//                  tan delta_h = sin(theta) / (h beta),   mu = 4 sin^2(theta/2)/h^2
//   bound mode     u_j = e^{-eta j} + e^{-eta (2N - j)}   (beta < 0), mu < 0
//   above-band     (-1)^j (e^{-eta j} + e^{-eta (2N - j)}) (beta > 0)
//   zero mode      u_j = 1                                 (beta = 0)
//
// with theta, eta fixed by the boundary rows. delta_h tends to the continuum
// phase shift arctan(k / 4 pi alpha) at O(h^2). The free comparison operator
// (Dirichlet at the origin) has modes sin(theta j), theta = (m + 1/2) pi / N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pointwave/errors.hpp"
#include "pointwave/radial.hpp"

namespace pointwave {

using cplx = std::complex<double>;

// Continuum s-wave phase shift of the point interaction at wavenumber k.
inline double phase_shift(const Coupling& c, double k) {
  if (!(k > 0.0)) throw InvalidParameter("phase_shift: k must be > 0");
  if (c.alpha == 0.0) return pi / 2.0;
  return std::atan(k / (4.0 * pi * c.alpha));
}

// Discrete counterpart: the phase of the lattice eigenfunction sin(theta j + delta).
// Branch (0, pi): (0, pi/2) for beta > 0, pi/2 at beta = 0, (pi/2, pi) for beta < 0.
inline double lattice_phase(double beta, double h, double theta) {
  return std::atan2(std::sin(theta), h * beta);
}

enum class ModeKind { band, bound, zero, above };

struct Mode {
  ModeKind kind = ModeKind::band;
  double theta = 0.0;  // lattice angle (band modes)
  double eta = 0.0;    // decay exponent (bound / above-band modes)
  double mu = 0.0;     // eigenvalue of the reduced operator
  double phase = 0.0;  // delta_h(theta), band modes only
  double norm = 1.0;   // factor applied to the raw closed-form vector

  double omega() const { return std::sqrt(std::abs(mu)); }
  double wavenumber(double h) const { return theta / h; }
};

enum class OriginCondition { robin, dirichlet };

namespace detail {

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// root of tanh(eta N) sinh(eta) = target, target > 0
inline double exponential_mode_root(int n, double target) {
  auto f = [n, target](double eta) { return std::tanh(eta * n) * std::sinh(eta) - target; };
  double lo = 0.0;
  double hi = std::asinh(target) + 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  return bisect(f, lo, hi);
}

} // namespace detail

// Orthonormal eigenbasis of the reduced operator with respect to the trapezoid
// product. Immutable once built; vectors are stored row-wise, one per mode.
class SpectralBasis {
 public:
  SpectralBasis() = default;

  static SpectralBasis point(const RadialGrid& g, double beta) {
    SpectralBasis b(g, OriginCondition::robin, beta);
    b.build_robin();
    return b;
  }

  static SpectralBasis free(const RadialGrid& g) {
    SpectralBasis b(g, OriginCondition::dirichlet, 0.0);
    b.build_dirichlet();
    return b;
  }

  const RadialGrid& grid() const { return grid_; }
  OriginCondition origin() const { return origin_; }
  double beta() const { return beta_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<Mode>& modes() const { return modes_; }
  const Mode& mode(std::size_t m) const { return modes_[m]; }

  std::span<const double> vector(std::size_t m) const {
    return {vecs_.data() + m * stride(), stride()};
  }

  std::optional<std::size_t> index_of(ModeKind kind) const {
    for (std::size_t m = 0; m < modes_.size(); ++m)
      if (modes_[m].kind == kind) return m;
    return std::nullopt;
  }

  // amplitudes a_m = <u, e_m>
  std::vector<double> forward(std::span<const double> u) const {
    if (u.size() != stride()) throw ShapeError("forward transform: sample count mismatch");
    std::vector<double> wu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) wu[j] = weights_[j] * u[j];
    std::vector<double> a(modes_.size());
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      const double* e = vecs_.data() + m * stride();
      double s = 0.0;
      for (std::size_t j = 0; j < wu.size(); ++j) s += e[j] * wu[j];
      a[m] = s;
    }
    return a;
  }

  // u = sum_m a_m e_m
  std::vector<double> inverse(std::span<const double> a) const {
    if (a.size() != modes_.size()) throw ShapeError("inverse transform: amplitude count mismatch");
    std::vector<double> u(stride(), 0.0);
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      if (a[m] == 0.0) continue;
      const double* e = vecs_.data() + m * stride();
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += a[m] * e[j];
    }
    return u;
  }

  std::vector<cplx> forward(std::span<const cplx> w) const {
    std::vector<double> re(w.size()), im(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      re[j] = w[j].real();
      im[j] = w[j].imag();
    }
    const auto ar = forward(re), ai = forward(im);
    std::vector<cplx> a(ar.size());
    for (std::size_t m = 0; m < a.size(); ++m) a[m] = {ar[m], ai[m]};
    return a;
  }

  std::vector<cplx> inverse(std::span<const cplx> a) const {
    std::vector<double> re(a.size()), im(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
      re[m] = a[m].real();
      im[m] = a[m].imag();
    }
    const auto ur = inverse(re), ui = inverse(im);
    std::vector<cplx> u(ur.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = {ur[j], ui[j]};
    return u;
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  SpectralBasis(const RadialGrid& g, OriginCondition oc, double beta)
      : grid_(g), origin_(oc), beta_(beta), weights_(trapezoid_weights(g)) {}

  std::size_t stride() const { return grid_.size(); }

  void push_mode(Mode md, const std::function<double(int)>& raw) {
    const int n = grid_.n_r;
    std::vector<double> v(stride());
    for (int j = 0; j <= n; ++j) v[j] = raw(j);
    double s = 0.0;
    for (int j = 0; j <= n; ++j) s += weights_[j] * v[j] * v[j];
    md.norm = 1.0 / std::sqrt(s);
    for (double& x : v) x *= md.norm;
    vecs_.insert(vecs_.end(), v.begin(), v.end());
    modes_.push_back(md);
  }

  void push_band(double theta) {
    const double h = grid_.h();
    Mode md;
    md.kind = ModeKind::band;
    md.theta = theta;
    md.phase = lattice_phase(beta_, h, theta);
    const double s = std::sin(0.5 * theta);
    md.mu = 4.0 * s * s / (h * h);
    const double ph = md.phase;
    push_mode(md, [theta, ph](int j) { return std::sin(theta * j + ph); });
  }

  void build_dirichlet() {
    const int n = grid_.n_r;
    const double h = grid_.h();
    modes_.reserve(n);
    vecs_.reserve(static_cast<std::size_t>(n) * stride());
    for (int m = 0; m < n; ++m) {
      const double theta = (m + 0.5) * pi / n;
      Mode md;
      md.kind = ModeKind::band;
      md.theta = theta;
      md.phase = 0.0;
      const double s = std::sin(0.5 * theta);
      md.mu = 4.0 * s * s / (h * h);
      push_mode(md, [theta](int j) { return std::sin(theta * j); });
    }
  }

  void build_robin() {
    const int n = grid_.n_r;
    const double h = grid_.h();
    const double hb = h * beta_;
    modes_.reserve(n + 1);
    vecs_.reserve(static_cast<std::size_t>(n + 1) * stride());

    if (beta_ == 0.0) {
      Mode z;
      z.kind = ModeKind::zero;
      push_mode(z, [](int) { return 1.0; });
      for (int p = 1; p <= n; ++p) push_band(p * pi / n);
      return;
    }

    if (beta_ < 0.0) {
      const double eta = detail::exponential_mode_root(n, -hb);
      Mode b;
      b.kind = ModeKind::bound;
      b.eta = eta;
      const double s = std::sinh(0.5 * eta);
      b.mu = -4.0 * s * s / (h * h);
      push_mode(b, [eta, n](int j) { return std::exp(-eta * j) + std::exp(-eta * (2 * n - j)); });
    }

    // band roots of theta N + delta_h(theta) = (p + 1/2) pi
    auto phi = [n, hb](double th) { return th * n + std::atan2(std::sin(th), hb); };
    const int samples = 16 * n;
    std::vector<double> roots;
    roots.reserve(n);
    double prev_t = 0.0;
    double prev_level = std::floor((phi(1e-300) / pi) - 0.5);
    // refine near the endpoints where roots may crowd
    std::vector<double> ts;
    ts.reserve(samples + 64);
    for (int k = 40; k >= 1; --k) ts.push_back(pi / (samples) * std::pow(0.5, k));
    for (int k = 1; k < samples; ++k) ts.push_back(pi * k / samples);
    for (int k = 1; k <= 40; ++k) ts.push_back(pi - pi / samples * std::pow(0.5, k));
    for (double t : ts) {
      const double level = std::floor(phi(t) / pi - 0.5);
      if (level != prev_level) {
        const double lo_l = std::min(level, prev_level), hi_l = std::max(level, prev_level);
        for (double l = lo_l + 1.0; l <= hi_l; l += 1.0) {
          const double target = (l + 0.5) * pi;
          roots.push_back(detail::bisect([&](double th) { return phi(th) - target; }, prev_t, t));
        }
        prev_level = level;
      }
      prev_t = t;
    }
    std::sort(roots.begin(), roots.end());
    for (double th : roots) push_band(th);

    if (beta_ > 0.0) {
      const double eta = detail::exponential_mode_root(n, hb);
      Mode a;
      a.kind = ModeKind::above;
      a.eta = eta;
      const double c = std::cosh(0.5 * eta);
      a.mu = 4.0 * c * c / (h * h);
      push_mode(a, [eta, n](int j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        return sgn * (std::exp(-eta * j) + std::exp(-eta * (2 * n - j)));
      });
    }

    if (modes_.size() != static_cast<std::size_t>(n + 1))
      throw Error("spectral basis: found " + std::to_string(modes_.size()) + " modes, expected " +
                  std::to_string(n + 1));
  }

  RadialGrid grid_;
  OriginCondition origin_ = OriginCondition::robin;
  double beta_ = 0.0;
  std::vector<double> weights_;
  std::vector<Mode> modes_;
  std::vector<double> vecs_;
};

// Coupling, grid and both eigenbases, built once and shared read-only.
struct Model {
  Coupling coupling;
  RadialGrid grid;
  SpectralBasis point;
  SpectralBasis free;

  std::optional<std::size_t> bound_index() const { return point.index_of(ModeKind::bound); }
  std::optional<std::size_t> zero_index() const { return point.index_of(ModeKind::zero); }

  // normalized discrete bound eigenvector (negative regime)
  std::span<const double> bound_vector() const {
    const auto b = bound_index();
    if (!b) throw InvalidParameter("no bound state outside the negative regime");
    return point.vector(*b);
  }
};

inline Model make_model(const Coupling& c, const RadialGrid& g) {
  return Model{c, g, SpectralBasis::point(g, c.beta()), SpectralBasis::free(g)};
}

struct SpectralGrid {
  std::vector<double> k;
  std::vector<double> w;
  double k_max = 0.0;
};

// Band modes of the point basis as a k-grid. Amplitudes in continuum
// normalization relate to the orthonormal ones by a = sqrt(w) * a_hat.
inline SpectralGrid spectral_grid(const SpectralBasis& b) {
  SpectralGrid sg;
  const double h = b.grid().h();
  const double dk = pi / b.grid().r_max;
  for (const auto& m : b.modes()) {
    if (m.kind != ModeKind::band) continue;
    sg.k.push_back(m.wavenumber(h));
    sg.w.push_back(dk);
  }
  sg.k_max = sg.k.empty() ? 0.0 : sg.k.back();
  return sg;
}

struct SpectralDecomposition {
  std::vector<double> continuous;  // continuum-normalized band amplitudes, then the above-band mode if any
  std::optional<double> bound;
  std::optional<double> zero_mode;
};

inline SpectralDecomposition transform_forward(const Model& model, const ChargedField& f) {
  require_same_grid(model.grid, f.grid());
  const auto a = model.point.forward(f.full_profile());
  const double sw = std::sqrt(pi / model.grid.r_max);
  SpectralDecomposition d;
  for (std::size_t m = 0; m < a.size(); ++m) {
    switch (model.point.mode(m).kind) {
      case ModeKind::band: d.continuous.push_back(a[m] / sw); break;
      case ModeKind::above: d.continuous.push_back(a[m] / sw); break;
      case ModeKind::bound: d.bound = a[m]; break;
      case ModeKind::zero: d.zero_mode = a[m]; break;
    }
  }
  return d;
}

inline ChargedField transform_inverse(const Model& model, const SpectralDecomposition& d) {
  const double sw = std::sqrt(pi / model.grid.r_max);
  std::vector<double> a(model.point.size(), 0.0);
  std::size_t c = 0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    switch (model.point.mode(m).kind) {
      case ModeKind::band:
      case ModeKind::above:
        if (c >= d.continuous.size()) throw ShapeError("decomposition has too few continuous amplitudes");
        a[m] = sw * d.continuous[c++];
        break;
      case ModeKind::bound: a[m] = d.bound.value_or(0.0); break;
      case ModeKind::zero: a[m] = d.zero_mode.value_or(0.0); break;
    }
  }
  return split_at_origin(model.grid, model.point.inverse(a));
}

// Parseval sum x^2 + zero^2 + sum_j w_j |u_hat_j|^2
inline double parseval_norm2(const Model& model, const SpectralDecomposition& d) {
  const double dk = pi / model.grid.r_max;
  double s = 0.0;
  for (double x : d.continuous) s += dk * x * x;
  if (d.bound) s += *d.bound * *d.bound;
  if (d.zero_mode) s += *d.zero_mode * *d.zero_mode;
  return s;
}

// g applied to the spectrum of the reduced point operator: e_m -> g(mu_m) e_m.
inline ChargedField functional_calculus(const Model& model, const std::function<double(double)>& g,
                                        const ChargedField& f) {
  require_same_grid(model.grid, f.grid());
  auto a = model.point.forward(f.full_profile());
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] == 0.0) continue;
    const double v = g(model.point.mode(m).mu);
    if (!std::isfinite(v))
      throw DomainError("functional calculus: multiplier not finite at spectral value " +
                        std::to_string(model.point.mode(m).mu));
    a[m] *= v;
  }
  return split_at_origin(model.grid, model.point.inverse(a));
}

// Reduced discrete G_lambda normalized to 1 at the origin: the decaying solution of
// the homogeneous interior equation (-D^2 + lambda) g = 0 with the Neumann end row.
inline std::vector<double> lattice_g_lambda(const RadialGrid& g, double lambda) {
  const double h = g.h();
  const int n = g.n_r;
  const double eta = 2.0 * std::asinh(0.5 * h * std::sqrt(lambda));
  const double norm = 1.0 + std::exp(-2.0 * eta * n);
  std::vector<double> v(g.size());
  for (int j = 0; j <= n; ++j) v[j] = (std::exp(-eta * j) + std::exp(-eta * (2 * n - j))) / norm;
  return v;
}

// lattice analogue of sqrt(lambda) in the Krein coefficient alpha + sqrt(lambda)/(4 pi)
inline double lattice_sqrt_lambda(const RadialGrid& g, double lambda) {
  const auto v = lattice_g_lambda(g, lambda);
  const double h = g.h();
  return (1.0 - v[1]) / h + 0.5 * h * lambda;
}

// (-Delta_alpha + lambda)^{-1} f as the free Dirichlet resolvent plus the
// rank-one Krein term <G_lambda, f> G_lambda / (alpha + sqrt(lambda)/(4 pi)).
inline ChargedField resolvent_apply(const Model& model, double lambda, const ChargedField& f) {
  if (!(lambda > 0.0)) throw InvalidParameter("resolvent: lambda must be > 0");
  require_same_grid(model.grid, f.grid());
  const RadialGrid& g = model.grid;
  const double s = lattice_sqrt_lambda(g, lambda);
  const double denom = model.coupling.alpha + s / (4.0 * pi);
  if (std::abs(denom) < 1e-12) throw SingularResolvent("resolvent: lambda at the bound-state pole");

  const auto u = f.full_profile();
  auto a = model.free.forward(u);
  for (std::size_t m = 0; m < a.size(); ++m) a[m] /= model.free.mode(m).mu + lambda;
  auto out = model.free.inverse(a);

  // G_lambda reduced profile is lattice_g_lambda / sqrt(4 pi)
  auto gl = lattice_g_lambda(g, lambda);
  for (double& x : gl) x /= sqrt_4pi;
  const double pairing = l2(gl, u, g.h());
  const double coef = pairing / denom;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += coef * gl[j];
  return split_at_origin(g, std::move(out));
}

} // namespace pointwave
