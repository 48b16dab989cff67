#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pointwave/radial.hpp"

namespace testing_support {

using namespace pointwave;

inline ChargedField bump_field(const RadialGrid& g, double center, double width, double amplitude) {
  std::vector<double> u(g.size());
  for (int i = 0; i <= g.n_r; ++i) {
    const double r = g.r(i);
    u[i] = amplitude * r * std::exp(-(r - center) * (r - center) / (width * width));
  }
  return split_at_origin(g, std::move(u));
}

inline PhaseState position_bump(const RadialGrid& g, double center, double width, double amplitude = 1.0) {
  return PhaseState(bump_field(g, center, width, amplitude), ChargedField(g));
}

// Smooth profile with a Coulomb part q G_1 plus a few random bumps in [2, 12].
inline std::vector<double> random_profile(const RadialGrid& g, std::mt19937_64& rng, double q) {
  std::uniform_real_distribution<double> center(2.0, 12.0), width(0.8, 2.0);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::vector<double> u(g.size(), 0.0);
  for (int b = 0; b < 3; ++b) {
    const double c = center(rng), w = width(rng), a = amp(rng);
    for (int i = 0; i <= g.n_r; ++i) {
      const double r = g.r(i);
      u[i] += a * std::exp(-(r - c) * (r - c) / (w * w));
    }
  }
  for (int i = 0; i <= g.n_r; ++i) u[i] += q * std::exp(-g.r(i)) / std::sqrt(4.0 * pi);
  return u;
}

inline std::vector<PhaseState> random_states(const RadialGrid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> charge(0.0, 1.0);
  std::vector<PhaseState> out;
  for (int n = 0; n < count; ++n) {
    auto u = random_profile(g, rng, charge(rng));
    auto v = random_profile(g, rng, charge(rng));
    out.emplace_back(split_at_origin(g, std::move(u)), split_at_origin(g, std::move(v)));
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b, double h) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return std::sqrt(l2(d, d, h) / l2(b, b, h));
}

} // namespace testing_support
