#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pointwave/oracle.hpp"
#include "support.hpp"

using namespace pointwave;
using namespace testing_support;

namespace {

constexpr double four_pi = 4.0 * pi;

double lowest(double alpha, int n_r) { return oracle::build(make_coupling(alpha), make_grid(40.0, n_r)).values.front(); }

} // namespace

TEST(OracleBuild, BoundEigenvalueConvergesQuadratically) {
  const double e1 = std::abs(lowest(-1.0 / four_pi, 500) + 1.0);
  const double e2 = std::abs(lowest(-1.0 / four_pi, 1000) + 1.0);
  const double e3 = std::abs(lowest(-1.0 / four_pi, 2000) + 1.0);
  EXPECT_LT(e3, 1e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
  EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.3);
}

TEST(OracleBuild, SpectrumSignsPerRegime) {
  const auto g = make_grid(20.0, 400);
  const auto neg = oracle::build(make_coupling(-1.0 / four_pi), g);
  EXPECT_LT(neg.values[0], -0.9);
  EXPECT_GE(neg.values[1], -1e-10);
  const auto zero = oracle::build(make_coupling(0.0), g);
  EXPECT_NEAR(zero.values[0], 0.0, 1e-9);
  const auto one = oracle::build(make_coupling(1.0), g);
  EXPECT_GT(one.values[0], 0.0);
  for (std::size_t m = 1; m < one.values.size(); ++m) EXPECT_GE(one.values[m], one.values[m - 1]);
  EXPECT_THROW(oracle::build(make_coupling(1.0), make_grid(1.0, 8)), InvalidParameter);
}

TEST(OracleBuild, VectorsAreEigenvectors) {
  const auto g = make_grid(20.0, 200);
  const auto op = oracle::build(make_coupling(1.0 / four_pi), g);
  for (std::size_t m : {0u, 50u, 199u}) {
    std::vector<double> e(op.vector(m), op.vector(m) + op.size());
    const auto ae = op.apply(e);
    double worst = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) worst = std::max(worst, std::abs(ae[j] - op.values[m] * e[j]));
    EXPECT_LT(worst, 1e-8 * std::abs(op.values.back()));
    EXPECT_NEAR(l2(e, e, g.h()), 1.0, 1e-10);
  }
}

TEST(OraclePropagate, IdentityAndEnergy) {
  const auto g = make_grid(30.0, 600);
  const auto op = oracle::build(make_coupling(1.0), g);
  const PhaseState s(bump_field(g, 8.0, 1.0, 1.0), bump_field(g, 10.0, 1.0, 0.5));
  const auto same = oracle::oracle_propagate(op, 0.0, s);
  EXPECT_LT(max_abs_diff(same.position.full_profile(), s.position.full_profile()), 1e-12);
  EXPECT_LT(max_abs_diff(same.velocity.full_profile(), s.velocity.full_profile()), 1e-12);
  const double e0 = oracle::oracle_energy(op, s);
  for (double t : {2.0, 7.0}) EXPECT_NEAR(oracle::oracle_energy(op, oracle::oracle_propagate(op, t, s)), e0, 1e-10 * e0);
}

TEST(OraclePropagate, EigenvectorGrowthRate) {
  const auto g = make_grid(30.0, 600);
  const auto op = oracle::build(make_coupling(-1.0 / four_pi), g);
  std::vector<double> e(op.vector(0), op.vector(0) + op.size());
  const PhaseState s(split_at_origin(g, e), ChargedField(g));
  auto amp = [&](double t) { return l2(oracle::oracle_propagate(op, t, s).position.full_profile(), e, g.h()); };
  const double rate = std::log(amp(6.0) / amp(5.0));
  EXPECT_NEAR(rate, std::sqrt(-op.values[0]), 1e-4);
  EXPECT_NEAR(rate, 1.0, 1e-3);
}

TEST(OracleResolvent, InvertsShiftedMatrix) {
  const auto g = make_grid(20.0, 400);
  const auto op = oracle::build(make_coupling(1.0 / four_pi), g);
  const auto f = bump_field(g, 5.0, 1.0, 1.0);
  auto af = op.apply(f.full_profile());
  const auto u = f.full_profile();
  for (std::size_t j = 0; j < af.size(); ++j) af[j] += 2.0 * u[j];
  const auto back = oracle::oracle_resolvent(op, 2.0, split_at_origin(g, af)).full_profile();
  EXPECT_LT(max_abs_diff(back, u), 1e-10);
  EXPECT_THROW(oracle::oracle_resolvent(op, -op.values[3], f), SingularResolvent);
}

TEST(OracleSpectrum, SortedPairs) {
  const auto op = oracle::build(make_coupling(0.0), make_grid(10.0, 64));
  const auto sp = oracle::oracle_spectrum(op);
  ASSERT_EQ(sp.size(), op.size());
  for (std::size_t m = 1; m < sp.size(); ++m) EXPECT_LE(sp[m - 1].value, sp[m].value);
}

TEST(Krein, ResolventDifferenceHasRankOne) {
  const auto g = make_grid(20.0, 300);
  for (double alpha : {-1.0 / four_pi, 1.0 / four_pi, 1.0})
    for (double lambda : {1.0, 4.0}) EXPECT_LE(oracle::krein_rank_ratio(make_coupling(alpha), g, lambda), 1e-8);
}

TEST(Krein, FrobeniusBoundDominatesSecondSingularValue) {
  const auto g = make_grid(20.0, 300);
  const auto c = make_coupling(1.0 / four_pi);
  const double ratio = oracle::krein_rank_ratio(c, g, 1.0);
  const double bound = oracle::krein_rank_bound(c, g, 1.0);
  EXPECT_GE(bound, ratio);
  EXPECT_LE(bound, 1e-8);
}

TEST(FitPhase, RecoversSyntheticPhase) {
  const auto g = make_grid(40.0, 2000);
  std::vector<double> u(g.size());
  for (int j = 0; j <= g.n_r; ++j) u[j] = -2.0 * std::sin(1.3 * g.r(j) + 0.4);
  EXPECT_NEAR(oracle::fit_phase(g, u.data(), 1.3, 5.0, 35.0), 0.4, 1e-12);
  EXPECT_NEAR(oracle::lattice_wavenumber(g, 4.0 * std::pow(std::sin(0.5 * 0.02 * 1.3), 2) / (0.02 * 0.02)), 1.3, 1e-12);
}
