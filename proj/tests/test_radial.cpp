#include <gtest/gtest.h>

#include <cmath>

#include "pointwave/radial.hpp"

using namespace pointwave;

namespace {

constexpr double four_pi = 4.0 * pi;

RadialGrid fine() { return make_grid(40.0, 2000); }

} // namespace

TEST(Coupling, NegativeRegimeCarriesBoundState) {
  const auto c = make_coupling(-1.0 / four_pi);
  EXPECT_EQ(c.regime, Regime::negative);
  ASSERT_TRUE(c.lambda0 && c.kappa);
  EXPECT_NEAR(*c.lambda0, 1.0, 1e-14);
  EXPECT_NEAR(*c.kappa, 1.0, 1e-14);
}

TEST(Coupling, ZeroAndPositiveHaveNoBoundState) {
  const auto z = make_coupling(0.0);
  EXPECT_EQ(z.regime, Regime::zero);
  EXPECT_FALSE(z.lambda0);
  EXPECT_FALSE(z.kappa);
  const auto p = make_coupling(1.0);
  EXPECT_EQ(p.regime, Regime::positive);
  EXPECT_FALSE(p.lambda0);
}

TEST(Coupling, RejectsNonFinite) {
  EXPECT_THROW(make_coupling(NAN), InvalidParameter);
  EXPECT_THROW(make_coupling(INFINITY), InvalidParameter);
}

TEST(Grid, RejectsBadShape) {
  EXPECT_THROW(make_grid(-1.0, 100), InvalidParameter);
  EXPECT_THROW(make_grid(10.0, 2), InvalidParameter);
}

TEST(GLambda, ZeroLambdaIsCoulombConstant) {
  const auto g = sample_g_lambda(0.0, fine());
  for (double x : g.u) EXPECT_DOUBLE_EQ(x, 1.0 / std::sqrt(four_pi));
}

TEST(GLambda, PointValue) {
  const auto grid = fine();
  const auto g = sample_g_lambda(1.0, grid);
  EXPECT_NEAR(g.u[50], std::exp(-1.0) / std::sqrt(four_pi), 1e-15);  // r = 1
}

TEST(GLambda, NormMatchesClosedForm) {
  // int_0^inf exp(-2r)/(4 pi) dr = 1/(8 pi)
  const auto g = sample_g_lambda(1.0, fine());
  EXPECT_NEAR(l2(g, g), 1.0 / (8.0 * pi), 1e-5);  // trapezoid error h^2/12 |f'(0)|
}

TEST(GLambda, RejectsNegative) { EXPECT_THROW(sample_g_lambda(-1.0, fine()), InvalidParameter); }

TEST(Coulomb, GLambdaSplitsIntoUnitCharge) {
  const auto grid = fine();
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto f = decompose_coulomb(sample_g_lambda(lambda, grid));
    const double h = grid.h();
    EXPECT_NEAR(f.charge, 1.0, 10 * h * h * lambda);
    const double want = -std::sqrt(lambda) / four_pi;
    EXPECT_NEAR(reg_origin_value(f), want, 10 * h * h * std::sqrt(lambda) * 4.0);
  }
}

TEST(Coulomb, DomainConditionForBoundProfile) {
  const auto c = make_coupling(-1.0 / four_pi);
  const auto f = decompose_coulomb(sample_g_lambda(*c.lambda0, fine()));
  EXPECT_NEAR(f.charge, 1.0, 1e-3);
  EXPECT_NEAR(reg_origin_value(f), c.alpha * f.charge, 1e-3);
}

TEST(Coulomb, SmoothBumpHasNoCharge) {
  const auto grid = fine();
  const auto bump = ReducedField::sample(grid, [](double r) { return r * r * std::exp(-(r - 5) * (r - 5)); });
  const auto f = decompose_coulomb(bump);
  EXPECT_NEAR(f.charge, 0.0, 1e-9);
  for (std::size_t i = 1; i < bump.u.size(); ++i) EXPECT_NEAR(f.regular.u[i], bump.u[i], 1e-9);
}

TEST(Coulomb, SplitAtOriginRoundTripsExactly) {
  const auto grid = make_grid(10.0, 64);
  std::vector<double> u(grid.size());
  for (int i = 0; i <= grid.n_r; ++i) u[i] = std::cos(0.3 * i) + 0.25;
  const auto f = split_at_origin(grid, u);
  const auto back = f.full_profile();
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(back[i], u[i], 4e-16);
}

TEST(LambdaRepresentation, ZeroStaysZero) {
  const auto grid = fine();
  const auto [phi, q] = to_lambda_representation(ChargedField(grid), 2.0);
  EXPECT_EQ(q, 0.0);
  for (double x : phi.u) EXPECT_EQ(x, 0.0);
}

TEST(LambdaRepresentation, GLambdaCollapsesToCoulomb) {
  const auto grid = fine();
  const double lambda = 1.0;
  // exact split: regular part G_lambda - G with unit charge
  ReducedField reg(grid);
  for (int i = 0; i <= grid.n_r; ++i) reg.u[i] = (std::exp(-grid.r(i)) - 1.0) / std::sqrt(four_pi);
  const auto [phi, q] = to_lambda_representation(ChargedField(reg, 1.0), lambda);
  EXPECT_EQ(q, 1.0);
  for (double x : phi.u) EXPECT_NEAR(x, 0.0, 1e-15);  // phi_lambda = G - G: regular part vanishes
}

TEST(LambdaRepresentation, RoundTrip) {
  const auto grid = make_grid(20.0, 400);
  const auto bump = ReducedField::sample(grid, [](double r) { return r * std::exp(-(r - 4) * (r - 4)); });
  const ChargedField f(bump, 0.7);
  const auto [phi, q] = to_lambda_representation(f, 3.0);
  const auto back = from_lambda_representation(phi, q, 3.0);
  EXPECT_EQ(back.charge, 0.7);
  for (std::size_t i = 0; i < bump.u.size(); ++i) EXPECT_NEAR(back.regular.u[i], bump.u[i], 1e-15);
  EXPECT_THROW(to_lambda_representation(f, 0.0), InvalidParameter);
}

TEST(LambdaRepresentation, BoundaryValueSatisfiesDomainCondition) {
  // phi_lambda(0) = phi_reg(0) + Q sqrt(lambda)/(4 pi) = (alpha + sqrt(lambda)/(4 pi)) Q
  const auto c = make_coupling(-1.0 / four_pi);
  const auto grid = fine();
  const auto f = decompose_coulomb(sample_g_lambda(1.0, grid));
  const double lambda = 2.25;
  const auto [phi, q] = to_lambda_representation(f, lambda);
  const double origin = reg_origin_value(ChargedField(phi, 0.0));
  EXPECT_NEAR(origin, (c.alpha + std::sqrt(lambda) / four_pi) * q, 1e-3);
}

TEST(RegOrigin, ZeroAndBump) {
  const auto grid = fine();
  EXPECT_EQ(reg_origin_value(ChargedField(grid)), 0.0);
  const double r0 = 10.0, w = 1.0;
  const auto bump = ReducedField::sample(grid, [&](double r) { return r * std::exp(-(r - r0) * (r - r0) / (w * w)); });
  // analytic phi_reg(0) = exp(-r0^2/w^2)/sqrt(4 pi), negligible
  EXPECT_NEAR(reg_origin_value(ChargedField(bump, 0.0)), std::exp(-r0 * r0) / std::sqrt(four_pi), 1e-12);
}

TEST(Inner, CoulombAgainstBoundProfile) {
  const auto c = make_coupling(-1.0 / four_pi);
  const auto grid = fine();
  const ChargedField coulomb(ReducedField(grid), 1.0);
  EXPECT_NEAR(inner(InnerKind::against_g_lambda0, coulomb, coulomb, &c), 1.0 / (four_pi * std::sqrt(*c.lambda0)), 1e-5);
  EXPECT_THROW(inner(InnerKind::against_g_lambda0, coulomb, coulomb, nullptr), InvalidParameter);
}

TEST(Inner, GradientEnergyOfRegularPart) {
  // int kappa^2 exp(-2 kappa r)/(4 pi) dr = kappa/(8 pi)
  const auto grid = fine();
  ReducedField reg(grid);
  for (int i = 0; i <= grid.n_r; ++i) reg.u[i] = (std::exp(-grid.r(i)) - 1.0) / std::sqrt(four_pi);
  const ChargedField f(reg, 1.0);
  EXPECT_NEAR(inner(InnerKind::h1_seminorm, f, f), 1.0 / (8.0 * pi), 1e-5);
}

TEST(Inner, GradientIgnoresCharge) {
  const auto grid = make_grid(10.0, 200);
  const auto bump = ReducedField::sample(grid, [](double r) { return std::sin(r) * r; });
  const ChargedField a(bump, 0.0), b(bump, 5.0);
  EXPECT_EQ(inner(InnerKind::h1_seminorm, a, a), inner(InnerKind::h1_seminorm, b, b));
}

TEST(Inner, ZeroAndGridMismatch) {
  const auto grid = make_grid(10.0, 200);
  const auto bump = ReducedField::sample(grid, [](double r) { return std::exp(-r); });
  EXPECT_EQ(inner(InnerKind::l2, ChargedField(bump, 1.0), ChargedField(grid)), 0.0);
  EXPECT_THROW(inner(InnerKind::l2, ChargedField(grid), ChargedField(make_grid(10.0, 100))), ShapeError);
}

TEST(Quadrature, ReductionPreservesNorm) {
  // phi = exp(-r^2): 3-D norm^2 = 4 pi int r^2 exp(-2 r^2) dr = (pi/2)^{3/2}
  const auto grid = make_grid(10.0, 1000);
  const auto u = ReducedField::sample(grid, [](double r) { return std::sqrt(four_pi) * r * std::exp(-r * r); });
  EXPECT_NEAR(l2(u, u), std::pow(pi / 2.0, 1.5), 1e-6);
}
