#include <gtest/gtest.h>

#include <cmath>

#include "pointwave/scattering.hpp"
#include "support.hpp"

using namespace pointwave;
using namespace testing_support;

namespace {

constexpr double four_pi = 4.0 * pi;

const Model& model_for(double alpha) {
  static const Model neg = make_model(make_coupling(-1.0 / four_pi), make_grid(60.0, 1200));
  static const Model zero = make_model(make_coupling(0.0), make_grid(60.0, 1200));
  static const Model pos = make_model(make_coupling(1.0 / four_pi), make_grid(60.0, 1200));
  static const Model one = make_model(make_coupling(1.0), make_grid(60.0, 1200));
  if (alpha < 0) return neg;
  if (alpha == 0) return zero;
  return alpha < 0.5 ? pos : one;
}

const double alphas[] = {-1.0 / four_pi, 0.0, 1.0 / four_pi, 1.0};

} // namespace

TEST(Identify, SimpleMapStripsCharge) {
  const auto& m = model_for(0.0);
  const PhaseState g(ChargedField(ReducedField(m.grid), 1.0), ChargedField(m.grid));
  EXPECT_EQ(l2_state_norm(identify(m, Identification::J_simple, g)), 0.0);
  EXPECT_EQ(l2_state_norm(difference(identify(m, Identification::J_simple_prime, g), g)), 0.0);
}

TEST(Identify, PrimedMapInvertsOnAcStates) {
  for (double alpha : {-1.0 / four_pi, 1.0 / four_pi, 1.0}) {
    const auto& m = model_for(alpha);
    const auto s = project_ac(m, position_bump(m.grid, 10.0, 1.0));
    const auto back = identify(m, Identification::J_alpha_prime, identify(m, Identification::J_alpha, s));
    EXPECT_LT(ac_norm(m, difference(back, s)), 1e-3 * ac_norm(m, s)) << alpha;
  }
}

TEST(Identify, ApproachesIdentityInTheFreeLimit) {
  const auto g = make_grid(30.0, 600);
  double last = INFINITY;
  for (double alpha : {1.0, 10.0, 100.0}) {
    const auto m = make_model(make_coupling(alpha), g);
    const auto s = PhaseState(bump_field(g, 8.0, 1.0, 1.0), bump_field(g, 9.0, 1.0, 0.5));
    const double gap = free_norm(difference(identify(m, Identification::J_alpha, s), s)) / free_norm(s);
    EXPECT_LT(gap, last) << alpha;
    last = gap;
  }
}

TEST(MollerTime, SuccessiveIncrementsShrink) {
  const auto& m = model_for(1.0);
  const auto s = position_bump(m.grid, 3.0, 0.5);
  const auto [out, rep] = moller_time(m, Direction::plus, {5.0, 10.0, 20.0}, s);
  ASSERT_EQ(rep.increments.size(), 2u);
  EXPECT_LT(rep.increments[1], rep.increments[0]);
  EXPECT_LT(rep.isometry_defect, 1e-6);
  for (double d : rep.defects) EXPECT_GE(d, 0.0);
  EXPECT_LT(rep.defects.back(), rep.defects.front());
}

TEST(MollerTime, BoundStateHasNoScatteringPart) {
  const auto& m = model_for(-1.0);
  const auto e = m.bound_vector();
  const PhaseState s(split_at_origin(m.grid, std::vector<double>(e.begin(), e.end())), ChargedField(m.grid));
  const auto [out, rep] = moller_time(m, Direction::minus, {5.0}, s);
  EXPECT_LT(free_norm(out), 1e-10);
}

TEST(MollerTime, RefusesScheduleOutsideLightCone) {
  const auto& m = model_for(1.0);
  const auto s = position_bump(m.grid, 10.0, 1.0);
  try {
    moller_time(m, Direction::plus, {5.0, 40.0}, s);
    FAIL() << "expected refusal";
  } catch (const InvalidParameter& e) {
    EXPECT_NE(std::string(e.what()).find("r_max >="), std::string::npos);
  }
  EXPECT_THROW(moller_time(m, Direction::plus, {10.0, 5.0}, s), InvalidParameter);
  EXPECT_THROW(moller_time(m, Direction::plus, {}, s), InvalidParameter);
}

TEST(MollerStationary, IsometryAndIntertwining) {
  for (double alpha : alphas) {
    const auto& m = model_for(alpha);
    const std::vector<PhaseState> samples{position_bump(m.grid, 10.0, 1.0),
                                          PhaseState(ChargedField(m.grid), bump_field(m.grid, 12.0, 1.5, 0.7))};
    const auto rep = verify_scattering(m, samples, {});
    EXPECT_LT(rep.isometry, 1e-6) << alpha;
    EXPECT_LT(rep.adjoint_pairing, 1e-6) << alpha;
    // truncation-limited; at alpha = 0 the ac projection leaves a constant velocity tail up to r_max
    EXPECT_LT(rep.intertwining, alpha == 0.0 ? 1e-2 : 1e-4) << alpha;
  }
}

TEST(MollerStationary, AdjointIdentityImprovesWithBoxSize) {
  // Omega^* Omega = P_ac holds up to a truncation error of the synthesis functions
  double last = INFINITY;
  for (double r_max : {30.0, 60.0}) {
    const auto m = make_model(make_coupling(1.0 / four_pi), make_grid(r_max, static_cast<int>(r_max / 0.05)));
    const auto rep = verify_scattering(m, {position_bump(m.grid, 10.0, 1.0)}, {});
    EXPECT_LT(rep.adjoint_identity, 0.5 * last);
    last = rep.adjoint_identity;
  }
  EXPECT_LT(last, 1e-2);
}

TEST(MollerStationary, FreeLimitIsBasisChange) {
  const auto g = make_grid(30.0, 600);
  const auto m = make_model(make_coupling(1e6), g);
  const auto s = PhaseState(bump_field(g, 8.0, 1.0, 1.0), ChargedField(g));
  const auto a = moller_stationary(m, Direction::plus, s);
  const auto b = identify(m, Identification::J_alpha, s);
  EXPECT_LT(free_norm(difference(a, b)), 1e-4 * free_norm(s));
}

TEST(MollerStationary, PastAndFutureDiffer) {
  const auto& m = model_for(1.0 / four_pi);
  const auto s = position_bump(m.grid, 10.0, 1.0);
  const auto plus = moller_stationary(m, Direction::plus, s);
  const auto minus = moller_stationary(m, Direction::minus, s);
  const auto c = m.point.forward(detail::c_map_in(m.point, s).w);
  double bound2 = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const Mode& md = m.point.mode(p);
    if (md.kind == ModeKind::band) bound2 += std::pow(2.0 * std::sin(md.phase) * std::abs(c[p]), 2);
  }
  EXPECT_GT(free_norm(difference(plus, minus)), 0.9 * std::sqrt(bound2));
}

TEST(MollerStationary, AgreesWithTimeLimit) {
  const auto& m = model_for(1.0 / four_pi);
  const auto s = position_bump(m.grid, 10.0, 1.0);
  for (Direction d : {Direction::plus, Direction::minus}) {
    const auto [out, rep] = moller_time(m, d, {5.0, 10.0, 20.0}, s);
    EXPECT_LT(rep.defects[2], rep.defects[1]);
    EXPECT_LT(rep.defects[1], rep.defects[0]);
    EXPECT_LT(rep.defects.back(), 5e-3 * ac_norm(m, s));
    EXPECT_LT(rep.intertwining_defect, 1e-5 * ac_norm(m, s));
  }
}

TEST(VerifyScattering, EquivalenceDecaysForBumpNearOrigin) {
  const auto& m = model_for(1.0);
  const auto s = position_bump(m.grid, 3.0, 0.5);
  const auto rep = verify_scattering(m, {s}, {5.0, 10.0, 20.0});
  ASSERT_EQ(rep.equivalence.size(), 3u);
  EXPECT_LT(rep.equivalence[1], rep.equivalence[0]);
  EXPECT_LT(rep.equivalence[2], rep.equivalence[1]);
}
