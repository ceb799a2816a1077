#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nlus/relaxation.hpp"

using namespace nlus;

namespace {

SpringModel polyline(double n) { return SpringModel::make(1.0, 1.0, 2.0, 1.0, DissipationFamily::RelaxPolyline, n); }
SpringModel exp_model(double n) { return SpringModel::make(1.0, 1.0, 2.0, 1.0, DissipationFamily::RelaxExp, n); }

}  // namespace

TEST(SpringModel, W0FixedByGeometry) {
  const auto s = SpringModel::make(3.0, 1.0, 2.5, 1.0, DissipationFamily::RelaxExp, 2.0);
  EXPECT_DOUBLE_EQ(s.dissipation().W0(), 0.5 * 3.0 * 1.5 * 1.5);
  EXPECT_THROW(SpringModel(1.0, 1.0, 2.0, 1.0, DissipationLaw::relax_exp(0.6, 1.0)), DomainError);
  EXPECT_THROW(SpringModel::make(1.0, 2.0, 1.0, 1.0, DissipationFamily::RelaxExp, 1.0), DomainError);
  EXPECT_THROW(SpringModel::make(1.0, 1.0, 2.0, 1.0, DissipationFamily::Power, 1.0), DomainError);
}

TEST(Relaxation, UndamagedStateIsInitialLength) {
  for (const auto& s : {polyline(0.5), exp_model(2.0)}) {
    EXPECT_EQ(solve_x0(s, 0.0), 1.0);
    EXPECT_EQ(spring_force(s, 0.0), s.initial_force());
  }
}

TEST(Relaxation, PolylineTerminatesAtHeldPosition) {
  for (double n : {0.25, 0.5, 0.75}) {
    const auto s = polyline(n);
    EXPECT_NEAR(solve_x0(s, 1.0) / s.x0_initial(), 2.0, 1e-12) << n;
    EXPECT_EQ(spring_force(s, 1.0), 0.0);
    EXPECT_EQ(closed_form_x0(s, 1.0), 2.0);
  }
}

TEST(Relaxation, ExpApproachesHeldPositionOnlyAsymptotically) {
  const auto s = exp_model(2.0);
  for (double g : {0.5, 0.8, 0.9}) EXPECT_GT(s.x_m() - solve_x0(s, g), 0.0) << g;
  EXPECT_NEAR(solve_x0(s, 0.99), 2.0, 1e-12);
}

// Independent oracle: the balance solved for the gap by hand.
double balance_x0(double n, bool exp_family, double g) {
  const double f = exp_family ? 1.0 - std::exp(-n * g / (1.0 - g)) : (std::pow(g, n) - n * g) / (1.0 - n);
  return 2.0 - std::sqrt((1.0 - f) / (1.0 - g));
}

TEST(Relaxation, WorkedValues) {
  EXPECT_NEAR(solve_x0(polyline(0.5), 0.5), balance_x0(0.5, false, 0.5), 1e-14);
  EXPECT_NEAR(solve_x0(polyline(0.5), 0.5), 1.5857864376269049, 1e-14);
  const auto s = exp_model(1.0);
  EXPECT_NEAR(solve_x0(s, 0.5), 1.1422361150392932, 1e-14);
  EXPECT_NEAR(spring_force(s, 0.5) / s.initial_force(), 0.42888194248035338, 1e-14);
}

TEST(Relaxation, TabulatedClosedForms) {
  EXPECT_NEAR(closed_form_x0(polyline(0.5), 0.5), 1.70711, 1e-5);
  EXPECT_NEAR(closed_form_x0(exp_model(1.0), 0.5), 1.63212, 1e-5);
  EXPECT_EQ(closed_form_x0(exp_model(2.0), 0.0), 1.0);
  EXPECT_THROW(closed_form_x0(SpringModel(1.0, 1.0, 2.0, 1.0, DissipationLaw::power(0.5, 2.0)), 0.5), DomainError);
  // endpoints are the only points where they satisfy the balance
  for (double n : {0.25, 0.5, 0.75}) {
    EXPECT_EQ(closed_form_x0(polyline(n), 0.0), solve_x0(polyline(n), 0.0));
    EXPECT_EQ(closed_form_x0(polyline(n), 1.0), solve_x0(polyline(n), 1.0));
  }
}

TEST(Relaxation, NumericRootsMatchOracle) {
  const auto grid = uniform_grid(0.0, 1.0, 100);
  for (double n : {0.25, 0.5, 0.75})
    for (double g : grid) {
      const double ref = g == 1.0 ? 2.0 : balance_x0(n, false, g);
      EXPECT_NEAR(solve_x0(polyline(n), g, RootMethod::Bisection), ref, 1e-10 * ref);
      EXPECT_NEAR(solve_x0(polyline(n), g, RootMethod::Direct), ref, 1e-10 * ref);
    }
  for (double n : {1.0, 2.0, 4.0})
    for (double g : grid) {
      const double ref = g == 1.0 ? 2.0 : balance_x0(n, true, g);
      EXPECT_NEAR(solve_x0(exp_model(n), g, RootMethod::Bisection), ref, 1e-10 * ref);
      EXPECT_NEAR(solve_x0(exp_model(n), g, RootMethod::Direct), ref, 1e-10 * ref);
    }
}

TEST(Relaxation, EnergyBalanceAlongTrace) {
  const auto grid = uniform_grid(0.0, 1.0, 100);
  for (const auto& s : {polyline(0.25), polyline(0.75), exp_model(1.0), exp_model(4.0)}) {
    const auto tr = relaxation_sweep(s, grid);
    ASSERT_EQ(tr.size(), 101u);
    for (const auto& r : tr) EXPECT_LT(energy_balance_residual(s, r), 1e-10);
  }
}

TEST(Relaxation, MonotoneRelaxation) {
  const auto grid = uniform_grid(0.0, 1.0, 100);
  for (const auto& s : {polyline(0.25), polyline(0.5), polyline(0.75), exp_model(1.0), exp_model(2.0)}) {
    const auto tr = relaxation_sweep(s, grid);
    EXPECT_EQ(tr.front().x0, 1.0);
    EXPECT_NEAR(tr.back().x0, 2.0, 1e-12);
    for (std::size_t i = 1; i < tr.size(); ++i) {
      EXPECT_GE(tr[i].x0, tr[i - 1].x0);
      EXPECT_LE(tr[i].force, tr[i - 1].force);
    }
  }
}

TEST(Relaxation, LargerExponentRelaxesFaster) {
  const auto grid = uniform_grid(0.0, 1.0, 100);
  const auto f1 = relaxation_sweep(exp_model(1.0), grid);
  const auto f2 = relaxation_sweep(exp_model(2.0), grid);
  const auto f4 = relaxation_sweep(exp_model(4.0), grid);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (f4[i].force == 0.0) continue;  // underflowed near the end
    EXPECT_GT(f1[i].force, f2[i].force) << grid[i];
    EXPECT_GT(f2[i].force, f4[i].force) << grid[i];
  }
}

TEST(Relaxation, DissipationBeyondStoredEnergyIsInfeasible) {
  // this law dissipates more than W0 well before full damage
  const SpringModel s(1.0, 1.0, 2.0, 1.0, DissipationLaw::arctanh_log(0.5));
  EXPECT_NO_THROW(solve_x0(s, 0.1));
  EXPECT_THROW(solve_x0(s, 0.9), InfeasibleError);
  EXPECT_THROW(solve_x0(s, 0.9, RootMethod::Bisection), InfeasibleError);
}

TEST(Relaxation, RejectsBadGrids) {
  const auto s = polyline(0.5);
  const std::vector<double> unsorted{0.0, 0.5, 0.4};
  EXPECT_THROW(relaxation_sweep(s, unsorted), DomainError);
  EXPECT_THROW(solve_x0(s, 1.5), DomainError);
  EXPECT_THROW(closed_form_x0(s, -0.1), DomainError);
}
