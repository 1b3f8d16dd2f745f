#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "swb/diagnostics.hpp"

using namespace swb;

TEST(Criterion, Branches) {
  EXPECT_TRUE(criterion_left(0.018, 0.01));
  EXPECT_FALSE(criterion_left(0.005, 0.01));
  EXPECT_TRUE(criterion_left(0.01, 0.01));  // boundary counts
  EXPECT_TRUE(criterion_left(0.0, 0.0));
  EXPECT_FALSE(criterion_left(0.02, -1e-3));
  EXPECT_TRUE(criterion_right(-0.018, 0.01));
  EXPECT_FALSE(criterion_right(0.018, 0.01));
  EXPECT_FALSE(criterion_right(-0.005, 0.01));
}

TEST(Criterion, SlopeThreshold) {
  // With dx = 0.1: 20% slope flags h* <= 0.02, 5% flags h* <= 0.005.
  EXPECT_TRUE(slope_violates_criterion(0.02, -0.2, 0.1));
  EXPECT_FALSE(slope_violates_criterion(0.021, -0.2, 0.1));
  EXPECT_TRUE(slope_violates_criterion(0.005, -0.05, 0.1));
  EXPECT_FALSE(slope_violates_criterion(0.0051, -0.05, 0.1));
  EXPECT_TRUE(slope_violates_criterion(4e-3, -0.05, 0.1));
}

TEST(Criterion, FirstOrderDownhillReducesToRightBranch) {
  // z decreasing: dz = alpha dx < 0, so only the right branch can fire and
  // it fires exactly when |alpha| dx >= h_+.
  const double alpha = -0.18, dx = 0.1;
  const Grid grid = build_grid(0.3, 3);
  for (double hp : {0.001, 0.017, 0.018, 0.019, 0.05}) {
    std::vector<InterfaceStates> faces(4);
    for (auto& f : faces) f = make_interface(0.03, hp, 0.0, 0.0, 0.0, alpha * dx);
    const auto r = criterion_flags(faces, grid);
    EXPECT_FALSE(r.left_branch[1]);
    EXPECT_EQ(r.right_branch[1], slope_violates_criterion(hp, alpha, dx)) << hp;
  }
}

TEST(Criterion, CellOwnership) {
  const Grid grid = build_grid(0.3, 3);
  std::vector<InterfaceStates> faces(4, make_interface(0.1, 0.1, 0, 0, 0, 0));
  faces[1] = make_interface(0.01, 0.1, 0, 0, 0.0, 0.02);   // left branch
  faces[3] = make_interface(0.1, 0.01, 0, 0, 0.02, 0.0);   // right branch at the outlet
  const auto r = criterion_flags(faces, grid);
  EXPECT_EQ(r.cell_flags, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(r.flagged_count(), 2u);
  EXPECT_DOUBLE_EQ(r.flagged_fraction, 0.5);
  ASSERT_TRUE(r.flagged_range.has_value());
  EXPECT_DOUBLE_EQ(r.flagged_range->first, 0.1);
  EXPECT_DOUBLE_EQ(r.flagged_range->second, 0.3);
  std::vector<InterfaceStates> too_few(3);
  EXPECT_THROW(criterion_flags(too_few, grid), ContractError);
}

TEST(Criterion, SteepSlopeRunIsFlaggedInRegion) {
  RunConfig c;
  c.slope = 0.18;
  const ProfileReport r = evaluate(c);
  ASSERT_TRUE(r.run.steady);
  const auto faces = problem_interfaces(r.run.state, r.problem);
  for (std::size_t k = 1; k < r.grid.n_cells; ++k) {
    EXPECT_EQ(r.criterion.flagged(k), faces[k].h_plus <= 0.018 + 1e-15) << k;
  }
  ASSERT_TRUE(r.criterion.flagged_range.has_value());
  EXPECT_LE(r.criterion.flagged_range->first, 1.5);
  EXPECT_GE(r.criterion.flagged_range->second, 3.0);
  for (std::size_t i : cells_in_region(r.grid, c.region)) EXPECT_TRUE(r.criterion.cell_flags[i]);
}

TEST(Criterion, FlagsAreReproducible) {
  RunConfig c;
  c.slope = 0.13;
  const auto a = evaluate(c), b = evaluate(c);
  EXPECT_EQ(a.criterion.cell_flags, b.criterion.cell_flags);
  EXPECT_EQ(a.run.state, b.run.state);
}

TEST(ErrorNorms, ConstantOffset) {
  const Grid grid = build_grid(1.0, 10);
  const std::vector<double> exact(10, 0.01);
  std::vector<double> computed(10, 0.011);
  const auto e = error_norms(computed, exact, grid, full_domain(grid));
  EXPECT_EQ(e.cells, 10u);
  EXPECT_NEAR(e.l1, 1e-3, 1e-15);
  EXPECT_NEAR(e.linf, 1e-3, 1e-15);
  EXPECT_NEAR(e.l2, 1e-3, 1e-15);
  EXPECT_NEAR(e.rel_l1, 0.1, 1e-12);
  EXPECT_NEAR(e.rel_linf, 0.1, 1e-12);
  EXPECT_NEAR(e.max_signed, 1e-3, 1e-15);
  EXPECT_EQ(e.overestimated, 1.0);
}

TEST(ErrorNorms, RegionSelection) {
  const Grid grid = build_grid(1.0, 10);  // centers 0.05, 0.15, ...
  std::vector<double> exact(10, 1.0), computed(10, 1.0);
  computed[0] = 3.0;
  computed[4] = 0.5;
  const auto e = error_norms(computed, exact, grid, Region{0.3, 0.6});
  EXPECT_EQ(e.cells, 3u);
  EXPECT_NEAR(e.linf, 0.5, 1e-15);
  EXPECT_NEAR(e.max_signed, 0.0, 0.0);
  EXPECT_EQ(e.overestimated, 0.0);
  EXPECT_THROW(error_norms(computed, exact, grid, Region{0.51, 0.54}), ConfigError);
  EXPECT_THROW(error_norms(std::vector<double>(9), exact, grid, full_domain(grid)),
               ContractError);
}

TEST(Refinement, FlatBedHasNoError) {
  RunConfig c;
  c.slope = 0.0;
  c.t_final = 5.0;
  const auto rows = refinement_study(c, {0.2, 0.1});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_LE(r.l1, 1e-14);
    EXPECT_EQ(r.flagged_fraction, 0.0);
  }
  EXPECT_EQ(rows[1].n_cells, 100u);
}

TEST(Refinement, InputChecks) {
  RunConfig c;
  c.slope = 0.05;
  EXPECT_EQ(refinement_study(c, {0.1}).size(), 1u);
  EXPECT_THROW(refinement_study(c, {0.1, 0.1}), ConfigError);
  EXPECT_THROW(refinement_study(c, {0.05, 0.1}), ConfigError);
  EXPECT_THROW(refinement_study(c, {}), ConfigError);
  EXPECT_THROW(cells_for_spacing(10.0, 0.3), ConfigError);
  EXPECT_EQ(cells_for_spacing(10.0, 0.0125), 800u);
}

TEST(Superposition, IdenticalSlopesCoincide) {
  RunConfig c;
  const auto r = superposition_study(c, {0.13, 0.13});
  EXPECT_EQ(r.max_pairwise(), 0.0);
  EXPECT_EQ(r.rel_linf_error[0], r.rel_linf_error[1]);
}

TEST(Superposition, RelativeDifference) {
  const std::vector<double> a{1.0, 2.0, 4.0}, b{1.0, 2.5, 5.0};
  const std::vector<std::size_t> all{0, 1, 2}, first{0};
  EXPECT_DOUBLE_EQ(max_relative_difference(a, b, all), 0.25);
  EXPECT_EQ(max_relative_difference(a, b, first), 0.0);
}
