#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace mmreach;
using mmreach::testing::shared_builtin;

namespace {

OracleConfig small(int samples, std::uint64_t seed = 0) {
  OracleConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Oracle, ZeroHorizonReproducesX0) {
  const auto sys = builtin("poly3d");
  const Box X0 = Box::cube(3, -0.5, 0.5);
  const auto r = mc_reach(sys, X0, 0.0, small(200));
  ASSERT_TRUE(r.bounding_box.has_value());
  EXPECT_EQ(*r.bounding_box, X0);
  EXPECT_EQ(r.endpoints.size(), 208u);
  EXPECT_TRUE(r.exited.empty());
}

TEST(Oracle, PointInitialSetWithoutDisturbance) {
  const auto sys = builtin("abs2d");
  const auto r = mc_reach(sys, Box::point({0.3, -0.2}), 0.5, small(100));
  ASSERT_FALSE(r.endpoints.empty());
  for (const auto& p : r.endpoints) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(p[j], r.endpoints.front()[j], 1e-9);
  }
}

TEST(Oracle, DeterministicForFixedSeed) {
  const auto sys = builtin("poly3d");
  const Box X0 = Box::cube(3, -0.5, 0.5);
  const auto a = mc_reach(sys, X0, 0.5, small(300, 7));
  const auto b = mc_reach(sys, X0, 0.5, small(300, 7));
  const auto c = mc_reach(sys, X0, 0.5, small(300, 8));
  EXPECT_EQ(a.endpoints, b.endpoints);
  EXPECT_NE(a.endpoints, c.endpoints);
}

TEST(Oracle, ExitedTrajectoriesAreReported) {
  const auto sys = parse_system(R"({"n": 1, "domain": {"lower": [-10], "upper": [2]}, "field": ["x1"]})");
  const auto r = mc_reach(sys, Box({0.0}, {1.0}), 1.0, small(500));
  EXPECT_FALSE(r.exited.empty());
  EXPECT_FALSE(r.endpoints.empty());
  EXPECT_EQ(r.exited.size() + r.endpoints.size(), 502u);
  for (const auto& x0 : r.exited) EXPECT_GT(x0[0], 2.0 / std::exp(1.0) - 1e-3);
}

TEST(CheckOver, BoundingBoxAndNegativeControls) {
  const auto sys = builtin("abs2d");
  const auto r = mc_reach(sys, Box({-1, 0}, {1, 1}), 0.5, small(1000));
  const Box bb = *r.bounding_box;
  EXPECT_TRUE(check_over(bb, r.endpoints, 0.0).pass);
  const auto shrunk = check_over(bb.scaled(0.9), r.endpoints, 0.0);
  EXPECT_FALSE(shrunk.pass);
  EXPECT_GT(shrunk.outside, 0);
  const auto empty = check_over(bb, {}, 0.0);
  EXPECT_TRUE(empty.pass);
  EXPECT_TRUE(empty.vacuous);
}

TEST(CheckOver, Abs2dOverApproximationContainsOracle) {
  const auto sysp = shared_builtin("abs2d");
  const Box X0({-1, 0}, {1, 1});
  const auto over = over_approximate(*sysp, closed_form_decomp("abs2d", sysp), X0, 0.5, {});
  const auto r = mc_reach(*sysp, X0, 0.5, small(2000));
  EXPECT_TRUE(check_over(*over.box, r.endpoints, 1e-3).pass);
}

TEST(Roundtrip, ZeroHorizonAndNegativeControl) {
  const auto sysp = shared_builtin("poly3d");
  const Box X0 = Box::cube(3, -0.5, 0.5);
  EXPECT_TRUE(roundtrip_under_check(*sysp, X0.scaled(0.5), X0, 0.0, 20, small(1)).pass);
  EXPECT_FALSE(roundtrip_under_check(*sysp, X0.scaled(1.5), X0, 0.0, 20, small(1)).pass);

  const auto d = closed_form_decomp("poly3d", sysp);
  const auto under = under_approximate(*sysp, backward_special_case(d), X0, 0.5, {});
  ASSERT_TRUE(under.ok());
  const auto good = roundtrip_under_check(*sysp, *under.box, X0, 0.5, 50, small(1));
  EXPECT_TRUE(good.pass) << good.failures;
  EXPECT_LE(good.worst_roundtrip_error, 1e-6);
  const auto inflated = roundtrip_under_check(*sysp, under.box->scaled(1.5), X0, 0.5, 50, small(1));
  EXPECT_GT(inflated.failures, 0);
}

TEST(Roundtrip, ReversibilityWithoutDisturbance) {
  const auto sys = builtin("abs2d");
  const auto backward = negate_system(sys);
  const DisturbanceSignal none{std::vector<Vector>(8)};
  for (int s = 0; s < 100; ++s) {
    Rng rng(13, static_cast<std::uint64_t>(s));
    const Vector y = rng.in_box(Box::cube(2, -2, 2));
    const auto x = simulate(backward, y, none, 0.5, {});
    ASSERT_TRUE(x.has_value());
    const auto back = simulate(sys, *x, none.reversed(), 0.5, {});
    ASSERT_TRUE(back.has_value());
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR((*back)[j], y[j], 1e-6);
  }
}

TEST(Oracle, CsvHasHeaderAndRows) {
  std::ostringstream os;
  write_endpoints_csv(os, {{1.0, 2.0}, {3.0, 4.5}}, 2);
  EXPECT_EQ(os.str(), "x1,x2\n1,2\n3,4.5\n");
}

TEST(Oracle, ConfigValidation) {
  OracleConfig c;
  c.dist_segments = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(mc_reach(builtin("abs2d"), Box({0, 0}, {1, 1}), -1.0, small(1)), ConfigError);
}
