#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "lipfill/harness.hpp"

namespace lipfill {
namespace {

FixtureSpec spec(Generator g, std::vector<int> p, int refine = 8, ZRule rule = ZRule::Default) {
  FixtureSpec s;
  s.name = "f";
  s.generator = g;
  s.params = std::move(p);
  s.refine = refine;
  s.z_rule = rule;
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidInput;
}

TEST(FitConstant, EqualSidesGiveOne) {
  const auto f = fit_constant("t", {{2.0, 4.0, 4.0}, {1.0, 1.0, 1.0}, {0.5, 0.25, 0.25}});
  EXPECT_DOUBLE_EQ(f.c, 1.0);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);  // lhs = rhs = eps^2
  EXPECT_DOUBLE_EQ(f.drift, 0.0);
}

TEST(FitConstant, DoubleOfEpsilon) {
  const auto f = fit_constant("t", {{1.0, 2.0, 1.0}, {0.5, 1.0, 0.5}, {0.25, 0.5, 0.25}});
  EXPECT_DOUBLE_EQ(f.c, 2.0);
  EXPECT_NEAR(f.slope, 1.0, 1e-12);
  EXPECT_TRUE(f.stable());
}

TEST(FitConstant, DriftAndZeroSamples) {
  const auto f = fit_constant("t", {{1.0, 4.0, 1.0}, {0.5, 1.0, 1.0}, {0.25, 0.0, 1.0}});
  EXPECT_DOUBLE_EQ(f.c, 4.0);
  EXPECT_DOUBLE_EQ(f.drift, 0.75);
  EXPECT_FALSE(f.stable());
  EXPECT_TRUE(std::isnan(f.slope));
}

TEST(FitConstant, DegenerateSamples) {
  EXPECT_EQ(code_of([] { fit_constant("t", {{1.0, 1.0, 1.0}, {0.5, 1.0, 1.0}}); }), ErrorCode::DegenerateSamples);
  EXPECT_EQ(code_of([] { fit_constant("t", {{1.0, 1.0, 1.0}, {0.5, 1.0, 0.0}, {0.25, 1.0, 1.0}}); }),
            ErrorCode::DegenerateSamples);
}

TEST(Fixture, PathIsCutAndZIsAPrefix) {
  const auto f = build_fixture(spec(Generator::Path, {5}));
  EXPECT_EQ(f.space.vertex_count(), 5 + 4 * 7);
  EXPECT_DOUBLE_EQ(f.space.max_edge_weight(), 0.125);
  EXPECT_EQ(f.z.members.size(), 3u + 2 * 7);
  EXPECT_DOUBLE_EQ(f.space.dist(0, 4), 4.0);
  ASSERT_EQ(f.cycles.size(), 1u);  // pair:0,2
  EXPECT_EQ(augmentation(f.cycles[0].chain), 0);
}

TEST(Fixture, GridIsAFullLattice) {
  const auto f = build_fixture(spec(Generator::Grid, {5, 5}));
  EXPECT_EQ(f.space.vertex_count(), 33 * 33);
  EXPECT_EQ(f.z.members.size(), 33u * 17);
  EXPECT_EQ(f.logical[24], 33 * 33 - 1);
  ASSERT_EQ(f.cycles.size(), 2u);
  const auto& loop = f.cycles[0];
  EXPECT_EQ(loop.rule, "loop:1,0,3,2");
  EXPECT_TRUE(boundary(loop.chain).empty());
  EXPECT_EQ(loop.chain.terms().size(), 8u * 8);
  EXPECT_FALSE(loop.expect_hypothesis_failure);
}

TEST(Fixture, HoleIsCutFromZOnly) {
  auto s = spec(Generator::GridWithHole, {9, 9, 3}, 2);
  const auto f = build_fixture(s);
  EXPECT_EQ(f.space.vertex_count(), 17 * 17);
  EXPECT_EQ(f.z.members.size(), 17u * 17 - 25);
  ASSERT_EQ(f.cycles.size(), 3u);
  EXPECT_TRUE(f.cycles[2].expect_hypothesis_failure);
  s.z_rule = ZRule::All;
  s.cycles = {"hole-boundary"};
  EXPECT_FALSE(build_fixture(s).cycles[0].expect_hypothesis_failure);
}

TEST(Fixture, BoundaryRuleKeepsBothRings) {
  const auto f = build_fixture(spec(Generator::GridWithHole, {9, 9, 3}, 1, ZRule::Boundary));
  EXPECT_EQ(f.z.members.size(), 32u + 12);
}

TEST(Fixture, TreeAndRing) {
  const auto t = build_fixture(spec(Generator::Tree, {3, 3}, 2));
  EXPECT_EQ(t.space.vertex_count(), 40 + 39);
  auto s = spec(Generator::Cycle, {6}, 2, ZRule::All);
  s.cycles = {"ring"};
  const auto c = build_fixture(s);
  EXPECT_TRUE(c.cycles[0].expect_hypothesis_failure);
  EXPECT_EQ(c.cycles[0].chain.terms().size(), 12u);
}

TEST(Fixture, BadSpecsAreInvalid) {
  EXPECT_EQ(code_of([] { build_fixture(spec(Generator::Grid, {5})); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { build_fixture(spec(Generator::Path, {0})); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { build_fixture(spec(Generator::Cycle, {6}, 2, ZRule::Leaves)); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { build_fixture(spec(Generator::Path, {6}, 2, ZRule::Boundary)); }), ErrorCode::InvalidInput);
  auto s = spec(Generator::Grid, {5, 5}, 2);
  s.cycles = {"loop:0,0,9,1"};
  EXPECT_EQ(code_of([&] { build_fixture(s); }), ErrorCode::InvalidInput);
  s.cycles = {"spiral"};
  EXPECT_EQ(code_of([&] { build_fixture(s); }), ErrorCode::InvalidInput);
  EXPECT_EQ(parse_generator(to_string(Generator::GridWithHole)), Generator::GridWithHole);
  EXPECT_EQ(parse_z_rule(to_string(ZRule::Leaves)), ZRule::Leaves);
}

TEST(Suite, SweepPreconditions) {
  const std::vector<FixtureSpec> f{spec(Generator::Path, {5})};
  EXPECT_EQ(code_of([&] { run_suite(f, {}); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { run_suite(f, {1.0, 2.0}); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { run_suite({}, {1.0}); }), ErrorCode::InvalidInput);
}

TEST(Suite, PathWithZEqualXPasses) {
  const auto r = run_suite({spec(Generator::Path, {5}, 8, ZRule::All)}, {2.0, 1.0, 0.5, 0.25});
  EXPECT_TRUE(r.hard_failures.empty());
  EXPECT_EQ(r.exit_code(), 0);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.error.empty()) << c.error;
    EXPECT_TRUE(c.report.identities_hold());
  }
}

TEST(Suite, ExpectedFailuresAreNotHard) {
  auto s = spec(Generator::GridWithHole, {7, 7, 3}, 4);
  s.cycles = {"hole-boundary"};
  const auto r = run_suite({s}, {1.0, 0.5});
  EXPECT_TRUE(r.hard_failures.empty());
  for (const auto& c : r.cases) EXPECT_TRUE(c.hypothesis_failure) << c.error;
}

TEST(Suite, ReportsAreDeterministic) {
  auto s = spec(Generator::Grid, {5, 5}, 4);
  const std::vector<double> sweep{2.0, 1.0, 0.5};
  const auto a = run_suite({s}, sweep);
  const auto b = run_suite({s}, sweep);
  EXPECT_EQ(suite_json(a), suite_json(b));
  EXPECT_EQ(suite_csv(a), suite_csv(b));
  EXPECT_TRUE(a.hard_failures.empty());
  EXPECT_EQ(a.fits.size(), 2u);
}

}  // namespace
}  // namespace lipfill
