#include <gtest/gtest.h>

#include <numeric>

#include "lipfill/filling.hpp"
#include "test_support.hpp"

using namespace lipfill;
using namespace lipfill::testing;

namespace {

std::vector<VertexId> range(int lo, int hi) {
  std::vector<VertexId> v(static_cast<std::size_t>(hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

void expect_identities(const FillingReport& r) {
  EXPECT_TRUE(r.alpha_prime_cycle);
  EXPECT_TRUE(r.gamma_identity);
  EXPECT_TRUE(r.lambda_identity);
  EXPECT_TRUE(r.p_beta_identity);
  EXPECT_TRUE(r.final_identity);
  EXPECT_TRUE(r.beta_identity);
  EXPECT_TRUE(r.final_in_z);
  EXPECT_EQ(r.snap_invalid, 0);
  EXPECT_GT(r.min_bound, 0.0);
  EXPECT_GE(r.min_weight, r.min_bound - 1e-12);
}

// 17 x 17 vertices, 4 pieces per unit edge.
constexpr int kCols = 17;
constexpr double kW = 0.25;

}  // namespace

TEST(SubdivideCycle, CellsBelowDeltaAndFanBoundary) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * kCols));
  const auto alpha = rectangle_loop(kCols, 4, 4, 12, 8);
  const double delta = 0.07;
  const auto sub = subdivide_cycle(z.geodesics, alpha, delta, kW);
  EXPECT_TRUE(boundary(sub.chain).empty());
  EXPECT_TRUE(boundary(sub.coarse).empty());
  EXPECT_EQ(boundary(sub.fan), sub.chain - sub.coarse);
  for (const auto& [t, c] : sub.chain.terms()) EXPECT_LT(s.dist(t[0], t[1]), delta);
  for (const auto& [t, c] : sub.coarse.terms()) EXPECT_LT(s.dist(t[0], t[1]), kW);
  EXPECT_EQ(sub.cells, static_cast<std::int64_t>(sub.chain.size()));
  EXPECT_LE(static_cast<double>(sub.cells), sub.c_alpha * std::ceil(1.0 / delta));
  // Same point set as alpha: the total length is unchanged.
  EXPECT_NEAR(space_mass(s, sub.chain), space_mass(s, alpha), 1e-9);
}

TEST(SubdivideCycle, ZeroCyclesPassThrough) {
  const auto s = MetricSpace::build(path_edges(5));
  const auto z = carve_subset(s, range(0, 5));
  Chain<SpacePoint> a(0);
  a.add({SpacePoint::vertex(0)}, 1);
  a.add({SpacePoint::vertex(4)}, -1);
  EXPECT_EQ(subdivide_cycle(z.geodesics, a, 0.1).chain, a);
}

TEST(FillInX, SquareLoop) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto alpha = rectangle_loop(kCols, 2, 2, 10, 10);
  EXPECT_EQ(boundary(fill_in_X(s, alpha, kW)), alpha);
}

TEST(FillInZ, SquareLoopWithZTheWholeGrid) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * kCols));
  const auto res = fill_in_Z(s, z, rectangle_loop(kCols, 4, 4, 12, 12), 0.5);
  expect_identities(res.report);
  EXPECT_GT(res.report.masses.gamma, 0.0);
  EXPECT_GT(res.report.masses.final_chain, 0.0);
  EXPECT_LE(res.report.partition_defect, 1e-9);
}

TEST(FillInZ, LoopInLowerHalf) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * 9));
  const auto res = fill_in_Z(s, z, rectangle_loop(kCols, 2, 2, 10, 6), 0.5);
  expect_identities(res.report);
}

TEST(FillInZ, ZeroCycleOnPath) {
  const auto s = MetricSpace::build(path_edges(41, kW));
  const auto z = carve_subset(s, range(0, 31));
  Chain<SpacePoint> a(0);
  a.add({SpacePoint::vertex(5)}, 1);
  a.add({SpacePoint::vertex(25)}, -1);
  const auto res = fill_in_Z(s, z, a, 0.5);
  expect_identities(res.report);
  // Everything stays in Z, and the shortest filling there has length 5.
  EXPECT_GE(res.report.masses.final_chain, 5.0 - 1e-9);
}

TEST(FillInZ, EmptyCycleGivesEmptyFilling) {
  const auto s = MetricSpace::build(path_edges(9, kW));
  const auto z = carve_subset(s, range(0, 9));
  const auto res = fill_in_Z(s, z, Chain<SpacePoint>(1), 0.5);
  EXPECT_TRUE(res.final_chain.empty());
  EXPECT_DOUBLE_EQ(res.report.masses.final_chain, 0.0);
}

TEST(FillInZ, RejectsBadInput) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * 5));
  auto code_of = [&](const Chain<SpacePoint>& a) {
    try {
      fill_in_Z(s, z, a, 0.5);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;  // unreachable in these cases
  };
  EXPECT_EQ(code_of(rectangle_loop(kCols, 2, 2, 10, 10)), ErrorCode::InvalidInput);
  Chain<SpacePoint> open(1);
  open.add({SpacePoint::vertex(0), SpacePoint::vertex(1)}, 1);
  EXPECT_EQ(code_of(open), ErrorCode::NotACycle);
  EXPECT_EQ(code_of(Chain<SpacePoint>::simplex({SpacePoint::vertex(0), SpacePoint::vertex(1), SpacePoint::vertex(17)})),
            ErrorCode::InvalidInput);
}

TEST(FillInZ, LoopAroundAHoleIsAHypothesisFailure) {
  // Z misses the open block (6,6)-(10,10); the loop goes around it.
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  std::vector<VertexId> zs;
  for (int y = 0; y < kCols; ++y)
    for (int x = 0; x < kCols; ++x)
      if (!(x > 6 && x < 10 && y > 6 && y < 10)) zs.push_back(y * kCols + x);
  const auto z = carve_subset(s, zs);
  try {
    fill_in_Z(s, z, rectangle_loop(kCols, 4, 4, 12, 12), 0.5);
    FAIL() << "a loop around the hole was filled in Z";
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_hypothesis_failure()) << e.what();
  }
}

TEST(FillInZ, Deterministic) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * kCols));
  const auto alpha = rectangle_loop(kCols, 4, 4, 12, 8);
  const auto a = fill_in_Z(s, z, alpha, 0.5);
  const auto b = fill_in_Z(s, z, alpha, 0.5);
  EXPECT_EQ(a.final_chain, b.final_chain);
  EXPECT_EQ(a.p_beta, b.p_beta);
  EXPECT_EQ(a.report.masses.gamma, b.report.masses.gamma);
  EXPECT_EQ(a.report.g_lipschitz, b.report.g_lipschitz);
}

TEST(FillInZProperty, RandomRectanglesSatisfyIdentities) {
  std::mt19937_64 rng(41);
  const auto s = MetricSpace::build(grid_edges(kCols, kCols, kW));
  const auto z = carve_subset(s, range(0, kCols * kCols));
  std::uniform_int_distribution<int> pick(0, kCols - 1);
  int done = 0;
  while (done < 4) {
    int x0 = pick(rng), x1 = pick(rng), y0 = pick(rng), y1 = pick(rng);
    if (x0 == x1 || y0 == y1) continue;
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const double eps = done % 2 == 0 ? 0.5 : 1.0;
    const auto res = fill_in_Z(s, z, rectangle_loop(kCols, x0, y0, x1, y1), eps);
    SCOPED_TRACE(::testing::Message() << x0 << ',' << y0 << ' ' << x1 << ',' << y1 << " eps " << eps);
    expect_identities(res.report);
    ++done;
  }
}
