#include <gtest/gtest.h>

#include "lipfill/filling.hpp"
#include "lipfill/reroute.hpp"
#include "test_support.hpp"

using namespace lipfill;
using namespace lipfill::testing;

namespace {

constexpr int kCols = 9;

VertexId at(int x, int y) { return y * kCols + x; }
SpacePoint pt(int x, int y) { return SpacePoint::vertex(at(x, y)); }

// Z misses the block [x0, x1] x [y0, y1].
SubsetZ grid_minus_block(const MetricSpace& s, int x0, int y0, int x1, int y1) {
  std::vector<VertexId> zs;
  for (int y = 0; y < kCols; ++y)
    for (int x = 0; x < kCols; ++x)
      if (x < x0 || x > x1 || y < y0 || y > y1) zs.push_back(at(x, y));
  return carve_subset(s, zs);
}

bool supported_in(const SubsetZ& z, const Chain<SpacePoint>& c) {
  for (const auto& [t, k] : c.terms())
    for (const auto& p : t)
      if (!z.contains(p)) return false;
  return true;
}

}  // namespace

TEST(Reroute, ChainInZIsUnchanged) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 0, 5, 2);
  const auto c = rectangle_loop(kCols, 1, 4, 6, 7);
  const auto r = reroute_to_Z(s, z, c);
  EXPECT_EQ(r.chain, c);
  EXPECT_EQ(r.touched_cells, 0);
}

TEST(Reroute, SingleVertexGoesToLowerFrontierOnTies) {
  const auto s = MetricSpace::build(path_edges(7));
  const std::vector<VertexId> zs{0, 1, 2, 4, 5, 6};
  const auto z = carve_subset(s, zs);
  const auto r = reroute_to_Z(s, z, Chain<SpacePoint>::simplex({SpacePoint::vertex(3)}));
  EXPECT_EQ(r.chain, Chain<SpacePoint>::simplex({SpacePoint::vertex(2)}));
  ASSERT_EQ(r.inflation.size(), 1u);
}

TEST(Reroute, PathThroughNotchMovesToItsRim) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 0, 5, 2);
  Chain<SpacePoint> c(1);
  for (int x = 2; x < 6; ++x) c.add({pt(x, 1), pt(x + 1, 1)}, 1);
  const auto r = reroute_to_Z(s, z, c);
  EXPECT_EQ(r.touched_cells, 4);
  EXPECT_TRUE(supported_in(z, r.chain));
  EXPECT_EQ(boundary(r.chain), boundary(c));
  // Around the notch the rim path has length 2 + 4 + 2.
  EXPECT_DOUBLE_EQ(space_mass(s, r.chain), 8.0);
  EXPECT_GE(r.inflation[0], 1.0);
}

TEST(Reroute, TwoChainWithCenterInNotch) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 0, 5, 2);
  const auto alpha = rectangle_loop(kCols, 1, 4, 7, 7);
  Chain<SpacePoint> c(2);
  for (const auto& [t, k] : alpha.terms()) c.add({pt(4, 1), t[0], t[1]}, k);
  ASSERT_EQ(boundary(c), alpha);
  const auto r = reroute_to_Z(s, z, c);
  EXPECT_TRUE(supported_in(z, r.chain));
  EXPECT_EQ(boundary(r.chain), alpha);
}

TEST(Reroute, FillingAroundAHoleFails) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 3, 5, 5);
  const auto alpha = rectangle_loop(kCols, 1, 1, 7, 7);
  const auto beta = fill_in_X(s, alpha);
  try {
    reroute_to_Z(s, z, beta);
    FAIL() << "rerouted a filling of a loop around the hole";
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_hypothesis_failure()) << e.what();
  }
}

TEST(Reroute, RejectsBoundaryOutsideZ) {
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 0, 5, 2);
  EXPECT_THROW(reroute_to_Z(s, z, Chain<SpacePoint>::simplex({pt(0, 0), pt(4, 0)})), Error);
}

TEST(RerouteProperty, RandomPathsKeepBoundary) {
  std::mt19937_64 rng(99);
  const auto s = MetricSpace::build(grid_edges(kCols, kCols));
  const auto z = grid_minus_block(s, 3, 0, 5, 2);
  std::uniform_int_distribution<std::size_t> pick(0, z.members.size() - 1);
  for (int trial = 0; trial < 30; ++trial) {
    const VertexId a = z.members[pick(rng)], b = z.members[pick(rng)];
    if (a == b) continue;
    // Geodesic in X, free to cross the notch.
    const auto c = geodesic_chain(s.geodesics(), SpacePoint::vertex(a), SpacePoint::vertex(b));
    const auto r = reroute_to_Z(s, z, c);
    ASSERT_TRUE(supported_in(z, r.chain)) << a << ' ' << b;
    ASSERT_EQ(boundary(r.chain), boundary(c)) << a << ' ' << b;
  }
}
