#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "lipfill/nerve.hpp"
#include "test_support.hpp"

namespace lipfill {
namespace {

using testing::grid_edges;
using testing::path_edges;

CoverElement point_element(VertexId c, double s) {
  CoverElement el;
  el.center = c;
  el.core = {c};
  el.radius = s;
  el.tau_radius = s;
  return el;
}

TEST(BuildNerve, DisjointSupportsGiveIsolatedVertices) {
  const auto s = MetricSpace::build(path_edges(20));
  const BumpFamily f(s, {point_element(2, 1.0), point_element(10, 1.0)}, 1.0);
  const auto n = build_nerve(f);
  EXPECT_EQ(n.vertex_count(), 2);
  EXPECT_FALSE(n.contains(Simplex{0, 1}));
  EXPECT_EQ(n.dim(), 0);
}

TEST(BuildNerve, SharedPointGivesOneEdge) {
  const auto s = MetricSpace::build(path_edges(20));
  // Supports (0.5, 3.5) and (2.5, 5.5) share the single vertex 3.
  const BumpFamily f(s, {point_element(2, 1.5), point_element(4, 1.5)}, 1.0);
  EXPECT_EQ(f.support(0), (std::vector<VertexId>{1, 2, 3}));
  EXPECT_EQ(f.support(1), (std::vector<VertexId>{3, 4, 5}));
  const auto n = build_nerve(f);
  EXPECT_TRUE(n.contains(Simplex{0, 1}));
  EXPECT_EQ(n.dim(), 1);
  EXPECT_EQ(n.maximal_simplices(), (std::vector<Simplex>{{0, 1}}));
}

TEST(BuildNerve, GridMatchesBruteForceIntersections) {
  const auto e = grid_edges(9, 9);
  const auto s = MetricSpace::build(e);
  std::vector<VertexId> ring;
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x)
      if (x == 0 || y == 0 || x == 8 || y == 8) ring.push_back(y * 9 + x);
  const auto z = carve_subset(s, ring);
  const auto f = build_cover(s, z, 1.0);
  const auto n = build_nerve(f);

  // Oracle: positive sets at vertices and 8 interior samples per edge, closed under subsets.
  std::set<Simplex> expect;
  auto close = [&](const Simplex& g) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.size()); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) face.push_back(g[i]);
      expect.insert(face);
    }
  };
  for (const auto& edge : s.edges())
    for (int i = 0; i <= 8; ++i) {
      const SpacePoint p = s.make_point(edge.u, edge.v, edge.w * i / 8.0);
      Simplex g;
      for (int k = 0; k < f.size(); ++k)
        if (f.tau(k, p) > 0.0) g.push_back(k);
      close(g);
    }
  EXPECT_EQ(n.simplices(), expect);
  EXPECT_EQ(n.dim(), f.multiplicity() - 1);

  // Downward closure and the scale bracket.
  double max_scale = 0.0;
  for (int k = 0; k < n.vertex_count(); ++k) max_scale = std::max(max_scale, n.scale(k));
  for (const auto& sigma : n.simplices()) {
    for (std::size_t i = 0; i < sigma.size() && sigma.size() > 1; ++i) {
      Simplex face = sigma;
      face.erase(face.begin() + static_cast<long>(i));
      ASSERT_TRUE(n.contains(face));
    }
    for (int k : sigma) {
      ASSERT_GE(n.scale(sigma), n.scale(k));
      ASSERT_LE(n.scale(sigma), (n.dim() + 1) * max_scale);
    }
  }
}

TEST(BuildNerve, DimensionCap) {
  const auto s = MetricSpace::build(path_edges(5));
  const BumpFamily f(s, {point_element(2, 2.0), point_element(2, 2.0), point_element(2, 2.0)}, 1.0);
  try {
    build_nerve(f, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionCapExceeded);
  }
  EXPECT_EQ(build_nerve(f, 2).dim(), 2);
}

TEST(NerveDistance, Definitions) {
  // Path of three nerve vertices 0 - 1 - 2 with scale 3.
  const std::vector<Simplex> gens{{0, 1}, {1, 2}};
  const NerveComplex n({3.0, 3.0, 3.0}, gens);
  const auto v0 = BaryPoint::vertex(0), v1 = BaryPoint::vertex(1), v2 = BaryPoint::vertex(2);
  EXPECT_DOUBLE_EQ(nerve_distance(n, v0, v0), 0.0);
  EXPECT_DOUBLE_EQ(nerve_distance(n, v0, v1), 3.0 * std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(nerve_distance(n, v0, v2), nerve_distance(n, v0, v1) + nerve_distance(n, v1, v2));
  const BaryPoint mid{{{0, 0.5}, {1, 0.5}}};
  EXPECT_NEAR(nerve_distance(n, v0, mid), 1.5 * std::sqrt(2.0), 1e-12);
  try {
    nerve_distance(n, v0, BaryPoint{{{0, 0.5}, {2, 0.5}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PointNotInComplex);
  }
}

TEST(NerveDistance, MetricOnSampledPoints) {
  const auto s = MetricSpace::build(grid_edges(7, 7));
  const auto z = carve_subset(s, std::vector<VertexId>{0, 1, 2, 3, 4, 5, 6});
  const auto f = build_cover(s, z, 1.0);
  const auto n = build_nerve(f);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, n.maximal_simplices().size() - 1);
  std::vector<BaryPoint> pts;
  for (int i = 0; i < 40; ++i) {
    const auto& sigma = n.maximal_simplices()[pick(rng)];
    std::vector<double> w(sigma.size());
    double total = 0.0;
    for (auto& x : w) total += (x = std::exponential_distribution<double>(1.0)(rng));
    BaryPoint p;
    for (std::size_t j = 0; j < sigma.size(); ++j) p.coords.emplace_back(sigma[j], w[j] / total);
    pts.push_back(p);
  }
  const auto d = nerve_distances(n, pts);
  const std::size_t m = pts.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      EXPECT_DOUBLE_EQ(d[a * m + b], d[b * m + a]);
      if (a != b) {
        EXPECT_GT(d[a * m + b], 0.0);
      }
      EXPECT_LE(d[a * m + b], nerve_distance(n, pts[a], pts[b]) + 1e-12);
      for (std::size_t c = 0; c < m; ++c) EXPECT_LE(d[a * m + c], d[a * m + b] + d[b * m + c] + 1e-9);
    }
}

}  // namespace
}  // namespace lipfill
