#include <gtest/gtest.h>

#include "lipfill/io.hpp"
#include "test_support.hpp"

namespace lipfill {
namespace {

using testing::grid_edges;
using testing::rectangle_loop;

TEST(SpaceFile, RoundTrip) {
  const auto space = MetricSpace::build(grid_edges(3, 2, 0.5));
  const auto text = dump_space(space, {0, 1, 2});
  const auto back = parse_space(text);
  EXPECT_EQ(back.vertices, 6);
  ASSERT_EQ(back.edges.size(), space.edges().size());
  EXPECT_EQ(back.z, (std::vector<VertexId>{0, 1, 2}));
  EXPECT_EQ(dump_space(MetricSpace::build(back.edges, back.vertices), back.z), text);
}

TEST(SpaceFile, MissingZMeansNoList) {
  const auto f = parse_space(R"({"vertices": 2, "edges": [[0, 1, 1.5]]})");
  EXPECT_TRUE(f.z.empty());
  EXPECT_DOUBLE_EQ(f.edges.at(0).w, 1.5);
}

TEST(SpaceFile, MalformedInputIsInvalid) {
  for (const char* bad : {"{", "[]", R"({"vertices": 2})", R"({"vertices": 2, "edges": [[0, 1]]})",
                          R"({"vertices": 2, "edges": [[0, 5, 1]]})", R"({"vertices": 0, "edges": []})",
                          R"({"vertices": 2, "edges": [[0, 1, 1]], "Z": [7]})"}) {
    try {
      parse_space(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInput) << bad;
    }
  }
}

TEST(ChainFile, RoundTripWithEdgePoints) {
  const auto space = MetricSpace::build(grid_edges(3, 3));
  auto c = rectangle_loop(3, 0, 0, 2, 2);
  Chain<SpacePoint> split(1);
  // Cut the first edge at an interior point.
  const auto mid = space.make_point(0, 1, 0.25);
  for (const auto& [t, k] : c.terms()) {
    if (t[0] == SpacePoint::vertex(0) && t[1] == SpacePoint::vertex(1)) {
      split.add({t[0], mid}, k);
      split.add({mid, t[1]}, k);
    } else {
      split.add(t, k);
    }
  }
  const auto text = dump_chain(split);
  EXPECT_NE(text.find("\"offset\""), std::string::npos);
  EXPECT_EQ(parse_chain(text, space), split);
}

TEST(ChainFile, ZeroChain) {
  const auto space = MetricSpace::build(grid_edges(2, 1));
  const auto c = parse_chain(R"({"m": 0, "terms": [{"coeff": 1, "level": 1, "vmap": [[[1], 1]]},
                                                  {"coeff": -1, "level": 1, "vmap": [[[1], 0]]}]})",
                             space);
  EXPECT_EQ(c.dim(), 0);
  EXPECT_EQ(augmentation(c), 0);
  EXPECT_EQ(c.terms().size(), 2u);
}

TEST(ChainFile, BadCornersAreInvalid) {
  const auto space = MetricSpace::build(grid_edges(2, 1));
  for (const char* bad : {R"({"m": 1, "terms": [{"coeff": 1, "vmap": [[[1, 0], 0]]}]})",
                          R"({"m": 1, "terms": [{"coeff": 1, "vmap": [[[1, 0], 0], [[1, 0], 1]]}]})",
                          R"({"m": 1, "terms": [{"coeff": 1, "vmap": [[[1, 0], 0], [[0, 1], 9]]}]})",
                          R"({"m": 1, "terms": [{"coeff": 1, "level": 2, "vmap": []}]})", "nope"}) {
    try {
      parse_chain(bad, space);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInput) << bad;
    }
  }
}

TEST(ReportFile, CsvRowMatchesHeader) {
  FillingReport r;
  r.epsilon = 0.5;
  r.masses.alpha = 4.0;
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(count(report_csv_header()), count(report_csv_row(r)));
  EXPECT_NE(dump_report(r).find("\"gamma_identity\""), std::string::npos);
}

}  // namespace
}  // namespace lipfill
