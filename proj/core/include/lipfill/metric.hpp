#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "lipfill/error.hpp"

namespace lipfill {

using VertexId = std::int32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// Absolute tolerance for distance comparisons.
inline constexpr double kDistTol = 1e-12;

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;
};

/// A point of the metric graph: either a vertex (u == v, offset == 0) or an
/// interior point of edge {u, v} with u < v at distance `offset` from u.
/// Points are canonical, so equality is exact.
struct SpacePoint {
  VertexId u = 0;
  VertexId v = 0;
  double offset = 0.0;

  static SpacePoint vertex(VertexId x) { return {x, x, 0.0}; }
  bool is_vertex() const { return u == v; }

  friend auto operator<=>(const SpacePoint&, const SpacePoint&) = default;
  friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
};

class MetricSpace;

/// All-pairs geodesics of the subgraph induced by a vertex subset (or of the
/// whole graph). Distances between points of the metric graph are resolved
/// through the endpoint table, so edge-interior points cost O(1).
class GraphGeodesics {
 public:
  GraphGeodesics() = default;
  GraphGeodesics(const MetricSpace& space, std::span<const VertexId> members);

  bool contains(VertexId x) const;
  /// A point belongs to the subgraph when its carrier edge does.
  bool contains(const SpacePoint& p) const;
  std::span<const VertexId> members() const { return members_; }

  double dist(VertexId a, VertexId b) const;
  double dist(const SpacePoint& p, const SpacePoint& q) const;

  /// Vertex sequence of the canonical shortest path (lowest-id successor).
  std::vector<VertexId> path(VertexId a, VertexId b) const;
  /// Polyline p, ..., q; consecutive entries share an edge.
  std::vector<SpacePoint> polyline(const SpacePoint& p, const SpacePoint& q) const;
  /// The point at arclength fraction `frac` of the canonical geodesic p -> q.
  SpacePoint point_at(const SpacePoint& p, const SpacePoint& q, double frac) const;
  /// steps + 1 points at arclength fractions i / steps along the canonical
  /// geodesic p -> q; the first and last are exactly p and q.
  std::vector<SpacePoint> sample(const SpacePoint& p, const SpacePoint& q, int steps) const;

  /// True when all member vertices lie in one connected component.
  bool connected() const;

 private:
  VertexId local(VertexId x) const { return x < 0 || x >= static_cast<VertexId>(local_.size()) ? -1 : local_[x]; }

  std::vector<VertexId> members_;
  std::vector<VertexId> local_;
  std::vector<double> dist_;
  std::vector<VertexId> next_;
};

/// A finite connected weighted graph realized as a geodesic metric space.
/// Edges longer than the shortest path between their endpoints are dropped
/// at build time, so every kept edge is a geodesic segment.
class MetricSpace {
 public:
  struct Neighbor {
    VertexId to;
    double w;
  };

  /// Builds the space; `vertex_count` may exceed the largest id seen in edges.
  static MetricSpace build(std::span<const WeightedEdge> edges, VertexId vertex_count = 0);

  VertexId vertex_count() const { return n_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId x) const { return adj_[x]; }
  /// Weight of edge {u, v}, or +inf if absent.
  double edge_weight(VertexId u, VertexId v) const;
  double max_edge_weight() const { return max_w_; }
  double min_edge_weight() const { return min_w_; }

  double dist(VertexId a, VertexId b) const { return geo_.dist(a, b); }
  double dist(const SpacePoint& p, const SpacePoint& q) const { return geo_.dist(p, q); }
  const GraphGeodesics& geodesics() const { return geo_; }

  /// Canonical point on edge {a, b} at distance `along` from a.
  SpacePoint make_point(VertexId a, VertexId b, double along) const;

 private:
  MetricSpace() = default;

  VertexId n_ = 0;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
  double max_w_ = 0.0;
  double min_w_ = 0.0;
  GraphGeodesics geo_;
};

/// A marked subset Z with the components of its complement and their frontiers.
struct SubsetZ {
  std::vector<VertexId> members;
  std::vector<char> mask;
  std::vector<std::vector<VertexId>> components;
  std::vector<std::vector<VertexId>> frontiers;
  std::vector<VertexId> component_of;  // -1 for members of Z
  GraphGeodesics geodesics;            // Z-induced subgraph

  bool contains(VertexId x) const { return mask[x] != 0; }
  bool contains(const SpacePoint& p) const { return mask[p.u] != 0 && mask[p.v] != 0; }
};

SubsetZ carve_subset(const MetricSpace& space, std::span<const VertexId> members);

double dist_to_set(const MetricSpace& space, std::span<const VertexId> set, VertexId x);
double dist_to_set(const MetricSpace& space, std::span<const VertexId> set, const SpacePoint& p);

}  // namespace lipfill
