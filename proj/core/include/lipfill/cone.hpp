#pragma once

#include <span>

#include "lipfill/chain.hpp"
#include "lipfill/metric.hpp"

namespace lipfill {

struct ConeOptions {
  /// Radial layer spacing. Zero means the largest cell diameter of the cycle.
  double step = 0.0;
  /// Cone centers tried, in ascending eccentricity, before giving up.
  int max_centers = 8;
  /// A cone cell may be at most inflation * max(cycle cell diameter, step)
  /// + slack across; wider cells mean the geodesics from the center split
  /// around something the cycle encloses.
  double inflation = 2.0;
  double slack = 0.0;
};

struct ConeResult {
  Chain<SpacePoint> chain;
  VertexId center = -1;
  int attempts = 0;
  double max_cell = 0.0;
};

/// Geodesic cone over a cycle inside the subgraph `s`. 0-cycles (total
/// coefficient 0) are joined to the center along geodesics. 1-cycles are
/// coned in layers: the point at fraction i/r of the way from the center to
/// p along the geodesic tree rooted at the center, consecutive layers joined
/// by staircase prisms. boundary(result) == cycle exactly.
ConeResult cone_in_subgraph(const GraphGeodesics& s, const Chain<SpacePoint>& cycle, const ConeOptions& opt = {});

ConeResult cone_in_subgraph(const MetricSpace& space, std::span<const VertexId> members, const Chain<SpacePoint>& cycle,
                            const ConeOptions& opt = {});

/// Polyline chain of the canonical geodesic p -> q in a subgraph.
Chain<SpacePoint> geodesic_chain(const GraphGeodesics& geo, const SpacePoint& p, const SpacePoint& q);

}  // namespace lipfill
