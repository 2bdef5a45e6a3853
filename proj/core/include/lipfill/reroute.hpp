#pragma once

#include <vector>

#include "lipfill/chain.hpp"
#include "lipfill/metric.hpp"

namespace lipfill {

struct RerouteResult {
  Chain<SpacePoint> chain;
  /// Per complement component: measured Lip of the point map on the
  /// component and its frontier, d_Z(phi x, phi y) / d(x, y). Zero for
  /// components the chain never touched.
  std::vector<double> inflation;
  std::int64_t touched_cells = 0;
};

/// Pushes a chain of X (dimension 0..2, boundary in Z) into Z. Vertices of a
/// complement component go to their nearest frontier vertex (lowest id on
/// ties); touched cells are rebuilt from geodesics and cones in the Z-collar
/// of the component (Z vertices within two edges of it), so the boundary is
/// unchanged. Throws FrontierDisconnected, NoFilling, InvalidInput.
RerouteResult reroute_to_Z(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& c);

}  // namespace lipfill
