#pragma once

#include <string>
#include <vector>

#include "lipfill/chain.hpp"
#include "lipfill/filling.hpp"
#include "lipfill/metric.hpp"

namespace lipfill {

/// Contents of a space file {"vertices": N, "edges": [[u, v, w], ...], "Z": [ids]}.
struct SpaceFile {
  VertexId vertices = 0;
  std::vector<WeightedEdge> edges;
  std::vector<VertexId> z;  // empty when the file has no "Z"
};

/// Throws InvalidInput on malformed text.
SpaceFile parse_space(const std::string& text);
std::string dump_space(const MetricSpace& space, const std::vector<VertexId>& z);

/// Chain file {"m": m, "terms": [{"coeff": c, "level": 1, "vmap": [[coord,
/// target], ...]}]}. Cells are level-1 simplices, so the lattice coordinates
/// are the unit vectors. A target is a vertex id, or {"edge": [u, v],
/// "offset": t} for an edge-interior point.
std::string dump_chain(const Chain<SpacePoint>& c);
/// Throws InvalidInput on malformed text or points off the graph.
Chain<SpacePoint> parse_chain(const std::string& text, const MetricSpace& space);

/// Pretty-printed JSON of a filling report.
std::string dump_report(const FillingReport& r);
/// Header and one row per report.
std::string report_csv_header();
std::string report_csv_row(const FillingReport& r);

/// Per element {k, kind, center, core, s_k}.
std::string dump_cover(const BumpFamily& family);
/// Vertices with scales, maximal simplices.
std::string dump_complex(const NerveComplex& nerve);
/// h vertex images and the measured constants of g and h.
std::string dump_maps(const GMap& gm, const HMap& hm);

}  // namespace lipfill
