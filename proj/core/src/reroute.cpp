#include "lipfill/reroute.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>

#include "lipfill/cone.hpp"

namespace lipfill {

namespace {

class Rerouter {
 public:
  Rerouter(const MetricSpace& space, const SubsetZ& z) : space_(space), z_(z), nearest_(space.vertex_count(), -1) {
    for (std::size_t p = 0; p < z.components.size(); ++p) {
      const auto& front = z.frontiers[p];
      for (VertexId x : z.components[p]) {
        if (front.empty()) continue;
        VertexId best = front.front();
        for (VertexId f : front)
          if (space.dist(x, f) < space.dist(x, best)) best = f;
        nearest_[x] = best;
      }
    }
  }

  // Component of the point, or -1 if it lies in Z.
  VertexId component(const SpacePoint& p) const {
    if (z_.contains(p)) return -1;
    return z_.contains(p.u) ? z_.component_of[p.v] : z_.component_of[p.u];
  }

  SpacePoint image(const SpacePoint& p) const {
    if (z_.contains(p)) return p;
    VertexId x = p.u;
    if (!p.is_vertex()) {
      const double w = space_.edge_weight(p.u, p.v);
      if (p.offset > 0.5 * w) x = p.v;
    }
    if (z_.contains(x)) return SpacePoint::vertex(x);
    if (nearest_[x] < 0)
      throw Error(ErrorCode::FrontierDisconnected,
                  "component " + std::to_string(z_.component_of[x]) + " has no frontier in Z");
    return SpacePoint::vertex(nearest_[x]);
  }

  // Geodesic structure used to join the images of a touched cell.
  const GraphGeodesics& seam_graph(const std::vector<SpacePoint>& cell) {
    VertexId comp = -2;
    for (const auto& p : cell) {
      const VertexId c = component(p);
      if (c < 0) continue;
      if (comp != -2 && comp != c) return z_.geodesics;
      comp = c;
    }
    if (comp < 0) return z_.geodesics;
    const auto& front = z_.frontiers[comp];
    for (const auto& p : cell) {
      const auto q = image(p);
      if (!std::binary_search(front.begin(), front.end(), q.u) || !q.is_vertex()) return z_.geodesics;
    }
    auto& slot = frontier_geo_[comp];
    if (!slot) slot = std::make_unique<GraphGeodesics>(space_, collar(comp));
    return *slot;
  }

  // Z vertices within two edges of the component. On a 4-neighbour grid the
  // frontier alone misses the corners and falls apart.
  std::vector<VertexId> collar(VertexId comp) const {
    const auto& members = z_.components[comp];
    const double reach = 2.0 * space_.max_edge_weight() * (1.0 + 1e-12);
    std::vector<VertexId> out;
    for (VertexId m : z_.members)
      for (VertexId x : members)
        if (space_.dist(m, x) <= reach) {
          out.push_back(m);
          break;
        }
    return out;
  }

  Chain<SpacePoint> segment(const SpacePoint& a, const SpacePoint& b, const std::vector<SpacePoint>& cell) {
    const auto& g = seam_graph(cell);
    const auto pa = image(a), pb = image(b);
    if (pa == pb) return Chain<SpacePoint>(1);
    if (g.dist(pa, pb) == kInf)
      throw Error(ErrorCode::FrontierDisconnected, "no seam path between " + std::to_string(pa.u) + " and " +
                                                       std::to_string(pb.u) + " near the frontier");
    return geodesic_chain(g, pa, pb);
  }

  bool touched(const std::vector<SpacePoint>& cell) const {
    return std::any_of(cell.begin(), cell.end(), [&](const SpacePoint& p) { return !z_.contains(p); });
  }

  // Replacement of a 1-cell: itself if untouched, else a seam geodesic.
  Chain<SpacePoint> edge(const SpacePoint& a, const SpacePoint& b) {
    const std::vector<SpacePoint> cell{a, b};
    if (!touched(cell)) return Chain<SpacePoint>::simplex({a, b});
    return segment(a, b, cell);
  }

  Chain<SpacePoint> push(const std::vector<SpacePoint>& t) {
    switch (t.size()) {
      case 1:
        return Chain<SpacePoint>::simplex({image(t[0])});
      case 2:
        return edge(t[0], t[1]);
      case 3: {
        if (!touched(t)) return Chain<SpacePoint>::simplex(t);
        const Chain<SpacePoint> rim = edge(t[1], t[2]) - edge(t[0], t[2]) + edge(t[0], t[1]);
        if (rim.empty()) return Chain<SpacePoint>(2);
        ConeOptions opt;
        opt.slack = 2.0 * space_.max_edge_weight();
        return cone_in_subgraph(seam_graph(t), rim, opt).chain;
      }
      default:
        throw Error(ErrorCode::InvalidInput, "rerouting handles chains of dimension 0 to 2");
    }
  }

  double inflation(std::size_t p) const {
    std::vector<VertexId> closure = z_.components[p];
    closure.insert(closure.end(), z_.frontiers[p].begin(), z_.frontiers[p].end());
    // Large components are measured on a deterministic subsample.
    const std::size_t stride = std::max<std::size_t>(1, closure.size() / 600);
    double lip = 0.0;
    auto ratio = [&](VertexId x, VertexId y) {
      const double d = space_.dist(x, y);
      if (d <= 0.0) return;
      const auto a = image(SpacePoint::vertex(x)), b = image(SpacePoint::vertex(y));
      lip = std::max(lip, z_.geodesics.dist(a, b) / d);
    };
    for (std::size_t i = 0; i < closure.size(); i += stride)
      for (std::size_t j = i + stride; j < closure.size(); j += stride) ratio(closure[i], closure[j]);
    for (VertexId x : z_.components[p])
      for (const auto& nb : space_.neighbors(x)) ratio(x, nb.to);
    return lip;
  }

 private:
  const MetricSpace& space_;
  const SubsetZ& z_;
  std::vector<VertexId> nearest_;
  std::map<VertexId, std::unique_ptr<GraphGeodesics>> frontier_geo_;
};

}  // namespace

RerouteResult reroute_to_Z(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& c) {
  if (c.dim() > 2) throw Error(ErrorCode::InvalidInput, "rerouting handles chains of dimension 0 to 2");
  if (c.dim() > 0) {
    const auto rim = boundary(c);
    for (const auto& [t, k] : rim.terms())
      for (const auto& p : t)
        if (!z.contains(p)) throw Error(ErrorCode::InvalidInput, "chain boundary leaves Z");
  }

  Rerouter r(space, z);
  RerouteResult out;
  out.chain = Chain<SpacePoint>(c.dim());
  out.inflation.assign(z.components.size(), 0.0);
  std::vector<char> hit(z.components.size(), 0);
  for (const auto& [t, k] : c.terms()) {
    if (!r.touched(t)) {
      out.chain.add(t, k);
      continue;
    }
    ++out.touched_cells;
    for (const auto& p : t)
      if (const VertexId comp = r.component(p); comp >= 0) hit[comp] = 1;
    out.chain += r.push(t) * k;
  }
  for (std::size_t p = 0; p < hit.size(); ++p)
    if (hit[p]) out.inflation[p] = r.inflation(p);
  return out;
}

}  // namespace lipfill
