#include "lipfill/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <tuple>

namespace lipfill {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::CoverageFailure: return "CoverageFailure";
    case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorCode::PointNotInComplex: return "PointNotInComplex";
    case ErrorCode::DimensionZero: return "DimensionZero";
    case ErrorCode::MismatchedShape: return "MismatchedShape";
    case ErrorCode::ZeroTauBar: return "ZeroTauBar";
    case ErrorCode::ZDisconnectedBetweenImages: return "ZDisconnectedBetweenImages";
    case ErrorCode::SnapInvalid: return "SnapInvalid";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::ZPathMissing: return "ZPathMissing";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::SubgraphDisconnected: return "SubgraphDisconnected";
    case ErrorCode::NoFilling: return "NoFilling";
    case ErrorCode::FrontierDisconnected: return "FrontierDisconnected";
    case ErrorCode::DegenerateSamples: return "DegenerateSamples";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::OracleFailed: return "OracleFailed";
  }
  return "Unknown";
}

namespace {

bool nearly_equal(double a, double b) { return std::abs(a - b) <= kDistTol * std::max(1.0, std::abs(a)); }

}  // namespace

GraphGeodesics::GraphGeodesics(const MetricSpace& space, std::span<const VertexId> members)
    : members_(members.begin(), members.end()) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  const auto total = static_cast<std::size_t>(space.vertex_count());
  local_.assign(total, -1);
  for (std::size_t i = 0; i < members_.size(); ++i) local_[members_[i]] = static_cast<VertexId>(i);

  const std::size_t n = members_.size();
  dist_.assign(n * n, kInf);
  next_.assign(n * n, -1);

  using Item = std::pair<double, VertexId>;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = dist_.data() + s * n;
    row[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, static_cast<VertexId>(s));
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > row[x]) continue;
      for (const auto& nb : space.neighbors(members_[x])) {
        const VertexId y = local_[nb.to];
        if (y < 0) continue;
        const double nd = d + nb.w;
        if (nd < row[y]) {
          row[y] = nd;
          heap.emplace(nd, y);
        }
      }
    }
  }
  // Successor toward each target: lowest-id neighbour on some shortest path.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || dist_[i * n + j] == kInf) continue;
      VertexId best = -1;
      for (const auto& nb : space.neighbors(members_[i])) {
        const VertexId y = local_[nb.to];
        if (y < 0) continue;
        if (nearly_equal(nb.w + dist_[y * n + j], dist_[i * n + j]) && (best < 0 || members_[y] < members_[best])) {
          best = y;
        }
      }
      next_[i * n + j] = best;
    }
  }
}

bool GraphGeodesics::contains(VertexId x) const { return local(x) >= 0; }

bool GraphGeodesics::contains(const SpacePoint& p) const { return local(p.u) >= 0 && local(p.v) >= 0; }

double GraphGeodesics::dist(VertexId a, VertexId b) const {
  const VertexId la = local(a), lb = local(b);
  if (la < 0 || lb < 0) return kInf;
  return dist_[static_cast<std::size_t>(la) * members_.size() + lb];
}

namespace {

struct Anchor {
  VertexId vertex;
  double along;  // distance from the point to the anchor vertex
};

int anchors(const GraphGeodesics& g, const SpacePoint& p, Anchor out[2]) {
  if (p.is_vertex()) {
    out[0] = {p.u, 0.0};
    return 1;
  }
  const double w = g.dist(p.u, p.v);
  out[0] = {p.u, p.offset};
  out[1] = {p.v, w - p.offset};
  return 2;
}

}  // namespace

double GraphGeodesics::dist(const SpacePoint& p, const SpacePoint& q) const {
  if (p == q) return 0.0;
  if (!contains(p) || !contains(q)) return kInf;
  if (!p.is_vertex() && !q.is_vertex() && p.u == q.u && p.v == q.v) {
    // Same edge: the direct segment is a geodesic because the edge is.
    return std::abs(p.offset - q.offset);
  }
  Anchor ap[2], aq[2];
  const int np = anchors(*this, p, ap), nq = anchors(*this, q, aq);
  double best = kInf;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j) best = std::min(best, ap[i].along + dist(ap[i].vertex, aq[j].vertex) + aq[j].along);
  return best;
}

std::vector<VertexId> GraphGeodesics::path(VertexId a, VertexId b) const {
  const VertexId la = local(a), lb = local(b);
  if (la < 0 || lb < 0 || dist(a, b) == kInf) return {};
  const std::size_t n = members_.size();
  std::vector<VertexId> out{a};
  VertexId cur = la;
  while (cur != lb) {
    cur = next_[static_cast<std::size_t>(cur) * n + lb];
    out.push_back(members_[cur]);
  }
  return out;
}

std::vector<SpacePoint> GraphGeodesics::polyline(const SpacePoint& p, const SpacePoint& q) const {
  if (p == q) return {p};
  if (!contains(p) || !contains(q)) return {};
  if (!p.is_vertex() && !q.is_vertex() && p.u == q.u && p.v == q.v) return {p, q};
  Anchor ap[2], aq[2];
  const int np = anchors(*this, p, ap), nq = anchors(*this, q, aq);
  double best = kInf;
  int bi = 0, bj = 0;
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nq; ++j) {
      const double d = ap[i].along + dist(ap[i].vertex, aq[j].vertex) + aq[j].along;
      if (d < best - kDistTol) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  if (best == kInf) return {};
  std::vector<SpacePoint> out;
  if (!p.is_vertex()) out.push_back(p);
  for (VertexId x : path(ap[bi].vertex, aq[bj].vertex)) out.push_back(SpacePoint::vertex(x));
  if (!q.is_vertex()) out.push_back(q);
  return out;
}

namespace {

double offset_from(const SpacePoint& p, VertexId end, double w) {
  if (p.is_vertex()) return p.u == end ? 0.0 : w;
  return p.u == end ? p.offset : w - p.offset;
}

SpacePoint canonical_on_edge(VertexId a, VertexId b, double w, double along) {
  if (along <= kDistTol) return SpacePoint::vertex(a);
  if (along >= w - kDistTol) return SpacePoint::vertex(b);
  if (a < b) return {a, b, along};
  return {b, a, w - along};
}

}  // namespace

std::vector<SpacePoint> GraphGeodesics::sample(const SpacePoint& p, const SpacePoint& q, int steps) const {
  std::vector<SpacePoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(p);
  const auto line = polyline(p, q);
  if (line.size() >= 2 && steps > 1) {
    std::vector<double> seg(line.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      seg[i] = dist(line[i], line[i + 1]);
      total += seg[i];
    }
    std::size_t i = 0;
    double before = 0.0;  // arclength up to line[i]
    for (int s = 1; s < steps; ++s) {
      const double target = total * s / steps;
      while (i + 2 < line.size() && target > before + seg[i]) {
        before += seg[i];
        ++i;
      }
      const SpacePoint& a = line[i];
      const SpacePoint& b = line[i + 1];
      // Both lie on one edge {u, v}.
      VertexId u, v;
      if (!a.is_vertex()) {
        u = a.u;
        v = a.v;
      } else if (!b.is_vertex()) {
        u = b.u;
        v = b.v;
      } else {
        u = a.u;
        v = b.u;
      }
      const double w = dist(u, v);
      const double ao = offset_from(a, u, w), bo = offset_from(b, u, w);
      const double t = seg[i] > 0.0 ? std::clamp((target - before) / seg[i], 0.0, 1.0) : 0.0;
      out.push_back(canonical_on_edge(u, v, w, ao + t * (bo - ao)));
    }
  } else {
    for (int s = 1; s < steps; ++s) out.push_back(p);
  }
  if (steps >= 1) out.push_back(q);
  return out;
}

SpacePoint GraphGeodesics::point_at(const SpacePoint& p, const SpacePoint& q, double frac) const {
  if (frac <= 0.0) return p;
  if (frac >= 1.0) return q;
  const auto line = polyline(p, q);
  if (line.size() < 2) return p;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) total += dist(line[i], line[i + 1]);
  double target = frac * total;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const SpacePoint& a = line[i];
    const SpacePoint& b = line[i + 1];
    const double seg = dist(a, b);
    if (target <= seg || i + 2 == line.size()) {
      VertexId u, v;
      if (!a.is_vertex()) {
        u = a.u;
        v = a.v;
      } else if (!b.is_vertex()) {
        u = b.u;
        v = b.v;
      } else {
        u = a.u;
        v = b.u;
      }
      const double w = dist(u, v);
      const double ao = offset_from(a, u, w), bo = offset_from(b, u, w);
      const double t = seg > 0.0 ? std::clamp(target / seg, 0.0, 1.0) : 0.0;
      return canonical_on_edge(u, v, w, ao + t * (bo - ao));
    }
    target -= seg;
  }
  return q;
}

bool GraphGeodesics::connected() const {
  const std::size_t n = members_.size();
  for (std::size_t j = 0; j < n; ++j)
    if (dist_[j] == kInf) return false;
  return true;
}

MetricSpace MetricSpace::build(std::span<const WeightedEdge> edges, VertexId vertex_count) {
  if (edges.empty()) throw Error(ErrorCode::InvalidInput, "empty edge list");
  MetricSpace s;
  VertexId n = vertex_count;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0) throw Error(ErrorCode::InvalidInput, "negative vertex id");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw Error(ErrorCode::NonPositiveWeight, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    if (e.u == e.v) throw Error(ErrorCode::InvalidInput, "self loop at " + std::to_string(e.u));
    n = std::max(n, std::max(e.u, e.v) + 1);
  }
  s.n_ = n;

  // Collapse parallel edges to the shortest one.
  std::vector<WeightedEdge> canon(edges.begin(), edges.end());
  for (auto& e : canon)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(canon.begin(), canon.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
  });
  canon.erase(std::unique(canon.begin(), canon.end(), [](const auto& a, const auto& b) { return a.u == b.u && a.v == b.v; }),
              canon.end());

  s.adj_.assign(n, {});
  for (const auto& e : canon) {
    s.adj_[e.u].push_back({e.v, e.w});
    s.adj_[e.v].push_back({e.u, e.w});
  }
  std::vector<VertexId> all(n);
  for (VertexId i = 0; i < n; ++i) all[i] = i;
  s.geo_ = GraphGeodesics(s, all);
  if (!s.geo_.connected()) throw Error(ErrorCode::DisconnectedGraph, std::to_string(n) + " vertices");

  // Keep only edges that realize the metric; the rest are never geodesic.
  const auto pruned = std::erase_if(canon, [&](const WeightedEdge& e) { return e.w > s.geo_.dist(e.u, e.v) + kDistTol; });
  if (pruned > 0) {
    s.adj_.assign(n, {});
    for (const auto& e : canon) {
      s.adj_[e.u].push_back({e.v, e.w});
      s.adj_[e.v].push_back({e.u, e.w});
    }
    s.geo_ = GraphGeodesics(s, all);
  }
  s.edges_ = std::move(canon);
  s.max_w_ = 0.0;
  s.min_w_ = kInf;
  for (const auto& e : s.edges_) {
    s.max_w_ = std::max(s.max_w_, e.w);
    s.min_w_ = std::min(s.min_w_, e.w);
  }
  return s;
}

double MetricSpace::edge_weight(VertexId u, VertexId v) const {
  for (const auto& nb : adj_[u])
    if (nb.to == v) return nb.w;
  return kInf;
}

SpacePoint MetricSpace::make_point(VertexId a, VertexId b, double along) const {
  const double w = edge_weight(a, b);
  if (w == kInf) throw Error(ErrorCode::InvalidInput, "no edge " + std::to_string(a) + "-" + std::to_string(b));
  return canonical_on_edge(a, b, w, along);
}

SubsetZ carve_subset(const MetricSpace& space, std::span<const VertexId> members) {
  if (members.empty()) throw Error(ErrorCode::EmptySubset, "Z must be nonempty");
  const VertexId n = space.vertex_count();
  SubsetZ z;
  z.mask.assign(n, 0);
  for (VertexId x : members) {
    if (x < 0 || x >= n) throw Error(ErrorCode::InvalidInput, "Z member out of range: " + std::to_string(x));
    z.mask[x] = 1;
  }
  for (VertexId x = 0; x < n; ++x)
    if (z.mask[x]) z.members.push_back(x);

  z.component_of.assign(n, -1);
  for (VertexId start = 0; start < n; ++start) {
    if (z.mask[start] || z.component_of[start] >= 0) continue;
    const auto id = static_cast<VertexId>(z.components.size());
    std::vector<VertexId> comp{start};
    z.component_of[start] = id;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const auto& nb : space.neighbors(comp[head])) {
        if (z.mask[nb.to] || z.component_of[nb.to] >= 0) continue;
        z.component_of[nb.to] = id;
        comp.push_back(nb.to);
      }
    }
    std::sort(comp.begin(), comp.end());
    std::vector<VertexId> frontier;
    for (VertexId x : comp)
      for (const auto& nb : space.neighbors(x))
        if (z.mask[nb.to]) frontier.push_back(nb.to);
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    z.components.push_back(std::move(comp));
    z.frontiers.push_back(std::move(frontier));
  }
  z.geodesics = GraphGeodesics(space, z.members);
  return z;
}

double dist_to_set(const MetricSpace& space, std::span<const VertexId> set, VertexId x) {
  return dist_to_set(space, set, SpacePoint::vertex(x));
}

double dist_to_set(const MetricSpace& space, std::span<const VertexId> set, const SpacePoint& p) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "distance to empty set");
  double best = kInf;
  for (VertexId s : set) best = std::min(best, space.dist(p, SpacePoint::vertex(s)));
  return best;
}

}  // namespace lipfill
