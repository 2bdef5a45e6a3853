#include "lipfill/cone.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace lipfill {

namespace {

constexpr double kSlop = 1e-9;

double cell_diameter(const GraphGeodesics& s, const std::vector<SpacePoint>& t) {
  double d = 0.0;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b) d = std::max(d, s.dist(t[a], t[b]));
  return d;
}

double chain_cell_diameter(const GraphGeodesics& s, const Chain<SpacePoint>& c) {
  double d = 0.0;
  for (const auto& [t, k] : c.terms()) d = std::max(d, cell_diameter(s, t));
  return d;
}

Chain<SpacePoint> cone_points(const GraphGeodesics& s, const Chain<SpacePoint>& cycle, VertexId center) {
  const SpacePoint c = SpacePoint::vertex(center);
  Chain<SpacePoint> out(1);
  for (const auto& [t, k] : cycle.terms()) {
    const auto line = s.polyline(t[0], c);
    for (std::size_t i = 0; i + 1 < line.size(); ++i) out.add({line[i + 1], line[i]}, k);
  }
  return out;
}

Chain<SpacePoint> cone_layers(const GraphGeodesics& s, const Chain<SpacePoint>& cycle, VertexId center, double step,
                              const std::set<SpacePoint>& support) {
  const SpacePoint c = SpacePoint::vertex(center);
  double ecc = 0.0;
  for (const auto& p : support) ecc = std::max(ecc, s.dist(c, p));
  const int r = std::max(1, static_cast<int>(std::ceil(ecc / step - kSlop)));

  // layers[p][i] sits at fraction i / r from the center towards p.
  std::map<SpacePoint, std::vector<SpacePoint>> layers;
  for (const auto& p : support) {
    auto line = s.sample(p, c, r);
    std::reverse(line.begin(), line.end());
    layers.emplace(p, std::move(line));
  }

  const int m = cycle.dim();
  Chain<SpacePoint> out(m + 1);
  std::vector<const std::vector<SpacePoint>*> lay(static_cast<std::size_t>(m) + 1);
  for (const auto& [t, k] : cycle.terms()) {
    for (int j = 0; j <= m; ++j) lay[j] = &layers.at(t[j]);
    std::vector<SpacePoint> cell;
    cell.reserve(static_cast<std::size_t>(m) + 2);
    cell.push_back(c);
    for (int j = 0; j <= m; ++j) cell.push_back((*lay[j])[1]);
    out.add(cell, k);
    for (int i = 1; i < r; ++i) {
      for (int j = 0; j <= m; ++j) {
        cell.clear();
        for (int a = 0; a <= j; ++a) cell.push_back((*lay[a])[i]);
        for (int a = j; a <= m; ++a) cell.push_back((*lay[a])[i + 1]);
        out.add(cell, j % 2 == 0 ? k : -k);
      }
    }
  }
  return out;
}

}  // namespace

Chain<SpacePoint> geodesic_chain(const GraphGeodesics& geo, const SpacePoint& p, const SpacePoint& q) {
  Chain<SpacePoint> out(1);
  if (p == q) return out;
  const auto line = geo.polyline(p, q);
  if (line.empty()) throw Error(ErrorCode::SubgraphDisconnected, "no path between the given points");
  for (std::size_t i = 0; i + 1 < line.size(); ++i) out.add({line[i], line[i + 1]}, 1);
  return out;
}

ConeResult cone_in_subgraph(const GraphGeodesics& s, const Chain<SpacePoint>& cycle, const ConeOptions& opt) {
  ConeResult res;
  res.chain = Chain<SpacePoint>(cycle.dim() + 1);
  if (cycle.empty()) return res;
  if (cycle.dim() == 0 ? augmentation(cycle) != 0 : !boundary(cycle).empty())
    throw Error(ErrorCode::NotACycle, "cone input has nonzero boundary");

  std::set<SpacePoint> support;
  for (const auto& [t, k] : cycle.terms()) support.insert(t.begin(), t.end());
  const SpacePoint p0 = *support.begin();
  double reach = 0.0;
  for (const auto& p : support) {
    if (!s.contains(p)) throw Error(ErrorCode::InvalidInput, "cycle leaves the subgraph");
    const double d = s.dist(p0, p);
    if (d == kInf) throw Error(ErrorCode::SubgraphDisconnected, "cycle support spans several components");
    reach = std::max(reach, d);
  }

  // 1-center candidates: every center of minimal eccentricity lies within
  // `reach` of p0, so only that ball is scanned.
  std::vector<std::pair<double, VertexId>> candidates;
  for (VertexId x : s.members()) {
    const SpacePoint px = SpacePoint::vertex(x);
    if (s.dist(px, p0) > reach + kSlop) continue;
    double ecc = 0.0;
    for (const auto& p : support) ecc = std::max(ecc, s.dist(px, p));
    candidates.emplace_back(ecc, x);
  }
  std::sort(candidates.begin(), candidates.end());

  const double input_cell = chain_cell_diameter(s, cycle);
  const double step = opt.step > 0.0 ? opt.step : std::max(input_cell, kSlop);
  const double limit = opt.inflation * std::max(input_cell, step) + opt.slack + kSlop;
  double worst = 0.0;
  VertexId worst_center = -1;
  const int tries = std::min<int>(std::max(opt.max_centers, 1), static_cast<int>(candidates.size()));
  for (int a = 0; a < tries; ++a) {
    const VertexId center = candidates[a].second;
    auto chain = cycle.dim() == 0 ? cone_points(s, cycle, center) : cone_layers(s, cycle, center, step, support);
    const double widest = cycle.dim() == 0 ? 0.0 : chain_cell_diameter(s, chain);
    if (widest <= limit) {
      res.chain = std::move(chain);
      res.center = center;
      res.attempts = a + 1;
      res.max_cell = widest;
      return res;
    }
    if (worst_center < 0 || widest < worst) {
      worst = widest;
      worst_center = center;
    }
  }
  throw Error(ErrorCode::NoFilling, "no cone center among " + std::to_string(tries) +
                                        " keeps cells below " + std::to_string(limit) + "; best " +
                                        std::to_string(worst) + " at vertex " + std::to_string(worst_center));
}

ConeResult cone_in_subgraph(const MetricSpace& space, std::span<const VertexId> members, const Chain<SpacePoint>& cycle,
                            const ConeOptions& opt) {
  const GraphGeodesics s(space, members);
  return cone_in_subgraph(s, cycle, opt);
}

}  // namespace lipfill
