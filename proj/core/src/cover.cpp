#include "lipfill/cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace lipfill {

BumpFamily::BumpFamily(const MetricSpace& space, std::vector<CoverElement> elements, double epsilon)
    : space_(&space), elements_(std::move(elements)), epsilon_(epsilon), n_(static_cast<std::size_t>(space.vertex_count())) {
  const int count = size();
  core_dist_.assign(static_cast<std::size_t>(count) * n_, kInf);
  for (int k = 0; k < count; ++k) {
    elements_[k].k = k;
    double* row = core_dist_.data() + static_cast<std::size_t>(k) * n_;
    for (VertexId c : elements_[k].core)
      for (std::size_t x = 0; x < n_; ++x) row[x] = std::min(row[x], space.dist(static_cast<VertexId>(x), c));
  }
  positive_.assign(n_, {});
  support_.assign(count, {});
  for (std::size_t x = 0; x < n_; ++x) {
    for (int k = 0; k < count; ++k) {
      const double t = tau(k, static_cast<VertexId>(x));
      if (t > 0.0) {
        positive_[x].emplace_back(k, t);
        support_[k].push_back(static_cast<VertexId>(x));
      }
    }
    multiplicity_ = std::max(multiplicity_, static_cast<int>(positive_[x].size()));
  }
  for (const auto& set : edge_positive_sets()) multiplicity_ = std::max(multiplicity_, static_cast<int>(set.size()));
  support_diam_.assign(count, 0.0);
  for (int k = 0; k < count; ++k) {
    double diam = 0.0;
    const auto& s = support_[k];
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) diam = std::max(diam, space.dist(s[i], s[j]));
    support_diam_[k] = std::max(diam, elements_[k].tau_radius);
  }
  // The support on the metric graph reaches into edges past its vertices;
  // widen by twice the farthest such reach so the scale bounds diam(supp).
  std::vector<double> reach(static_cast<std::size_t>(count), 0.0);
  for (const auto& e : space.edges()) {
    std::vector<int> ks;
    for (const auto& [k, t] : positive_[e.u]) ks.push_back(k);
    for (const auto& [k, t] : positive_[e.v]) ks.push_back(k);
    for (int k : ks) {
      const double s = elements_[k].tau_radius;
      const double du = core_dist(k, e.u), dv = core_dist(k, e.v);
      const bool pu = s - du > kTauTol, pv = s - dv > kTauTol;
      double r = 0.0;
      if (pu && pv)
        r = 2.0 * s > e.w + du + dv ? 0.5 * e.w : std::max(s - du, s - dv);
      else if (pu)
        r = s - du;
      else if (pv)
        r = s - dv;
      reach[k] = std::max(reach[k], r);
    }
  }
  for (int k = 0; k < count; ++k) support_diam_[k] += 2.0 * reach[k];
}

double BumpFamily::tau(int k, VertexId x) const {
  const double t = elements_[k].tau_radius - core_dist(k, x);
  return t > kTauTol ? t : 0.0;
}

double BumpFamily::tau(int k, const SpacePoint& p) const {
  if (p.is_vertex()) return tau(k, p.u);
  const double w = space_->dist(p.u, p.v);
  const double d = std::min(p.offset + core_dist(k, p.u), w - p.offset + core_dist(k, p.v));
  const double t = elements_[k].tau_radius - d;
  return t > kTauTol ? t : 0.0;
}

BumpValues BumpFamily::positive(const SpacePoint& p) const {
  if (p.is_vertex()) return positive_[p.u];
  std::vector<int> candidates;
  for (const auto& [k, t] : positive_[p.u]) candidates.push_back(k);
  for (const auto& [k, t] : positive_[p.v]) candidates.push_back(k);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  BumpValues out;
  for (int k : candidates) {
    const double t = tau(k, p);
    if (t > 0.0) out.emplace_back(k, t);
  }
  return out;
}

double BumpFamily::tau_bar(VertexId x) const {
  double s = 0.0;
  for (const auto& [k, t] : positive_[x]) s += t;
  return s;
}

double BumpFamily::tau_bar(const SpacePoint& p) const {
  double s = 0.0;
  for (const auto& [k, t] : positive(p)) s += t;
  return s;
}

std::vector<std::vector<int>> BumpFamily::edge_positive_sets() const {
  std::vector<std::vector<int>> out;
  for (const auto& e : space_->edges()) {
    std::vector<double> cuts{0.0, e.w};
    std::vector<int> candidates;
    for (const auto& [k, t] : positive_[e.u]) candidates.push_back(k);
    for (const auto& [k, t] : positive_[e.v]) candidates.push_back(k);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (int k : candidates) {
      const double s = elements_[k].tau_radius;
      const double a = s - core_dist(k, e.u);
      const double b = e.w - (s - core_dist(k, e.v));
      if (a > 0.0 && a < e.w) cuts.push_back(a);
      if (b > 0.0 && b < e.w) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] <= kDistTol) continue;
      const SpacePoint mid{e.u, e.v, 0.5 * (cuts[i] + cuts[i + 1])};
      std::vector<int> set;
      for (int k : candidates)
        if (tau(k, mid) > 0.0) set.push_back(k);
      out.push_back(std::move(set));
    }
  }
  return out;
}

namespace {

// Greedy net in ascending id order; returns centers.
std::vector<VertexId> greedy_net(const MetricSpace& space, std::span<const VertexId> pool, double separation) {
  std::vector<VertexId> centers;
  for (VertexId c : pool) {
    bool far = true;
    for (VertexId o : centers)
      if (space.dist(c, o) < separation) {
        far = false;
        break;
      }
    if (far) centers.push_back(c);
  }
  return centers;
}

// Voronoi cells of `pool` around `centers` (nearest center, lowest index on ties).
std::vector<std::vector<VertexId>> voronoi(const MetricSpace& space, std::span<const VertexId> pool,
                                           std::span<const VertexId> centers) {
  std::vector<std::vector<VertexId>> cells(centers.size());
  for (VertexId x : pool) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < centers.size(); ++i)
      if (space.dist(x, centers[i]) < space.dist(x, centers[best]) - kDistTol) best = i;
    cells[best].push_back(x);
  }
  return cells;
}

}  // namespace

BumpFamily build_cover(const MetricSpace& space, const SubsetZ& z, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "epsilon = " + std::to_string(epsilon));
  if (2.0 * epsilon <= space.max_edge_weight())
    throw Error(ErrorCode::InvalidInput, "epsilon " + std::to_string(epsilon) +
                                             " below graph resolution (need 2*epsilon > max edge weight " +
                                             std::to_string(space.max_edge_weight()) + ")");
  const VertexId n = space.vertex_count();
  std::vector<double> dz(n);
  for (VertexId x = 0; x < n; ++x) dz[x] = dist_to_set(space, z.members, x);

  std::vector<CoverElement> elements;
  // Cores are vertex sets; half an edge stands in for the part of each edge
  // that a Voronoi cell of the metric graph would also own.
  const double half = 0.5 * space.max_edge_weight();

  // Fine part: net on Z; cores are the Voronoi cells of the near zone.
  const double near = kNearZone * epsilon;
  std::vector<VertexId> near_zone;
  for (VertexId x = 0; x < n; ++x)
    if (dz[x] < near) near_zone.push_back(x);
  const auto fine_centers = greedy_net(space, z.members, kFineSeparation * epsilon);
  const auto fine_cells = voronoi(space, near_zone, fine_centers);
  for (std::size_t i = 0; i < fine_centers.size(); ++i) {
    CoverElement el;
    el.kind = CoverKind::Fine;
    el.center = fine_centers[i];
    el.radius = near + kFineSeparation * epsilon;
    el.tau_radius = epsilon + half;
    el.core = fine_cells[i];
    el.dist_to_z = 0.0;
    elements.push_back(std::move(el));
  }

  // Coarse part: dyadic annuli 2^j eps <= d(x, Z) < 2^(j+1) eps beyond the near zone.
  std::map<int, std::vector<VertexId>> annuli;
  for (VertexId x = 0; x < n; ++x) {
    if (dz[x] < near) continue;
    const int j = static_cast<int>(std::floor(std::log2(dz[x] / epsilon)));
    annuli[std::max(j, kFirstAnnulus)].push_back(x);
  }
  for (const auto& [j, members] : annuli) {
    const double sep = std::ldexp(epsilon, j - 1);
    const auto centers = greedy_net(space, members, sep);
    const auto cells = voronoi(space, members, centers);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      CoverElement el;
      el.kind = CoverKind::Coarse;
      el.center = centers[i];
      el.radius = sep;
      el.tau_radius = std::ldexp(epsilon, j - 2) + half;
      el.annulus = j;
      el.core = cells[i];
      el.dist_to_z = kInf;
      for (VertexId y : el.core) el.dist_to_z = std::min(el.dist_to_z, dz[y]);
      elements.push_back(std::move(el));
    }
  }

  BumpFamily family(space, std::move(elements), epsilon);
  for (VertexId x = 0; x < n; ++x)
    if (family.positive(x).empty()) throw Error(ErrorCode::CoverageFailure, "vertex " + std::to_string(x));
  for (const auto& set : family.edge_positive_sets())
    if (set.empty()) throw Error(ErrorCode::CoverageFailure, "edge interval with tau_bar = 0");
  return family;
}

int multiplicity(const BumpFamily& family) { return family.multiplicity(); }

BumpContract check_bump_contract(const BumpFamily& family, const SubsetZ& z) {
  BumpContract c;
  const auto& space = family.space();
  for (int k = 0; k < family.size(); ++k) {
    const auto& el = family.element(k);
    for (const auto& e : space.edges())
      if (std::abs(family.tau(k, e.u) - family.tau(k, e.v)) > e.w + 1e-12) c.lipschitz = false;
    bool core_meets = false, supp_meets = false;
    for (VertexId x : el.core) {
      if (family.tau(k, x) < family.epsilon()) c.core_floor = false;
      core_meets = core_meets || z.contains(x);
    }
    for (VertexId x : family.support(k)) supp_meets = supp_meets || z.contains(x);
    if (core_meets != supp_meets) c.z_meeting = false;
  }
  for (VertexId x = 0; x < space.vertex_count(); ++x)
    if (family.tau_bar(x) <= 0.0) c.covers = false;
  return c;
}

}  // namespace lipfill
