#include "lipfill/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lipfill {

namespace {

std::vector<int> candidates_on_edge(const BumpFamily& f, VertexId u, VertexId v) {
  std::vector<int> ks;
  for (const auto& [k, t] : f.positive(u)) ks.push_back(k);
  for (const auto& [k, t] : f.positive(v)) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace

GMap::GMap(const BumpFamily& family, const NerveComplex& nerve)
    : family_(&family), nerve_(&nerve), lip_k_(static_cast<std::size_t>(family.size()), 0.0) {
  // On an edge, tau_k(t) = max(0, s - min(t + d_u, w - t + d_v)) is linear
  // between the cuts s - d_u, w - s + d_v and the crossing of the two
  // branches. On a linear piece g_k' = (tau_k' tau_bar - tau_k tau_bar') /
  // tau_bar^2 has a constant numerator, so |g_k'| peaks where tau_bar is least.
  for (const auto& e : family.space().edges()) {
    const auto ks = candidates_on_edge(family, e.u, e.v);
    if (ks.empty()) throw Error(ErrorCode::ZeroTauBar, "edge with no positive bump");
    const double w = e.w;
    std::vector<double> cuts{0.0, w};
    for (int k : ks) {
      const double s = family.element(k).tau_radius;
      const double du = family.core_dist(k, e.u), dv = family.core_dist(k, e.v);
      for (double c : {s - du, w - s + dv, 0.5 * (w + dv - du)})
        if (c > 0.0 && c < w) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> v0(ks.size()), v1(ks.size()), sl(ks.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double x0 = cuts[i], x1 = cuts[i + 1];
      if (x1 - x0 <= 1e-12 * w) continue;
      const double xm = 0.5 * (x0 + x1);
      double t0 = 0.0, t1 = 0.0, slope = 0.0;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const int k = ks[j];
        const double s = family.element(k).tau_radius;
        const double du = family.core_dist(k, e.u), dv = family.core_dist(k, e.v);
        auto value = [&](double t) { return std::max(0.0, s - std::min(t + du, w - t + dv)); };
        v0[j] = value(x0);
        v1[j] = value(x1);
        const double from_u = xm + du, from_v = w - xm + dv;
        sl[j] = s - std::min(from_u, from_v) <= 0.0 ? 0.0 : (from_u < from_v ? -1.0 : 1.0);
        t0 += v0[j];
        t1 += v1[j];
        slope += sl[j];
      }
      const double low = std::min(t0, t1);
      if (low <= 0.0) throw Error(ErrorCode::ZeroTauBar, "tau_bar vanishes on an edge");
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const double num = std::abs(sl[j] * t0 - v0[j] * slope);
        auto& l = lip_k_[static_cast<std::size_t>(ks[j])];
        l = std::max(l, num / (low * low));
      }
    }
  }
  for (double l : lip_k_) lip_ = std::max(lip_, l);
}

double GMap::weight(int k, VertexId x) const {
  const double tb = family_->tau_bar(x);
  if (tb <= 0.0) throw Error(ErrorCode::ZeroTauBar, "tau_bar(" + std::to_string(x) + ") = 0");
  return family_->tau(k, x) / tb;
}

double GMap::weight(int k, const SpacePoint& p) const {
  const double tb = family_->tau_bar(p);
  if (tb <= 0.0) throw Error(ErrorCode::ZeroTauBar, "tau_bar vanishes at an edge point");
  return family_->tau(k, p) / tb;
}

BaryPoint GMap::eval(VertexId x) const { return eval(SpacePoint::vertex(x)); }

BaryPoint GMap::eval(const SpacePoint& p) const {
  const auto pos = family_->positive(p);
  double tb = 0.0;
  for (const auto& [k, t] : pos) tb += t;
  if (tb <= 0.0) throw Error(ErrorCode::ZeroTauBar, "tau_bar vanishes");
  BaryPoint out;
  out.coords.reserve(pos.size());
  for (const auto& [k, t] : pos) out.coords.emplace_back(k, t / tb);
  return out;
}

int GMap::snap(const SpacePoint& p) const {
  const auto pos = family_->positive(p);
  if (pos.empty()) throw Error(ErrorCode::ZeroTauBar, "no positive bump at snapped point");
  int best = pos.front().first;
  double top = pos.front().second;
  for (const auto& [k, t] : pos)
    if (t > top) {
      top = t;
      best = k;
    }
  return best;
}

double GMap::scale_constant() const {
  double c = 0.0;
  for (int k = 0; k < family_->size(); ++k) c = std::max(c, lip_k_[k] * family_->support_diameter(k));
  return c;
}

double GMap::partition_defect() const {
  double worst = 0.0;
  for (VertexId x = 0; x < family_->space().vertex_count(); ++x) {
    const double tb = family_->tau_bar(x);
    double s = 0.0;
    for (const auto& [k, t] : family_->positive(x)) s += t / tb;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double GMap::distance(const NervePoint& a, const NervePoint& b) const {
  if (a == b) return 0.0;
  return nerve_distance(*nerve_, eval(a), eval(b));
}

double measure_lg_on_vertices(const GMap& gm) {
  const auto& f = gm.family();
  double lg = 0.0;
  for (const auto& e : f.space().edges())
    for (int k : candidates_on_edge(f, e.u, e.v))
      lg = std::max(lg, std::abs(gm.weight(k, e.u) - gm.weight(k, e.v)) / e.w);
  return lg;
}

double measure_g_lipschitz(const GMap& gm, std::uint64_t seed, int pairs) {
  const auto& space = gm.family().space();
  double lip = 0.0;
  auto ratio = [&](VertexId a, VertexId b) {
    const double d = space.dist(a, b);
    if (d <= 0.0) return;
    lip = std::max(lip, nerve_distance(gm.nerve(), gm.eval(a), gm.eval(b)) / d);
  };
  for (const auto& e : space.edges()) ratio(e.u, e.v);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, space.vertex_count() - 1);
  for (int i = 0; i < pairs; ++i) {
    const VertexId a = pick(rng);
    const VertexId b = pick(rng);
    ratio(a, b);
  }
  return lip;
}

HMap::HMap(const BumpFamily& family, const NerveComplex& nerve, const SubsetZ& z)
    : family_(&family), nerve_(&nerve), z_(&z), images_(static_cast<std::size_t>(family.size()), -1) {
  if (z.members.empty()) throw Error(ErrorCode::EmptySubset, "Z is empty");
  const auto& space = family.space();
  // Nearest Z vertex of every vertex, lowest id on ties.
  std::vector<double> dz(static_cast<std::size_t>(space.vertex_count()), kInf);
  std::vector<VertexId> nz(static_cast<std::size_t>(space.vertex_count()), -1);
  for (VertexId x = 0; x < space.vertex_count(); ++x)
    for (VertexId m : z.members) {
      const double d = space.dist(x, m);
      if (d < dz[x]) {
        dz[x] = d;
        nz[x] = m;
      }
    }
  for (int k = 0; k < family.size(); ++k) {
    const auto& el = family.element(k);
    if (el.kind == CoverKind::Fine) {
      images_[k] = el.center;
      continue;
    }
    double best = kInf;
    VertexId img = -1;
    for (VertexId x : family.support(k))
      if (dz[x] < best || (dz[x] == best && nz[x] < img)) {
        best = dz[x];
        img = nz[x];
      }
    images_[k] = img;
  }
}

Chain<SpacePoint> HMap::edge_image(int j, int k) const {
  if (j > k) return -edge_image(k, j);
  const SpacePoint p = SpacePoint::vertex(images_[j]), q = SpacePoint::vertex(images_[k]);
  if (z_->geodesics.dist(p, q) == kInf)
    throw Error(ErrorCode::ZDisconnectedBetweenImages,
                "no path in Z between h(v_" + std::to_string(j) + ") and h(v_" + std::to_string(k) + ")");
  return geodesic_chain(z_->geodesics, p, q);
}

Chain<SpacePoint> HMap::triangle_image(int a, int b, int c) const {
  const std::array<int, 3> key{a, b, c};
  {
    std::lock_guard lock(mu_);
    if (auto it = triangles_.find(key); it != triangles_.end()) return it->second;
  }
  const Chain<SpacePoint> rim = edge_image(b, c) - edge_image(a, c) + edge_image(a, b);
  ConeOptions opt;
  opt.slack = 2.0 * family_->space().max_edge_weight();
  Chain<SpacePoint> out(2);
  if (!rim.empty()) out = cone_in_subgraph(z_->geodesics, rim, opt).chain;
  std::lock_guard lock(mu_);
  triangles_.emplace(key, out);
  return out;
}

Chain<SpacePoint> HMap::push(const Chain<int>& c) const {
  Chain<SpacePoint> out(c.dim());
  if (c.dim() > 2) throw Error(ErrorCode::InvalidInput, "h is built on the 2-skeleton only");
  for (const auto& [t, k] : c.terms()) {
    switch (c.dim()) {
      case 0:
        out.add({SpacePoint::vertex(images_[t[0]])}, k);
        break;
      case 1:
        out += edge_image(t[0], t[1]) * k;
        break;
      default:
        out += triangle_image(t[0], t[1], t[2]) * k;
    }
  }
  return out;
}

Chain<SpacePoint> HMap::push(const Chain<NervePoint>& c) const {
  return push(c.map([](const NervePoint& q) {
    if (!q.is_vertex()) throw Error(ErrorCode::InvalidInput, "h_# needs a simplicial chain");
    return q.k;
  }));
}

double HMap::pullback_constant(const GMap& gm) const {
  const auto& space = family_->space();
  double worst = 0.0;
  for (VertexId z : z_->members) {
    const VertexId hz = images_[gm.snap(SpacePoint::vertex(z))];
    worst = std::max(worst, space.dist(hz, z));
  }
  return worst / family_->epsilon();
}

double HMap::vertex_lipschitz() const {
  const auto& space = family_->space();
  double lip = 0.0;
  for (const auto& s : nerve_->simplices()) {
    if (s.size() != 2) continue;
    lip = std::max(lip, space.dist(images_[s[0]], images_[s[1]]) / nerve_->vertex_distance(s[0], s[1]));
  }
  return lip;
}

}  // namespace lipfill
