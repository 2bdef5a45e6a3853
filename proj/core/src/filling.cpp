#include "lipfill/filling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lipfill {

namespace {

constexpr double kBoundTol = 1e-12;

class SnapCache {
 public:
  explicit SnapCache(const GMap& gm) : gm_(gm) {}
  int operator()(const SpacePoint& p) {
    auto it = memo_.find(p);
    if (it == memo_.end()) it = memo_.emplace(p, gm_.snap(p)).first;
    return it->second;
  }

 private:
  const GMap& gm_;
  std::map<SpacePoint, int> memo_;
};

std::string describe(const SpacePoint& p) {
  std::ostringstream os;
  if (p.is_vertex())
    os << p.u;
  else
    os << "(" << p.u << "," << p.v << ")@" << p.offset;
  return os.str();
}

std::string describe(const NervePoint& q) {
  return q.is_vertex() ? "v" + std::to_string(q.k) : "g" + describe(q.p);
}

template <class P>
std::string describe(const std::vector<P>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + describe(t[i]);
  return s + "]";
}

Simplex vertex_set(std::vector<int> ks) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

bool is_cycle(const auto& c) {
  if (c.empty()) return true;
  return c.dim() == 0 ? augmentation(c) == 0 : boundary(c).empty();
}

}  // namespace

SubdividedCycle subdivide_cycle(const GraphGeodesics& z, const Chain<SpacePoint>& alpha, double delta,
                                double coarse_step) {
  SubdividedCycle out;
  out.chain = out.coarse = Chain<SpacePoint>(alpha.dim());
  out.fan = Chain<SpacePoint>(alpha.dim() + 1);
  if (alpha.dim() == 0) {
    out.chain = out.coarse = alpha;
    out.cells = static_cast<std::int64_t>(alpha.size());
    out.c_alpha = static_cast<double>(alpha.size());
    return out;
  }
  if (alpha.dim() != 1) throw Error(ErrorCode::InvalidInput, "only 0- and 1-cycles are subdivided");
  for (const auto& [t, c] : alpha.terms()) {
    const double len = z.dist(t[0], t[1]);
    if (len == kInf) throw Error(ErrorCode::ZPathMissing, "cycle term " + describe(t) + " is not joined in Z");
    const int fc = coarse_step > 0.0 ? static_cast<int>(std::floor(len / coarse_step)) + 1 : 1;
    const int ff = std::isfinite(delta) ? static_cast<int>(std::floor(len / fc / delta)) + 1 : 1;
    const auto pts = z.sample(t[0], t[1], fc * ff);
    for (int i = 0; i < fc; ++i) {
      const SpacePoint& a = pts[static_cast<std::size_t>(i) * ff];
      out.coarse.add({a, pts[static_cast<std::size_t>(i + 1) * ff]}, c);
      for (int l = 0; l < ff; ++l) {
        const std::size_t at = static_cast<std::size_t>(i) * ff + l;
        out.chain.add({pts[at], pts[at + 1]}, c);
        out.fan.add({a, pts[at], pts[at + 1]}, c);
      }
    }
    out.cells += static_cast<std::int64_t>(fc) * ff;
    out.c_alpha += len + fc;
  }
  return out;
}

AlphaPrime build_alpha_prime(const GMap& gm, const Chain<SpacePoint>& alpha_sub) {
  const auto& space = gm.family().space();
  const double top = 1.0 / (gm.nerve().dim() + 1);
  const double lg = gm.lipschitz();
  SnapCache snap(gm);
  AlphaPrime out;
  out.chain = Chain<NervePoint>(alpha_sub.dim());
  out.min_bound = out.min_weight = out.min_snap_weight = alpha_sub.empty() ? 0.0 : kInf;
  std::vector<int> ks;
  std::vector<NervePoint> tuple;
  for (const auto& [t, c] : alpha_sub.terms()) {
    ks.clear();
    for (const auto& p : t) ks.push_back(snap(p));
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double own = gm.weight(ks[j], t[j]);
      out.min_snap_weight = std::min(out.min_snap_weight, own);
      if (own < top - kBoundTol)
        throw Error(ErrorCode::SnapInvalid, "snapped weight below 1/(dim+1) at " + describe(t[j]));
      for (std::size_t l = 0; l < t.size(); ++l) {
        const double bound = top - lg * space.dist(t[j], t[l]);
        const double w = gm.weight(ks[j], t[l]);
        if (bound <= 0.0)
          throw Error(ErrorCode::SnapInvalid, "cell " + describe(t) + " is too long for the suppTau bound");
        if (w < bound - kBoundTol)
          throw Error(ErrorCode::SnapInvalid, "suppTau bound fails on cell " + describe(t));
        out.min_bound = std::min(out.min_bound, bound);
        out.min_weight = std::min(out.min_weight, w);
      }
    }
    if (!gm.nerve().contains(vertex_set(ks)))
      throw Error(ErrorCode::SnapInvalid, "snapped cell " + describe(t) + " spans no simplex");
    tuple.clear();
    for (int k : ks) tuple.push_back(NervePoint::vertex(k));
    out.chain.add(tuple, c);
  }
  return out;
}

Chain<NervePoint> build_gamma(const GMap& gm, const Chain<SpacePoint>& alpha_sub) {
  SnapCache snap(gm);
  for (const auto& [t, c] : alpha_sub.terms())
    for (const auto& p : t)
      for (const auto& q : t)
        if (gm.weight(snap(p), q) <= 0.0)
          throw Error(ErrorCode::SupportViolation, "v(" + describe(p) + ") is outside supp g(" + describe(q) + ")");
  return prism(
      alpha_sub, [&](const SpacePoint& p) { return NervePoint::vertex(snap(p)); },
      [](const SpacePoint& p) { return NervePoint::image(p); });
}

Chain<SpacePoint> build_lambda(const GMap& gm, const HMap& hm, const Chain<SpacePoint>& alpha_sub) {
  const auto& z = hm.subset();
  SnapCache snap(gm);
  std::map<SpacePoint, Chain<SpacePoint>> legs;
  auto leg = [&](const SpacePoint& p) -> const Chain<SpacePoint>& {
    auto it = legs.find(p);
    if (it != legs.end()) return it->second;
    const SpacePoint h = SpacePoint::vertex(hm.vertex_image(snap(p)));
    if (z.geodesics.dist(h, p) == kInf) throw Error(ErrorCode::ZPathMissing, "no Z-path from h(v(z)) to " + describe(p));
    return legs.emplace(p, geodesic_chain(z.geodesics, h, p)).first->second;
  };

  Chain<SpacePoint> out(alpha_sub.dim() + 1);
  if (alpha_sub.dim() == 0) {
    for (const auto& [t, c] : alpha_sub.terms()) out += leg(t[0]) * c;
    return out;
  }
  if (alpha_sub.dim() != 1) throw Error(ErrorCode::InvalidInput, "lambda is built for 0- and 1-cycles");
  ConeOptions opt;
  opt.slack = 2.0 * gm.family().space().max_edge_weight();
  for (const auto& [t, c] : alpha_sub.terms()) {
    Chain<SpacePoint> rim = Chain<SpacePoint>::simplex(t);
    rim -= hm.push(Chain<int>::simplex({snap(t[0]), snap(t[1])}));
    rim -= leg(t[1]);
    rim += leg(t[0]);
    if (!rim.empty()) out += cone_in_subgraph(z.geodesics, rim, opt).chain * c;
  }
  return out;
}

SnapResult simplicial_approximation(const GMap& gm, const Chain<NervePoint>& c) {
  SnapCache snap(gm);
  SnapResult out;
  out.chain = Chain<NervePoint>(c.dim());
  std::vector<NervePoint> tuple;
  std::vector<int> ks;
  for (const auto& [t, k] : c.terms()) {
    tuple.clear();
    ks.clear();
    for (const auto& q : t) {
      const int v = q.is_vertex() ? q.k : snap(q.p);
      ks.push_back(v);
      tuple.push_back(NervePoint::vertex(v));
    }
    if (!gm.nerve().contains(vertex_set(ks))) {
      if (out.invalid == 0) out.diagnostic = "cell " + describe(t) + " snaps to " + describe(tuple);
      ++out.invalid;
    }
    out.chain.add(tuple, k);
  }
  return out;
}

Chain<SpacePoint> fill_in_X(const MetricSpace& space, const Chain<SpacePoint>& alpha, double step) {
  if (!is_cycle(alpha)) throw Error(ErrorCode::NotACycle, "alpha has nonzero boundary");
  ConeOptions opt;
  opt.step = step;
  opt.slack = 2.0 * space.max_edge_weight();
  return cone_in_subgraph(space.geodesics(), alpha, opt).chain;
}

double space_mass(const MetricSpace& space, const Chain<SpacePoint>& c) {
  return mass(c, [&](const SpacePoint& a, const SpacePoint& b) { return space.dist(a, b); });
}

double nerve_mass(const GMap& gm, const Chain<NervePoint>& c) {
  std::map<NervePoint, BaryPoint> memo;
  auto bary = [&](const NervePoint& q) -> const BaryPoint& {
    auto it = memo.find(q);
    if (it == memo.end()) it = memo.emplace(q, gm.eval(q)).first;
    return it->second;
  };
  return mass(c, [&](const NervePoint& a, const NervePoint& b) {
    return a == b ? 0.0 : nerve_distance(gm.nerve(), bary(a), bary(b));
  });
}

FillingResult fill_in_Z(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& alpha, double epsilon,
                        const FillingOptions& opt) {
  const int m = alpha.dim();
  if (m > opt.n) throw Error(ErrorCode::InvalidInput, "cycle dimension exceeds n");
  if (m > 1) throw Error(ErrorCode::InvalidInput, "only 0- and 1-cycles are supported");
  for (const auto& [t, c] : alpha.terms())
    for (const auto& p : t)
      if (!z.contains(p)) throw Error(ErrorCode::InvalidInput, "alpha leaves Z at " + describe(p));
  if (!is_cycle(alpha)) throw Error(ErrorCode::NotACycle, "alpha has nonzero boundary");

  FillingResult res;
  auto& r = res.report;
  r.epsilon = epsilon;
  r.m = m;
  r.alpha_is_cycle = true;

  const BumpFamily family = build_cover(space, z, epsilon);
  const NerveComplex nerve = build_nerve(family, opt.dim_cap);
  const GMap gm(family, nerve);
  const HMap hm(family, nerve, z);
  r.cover_size = family.size();
  r.multiplicity = family.multiplicity();
  r.nerve_dim = nerve.dim();
  r.lg = gm.lipschitz();
  r.lg_vertices = measure_lg_on_vertices(gm);
  r.g_scale = gm.scale_constant();
  r.partition_defect = gm.partition_defect();
  r.g_lipschitz = measure_g_lipschitz(gm, opt.seed, opt.lipschitz_pairs);
  r.h_lipschitz = hm.vertex_lipschitz();
  r.pullback = hm.pullback_constant(gm);
  r.bumps = check_bump_contract(family, z);
  r.h_vertex_rules = true;
  for (int k = 0; k < family.size(); ++k) {
    const auto& el = family.element(k);
    const VertexId img = hm.vertex_image(k);
    if (!z.contains(img) || (el.kind == CoverKind::Fine && img != el.center)) r.h_vertex_rules = false;
  }
  r.delta = r.lg > 0.0 ? 1.0 / (2.0 * (nerve.dim() + 1) * r.lg) : kInf;

  // beta is a cone over an edge-scale cut of alpha plus the fan down to the
  // delta-cut; coning the delta-cut itself costs (length / delta)^2 cells.
  const double coarse = space.max_edge_weight();
  const auto sub = subdivide_cycle(z.geodesics, alpha, r.delta, coarse);
  res.alpha_sub = sub.chain;
  r.cells = sub.cells;
  r.c_alpha = sub.c_alpha;

  const auto ap = build_alpha_prime(gm, res.alpha_sub);
  res.alpha_prime = ap.chain;
  r.min_bound = ap.min_bound;
  r.min_weight = ap.min_weight;
  r.min_snap_weight = ap.min_snap_weight;
  res.gamma = build_gamma(gm, res.alpha_sub);
  res.lambda = build_lambda(gm, hm, res.alpha_sub);

  double step = coarse;
  SnapResult snapped;
  for (int attempt = 0;; ++attempt) {
    res.beta = fill_in_X(space, sub.coarse, step) + sub.fan;
    const auto image = res.beta.map([](const SpacePoint& p) { return NervePoint::image(p); });
    snapped = simplicial_approximation(gm, image - res.gamma);
    if (attempt == 0) r.snap_invalid = snapped.invalid;
    r.beta_step = step;
    if (snapped.invalid == 0 || attempt >= opt.snap_retries || m == 0) break;
    step *= 0.5;
  }
  r.snap_invalid_final = snapped.invalid;
  r.snap_diagnostic = snapped.diagnostic;
  res.p_beta = std::move(snapped.chain);
  res.final_chain = res.lambda + hm.push(res.p_beta);

  const auto g_alpha = res.alpha_sub.map([](const SpacePoint& p) { return NervePoint::image(p); });
  r.alpha_prime_cycle = is_cycle(res.alpha_prime);
  r.gamma_identity = boundary(res.gamma) == g_alpha - res.alpha_prime;
  r.lambda_identity = boundary(res.lambda) == res.alpha_sub - hm.push(res.alpha_prime);
  r.p_beta_identity = boundary(res.p_beta) == res.alpha_prime;
  r.final_identity = boundary(res.final_chain) == res.alpha_sub;
  r.beta_identity = boundary(res.beta) == res.alpha_sub;
  r.final_in_z = true;
  for (const auto& [t, c] : res.final_chain.terms())
    for (const auto& p : t) r.final_in_z = r.final_in_z && z.contains(p);

  r.masses.alpha = space_mass(space, alpha);
  r.masses.alpha_prime = nerve_mass(gm, res.alpha_prime);
  r.masses.beta = space_mass(space, res.beta);
  r.masses.gamma = nerve_mass(gm, res.gamma);
  r.masses.lambda = space_mass(space, res.lambda);
  r.masses.p_beta = nerve_mass(gm, res.p_beta);
  r.masses.final_chain = space_mass(space, res.final_chain);
  return res;
}

}  // namespace lipfill
