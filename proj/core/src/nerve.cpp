#include "lipfill/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <queue>
#include <string>

namespace lipfill {

Simplex BaryPoint::support() const {
  Simplex s;
  for (const auto& [k, w] : coords)
    if (w > 0.0) s.push_back(k);
  return s;
}

double BaryPoint::weight(int k) const {
  for (const auto& [j, w] : coords)
    if (j == k) return w;
  return 0.0;
}

NerveComplex::NerveComplex(std::vector<double> scales, std::span<const Simplex> generating_sets, int dim_cap)
    : scales_(std::move(scales)) {
  std::set<Simplex> distinct;
  for (const auto& g : generating_sets) {
    if (g.empty()) continue;
    if (static_cast<int>(g.size()) - 1 > dim_cap)
      throw Error(ErrorCode::DimensionCapExceeded,
                  "simplex of dimension " + std::to_string(g.size() - 1) + " > cap " + std::to_string(dim_cap));
    Simplex s = g;
    std::sort(s.begin(), s.end());
    distinct.insert(std::move(s));
  }
  for (int k = 0; k < vertex_count(); ++k) distinct.insert(Simplex{k});

  for (const auto& g : distinct) {
    if (simplices_.contains(g)) continue;
    const std::size_t m = g.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::uint64_t{1} << i)) face.push_back(g[i]);
      simplices_.insert(std::move(face));
    }
  }
  for (const auto& s : simplices_) dim_ = std::max(dim_, static_cast<int>(s.size()) - 1);

  // Maximal simplices: those that are not a facet of a larger one.
  for (const auto& s : simplices_) {
    bool maximal = true;
    for (int k = 0; k < vertex_count() && maximal; ++k) {
      if (std::binary_search(s.begin(), s.end(), k)) continue;
      Simplex bigger = s;
      bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), k), k);
      if (simplices_.contains(bigger)) maximal = false;
    }
    if (maximal) maximal_.push_back(s);
  }

  // Vertex metric along 1-simplices.
  const auto n = static_cast<std::size_t>(vertex_count());
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& s : simplices_) {
    if (s.size() != 2) continue;
    const double w = std::sqrt(2.0) * scale(s);
    adj[s[0]].emplace_back(s[1], w);
    adj[s[1]].emplace_back(s[0], w);
  }
  vertex_dist_.assign(n * n, kInf);
  using Item = std::pair<double, int>;
  for (std::size_t src = 0; src < n; ++src) {
    double* row = vertex_dist_.data() + src * n;
    row[src] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, static_cast<int>(src));
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > row[x]) continue;
      for (auto [y, w] : adj[x])
        if (d + w < row[y]) {
          row[y] = d + w;
          heap.emplace(row[y], y);
        }
    }
  }
}

double NerveComplex::scale(std::span<const int> sigma) const {
  double s = 0.0;
  for (int k : sigma) s = std::max(s, scales_[k]);
  return s;
}

bool NerveComplex::contains(std::span<const int> sigma) const {
  return simplices_.contains(Simplex(sigma.begin(), sigma.end()));
}

NerveComplex build_nerve(const BumpFamily& family, int dim_cap) {
  std::vector<Simplex> sets;
  for (VertexId x = 0; x < family.space().vertex_count(); ++x) {
    Simplex s;
    for (const auto& [k, t] : family.positive(x)) s.push_back(k);
    sets.push_back(std::move(s));
  }
  for (auto& s : family.edge_positive_sets()) sets.push_back(std::move(s));
  std::vector<double> scales(family.size());
  for (int k = 0; k < family.size(); ++k) scales[k] = family.support_diameter(k);
  return NerveComplex(std::move(scales), sets, dim_cap);
}

namespace {

double l2_diff(const BaryPoint& a, const BaryPoint& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.coords.size() || j < b.coords.size()) {
    if (j == b.coords.size() || (i < a.coords.size() && a.coords[i].first < b.coords[j].first)) {
      s += a.coords[i].second * a.coords[i].second;
      ++i;
    } else if (i == a.coords.size() || b.coords[j].first < a.coords[i].first) {
      s += b.coords[j].second * b.coords[j].second;
      ++j;
    } else {
      const double d = a.coords[i].second - b.coords[j].second;
      s += d * d;
      ++i;
      ++j;
    }
  }
  return std::sqrt(s);
}

}  // namespace

double nerve_distance(const NerveComplex& complex, const BaryPoint& a, const BaryPoint& b) {
  const Simplex sa = a.support(), sb = b.support();
  if (sa.empty() || !complex.contains(sa)) throw Error(ErrorCode::PointNotInComplex, "first point");
  if (sb.empty() || !complex.contains(sb)) throw Error(ErrorCode::PointNotInComplex, "second point");
  double best = kInf;
  Simplex both;
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
  if (complex.contains(both)) best = complex.scale(both) * l2_diff(a, b);
  const double scale_a = complex.scale(sa), scale_b = complex.scale(sb);
  for (int j : sa) {
    const double da = scale_a * l2_diff(a, BaryPoint::vertex(j));
    for (int k : sb) {
      const double db = scale_b * l2_diff(b, BaryPoint::vertex(k));
      best = std::min(best, da + complex.vertex_distance(j, k) + db);
    }
  }
  return best;
}

std::vector<double> nerve_distances(const NerveComplex& complex, std::span<const BaryPoint> points) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = nerve_distance(complex, points[i], points[j]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return d;
}

}  // namespace lipfill
