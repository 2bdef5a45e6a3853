#include "lipfill/chain.hpp"

#include <mutex>
#include <numeric>
#include <set>

namespace lipfill {

namespace {

// Cumulative coordinates y_i = c_i + ... + c_m, i = 1..m, in which the level-r
// simplex is {r >= y_1 >= ... >= y_m >= 0}.
std::vector<int> to_cumulative(std::span<const int> counts) {
  const int m = static_cast<int>(counts.size()) - 1;
  std::vector<int> y(m);
  int acc = 0;
  for (int i = m; i >= 1; --i) {
    acc += counts[i];
    y[i - 1] = acc;
  }
  return y;
}

std::vector<int> from_cumulative(std::span<const int> y, int level) {
  const int m = static_cast<int>(y.size());
  std::vector<int> c(m + 1);
  c[0] = level - (m > 0 ? y[0] : 0);
  for (int i = 1; i <= m; ++i) c[i] = y[i - 1] - (i < m ? y[i] : 0);
  return c;
}

bool in_region(std::span<const int> y, int level) {
  int prev = level;
  for (int v : y) {
    if (v > prev) return false;
    prev = v;
  }
  return y.empty() || y.back() >= 0;
}

void enumerate_points(int m, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur.push_back(v);
    enumerate_points(m, remaining - v, cur, out);
    cur.pop_back();
  }
}

int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

std::shared_ptr<SimplexLattice> build_lattice(int m, int level) {
  auto lat = std::make_shared<SimplexLattice>();
  lat->m = m;
  lat->level = level;
  std::vector<int> cur;
  enumerate_points(m, level, cur, lat->points);
  std::sort(lat->points.begin(), lat->points.end());
  return lat;
}

}  // namespace

int SimplexLattice::index(std::span<const int> counts) const {
  auto it = index_.find(std::vector<int>(counts.begin(), counts.end()));
  if (it == index_.end()) throw Error(ErrorCode::InvalidInput, "not a lattice point");
  return it->second;
}

std::shared_ptr<const SimplexLattice> simplex_lattice(int m, int level) {
  if (m < 0 || level < 1) throw Error(ErrorCode::InvalidInput, "lattice needs m >= 0 and level >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SimplexLattice>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find({m, level}); it != cache.end()) return it->second;

  auto lat = build_lattice(m, level);
  for (std::size_t i = 0; i < lat->points.size(); ++i) lat->index_.emplace(lat->points[i], static_cast<int>(i));

  if (m == 0) {
    lat->cells.push_back({{0}, 1});
  } else {
    std::vector<int> base(m, 0);
    std::vector<int> perm(m);
    std::set<std::pair<int, int>> edge_set;
    while (true) {
      if (in_region(base, level)) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
          std::vector<int> y = base;
          std::vector<int> verts;
          bool ok = true;
          for (int k = 0; k <= m && ok; ++k) {
            if (k > 0) ++y[perm[k - 1]];
            if (!in_region(y, level)) {
              ok = false;
              break;
            }
            verts.push_back(lat->index(from_cumulative(y, level)));
          }
          if (!ok) continue;
          for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
              edge_set.emplace(std::min(verts[a], verts[b]), std::max(verts[a], verts[b]));
          lat->cells.push_back({std::move(verts), permutation_sign(perm)});
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      int i = m - 1;
      while (i >= 0 && base[i] == level - 1) base[i--] = 0;
      if (i < 0) break;
      ++base[i];
    }
    for (auto [a, b] : edge_set) {
      double s = 0.0;
      for (int i = 0; i <= m; ++i) {
        const double d = lat->points[a][i] - lat->points[b][i];
        s += d * d;
      }
      lat->edges.push_back({a, b, std::sqrt(s) / level});
    }
  }
  cache.emplace(std::pair{m, level}, lat);
  return lat;
}

namespace detail {

std::vector<std::pair<int, int>> kuhn_weights(const SimplexLattice& coarse, std::span<const int> fine_counts, int factor) {
  const int m = coarse.m;
  if (m == 0) return {{0, factor}};
  const std::vector<int> y = to_cumulative(fine_counts);
  std::vector<int> base(m), frac(m), order(m);
  for (int i = 0; i < m; ++i) {
    base[i] = y[i] / factor;
    frac[i] = y[i] % factor;
  }
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });

  std::vector<std::pair<int, int>> out;
  std::vector<int> v = base;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) ++v[order[k - 1]];
    const int hi = k == 0 ? factor : frac[order[k - 1]];
    const int lo = k == m ? 0 : frac[order[k]];
    const int w = hi - lo;
    if (w == 0) continue;
    out.emplace_back(coarse.index(from_cumulative(v, coarse.level)), w);
  }
  return out;
}

}  // namespace detail

}  // namespace lipfill
