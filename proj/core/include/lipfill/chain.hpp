#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lipfill/error.hpp"

namespace lipfill {

/// Volume of a regular m-simplex with edge length s (1 for m = 0, s for m = 1).
inline double regular_simplex_volume(int m, double s) {
  double v = std::sqrt(m + 1.0);
  for (int i = 1; i <= m; ++i) v *= s / (i * std::sqrt(2.0));
  return v;
}

/// Integer chain of oriented simplices with vertices in P. Terms are kept in
/// canonical form: vertex tuples sorted (sign absorbed into the coefficient),
/// degenerate tuples dropped, zero coefficients erased. Equality is exact.
template <class P>
class Chain {
 public:
  using Tuple = std::vector<P>;
  using Terms = std::map<Tuple, std::int64_t>;

  Chain() = default;
  explicit Chain(int dim) : dim_(dim) {}

  static Chain simplex(Tuple t, std::int64_t coeff = 1) {
    Chain c(static_cast<int>(t.size()) - 1);
    c.add(std::move(t), coeff);
    return c;
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(Tuple t, std::int64_t coeff) {
    if (static_cast<int>(t.size()) != dim_ + 1)
      throw Error(ErrorCode::MismatchedShape,
                  "tuple of size " + std::to_string(t.size()) + " in a " + std::to_string(dim_) + "-chain");
    if (coeff == 0) return;
    // Insertion sort, tracking the parity of the permutation.
    for (std::size_t i = 1; i < t.size(); ++i)
      for (std::size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
        std::swap(t[j], t[j - 1]);
        coeff = -coeff;
      }
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] == t[i - 1]) return;
    auto [it, fresh] = terms_.try_emplace(std::move(t), coeff);
    if (!fresh) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Chain& operator+=(const Chain& o) { return accumulate(o, 1); }
  Chain& operator-=(const Chain& o) { return accumulate(o, -1); }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator-(const Chain& a) { return a * -1; }
  friend Chain operator*(const Chain& a, std::int64_t k) {
    Chain out(a.dim_);
    if (k == 0) return out;
    for (const auto& [t, c] : a.terms_) out.terms_.emplace(t, c * k);
    return out;
  }
  friend bool operator==(const Chain& a, const Chain& b) { return a.terms_ == b.terms_; }

  /// Pushforward along a point map.
  template <class F>
  auto map(F&& f) const {
    using Q = std::decay_t<std::invoke_result_t<F&, const P&>>;
    Chain<Q> out(dim_);
    for (const auto& [t, c] : terms_) {
      std::vector<Q> image;
      image.reserve(t.size());
      for (const auto& p : t) image.push_back(f(p));
      out.add(std::move(image), c);
    }
    return out;
  }

 private:
  Chain& accumulate(const Chain& o, std::int64_t sign) {
    if (o.empty()) return *this;
    if (empty()) dim_ = o.dim_;
    if (o.dim_ != dim_)
      throw Error(ErrorCode::MismatchedShape,
                  "adding a " + std::to_string(o.dim_) + "-chain to a " + std::to_string(dim_) + "-chain");
    for (const auto& [t, c] : o.terms_) {
      auto [it, fresh] = terms_.try_emplace(t, sign * c);
      if (!fresh) {
        it->second += sign * c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }

  int dim_ = 0;
  Terms terms_;
};

template <class P>
Chain<P> boundary(const Chain<P>& c) {
  if (c.dim() == 0) throw Error(ErrorCode::DimensionZero, "boundary of a 0-chain");
  Chain<P> out(c.dim() - 1);
  for (const auto& [t, k] : c.terms())
    for (std::size_t i = 0; i < t.size(); ++i) {
      typename Chain<P>::Tuple face;
      face.reserve(t.size() - 1);
      for (std::size_t j = 0; j < t.size(); ++j)
        if (j != i) face.push_back(t[j]);
      out.add(std::move(face), i % 2 == 0 ? k : -k);
    }
  return out;
}

/// Sum of coefficients of a 0-chain.
template <class P>
std::int64_t augmentation(const Chain<P>& c) {
  std::int64_t s = 0;
  for (const auto& [t, k] : c.terms()) s += k;
  return s;
}

template <class P, class D>
double max_edge(std::span<const P> t, D&& dist) {
  double e = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) e = std::max(e, static_cast<double>(dist(t[i], t[j])));
  return e;
}

/// Mass surrogate: each cell counts as a regular simplex whose edge is the
/// longest image edge. An isometric segment of length L has mass L.
template <class P, class D>
double mass(const Chain<P>& c, D&& dist) {
  double total = 0.0;
  for (const auto& [t, k] : c.terms())
    total += static_cast<double>(k < 0 ? -k : k) *
             regular_simplex_volume(c.dim(), max_edge(std::span<const P>(t), dist));
  return total;
}

/// Largest image edge over all terms.
template <class P, class D>
double max_cell_diameter(const Chain<P>& c, D&& dist) {
  double e = 0.0;
  for (const auto& [t, k] : c.terms()) e = std::max(e, max_edge(std::span<const P>(t), dist));
  return e;
}

/// Level-r lattice of the standard m-simplex with its Kuhn (Freudenthal)
/// triangulation into r^m cells.
struct SimplexLattice {
  struct Cell {
    std::vector<int> vertices;  // lattice point indices in Kuhn order
    int sign = 1;               // orientation relative to <e_0, ..., e_m>
  };

  int m = 0;
  int level = 1;
  std::vector<std::vector<int>> points;  // barycentric counts summing to level, lex order
  std::vector<Cell> cells;
  struct Edge {
    int a = 0;
    int b = 0;
    double length = 0.0;  // l2 barycentric distance
  };
  std::vector<Edge> edges;  // all edges of the cells

  int index(std::span<const int> counts) const;

 private:
  friend std::shared_ptr<const SimplexLattice> simplex_lattice(int m, int level);
  std::map<std::vector<int>, int> index_;
};

/// Shared, cached lattice for (m, level).
std::shared_ptr<const SimplexLattice> simplex_lattice(int m, int level);

/// A simplex map given on the level-r lattice of the standard m-simplex.
template <class P>
struct DiscreteSimplex {
  std::shared_ptr<const SimplexLattice> lattice;
  std::vector<P> vmap;

  static DiscreteSimplex from_vertices(std::vector<P> corners) {
    DiscreteSimplex s;
    s.lattice = simplex_lattice(static_cast<int>(corners.size()) - 1, 1);
    s.vmap.resize(corners.size());
    for (std::size_t i = 0; i < corners.size(); ++i) {
      std::vector<int> counts(corners.size(), 0);
      counts[i] = 1;
      s.vmap[s.lattice->index(counts)] = corners[i];
    }
    return s;
  }

  int dim() const { return lattice->m; }
  int level() const { return lattice->level; }
};

/// The chain of its lattice cells.
template <class P>
Chain<P> to_chain(const DiscreteSimplex<P>& s) {
  Chain<P> out(s.dim());
  for (const auto& cell : s.lattice->cells) {
    std::vector<P> t;
    for (int i : cell.vertices) t.push_back(s.vmap[i]);
    out.add(std::move(t), cell.sign);
  }
  return out;
}

struct LipschitzReport {
  double lip = 0.0;
  double diameter = 0.0;
};

/// Max over cell edges of d(image) / (edge length), plus the image diameter.
template <class P, class D>
LipschitzReport lipschitz_constant(const DiscreteSimplex<P>& s, D&& dist) {
  LipschitzReport r;
  for (const auto& e : s.lattice->edges) r.lip = std::max(r.lip, dist(s.vmap[e.a], s.vmap[e.b]) / e.length);
  for (std::size_t i = 0; i < s.vmap.size(); ++i)
    for (std::size_t j = i + 1; j < s.vmap.size(); ++j) r.diameter = std::max(r.diameter, dist(s.vmap[i], s.vmap[j]));
  if (r.diameter > r.lip * std::sqrt(2.0) * (1.0 + 1e-9) + 1e-12)
    throw Error(ErrorCode::InvalidInput, "image diameter exceeds Lip * diam of the simplex");
  return r;
}

namespace detail {

/// For a lattice point of level r*f, the corners (level-r lattice points) of
/// the Kuhn cell containing it and their integer weights (summing to f).
std::vector<std::pair<int, int>> kuhn_weights(const SimplexLattice& coarse, std::span<const int> fine_counts, int factor);

}  // namespace detail

/// Edgewise subdivision: refines the lattice by `factor`, placing each new
/// point by `interp(weighted_corners, factor)`. The corners handed to interp
/// are (image, weight) pairs with nonzero weight, merged by image and sorted,
/// so points on shared faces get identical images.
template <class P, class I>
DiscreteSimplex<P> subdivide(const DiscreteSimplex<P>& s, int factor, I&& interp) {
  if (factor < 1) throw Error(ErrorCode::InvalidInput, "subdivision factor must be >= 1");
  DiscreteSimplex<P> out;
  out.lattice = simplex_lattice(s.dim(), s.level() * factor);
  out.vmap.reserve(out.lattice->points.size());
  for (const auto& counts : out.lattice->points) {
    std::vector<std::pair<P, int>> weighted;
    for (auto [idx, w] : detail::kuhn_weights(*s.lattice, counts, factor)) {
      if (w == 0) continue;
      weighted.emplace_back(s.vmap[idx], w);
    }
    std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<P, int>> merged;
    for (auto& pw : weighted) {
      if (!merged.empty() && merged.back().first == pw.first)
        merged.back().second += pw.second;
      else
        merged.push_back(std::move(pw));
    }
    if (merged.size() == 1)
      out.vmap.push_back(merged.front().first);
    else
      out.vmap.push_back(interp(std::span<const std::pair<P, int>>(merged), factor));
  }
  return out;
}

/// Staircase prism over a chain: sum_j (-1)^j [b(v_0)..b(v_j), t(v_j)..t(v_m)]
/// on sorted source tuples. Satisfies
///   boundary(prism) = t_# source - b_# source - prism(boundary source).
template <class S, class B, class T>
auto prism(const Chain<S>& source, B&& bottom, T&& top) {
  using P = std::decay_t<std::invoke_result_t<B&, const S&>>;
  Chain<P> out(source.dim() + 1);
  for (const auto& [t, k] : source.terms()) {
    std::vector<P> lo, hi;
    lo.reserve(t.size());
    hi.reserve(t.size());
    for (const auto& v : t) {
      lo.push_back(bottom(v));
      hi.push_back(top(v));
    }
    for (std::size_t j = 0; j < t.size(); ++j) {
      std::vector<P> cell;
      cell.reserve(t.size() + 1);
      for (std::size_t i = 0; i <= j; ++i) cell.push_back(lo[i]);
      for (std::size_t i = j; i < t.size(); ++i) cell.push_back(hi[i]);
      out.add(std::move(cell), j % 2 == 0 ? k : -k);
    }
  }
  return out;
}

/// Prism between two lattice maps of the same shape.
template <class P>
Chain<P> prism(const DiscreteSimplex<P>& bottom, const DiscreteSimplex<P>& top) {
  if (bottom.dim() != top.dim() || bottom.level() != top.level())
    throw Error(ErrorCode::MismatchedShape, "prism needs equal dim and level");
  Chain<int> source(bottom.dim());
  for (const auto& cell : bottom.lattice->cells) source.add(cell.vertices, cell.sign);
  return prism(source, [&](int i) { return bottom.vmap[i]; }, [&](int i) { return top.vmap[i]; });
}

}  // namespace lipfill
