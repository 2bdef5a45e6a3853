#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include "lipfill/cover.hpp"

namespace lipfill {

using Simplex = std::vector<int>;  // sorted nerve vertex ids

/// A point of the nerve in barycentric coordinates (sparse, sorted by vertex).
struct BaryPoint {
  std::vector<std::pair<int, double>> coords;

  static BaryPoint vertex(int k) { return BaryPoint{{{k, 1.0}}}; }
  Simplex support() const;
  double weight(int k) const;
};

/// The nerve of {supp tau_k} with per-vertex scales diam(supp tau_k).
class NerveComplex {
 public:
  static constexpr int kDefaultDimCap = 16;

  NerveComplex(std::vector<double> scales, std::span<const Simplex> generating_sets, int dim_cap = kDefaultDimCap);

  int vertex_count() const { return static_cast<int>(scales_.size()); }
  double scale(int k) const { return scales_[k]; }
  /// max over the vertices of sigma; the simplex is metrized as scale * (unit l2 simplex).
  double scale(std::span<const int> sigma) const;
  int dim() const { return dim_; }
  bool contains(std::span<const int> sigma) const;
  const std::set<Simplex>& simplices() const { return simplices_; }
  const std::vector<Simplex>& maximal_simplices() const { return maximal_; }
  /// Graph distance between nerve vertices along 1-simplices.
  double vertex_distance(int j, int k) const { return vertex_dist_[static_cast<std::size_t>(j) * scales_.size() + k]; }

 private:
  std::vector<double> scales_;
  std::set<Simplex> simplices_;
  std::vector<Simplex> maximal_;
  std::vector<double> vertex_dist_;
  int dim_ = -1;
};

/// Simplices are all subsets of the positive sets realized at points of X.
NerveComplex build_nerve(const BumpFamily& family, int dim_cap = NerveComplex::kDefaultDimCap);

/// Per-simplex scaled l2 distance when both points lie in one simplex, glued by
/// routes through nerve vertices otherwise.
double nerve_distance(const NerveComplex& complex, const BaryPoint& a, const BaryPoint& b);

/// Pairwise distances (row-major) of the path metric on the given points,
/// where any two points may also be joined through each other.
std::vector<double> nerve_distances(const NerveComplex& complex, std::span<const BaryPoint> points);

}  // namespace lipfill
