#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <vector>

#include "lipfill/chain.hpp"
#include "lipfill/cone.hpp"
#include "lipfill/nerve.hpp"

namespace lipfill {

/// A point used as a chain vertex on the nerve side: either a nerve vertex
/// v_k, or the image g(p) of a point of X (kept symbolic so chains stay exact).
struct NervePoint {
  enum class Kind : std::uint8_t { Vertex, Image };
  Kind kind = Kind::Vertex;
  int k = 0;
  SpacePoint p{};

  static NervePoint vertex(int k) { return {Kind::Vertex, k, {}}; }
  static NervePoint image(const SpacePoint& p) { return {Kind::Image, 0, p}; }
  bool is_vertex() const { return kind == Kind::Vertex; }

  friend auto operator<=>(const NervePoint&, const NervePoint&) = default;
  friend bool operator==(const NervePoint&, const NervePoint&) = default;
};

/// The partition-of-unity map g: X -> Sigma, g_k = tau_k / tau_bar.
class GMap {
 public:
  GMap(const BumpFamily& family, const NerveComplex& nerve);

  const BumpFamily& family() const { return *family_; }
  const NerveComplex& nerve() const { return *nerve_; }

  double weight(int k, VertexId x) const;
  double weight(int k, const SpacePoint& p) const;
  BaryPoint eval(VertexId x) const;
  BaryPoint eval(const SpacePoint& p) const;
  BaryPoint eval(const NervePoint& q) const { return q.is_vertex() ? BaryPoint::vertex(q.k) : eval(q.p); }

  /// k(p) = argmax_k g_k(p), lowest index on ties.
  int snap(const SpacePoint& p) const;

  /// sup_k Lip(g_k), exact over the metric graph: every g_k is a ratio of
  /// piecewise-linear functions and is monotone on each linear piece.
  double lipschitz() const { return lip_; }
  /// Lip(g_k) for each k, same measurement.
  const std::vector<double>& element_lipschitz() const { return lip_k_; }
  /// max_k Lip(g_k) * diam(supp tau_k).
  double scale_constant() const;
  /// max over vertices of |sum_k g_k(x) - 1|.
  double partition_defect() const;

  double distance(const NervePoint& a, const NervePoint& b) const;

 private:
  const BumpFamily* family_;
  const NerveComplex* nerve_;
  double lip_ = 0.0;
  std::vector<double> lip_k_;
};

/// max over k and graph edges (u, v) of |g_k(u) - g_k(v)| / w(u, v).
double measure_lg_on_vertices(const GMap& gm);

/// Measured Lip(g) against nerve_distance over seeded random pairs of graph
/// vertices, plus every graph edge.
double measure_g_lipschitz(const GMap& gm, std::uint64_t seed, int pairs);

/// The back-projection h on the 2-skeleton of Sigma.
class HMap {
 public:
  HMap(const BumpFamily& family, const NerveComplex& nerve, const SubsetZ& z);

  VertexId vertex_image(int k) const { return images_[k]; }
  const std::vector<VertexId>& vertex_images() const { return images_; }
  const SubsetZ& subset() const { return *z_; }

  /// h_# on a chain of nerve vertices (Vertex kinds only), dimensions 0..2.
  Chain<SpacePoint> push(const Chain<NervePoint>& c) const;
  /// h_# on a chain of nerve vertex ids, dimensions 0..2.
  Chain<SpacePoint> push(const Chain<int>& c) const;

  /// The Z-geodesic from h(v_j) to h(v_k) as a 1-chain (empty if equal).
  Chain<SpacePoint> edge_image(int j, int k) const;

  /// max over vertices z of Z of d(h(v(z)), z) / epsilon.
  double pullback_constant(const GMap& gm) const;

  /// Measured Lip(h) on vertices of Sigma against nerve vertex distance.
  double vertex_lipschitz() const;

 private:
  Chain<SpacePoint> triangle_image(int a, int b, int c) const;

  const BumpFamily* family_;
  const NerveComplex* nerve_;
  const SubsetZ* z_;
  std::vector<VertexId> images_;
  mutable std::mutex mu_;
  mutable std::map<std::array<int, 3>, Chain<SpacePoint>> triangles_;
};

}  // namespace lipfill
