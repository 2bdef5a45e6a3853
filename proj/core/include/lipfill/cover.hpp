#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lipfill/metric.hpp"

namespace lipfill {

enum class CoverKind { Fine, Coarse };

/// One set D_k of the two-scale cover with its bump radius.
struct CoverElement {
  int k = 0;
  std::vector<VertexId> core;  // D_k, sorted
  CoverKind kind = CoverKind::Fine;
  VertexId center = 0;
  double radius = 0.0;      // r_k: every core vertex lies within r_k of the center
  double tau_radius = 0.0;  // s_k: tau_k = max(0, s_k - d(x, D_k))
  int annulus = -1;         // dyadic annulus index j for coarse elements
  double dist_to_z = 0.0;   // d(D_k, Z)
};

/// (k, tau_k(x)) for the bumps that are positive at a point, sorted by k.
using BumpValues = std::vector<std::pair<int, double>>;

/// Bump values below this are treated as zero everywhere, so that the cover,
/// the nerve and the partition of unity agree on what "positive" means.
inline constexpr double kTauTol = 1e-12;

/// Fine net separation, in units of epsilon.
inline constexpr double kFineSeparation = 2.0;
/// Vertices with d(x, Z) below this many epsilons belong to fine cores.
inline constexpr double kNearZone = 4.0;
/// First coarse annulus index; 2^kFirstAnnulus == kNearZone.
inline constexpr int kFirstAnnulus = 2;

/// The family {tau_k}: 1-Lipschitz bumps over the two-scale cover of X.
class BumpFamily {
 public:
  BumpFamily(const MetricSpace& space, std::vector<CoverElement> elements, double epsilon);

  const MetricSpace& space() const { return *space_; }
  double epsilon() const { return epsilon_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<CoverElement>& elements() const { return elements_; }
  const CoverElement& element(int k) const { return elements_[k]; }

  /// d(x, D_k) for a vertex.
  double core_dist(int k, VertexId x) const { return core_dist_[static_cast<std::size_t>(k) * n_ + x]; }
  double tau(int k, VertexId x) const;
  double tau(int k, const SpacePoint& p) const;
  const BumpValues& positive(VertexId x) const { return positive_[x]; }
  BumpValues positive(const SpacePoint& p) const;
  double tau_bar(VertexId x) const;
  double tau_bar(const SpacePoint& p) const;

  /// Vertices where tau_k > 0.
  const std::vector<VertexId>& support(int k) const { return support_[k]; }
  /// Upper bound on diam(supp tau_k) over the metric graph: the vertex
  /// support diameter plus twice the farthest reach into an edge past it.
  double support_diameter(int k) const { return support_diam_[k]; }

  /// Positive sets on the open intervals an edge is cut into by the bump
  /// breakpoints. Together with the vertex sets these are all positive sets.
  std::vector<std::vector<int>> edge_positive_sets() const;

  int multiplicity() const { return multiplicity_; }

 private:
  const MetricSpace* space_;
  std::vector<CoverElement> elements_;
  double epsilon_;
  std::size_t n_;
  std::vector<double> core_dist_;
  std::vector<BumpValues> positive_;
  std::vector<std::vector<VertexId>> support_;
  std::vector<double> support_diam_;
  int multiplicity_ = 0;
};

/// Two-scale cover: Voronoi cells of a net on Z over the near zone
/// d(x, Z) < 4 eps (tau radius eps), and Voronoi cells of nets on the dyadic
/// annuli beyond it (annulus j: net spacing 2^(j-1) eps, tau radius 2^(j-2) eps).
/// Every tau radius carries an extra half of the longest edge. Cores
/// partition the vertices, which keeps the multiplicity low.
BumpFamily build_cover(const MetricSpace& space, const SubsetZ& z, double epsilon);

/// Exact max over all points of X of the number of positive bumps.
int multiplicity(const BumpFamily& family);

struct BumpContract {
  bool lipschitz = true;    // |tau_k(u) - tau_k(v)| <= w(u, v) on every edge
  bool core_floor = true;   // tau_k >= eps on D_k
  bool z_meeting = true;    // supp tau_k meets Z iff D_k does
  bool covers = true;       // tau_bar > 0 at every vertex
  bool holds() const { return lipschitz && core_floor && z_meeting && covers; }
};

BumpContract check_bump_contract(const BumpFamily& family, const SubsetZ& z);

}  // namespace lipfill
