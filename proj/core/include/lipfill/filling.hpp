#pragma once

#include <cstdint>
#include <string>

#include "lipfill/cone.hpp"
#include "lipfill/transfer.hpp"

namespace lipfill {

/// A cycle cut into cells of diameter below delta along Z-geodesics, nested
/// in a coarser cut at spacing below `coarse_step`.
struct SubdividedCycle {
  Chain<SpacePoint> chain;
  Chain<SpacePoint> coarse;
  /// boundary(fan) == chain - coarse; every fan cell lies in one coarse cell.
  Chain<SpacePoint> fan;
  std::int64_t cells = 0;  // N
  double c_alpha = 0.0;    // N <= c_alpha * ceil(1/delta)^m
};

/// A coarse_step of 0 keeps the terms of alpha as the coarse cells.
SubdividedCycle subdivide_cycle(const GraphGeodesics& z, const Chain<SpacePoint>& alpha, double delta,
                                double coarse_step = 0.0);

struct AlphaPrime {
  Chain<NervePoint> chain;
  /// Smallest value of 1/(dim+1) - L_g d(z_j, z) over cells, and smallest
  /// g_{k(z_j)}(z); the first must be positive and the second at least it.
  double min_bound = 0.0;
  double min_weight = 0.0;
  /// Smallest g_{k(z)}(z) over subdivision vertices (at least 1/(dim+1)).
  double min_snap_weight = 0.0;
};

/// Snaps every subdivision vertex z to v(z) and checks each snapped tuple
/// spans a simplex of the nerve through the suppTau bound. Throws SnapInvalid.
AlphaPrime build_alpha_prime(const GMap& gm, const Chain<SpacePoint>& alpha_sub);

/// Straight-line homotopy from alpha' to g_#(alpha), staircase-triangulated:
/// boundary = g_#(alpha) - alpha' (minus the prism over the boundary when alpha
/// is a 0-chain). Throws SupportViolation.
Chain<NervePoint> build_gamma(const GMap& gm, const Chain<SpacePoint>& alpha_sub);

/// Chain in Z with boundary alpha - h_#(alpha'): geodesics from h(v(z)) to z
/// and cones over the per-cell cycles. Throws ZPathMissing or NoFilling.
Chain<SpacePoint> build_lambda(const GMap& gm, const HMap& hm, const Chain<SpacePoint>& alpha_sub);

struct SnapResult {
  Chain<NervePoint> chain;
  std::int64_t invalid = 0;  // cells whose snapped vertex set spans no simplex
  std::string diagnostic;    // first offending cell
};

/// Vertex-wise snap of a nerve chain: Image(p) -> v(p), nerve vertices kept.
SnapResult simplicial_approximation(const GMap& gm, const Chain<NervePoint>& c);

/// Cone filling of a cycle in X. Throws NotACycle, NoFilling.
Chain<SpacePoint> fill_in_X(const MetricSpace& space, const Chain<SpacePoint>& alpha, double step = 0.0);

struct FillingOptions {
  int n = 1;  // connectivity degree; cycles up to dimension n
  int dim_cap = NerveComplex::kDefaultDimCap;
  int snap_retries = 1;
  std::uint64_t seed = 1;
  int lipschitz_pairs = 10000;
};

struct Masses {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double p_beta = 0.0;
  double final_chain = 0.0;
};

struct FillingReport {
  double epsilon = 0.0;
  int m = 0;
  int cover_size = 0;
  int multiplicity = 0;
  int nerve_dim = 0;
  double lg = 0.0;
  double lg_vertices = 0.0;
  double g_lipschitz = 0.0;  // sampled, against nerve distance
  double g_scale = 0.0;      // max_k Lip(g_k) diam(supp tau_k)
  double h_lipschitz = 0.0;
  double partition_defect = 0.0;
  double delta = 0.0;
  std::int64_t cells = 0;
  double c_alpha = 0.0;
  double pullback = 0.0;  // max_z d(h(v(z)), z) / eps
  double min_bound = 0.0;
  double min_weight = 0.0;
  double min_snap_weight = 0.0;
  double beta_step = 0.0;
  std::int64_t snap_invalid = 0;  // first beta attempt
  std::int64_t snap_invalid_final = 0;
  std::string snap_diagnostic;
  Masses masses;
  BumpContract bumps;
  bool h_vertex_rules = false;  // fine: h(v_k) = center; every image in Z
  bool alpha_is_cycle = false;
  bool alpha_prime_cycle = false;
  bool gamma_identity = false;
  bool lambda_identity = false;
  bool p_beta_identity = false;
  bool final_identity = false;
  bool final_in_z = false;
  bool beta_identity = false;

  bool identities_hold() const {
    return alpha_prime_cycle && gamma_identity && lambda_identity && p_beta_identity && final_identity && final_in_z &&
           beta_identity;
  }
};

struct FillingResult {
  FillingReport report;
  Chain<SpacePoint> alpha_sub;
  Chain<SpacePoint> beta;
  Chain<SpacePoint> lambda;
  Chain<SpacePoint> final_chain;
  Chain<NervePoint> alpha_prime;
  Chain<NervePoint> gamma;
  Chain<NervePoint> p_beta;
};

/// The Z-filling of a cycle alpha in Z: lambda + h_#(P_beta). alpha is
/// identified with its delta-subdivision, which is the same Lipschitz chain.
FillingResult fill_in_Z(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& alpha, double epsilon,
                        const FillingOptions& opt = {});

/// Mass of a chain in X (or Z with the restricted metric).
double space_mass(const MetricSpace& space, const Chain<SpacePoint>& c);
/// Mass of a chain on the nerve side.
double nerve_mass(const GMap& gm, const Chain<NervePoint>& c);

}  // namespace lipfill
