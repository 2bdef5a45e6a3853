#pragma once

#include <span>
#include <vector>

#include "lipfill/chain.hpp"
#include "lipfill/filling.hpp"
#include "lipfill/metric.hpp"

namespace lipfill {

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
};

/// min c.x subject to A x = b, x >= 0, by a dense two-phase simplex (largest
/// reduced cost, Bland's rule after a run of degenerate pivots). Rows of A are
/// dense. Throws OracleFailed when infeasible or unbounded.
LpSolution solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                    const std::vector<double>& c);

/// Same problem with x integral, by best-first branch and bound on the LP.
LpSolution solve_ilp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                     const std::vector<double>& c, int max_nodes = 5000);

struct MinimalFilling {
  double value = 0.0;
  Chain<SpacePoint> chain;
  int cells = 0;
  bool lp_integral = false;  // the LP optimum was already integral
};

/// Candidate (m+1)-cells on the subgraph spanned by `members`: edges for
/// m = 0; for m = 1 the triangles of the graph and its chordless 4-cycles, each
/// 4-cycle split along the diagonal from its lowest vertex.
std::vector<std::vector<VertexId>> candidate_cells(const MetricSpace& space, std::span<const VertexId> members, int m);

/// Least surrogate mass of an integral filling of alpha (a cycle on graph
/// vertices) by candidate cells inside `members`. The LP relaxation is solved
/// first; branch and bound runs only when it is fractional. Throws
/// OracleTooLarge past `max_cells`, OracleFailed when alpha bounds nothing.
MinimalFilling minimal_filling(const MetricSpace& space, std::span<const VertexId> members,
                               const Chain<SpacePoint>& alpha, int max_cells = 2000);

struct FvRow {
  double epsilon = 0.0;
  double mass_final = 0.0;
  double mass_beta = 0.0;
  double ratio = 0.0;  // mass_final / mass_beta
};

struct FvComparison {
  std::vector<FvRow> rows;
  double ratio_at_zero = 0.0;  // least-squares line in epsilon, read at 0
  double max_ratio = 0.0;
  bool exact = false;  // the two oracles ran
  double fv_x = 0.0;
  double fv_z = 0.0;
  /// max mass_final / FV_X: the distortion the pipeline certifies for
  /// FV_Z <= C FV_X, read off the exact X filling. Set when exact.
  double pipeline_constant = 0.0;
};

/// Pipeline masses over a decreasing epsilon list, plus exact FV_X and FV_Z
/// when the instance has at most `max_cells` candidate cells.
FvComparison fv_compare(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& alpha,
                        std::span<const double> epsilons, const FillingOptions& opt = {}, int max_cells = 2000);

}  // namespace lipfill
