#pragma once

#include <string>
#include <vector>

#include "lipfill/filling.hpp"

namespace lipfill {

enum class Generator { Path, Cycle, Grid, GridWithHole, Tree };
enum class ZRule { Default, All, Boundary, Leaves, Explicit };

/// A logical graph with edges of length `unit`. Paths, cycles and trees have
/// each edge cut into `refine` pieces; grids become the full lattice of
/// spacing unit/refine, so logical cells are filled in. Parameters: path(n), cycle(n), grid(a, b),
/// grid_with_hole(a, b, h), tree(depth, arity).
struct FixtureSpec {
  std::string name;
  Generator generator = Generator::Path;
  std::vector<int> params;
  int refine = 8;
  double unit = 1.0;
  ZRule z_rule = ZRule::Default;
  std::vector<VertexId> z_explicit;  // logical ids
  /// Cycle rules: "pair:a,b" (logical ids), "pair:x0,y0,x1,y1" and
  /// "loop:x0,y0,x1,y1" (grid coordinates), "hole-boundary", "ring".
  /// Empty picks the generator defaults.
  std::vector<std::string> cycles;
};

struct NamedCycle {
  std::string rule;
  Chain<SpacePoint> chain;
  /// The cycle is not fillable with bounded cells in Z (it winds around a
  /// part of X missing from Z), so a hypothesis failure is the right outcome.
  bool expect_hypothesis_failure = false;
};

struct Fixture {
  FixtureSpec spec;
  MetricSpace space;
  SubsetZ z;
  std::vector<VertexId> logical;  // refined id of each logical vertex
  std::vector<NamedCycle> cycles;
};

/// Throws InvalidInput on bad parameters, unknown rules or an empty Z.
Fixture build_fixture(const FixtureSpec& spec);
/// Resolves one cycle rule against a built fixture.
NamedCycle make_cycle(const Fixture& f, const std::string& rule);

Generator parse_generator(const std::string& name);
std::string to_string(Generator g);
ZRule parse_z_rule(const std::string& name);
std::string to_string(ZRule r);

struct FitSample {
  double epsilon = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConstantFit {
  std::string id;
  std::vector<FitSample> samples;
  double c = 0.0;      // max lhs / rhs
  /// Least squares of log lhs against log epsilon; NaN when some lhs is 0.
  /// Drift skips zero samples.
  double slope = 0.0;
  /// 1 - min ratio / max ratio; the fit is stable when drift <= 0.5.
  double drift = 0.0;
  bool stable() const { return drift <= 0.5; }
};

/// Throws DegenerateSamples with fewer than 3 samples or a nonpositive rhs.
ConstantFit fit_constant(const std::string& id, std::vector<FitSample> samples);

struct CaseResult {
  std::string fixture;
  std::string cycle;
  double epsilon = 0.0;
  bool expected_failure = false;
  std::string error;  // empty when the filling was built
  bool hypothesis_failure = false;
  FillingReport report;
  std::vector<std::string> hard;  // violated exact checks
};

struct FixtureFits {
  std::string fixture;
  std::string cycle;
  std::vector<ConstantFit> fits;
};

struct SuiteReport {
  std::vector<double> sweep;
  std::vector<CaseResult> cases;
  std::vector<FixtureFits> fits;
  std::vector<std::string> hard_failures;
  std::vector<std::string> warnings;

  /// 0 pass, 1 any hard failure, 2 soft warnings only.
  int exit_code() const { return !hard_failures.empty() ? 1 : (!warnings.empty() ? 2 : 0); }
};

/// Slopes of mass(gamma) and mass(lambda) outside this band are warnings.
inline constexpr double kSlopeLow = 0.8;
inline constexpr double kSlopeHigh = 1.2;

/// Runs every fixture against every epsilon. Sweeps must be nonempty and
/// strictly decreasing (InvalidInput otherwise).
SuiteReport run_suite(const std::vector<FixtureSpec>& fixtures, const std::vector<double>& sweep,
                      const FillingOptions& opt = {});

std::vector<FixtureSpec> default_fixtures();
std::vector<double> default_sweep();

/// Deterministic renderings; no timings.
std::string suite_json(const SuiteReport& r);
std::string suite_csv(const SuiteReport& r);
std::string suite_summary(const SuiteReport& r);

}  // namespace lipfill
