// One PASS/FAIL line per acceptance criterion, then details. Exit status is
// nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "lipfill/harness.hpp"
#include "lipfill/oracle.hpp"

using namespace lipfill;

namespace {

constexpr double kSuiteBudgetSeconds = 60.0;
constexpr double kPartitionTol = 1e-9;
constexpr double kSlopeTarget = 1.0;
constexpr double kSlopeTol = 0.2;
constexpr double kDriftTol = 0.5;
constexpr double kOracleBudgetSeconds = 120.0;
constexpr int kOracleCells = 2000;

struct Line {
  bool pass = false;
  std::string text;
  std::vector<std::string> detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool is_grid(const FixtureSpec& s) { return s.generator == Generator::Grid || s.generator == Generator::GridWithHole; }

const FixtureSpec& spec_of(const std::vector<FixtureSpec>& all, const std::string& name) {
  for (const auto& s : all)
    if (s.name == name) return s;
  throw Error(ErrorCode::InvalidInput, "unknown fixture " + name);
}

double drift(const std::vector<double>& v) {
  double lo = kInf, hi = 0.0;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi > 0.0 ? 1.0 - lo / hi : 0.0;
}

struct OracleCase {
  std::string label;
  FixtureSpec spec;
  std::string cycle;
};

}  // namespace

int main() {
  const auto fixtures = default_fixtures();
  const auto sweep = default_sweep();
  std::vector<Line> lines(8);

  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport suite = run_suite(fixtures, sweep);
  const double suite_seconds = seconds_since(t0);

  // 1. Exact chain identities on every fixture and scale, within the budget.
  {
    int filled = 0, expected = 0, bad = 0;
    for (const auto& c : suite.cases) {
      if (c.error.empty() && c.report.identities_hold() && c.report.alpha_is_cycle) {
        ++filled;
      } else if (!c.error.empty() && c.expected_failure && c.hypothesis_failure) {
        ++expected;
      } else {
        ++bad;
        lines[0].detail.push_back(c.fixture + " " + c.cycle + fmt(" eps=%g: ", c.epsilon) +
                                  (c.error.empty() ? "identity failed" : c.error));
      }
    }
    lines[0].pass = bad == 0 && suite_seconds < kSuiteBudgetSeconds;
    lines[0].text = std::to_string(filled) + " fillings with exact identities, " + std::to_string(expected) +
                    " expected hypothesis failures, " + std::to_string(bad) + " other; suite " +
                    fmt("%.1f s", suite_seconds) + fmt(" (budget %.0f s)", kSuiteBudgetSeconds);
  }

  // 2. Partition of unity.
  {
    double worst = 0.0;
    for (const auto& c : suite.cases)
      if (c.error.empty()) worst = std::max(worst, c.report.partition_defect);
    lines[1].pass = worst <= kPartitionTol;
    lines[1].text = "max |sum g_k - 1| = " + fmt("%.3g", worst) + fmt(" (tol %.0e)", kPartitionTol);
  }

  // 3. Bump contract.
  {
    int runs = 0, bad = 0;
    for (const auto& c : suite.cases) {
      if (!c.error.empty()) continue;
      ++runs;
      if (!c.report.bumps.holds()) {
        ++bad;
        lines[2].detail.push_back(c.fixture + " " + c.cycle + fmt(" eps=%g", c.epsilon));
      }
    }
    lines[2].pass = bad == 0 && runs > 0;
    lines[2].text = "edge Lipschitz, core floor and Z-meeting exact on " + std::to_string(runs - bad) + "/" +
                    std::to_string(runs) + " covers";
  }

  // 4. Scaling laws on grid fixtures.
  {
    bool ok = true;
    int checked = 0;
    for (const auto& ff : suite.fits) {
      if (!is_grid(spec_of(fixtures, ff.fixture)) || ff.cycle.rfind("loop", 0) != 0) continue;
      ++checked;
      std::string row = ff.fixture + " " + ff.cycle + ":";
      for (const auto& f : ff.fits) {
        if (f.id == "gamma" || f.id == "lambda") {
          const bool in = std::abs(f.slope - kSlopeTarget) <= kSlopeTol;
          ok = ok && in;
          row += " " + f.id + " slope " + fmt("%.3f", f.slope) + (in ? "" : " (out)");
        } else if (f.id == "alpha_prime") {
          ok = ok && f.drift <= kDriftTol;
          row += " alpha'/alpha C " + fmt("%.3f", f.c) + " drift " + fmt("%.3f", f.drift);
        }
      }
      lines[3].detail.push_back(row);
    }
    lines[3].pass = ok && checked > 0;
    lines[3].text = "slopes of mass(gamma), mass(lambda) vs eps within " + fmt("%.1f", kSlopeTarget) + fmt(" +- %.1f", kSlopeTol) +
                    ", alpha' drift <= " + fmt("%.1f", kDriftTol) + " on " + std::to_string(checked) + " grid loops";
  }

  // 5. Pullback constant per fixture family.
  {
    std::map<std::string, std::map<double, double>> family;
    for (const auto& c : suite.cases) {
      if (!c.error.empty()) continue;
      auto& v = family[to_string(spec_of(fixtures, c.fixture).generator)][c.epsilon];
      v = std::max(v, c.report.pullback);
    }
    bool ok = !family.empty();
    std::string text;
    for (const auto& [name, by_eps] : family) {
      std::vector<double> v;
      double c_h = 0.0;
      for (const auto& [e, p] : by_eps) {
        v.push_back(p);
        c_h = std::max(c_h, p);
      }
      const double d = drift(v);
      ok = ok && d <= kDriftTol && std::isfinite(c_h);
      text += " " + name + fmt(" C_h=%.2f", c_h) + fmt(" drift %.2f;", d);
    }
    lines[4].pass = ok;
    lines[4].text = "max d(h(g(z)), z)/eps stable within " + fmt("%.0f%%", kDriftTol * 100) + ":" + text;
  }

  // 6. Snap validity at the prescribed delta.
  {
    int runs = 0, bad = 0;
    double min_bound = kInf;
    for (const auto& c : suite.cases) {
      if (!c.error.empty()) continue;
      ++runs;
      const auto& r = c.report;
      min_bound = std::min(min_bound, r.min_bound);
      const bool ok = r.snap_invalid == 0 && r.min_bound > 0.0 && r.min_weight >= r.min_bound - 1e-12 &&
                      r.min_snap_weight >= 1.0 / (r.nerve_dim + 1) - 1e-12;
      if (!ok) {
        ++bad;
        lines[5].detail.push_back(c.fixture + " " + c.cycle + fmt(" eps=%g", c.epsilon));
      }
    }
    lines[5].pass = bad == 0 && runs > 0;
    lines[5].text = std::to_string(runs - bad) + "/" + std::to_string(runs) +
                    " runs with zero invalid snaps; smallest support bound " + fmt("%.4g", min_bound);
  }

  // 7. Oracle comparison.
  {
    auto make = [](std::string name, Generator g, std::vector<int> p, ZRule rule) {
      FixtureSpec s;
      s.name = std::move(name);
      s.generator = g;
      s.params = std::move(p);
      s.refine = 2;
      s.z_rule = rule;
      s.cycles = {};
      return s;
    };
    const std::vector<OracleCase> cases{
        {"grid5 lower half, loop", make("g5", Generator::Grid, {5, 5}, ZRule::Default), "loop:1,0,3,2"},
        {"grid7 hole, bottom strip", make("h7", Generator::GridWithHole, {7, 7, 3}, ZRule::Default), "loop:0,0,6,1"},
        {"grid7 Z = X, square", make("g7", Generator::Grid, {7, 7}, ZRule::All), "hole-boundary"},
        {"tree, leaf pair", make("t", Generator::Tree, {3, 3}, ZRule::Default), "pair:13,21"},
        {"cycle8, arc pair", make("c8", Generator::Cycle, {8}, ZRule::Default), "pair:0,5"},
    };
    const std::vector<double> eps{4.0, 2.0, 1.0};
    bool ok = true;
    for (const auto& oc : cases) {
      const auto t1 = std::chrono::steady_clock::now();
      std::string row = oc.label + ": ";
      try {
        const auto fx = build_fixture(oc.spec);
        const auto cyc = make_cycle(fx, oc.cycle);
        const auto cmp = fv_compare(fx.space, fx.z, cyc.chain, eps, {}, kOracleCells);
        const double secs = seconds_since(t1);
        bool good = cmp.exact && secs < kOracleBudgetSeconds;
        for (const auto& r : cmp.rows)
          good = good && cmp.fv_z <= r.mass_final + 1e-9 && cmp.fv_x <= r.mass_beta + 1e-9;
        const double ratio = cmp.fv_x > 0.0 ? cmp.fv_z / cmp.fv_x : 1.0;
        good = good && ratio <= cmp.pipeline_constant + 1e-9;
        ok = ok && good;
        row += fmt("FV_X=%.4g", cmp.fv_x) + fmt(" FV_Z=%.4g", cmp.fv_z) + fmt(" FV_Z/FV_X=%.3f", ratio) +
               fmt(" pipeline C=%.3f", cmp.pipeline_constant) +
               fmt(" final/beta<=%.3f", cmp.max_ratio);
        for (const auto& r : cmp.rows)
          row += fmt(" [eps %g", r.epsilon) + fmt(" final %.4g", r.mass_final) + fmt(" beta %.4g]", r.mass_beta);
        row += fmt(" %.2f s", secs) + (good ? "" : " FAIL");
      } catch (const Error& e) {
        ok = false;
        row += e.what();
      }
      lines[6].detail.push_back(row);
    }
    lines[6].pass = ok;
    lines[6].text = std::to_string(cases.size()) + " oracle instances (<= " + std::to_string(kOracleCells) +
                    " cells): FV_Z <= mass(final), FV_X <= mass(beta), FV_Z/FV_X <= pipeline constant, " +
                    fmt("< %.0f s each", kOracleBudgetSeconds);
  }

  // 8. Determinism.
  {
    std::vector<FixtureSpec> subset{spec_of(fixtures, "grid5"), spec_of(fixtures, "cycle24"),
                                    spec_of(fixtures, "tree3x3")};
    FillingOptions opt;
    opt.seed = 7;
    const auto a = run_suite(subset, sweep, opt);
    const auto b = run_suite(subset, sweep, opt);
    const bool same = suite_json(a) == suite_json(b) && suite_csv(a) == suite_csv(b);
    const auto c = run_suite({spec_of(fixtures, "grid9_hole3")}, sweep);
    SuiteReport from_full;
    from_full.sweep = suite.sweep;
    for (const auto& x : suite.cases)
      if (x.fixture == "grid9_hole3") from_full.cases.push_back(x);
    for (const auto& x : suite.fits)
      if (x.fixture == "grid9_hole3") from_full.fits.push_back(x);
    const bool rerun = suite_csv(c) == suite_csv(from_full);
    lines[7].pass = same && rerun;
    lines[7].text = std::string("repeated runs with one seed give ") + (same ? "byte-identical" : "different") +
                    " reports; rerun of one fixture " + (rerun ? "matches" : "differs from") + " the full suite";
  }

  const char* names[8] = {"exact chain identities", "partition of unity", "bump contract", "scaling laws",
                          "pullback bound",         "snap validity",      "oracle comparison", "determinism"};
  bool all = true;
  for (int i = 0; i < 8; ++i) {
    std::printf("%s criterion %d (%s): %s\n", lines[i].pass ? "PASS" : "FAIL", i + 1, names[i], lines[i].text.c_str());
    all = all && lines[i].pass;
  }
  std::printf("\n");
  for (int i = 0; i < 8; ++i)
    for (const auto& d : lines[i].detail) std::printf("  [%d] %s\n", i + 1, d.c_str());
  if (!suite.warnings.empty()) {
    std::printf("\nsuite warnings:\n");
    for (const auto& w : suite.warnings) std::printf("  %s\n", w.c_str());
  }
  return all ? 0 : 1;
}
