#include "lipfill/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "lipfill/io.hpp"

namespace lipfill {

namespace {

using nlohmann::json;

struct Logical {
  VertexId n = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  int cols = 0, rows = 0;  // grids
  int hole = 0;            // grid_with_hole side, in logical edges
  std::vector<std::vector<VertexId>> children;  // trees
};

void need(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

std::vector<int> numbers(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    need(used == item.size() && used > 0, "not an integer list: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Logical make_logical(const FixtureSpec& spec) {
  Logical g;
  const auto& p = spec.params;
  auto arity = [&](std::size_t k) {
    need(p.size() == k, spec.name + ": " + to_string(spec.generator) + " takes " + std::to_string(k) + " parameters");
    for (int v : p) need(v > 0, spec.name + ": parameters must be positive");
  };
  switch (spec.generator) {
    case Generator::Path:
      arity(1);
      need(p[0] >= 2, "path needs at least 2 vertices");
      g.n = p[0];
      for (VertexId i = 0; i + 1 < g.n; ++i) g.edges.emplace_back(i, i + 1);
      break;
    case Generator::Cycle:
      arity(1);
      need(p[0] >= 3, "cycle needs at least 3 vertices");
      g.n = p[0];
      for (VertexId i = 0; i < g.n; ++i) g.edges.emplace_back(std::min(i, (i + 1) % g.n), std::max(i, (i + 1) % g.n));
      break;
    case Generator::Grid:
    case Generator::GridWithHole: {
      arity(spec.generator == Generator::Grid ? 2 : 3);
      g.cols = p[0];
      g.rows = p[1];
      g.hole = spec.generator == Generator::Grid ? 0 : p[2];
      need(g.hole + 2 < std::min(g.cols, g.rows) || g.hole == 0, "hole does not fit inside the grid");
      g.n = g.cols * g.rows;
      for (int y = 0; y < g.rows; ++y)
        for (int x = 0; x < g.cols; ++x) {
          const VertexId id = y * g.cols + x;
          if (x + 1 < g.cols) g.edges.emplace_back(id, id + 1);
          if (y + 1 < g.rows) g.edges.emplace_back(id, id + g.cols);
        }
      break;
    }
    case Generator::Tree: {
      arity(2);
      g.n = 1;
      g.children.emplace_back();
      std::vector<VertexId> level{0};
      for (int d = 0; d < p[0]; ++d) {
        std::vector<VertexId> next;
        for (VertexId parent : level)
          for (int c = 0; c < p[1]; ++c) {
            const VertexId id = g.n++;
            g.children.emplace_back();
            g.children[parent].push_back(id);
            g.edges.emplace_back(parent, id);
            next.push_back(id);
          }
        level = std::move(next);
      }
      break;
    }
  }
  return g;
}

bool is_grid(const FixtureSpec& s) { return s.generator == Generator::Grid || s.generator == Generator::GridWithHole; }

int hole_side(const FixtureSpec& s, const Logical& g) { return s.generator == Generator::GridWithHole ? g.hole : 3; }

/// Lower-left corner of the centered hole square.
std::pair<int, int> hole_corner(const Logical& g, int h) { return {(g.cols - 1 - h) / 2, (g.rows - 1 - h) / 2}; }

bool strictly_in_hole(const Logical& g, int h, int x, int y) {
  const auto [x0, y0] = hole_corner(g, h);
  return x > x0 && x < x0 + h && y > y0 && y < y0 + h;
}

std::vector<int> degrees(const Logical& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.n), 0);
  for (const auto& [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

void subtree(const Logical& g, VertexId x, std::vector<VertexId>& out) {
  out.push_back(x);
  for (VertexId c : g.children[x]) subtree(g, c, out);
}

std::vector<VertexId> logical_z(const FixtureSpec& spec, const Logical& g) {
  std::vector<VertexId> z;
  switch (spec.z_rule) {
    case ZRule::All:
      for (VertexId x = 0; x < g.n; ++x) z.push_back(x);
      break;
    case ZRule::Explicit:
      for (VertexId x : spec.z_explicit) {
        need(x >= 0 && x < g.n, spec.name + ": explicit Z id out of range");
        z.push_back(x);
      }
      break;
    case ZRule::Leaves: {
      const auto deg = degrees(g);
      for (VertexId x = 0; x < g.n; ++x)
        if (deg[x] == 1) z.push_back(x);
      break;
    }
    case ZRule::Boundary: {
      need(is_grid(spec), spec.name + ": the boundary rule needs a grid");
      const int h = spec.generator == Generator::GridWithHole ? g.hole : 0;
      const auto [x0, y0] = hole_corner(g, h);
      for (int y = 0; y < g.rows; ++y)
        for (int x = 0; x < g.cols; ++x) {
          const bool outer = x == 0 || y == 0 || x == g.cols - 1 || y == g.rows - 1;
          const bool ring = h > 0 && x >= x0 && x <= x0 + h && y >= y0 && y <= y0 + h && !strictly_in_hole(g, h, x, y);
          if (outer || ring) z.push_back(y * g.cols + x);
        }
      break;
    }
    case ZRule::Default:
      switch (spec.generator) {
        case Generator::Path:
        case Generator::Cycle:
          for (VertexId x = 0; x <= std::max(0, g.n - 3); ++x) z.push_back(x);
          break;
        case Generator::Grid:
          for (int y = 0; y <= (g.rows - 1) / 2; ++y)
            for (int x = 0; x < g.cols; ++x) z.push_back(y * g.cols + x);
          break;
        case Generator::GridWithHole:
          for (int y = 0; y < g.rows; ++y)
            for (int x = 0; x < g.cols; ++x)
              if (!strictly_in_hole(g, g.hole, x, y)) z.push_back(y * g.cols + x);
          break;
        case Generator::Tree:
          z.push_back(0);
          if (!g.children[0].empty()) subtree(g, g.children[0].front(), z);
          break;
      }
      break;
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  need(!z.empty(), spec.name + ": Z rule " + to_string(spec.z_rule) + " gives an empty Z");
  return z;
}

std::vector<std::string> default_cycle_rules(const FixtureSpec& spec, const Logical& g, const std::vector<VertexId>& z) {
  if (spec.z_rule == ZRule::Boundary) return {"pair:0,0," + std::to_string(g.cols - 1) + "," + std::to_string(g.rows - 1)};
  if (spec.z_rule == ZRule::Leaves || spec.z_rule == ZRule::Explicit) {
    if (z.size() < 2) return {};
    return {"pair:" + std::to_string(z.front()) + "," + std::to_string(z.back())};
  }
  const bool all = spec.z_rule == ZRule::All;
  switch (spec.generator) {
    case Generator::Path:
    case Generator::Cycle: {
      const VertexId last = all ? g.n - 1 : std::max(1, g.n - 3);
      std::vector<std::string> out{"pair:0," + std::to_string(last)};
      if (last > 2) out.push_back("pair:1," + std::to_string(last / 2 + 1));
      return out;
    }
    case Generator::Grid: {
      const int top = all ? g.rows - 1 : (g.rows - 1) / 2;
      return {"loop:1,0," + std::to_string(g.cols - 2) + "," + std::to_string(top),
              "pair:0,0," + std::to_string(g.cols - 1) + "," + std::to_string(top)};
    }
    case Generator::GridWithHole: {
      const auto [x0, y0] = hole_corner(g, g.hole);
      return {"loop:0,0," + std::to_string(g.cols - 1) + "," + std::to_string(y0),
              "pair:0,0," + std::to_string(g.cols - 1) + "," + std::to_string(g.rows - 1), "hole-boundary"};
    }
    case Generator::Tree: {
      // Leaves of the first subtree (all leaves when Z = X).
      std::vector<VertexId> pool;
      if (all)
        for (VertexId x = 0; x < g.n; ++x) pool.push_back(x);
      else if (!g.children[0].empty())
        subtree(g, g.children[0].front(), pool);
      std::vector<VertexId> leaves;
      for (VertexId x : pool)
        if (g.children[x].empty()) leaves.push_back(x);
      std::sort(leaves.begin(), leaves.end());
      if (leaves.empty()) return {};
      std::vector<std::string> out{"pair:0," + std::to_string(leaves.front())};
      if (leaves.size() > 1) out.push_back("pair:" + std::to_string(leaves.front()) + "," + std::to_string(leaves.back()));
      return out;
    }
  }
  return {};
}

}  // namespace

Generator parse_generator(const std::string& name) {
  if (name == "path") return Generator::Path;
  if (name == "cycle") return Generator::Cycle;
  if (name == "grid") return Generator::Grid;
  if (name == "grid_with_hole") return Generator::GridWithHole;
  if (name == "tree") return Generator::Tree;
  throw Error(ErrorCode::InvalidInput, "unknown generator '" + name + "'");
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::Path: return "path";
    case Generator::Cycle: return "cycle";
    case Generator::Grid: return "grid";
    case Generator::GridWithHole: return "grid_with_hole";
    case Generator::Tree: return "tree";
  }
  return "?";
}

ZRule parse_z_rule(const std::string& name) {
  if (name == "default") return ZRule::Default;
  if (name == "all") return ZRule::All;
  if (name == "boundary") return ZRule::Boundary;
  if (name == "leaves") return ZRule::Leaves;
  if (name == "explicit") return ZRule::Explicit;
  throw Error(ErrorCode::InvalidInput, "unknown Z rule '" + name + "'");
}

std::string to_string(ZRule r) {
  switch (r) {
    case ZRule::Default: return "default";
    case ZRule::All: return "all";
    case ZRule::Boundary: return "boundary";
    case ZRule::Leaves: return "leaves";
    case ZRule::Explicit: return "explicit";
  }
  return "?";
}

Fixture build_fixture(const FixtureSpec& spec) {
  need(spec.refine >= 1, spec.name + ": refine must be positive");
  need(spec.unit > 0.0, spec.name + ": unit must be positive");
  const Logical g = make_logical(spec);
  const int q = spec.refine;
  const double w = spec.unit / q;
  const auto zl = logical_z(spec, g);
  std::vector<char> in_z(static_cast<std::size_t>(g.n), 0);
  for (VertexId x : zl) in_z[x] = 1;

  std::vector<WeightedEdge> edges;
  std::vector<VertexId> members;
  std::vector<VertexId> logical(static_cast<std::size_t>(g.n));
  VertexId count = 0;
  if (is_grid(spec)) {
    // Lattice point (X, Y) is in Z when every corner of the smallest logical
    // face holding it is.
    const int nc = (g.cols - 1) * q + 1, nr = (g.rows - 1) * q + 1;
    count = nc * nr;
    for (int y = 0; y < g.rows; ++y)
      for (int x = 0; x < g.cols; ++x) logical[y * g.cols + x] = y * q * nc + x * q;
    for (int Y = 0; Y < nr; ++Y)
      for (int X = 0; X < nc; ++X) {
        const VertexId id = Y * nc + X;
        if (X + 1 < nc) edges.push_back({id, id + 1, w});
        if (Y + 1 < nr) edges.push_back({id, id + nc, w});
        bool inside = true;
        for (int cy : {Y / q, (Y + q - 1) / q})
          for (int cx : {X / q, (X + q - 1) / q}) inside = inside && in_z[cy * g.cols + cx];
        if (inside) members.push_back(id);
      }
  } else {
    // Logical ids are kept; the cut points of edge i get ids n + i (q - 1) + j.
    count = g.n;
    for (VertexId x = 0; x < g.n; ++x) logical[x] = x;
    members = zl;
    for (const auto& [a, b] : g.edges) {
      VertexId prev = a;
      for (int i = 1; i < q; ++i) {
        const VertexId mid = count++;
        edges.push_back({prev, mid, w});
        if (in_z[a] && in_z[b]) members.push_back(mid);
        prev = mid;
      }
      edges.push_back({prev, b, w});
    }
    std::sort(members.begin(), members.end());
  }
  auto space = MetricSpace::build(edges, count);
  auto z = carve_subset(space, members);
  Fixture f{spec, std::move(space), std::move(z), std::move(logical), {}};
  const auto rules = spec.cycles.empty() ? default_cycle_rules(spec, g, zl) : spec.cycles;
  for (const auto& rule : rules) f.cycles.push_back(make_cycle(f, rule));
  return f;
}

NamedCycle make_cycle(const Fixture& f, const std::string& rule) {
  const auto& spec = f.spec;
  const Logical g = make_logical(spec);
  const int q = spec.refine;
  std::map<std::pair<VertexId, VertexId>, std::size_t> index;
  for (std::size_t i = 0; i < g.edges.size(); ++i) index.emplace(g.edges[i], i);
  // Refined vertices along logical edge a -> b.
  auto segment = [&](VertexId a, VertexId b) {
    const auto it = index.find({std::min(a, b), std::max(a, b)});
    need(it != index.end(), rule + ": no logical edge " + std::to_string(a) + "-" + std::to_string(b));
    std::vector<VertexId> seq;
    const VertexId lo = f.logical[std::min(a, b)], hi = f.logical[std::max(a, b)];
    if (is_grid(spec)) {
      const VertexId stride = (hi - lo) / q;
      for (int i = 0; i <= q; ++i) seq.push_back(lo + i * stride);
    } else {
      seq.push_back(lo);
      for (int i = 1; i < q; ++i) seq.push_back(g.n + static_cast<VertexId>(it->second) * (q - 1) + (i - 1));
      seq.push_back(hi);
    }
    if (a > b) std::reverse(seq.begin(), seq.end());
    return seq;
  };
  auto walk = [&](const std::vector<VertexId>& vs) {
    Chain<SpacePoint> c(1);
    for (std::size_t s = 0; s < vs.size(); ++s) {
      const auto seq = segment(vs[s], vs[(s + 1) % vs.size()]);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        c.add({SpacePoint::vertex(seq[i]), SpacePoint::vertex(seq[i + 1])}, 1);
    }
    return c;
  };
  auto grid_id = [&](int x, int y) {
    need(x >= 0 && y >= 0 && x < g.cols && y < g.rows, rule + ": grid coordinate out of range");
    return static_cast<VertexId>(y * g.cols + x);
  };
  auto rectangle = [&](int x0, int y0, int x1, int y1) {
    need(x0 < x1 && y0 < y1, rule + ": empty rectangle");
    std::vector<VertexId> vs;
    for (int x = x0; x < x1; ++x) vs.push_back(grid_id(x, y0));
    for (int y = y0; y < y1; ++y) vs.push_back(grid_id(x1, y));
    for (int x = x1; x > x0; --x) vs.push_back(grid_id(x, y1));
    for (int y = y1; y > y0; --y) vs.push_back(grid_id(x0, y));
    return walk(vs);
  };

  NamedCycle out;
  out.rule = rule;
  const auto colon = rule.find(':');
  const std::string head = rule.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : rule.substr(colon + 1);
  if (head == "pair") {
    const auto v = numbers(args);
    VertexId a = 0, b = 0;
    if (v.size() == 2) {
      a = v[0];
      b = v[1];
      need(a >= 0 && b >= 0 && a < g.n && b < g.n, rule + ": logical id out of range");
    } else {
      need(v.size() == 4 && is_grid(spec), rule + ": pair takes two ids, or four grid coordinates");
      a = grid_id(v[0], v[1]);
      b = grid_id(v[2], v[3]);
    }
    out.chain = Chain<SpacePoint>(0);
    out.chain.add({SpacePoint::vertex(f.logical[b])}, 1);
    out.chain.add({SpacePoint::vertex(f.logical[a])}, -1);
  } else if (head == "loop") {
    const auto v = numbers(args);
    need(v.size() == 4 && is_grid(spec), rule + ": loop takes four grid coordinates");
    out.chain = rectangle(v[0], v[1], v[2], v[3]);
  } else if (rule == "hole-boundary") {
    need(is_grid(spec), rule + ": needs a grid");
    const int h = hole_side(spec, g);
    need(h + 2 < std::min(g.cols, g.rows), rule + ": grid too small for a hole");
    const auto [x0, y0] = hole_corner(g, h);
    out.chain = rectangle(x0, y0, x0 + h, y0 + h);
    for (int y = y0 + 1; y < y0 + h; ++y)
      for (int x = x0 + 1; x < x0 + h; ++x)
        if (!f.z.contains(f.logical[grid_id(x, y)])) out.expect_hypothesis_failure = true;
  } else if (rule == "ring") {
    need(spec.generator == Generator::Cycle, rule + ": needs a cycle");
    std::vector<VertexId> vs;
    for (VertexId x = 0; x < g.n; ++x) vs.push_back(x);
    out.chain = walk(vs);
    out.expect_hypothesis_failure = true;  // not a boundary even in X
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown cycle rule '" + rule + "'");
  }
  return out;
}

ConstantFit fit_constant(const std::string& id, std::vector<FitSample> samples) {
  if (samples.size() < 3) throw Error(ErrorCode::DegenerateSamples, id + ": fewer than 3 samples");
  ConstantFit fit;
  fit.id = id;
  double lo = kInf, hi = 0.0;
  bool logs = true;
  int positive = 0;
  for (const auto& s : samples) {
    if (!(s.rhs > 0.0) || !(s.epsilon > 0.0) || !std::isfinite(s.lhs))
      throw Error(ErrorCode::DegenerateSamples, id + ": nonpositive rhs or epsilon");
    const double r = s.lhs / s.rhs;
    hi = std::max(hi, r);
    if (s.lhs > 0.0) {
      lo = std::min(lo, r);
      ++positive;
    } else {
      logs = false;
    }
  }
  fit.c = hi;
  // A zero lhs satisfies any bound, so drift is taken over the positive samples.
  fit.drift = positive >= 2 ? 1.0 - lo / hi : 0.0;
  if (logs) {
    double mx = 0.0, my = 0.0;
    for (const auto& s : samples) {
      mx += std::log(s.epsilon);
      my += std::log(s.lhs);
    }
    mx /= samples.size();
    my /= samples.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto& s : samples) {
      sxy += (std::log(s.epsilon) - mx) * (std::log(s.lhs) - my);
      sxx += (std::log(s.epsilon) - mx) * (std::log(s.epsilon) - mx);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::DegenerateSamples, id + ": all samples share one epsilon");
    fit.slope = sxy / sxx;
  } else {
    fit.slope = std::nan("");
  }
  fit.samples = std::move(samples);
  return fit;
}

std::vector<FixtureSpec> default_fixtures() {
  auto make = [](std::string name, Generator g, std::vector<int> p) {
    FixtureSpec s;
    s.name = std::move(name);
    s.generator = g;
    s.params = std::move(p);
    return s;
  };
  return {
      make("path5", Generator::Path, {5}),
      make("path20", Generator::Path, {20}),
      make("cycle6", Generator::Cycle, {6}),
      make("cycle24", Generator::Cycle, {24}),
      make("grid5", Generator::Grid, {5, 5}),
      make("grid7", Generator::Grid, {7, 7}),
      make("grid9", Generator::Grid, {9, 9}),
      make("grid9_hole3", Generator::GridWithHole, {9, 9, 3}),
      make("tree3x3", Generator::Tree, {3, 3}),
  };
}

std::vector<double> default_sweep() { return {2.0, 1.0, 0.5, 0.25}; }

namespace {

std::vector<std::string> exact_checks(const FillingReport& r) {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };
  check(r.alpha_prime_cycle, "alpha' is not a cycle");
  check(r.gamma_identity, "boundary(gamma) != g#(alpha) - alpha'");
  check(r.lambda_identity, "boundary(lambda) != alpha - h#(alpha')");
  check(r.p_beta_identity, "boundary(P_beta) != alpha'");
  check(r.final_identity, "boundary(final) != alpha");
  check(r.beta_identity, "boundary(beta) != alpha");
  check(r.final_in_z, "final chain leaves Z");
  check(r.partition_defect <= 1e-9, "partition of unity defect above 1e-9");
  check(r.bumps.lipschitz, "a bump is not 1-Lipschitz on an edge");
  check(r.bumps.core_floor, "a bump drops below epsilon on its core");
  check(r.bumps.z_meeting, "support meets Z without the core meeting Z");
  check(r.bumps.covers, "tau_bar vanishes at a vertex");
  check(r.h_vertex_rules, "h breaks its vertex rules");
  check(r.snap_invalid == 0, "snap produced cells outside the nerve");
  check(r.min_bound > 0.0, "support bound is not positive at some subdivision vertex");
  check(r.min_weight >= r.min_bound - 1e-12, "snapped weight below the support bound");
  check(r.min_snap_weight >= 1.0 / (r.nerve_dim + 1) - 1e-12, "snapped weight below 1/(dim+1)");
  return bad;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

SuiteReport run_suite(const std::vector<FixtureSpec>& fixtures, const std::vector<double>& sweep,
                      const FillingOptions& opt) {
  if (fixtures.empty()) throw Error(ErrorCode::InvalidInput, "no fixtures");
  if (sweep.empty()) throw Error(ErrorCode::InvalidInput, "empty epsilon sweep");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i] > 0.0)) throw Error(ErrorCode::NonPositiveEpsilon, "sweep values must be positive");
    if (i > 0 && !(sweep[i] < sweep[i - 1])) throw Error(ErrorCode::InvalidInput, "sweep must be strictly decreasing");
  }
  SuiteReport out;
  out.sweep = sweep;
  for (const auto& spec : fixtures) {
    Fixture fx = [&] {
      try {
        return build_fixture(spec);
      } catch (const Error& e) {
        throw Error(e.code(), spec.name + ": " + e.what());
      }
    }();
    for (const auto& cyc : fx.cycles) {
      std::vector<const CaseResult*> done;
      const std::size_t first = out.cases.size();
      for (double eps : sweep) {
        CaseResult c;
        c.fixture = spec.name;
        c.cycle = cyc.rule;
        c.epsilon = eps;
        c.expected_failure = cyc.expect_hypothesis_failure;
        const std::string where = spec.name + " " + cyc.rule + " eps=" + fmt(eps) + ": ";
        try {
          c.report = fill_in_Z(fx.space, fx.z, cyc.chain, eps, opt).report;
          c.hard = exact_checks(c.report);
          for (const auto& h : c.hard) out.hard_failures.push_back(where + h);
          if (c.expected_failure) out.warnings.push_back(where + "expected a hypothesis failure, got a filling");
        } catch (const Error& e) {
          c.error = e.what();
          c.hypothesis_failure = e.is_hypothesis_failure();
          if (!(c.expected_failure && c.hypothesis_failure)) out.hard_failures.push_back(where + e.what());
        }
        out.cases.push_back(std::move(c));
      }
      if (cyc.expect_hypothesis_failure || sweep.size() < 3) continue;
      bool all_ok = true;
      for (std::size_t i = first; i < out.cases.size(); ++i) all_ok = all_ok && out.cases[i].error.empty();
      if (!all_ok) continue;

      FixtureFits ff;
      ff.fixture = spec.name;
      ff.cycle = cyc.rule;
      std::map<std::string, std::vector<FitSample>> s;
      for (std::size_t i = first; i < out.cases.size(); ++i) {
        const auto& r = out.cases[i].report;
        const double e = r.epsilon, ce = r.c_alpha * e;
        s["gamma"].push_back({e, r.masses.gamma, ce});
        s["lambda"].push_back({e, r.masses.lambda, ce});
        s["alpha_prime"].push_back({e, r.masses.alpha_prime, r.masses.alpha});
        s["pullback"].push_back({e, r.pullback * e, e});
        s["final"].push_back({e, r.masses.final_chain, r.masses.beta + ce});
      }
      for (const char* id : {"gamma", "lambda", "alpha_prime", "pullback", "final"}) {
        try {
          ff.fits.push_back(fit_constant(id, s[id]));
        } catch (const Error& e) {
          out.warnings.push_back(spec.name + " " + cyc.rule + ": " + e.what());
          continue;
        }
        const auto& fit = ff.fits.back();
        const std::string where = spec.name + " " + cyc.rule + " " + fit.id + ": ";
        // alpha' and the pullback are claimed epsilon-independent; gamma and
        // lambda are judged by slope, and final only bounds from above.
        const bool flat = fit.id == std::string("alpha_prime") || fit.id == std::string("pullback");
        if (flat && !fit.stable()) out.warnings.push_back(where + "constant drifts by " + fmt(fit.drift));
        const bool scaling = fit.id == std::string("gamma") || fit.id == std::string("lambda");
        if (scaling && is_grid(spec) && cyc.chain.dim() >= 1 && !(fit.slope >= kSlopeLow && fit.slope <= kSlopeHigh))
          out.warnings.push_back(where + "slope " + fmt(fit.slope) + " outside [" + fmt(kSlopeLow) + ", " +
                                 fmt(kSlopeHigh) + "]");
      }
      out.fits.push_back(std::move(ff));
    }
  }
  return out;
}

std::string suite_json(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json j{{"fixture", c.fixture},
           {"cycle", c.cycle},
           {"epsilon", c.epsilon},
           {"expected_failure", c.expected_failure}};
    if (c.error.empty()) {
      j["status"] = c.hard.empty() ? "ok" : "hard_failure";
      j["report"] = json::parse(dump_report(c.report));
      j["hard"] = c.hard;
    } else {
      j["status"] = c.hypothesis_failure ? "hypothesis_failure" : "error";
      j["error"] = c.error;
    }
    cases.push_back(std::move(j));
  }
  json fits = json::array();
  for (const auto& ff : r.fits) {
    json list = json::array();
    for (const auto& f : ff.fits) {
      json samples = json::array();
      for (const auto& s : f.samples) samples.push_back({s.epsilon, s.lhs, s.rhs});
      list.push_back({{"id", f.id},
                      {"C", f.c},
                      {"slope", std::isnan(f.slope) ? json(nullptr) : json(f.slope)},
                      {"drift", f.drift},
                      {"stable", f.stable()},
                      {"samples", samples}});
    }
    fits.push_back({{"fixture", ff.fixture}, {"cycle", ff.cycle}, {"fits", list}});
  }
  const json j{{"sweep", r.sweep},         {"cases", cases},         {"fits", fits},
               {"hard_failures", r.hard_failures}, {"warnings", r.warnings}, {"exit_code", r.exit_code()}};
  return j.dump(1) + "\n";
}

std::string suite_csv(const SuiteReport& r) {
  std::string out = "fixture,cycle,status," + report_csv_header();
  for (const auto& c : r.cases) {
    if (!c.error.empty()) continue;
    out += c.fixture + ",\"" + c.cycle + "\"," + (c.hard.empty() ? "ok," : "hard_failure,") + report_csv_row(c.report);
  }
  return out;
}

std::string suite_summary(const SuiteReport& r) {
  std::ostringstream os;
  std::size_t ok = 0, expected = 0;
  for (const auto& c : r.cases) {
    if (c.error.empty() && c.hard.empty()) ++ok;
    if (!c.error.empty() && c.expected_failure && c.hypothesis_failure) ++expected;
  }
  os << r.cases.size() << " runs: " << ok << " filled, " << expected << " expected hypothesis failures\n";
  for (const auto& ff : r.fits) {
    os << "  " << ff.fixture << " " << ff.cycle << ":";
    for (const auto& f : ff.fits) {
      os << " " << f.id << " C=" << fmt(f.c);
      if (f.id == "gamma" || f.id == "lambda") os << " slope=" << fmt(f.slope);
    }
    os << "\n";
  }
  for (const auto& h : r.hard_failures) os << "HARD " << h << "\n";
  for (const auto& w : r.warnings) os << "WARN " << w << "\n";
  os << (r.exit_code() == 0 ? "pass" : r.exit_code() == 1 ? "hard failure" : "soft warnings") << "\n";
  return os.str();
}

}  // namespace lipfill
