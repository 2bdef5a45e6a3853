// lipfill: generate fixtures, fill cycles in Z, run sweeps and the verify suite.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "lipfill/harness.hpp"
#include "lipfill/io.hpp"

namespace fs = std::filesystem;
using namespace lipfill;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;
constexpr int kExitHypothesis = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string space_path;
  std::string z;
  double eps = 0.0;
  std::string sweep;
  std::string cycle;
  int n = 1;
  std::uint64_t seed = 1;
  std::string out;
  int dim_cap = NerveComplex::kDefaultDimCap;
  // generate
  std::string generator = "grid";
  std::string params = "9,9";
  int refine = 8;
  double unit = 1.0;
  std::string name = "space";
  // verify
  std::string fixtures = "default";
  // dump
  std::string what = "cover";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Everything is rendered first and written at the end, so a failed run
/// leaves no partial output.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  void add(std::string name, std::string text) { files.emplace_back(std::move(name), std::move(text)); }
  void write(const std::string& dir) const {
    if (dir.empty()) return;
    fs::create_directories(dir);
    for (const auto& [name, text] : files) {
      std::ofstream out(fs::path(dir) / name, std::ios::binary);
      if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + (fs::path(dir) / name).string() + "'");
      out << text;
    }
  }
};

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number list: '" + s + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double d : parse_doubles(s)) {
    if (d != std::floor(d)) throw UsageError("not an integer list: '" + s + "'");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

std::vector<double> checked_sweep(const std::string& s) {
  auto sweep = parse_doubles(s);
  if (sweep.empty()) throw UsageError("empty sweep");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i] > 0.0)) throw UsageError("sweep values must be positive");
    if (i > 0 && !(sweep[i] < sweep[i - 1])) throw UsageError("sweep values must decrease");
  }
  return sweep;
}

FillingOptions options(const RunConfig& c) {
  FillingOptions opt;
  opt.n = c.n;
  opt.seed = c.seed;
  opt.dim_cap = c.dim_cap;
  return opt;
}

/// A loaded space with its Z and, when the file came from `generate`, the
/// fixture that produced it (used to resolve rule-based cycles and Z).
struct Loaded {
  std::optional<MetricSpace> space;
  std::optional<Fixture> fixture;
  SubsetZ z;
};

FixtureSpec fixture_from_json(const json& j) {
  FixtureSpec s;
  s.name = j.value("name", "space");
  s.generator = parse_generator(j.at("generator").get<std::string>());
  s.params = j.at("params").get<std::vector<int>>();
  s.refine = j.at("refine").get<int>();
  s.unit = j.value("unit", 1.0);
  s.z_rule = parse_z_rule(j.value("z_rule", "default"));
  return s;
}

Loaded load(const RunConfig& c) {
  if (c.space_path.empty()) throw UsageError("--space is required");
  const std::string text = read_file(c.space_path);
  const SpaceFile file = parse_space(text);
  Loaded l;
  l.space.emplace(MetricSpace::build(file.edges, file.vertices));
  std::optional<FixtureSpec> meta;
  try {
    const json j = json::parse(text);
    if (j.contains("fixture")) meta = fixture_from_json(j.at("fixture"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("space file fixture block: ") + e.what());
  }
  auto rebuild = [&](ZRule rule) {
    if (!meta) throw Error(ErrorCode::InvalidInput, "rules need a space file written by 'generate'");
    auto spec = *meta;
    spec.z_rule = rule;
    spec.cycles = {};
    auto f = build_fixture(spec);
    if (f.space.vertex_count() != l.space->vertex_count())
      throw Error(ErrorCode::InvalidInput, "fixture block does not match the space");
    return f;
  };
  if (meta) l.fixture.emplace(rebuild(meta->z_rule));

  std::vector<VertexId> members;
  if (c.z.empty()) {
    members = file.z;
    if (members.empty())
      for (VertexId x = 0; x < l.space->vertex_count(); ++x) members.push_back(x);
  } else if (c.z == "all") {
    for (VertexId x = 0; x < l.space->vertex_count(); ++x) members.push_back(x);
  } else if (std::isdigit(static_cast<unsigned char>(c.z.front()))) {
    for (int x : parse_ints(c.z)) {
      if (x < 0 || x >= l.space->vertex_count()) throw Error(ErrorCode::InvalidInput, "--z id out of range");
      members.push_back(x);
    }
  } else {
    l.fixture.emplace(rebuild(parse_z_rule(c.z)));
    members = l.fixture->z.members;
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  l.z = carve_subset(*l.space, members);
  return l;
}

NamedCycle load_cycle(const RunConfig& c, const Loaded& l) {
  if (c.cycle.empty()) throw UsageError("--cycle is required");
  if (fs::path(c.cycle).extension() == ".json") {
    NamedCycle out;
    out.rule = c.cycle;
    out.chain = parse_chain(read_file(c.cycle), *l.space);
    return out;
  }
  if (!l.fixture) throw Error(ErrorCode::InvalidInput, "cycle rules need a space file written by 'generate'");
  // Resolve against the loaded Z so expectations follow a --z override.
  Fixture f{l.fixture->spec, *l.space, l.z, l.fixture->logical, {}};
  return make_cycle(f, c.cycle);
}

void print_report(const FillingReport& r) {
  std::printf("eps=%g m=%d delta=%.6g N=%lld cover=%d mult=%d dim=%d L_g=%.6g pullback=%.4g\n", r.epsilon, r.m,
              r.delta, static_cast<long long>(r.cells), r.cover_size, r.multiplicity, r.nerve_dim, r.lg, r.pullback);
  std::printf("  mass alpha=%.6g alpha'=%.6g beta=%.6g gamma=%.6g lambda=%.6g P_beta=%.6g final=%.6g\n",
              r.masses.alpha, r.masses.alpha_prime, r.masses.beta, r.masses.gamma, r.masses.lambda, r.masses.p_beta,
              r.masses.final_chain);
  std::printf("  identities %s, snap invalid %lld, min support bound %.4g\n", r.identities_hold() ? "hold" : "FAIL",
              static_cast<long long>(r.snap_invalid), r.min_bound);
}

int cmd_generate(const RunConfig& c) {
  FixtureSpec s;
  s.name = c.name;
  s.generator = parse_generator(c.generator);
  s.params = parse_ints(c.params);
  s.refine = c.refine;
  s.unit = c.unit;
  std::vector<VertexId> explicit_z;
  if (!c.z.empty()) {
    if (std::isdigit(static_cast<unsigned char>(c.z.front()))) {
      s.z_rule = ZRule::Explicit;
      for (int x : parse_ints(c.z)) s.z_explicit.push_back(x);
    } else {
      s.z_rule = parse_z_rule(c.z);
    }
  }
  const auto f = build_fixture(s);
  json j = json::parse(dump_space(f.space, f.z.members));
  j["fixture"] = {{"name", s.name},       {"generator", to_string(s.generator)}, {"params", s.params},
                  {"refine", s.refine},   {"unit", s.unit},                      {"z_rule", to_string(s.z_rule)},
                  {"z_explicit", s.z_explicit}};
  json cycles = json::array();
  for (const auto& cyc : f.cycles) cycles.push_back(cyc.rule);
  j["fixture"]["cycles"] = cycles;
  Outputs out;
  out.add(c.name + ".json", j.dump() + "\n");
  if (c.out.empty()) {
    std::cout << out.files.front().second;
  } else {
    out.write(c.out);
    std::printf("%s: %d vertices, %zu edges, |Z| = %zu, cycles:", c.name.c_str(), f.space.vertex_count(),
                f.space.edges().size(), f.z.members.size());
    for (const auto& cyc : f.cycles) std::printf(" %s", cyc.rule.c_str());
    std::printf("\n");
  }
  return 0;
}

int cmd_fill(const RunConfig& c) {
  if (!(c.eps > 0.0)) throw UsageError("--eps must be positive");
  const auto l = load(c);
  const auto cyc = load_cycle(c, l);
  const auto res = fill_in_Z(*l.space, l.z, cyc.chain, c.eps, options(c));
  Outputs out;
  out.add("report.json", dump_report(res.report));
  out.add("report.csv", report_csv_header() + report_csv_row(res.report));
  out.add("final_chain.json", dump_chain(res.final_chain));
  out.write(c.out);
  print_report(res.report);
  return res.report.identities_hold() ? 0 : 1;
}

int cmd_sweep(const RunConfig& c) {
  const auto sweep = checked_sweep(c.sweep);
  const auto l = load(c);
  const auto cyc = load_cycle(c, l);
  std::vector<FillingReport> reports;
  for (double eps : sweep) reports.push_back(fill_in_Z(*l.space, l.z, cyc.chain, eps, options(c)).report);
  json list = json::array();
  std::string csv = report_csv_header();
  bool ok = true;
  for (const auto& r : reports) {
    list.push_back(json::parse(dump_report(r)));
    csv += report_csv_row(r);
    ok = ok && r.identities_hold();
    print_report(r);
  }
  json fits = json::array();
  if (reports.size() >= 3) {
    std::vector<FitSample> g, lam;
    for (const auto& r : reports) {
      g.push_back({r.epsilon, r.masses.gamma, r.c_alpha * r.epsilon});
      lam.push_back({r.epsilon, r.masses.lambda, r.c_alpha * r.epsilon});
    }
    for (const auto& f : {fit_constant("gamma", g), fit_constant("lambda", lam)}) {
      std::printf("fit %s: C=%.4g slope=%.4g drift=%.3g\n", f.id.c_str(), f.c, f.slope, f.drift);
      fits.push_back({{"id", f.id}, {"C", f.c}, {"slope", std::isnan(f.slope) ? json(nullptr) : json(f.slope)},
                      {"drift", f.drift}});
    }
  }
  Outputs out;
  out.add("sweep.json", json{{"cycle", cyc.rule}, {"reports", list}, {"fits", fits}}.dump(1) + "\n");
  out.add("sweep.csv", csv);
  out.write(c.out);
  return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
  const auto sweep = checked_sweep(c.sweep.empty() ? "2,1,0.5,0.25" : c.sweep);
  auto all = default_fixtures();
  std::vector<FixtureSpec> chosen;
  if (c.fixtures == "default") {
    chosen = all;
  } else {
    std::stringstream in(c.fixtures);
    std::string name;
    while (std::getline(in, name, ',')) {
      auto it = std::find_if(all.begin(), all.end(), [&](const FixtureSpec& s) { return s.name == name; });
      if (it == all.end()) throw UsageError("unknown fixture '" + name + "'");
      chosen.push_back(*it);
    }
  }
  // Snapping needs eps >= 2 w; shrink the fixtures when the sweep goes lower.
  for (auto& s : chosen) {
    const double w = s.unit / s.refine;
    if (sweep.back() < 2.0 * w) {
      s.unit = sweep.back() * s.refine / 2.0;
      std::fprintf(stderr, "note: %s rescaled to unit %g so that eps >= 2 w\n", s.name.c_str(), s.unit);
    }
  }
  const auto r = run_suite(chosen, sweep, options(c));
  Outputs out;
  out.add("verify.json", suite_json(r));
  out.add("verify.csv", suite_csv(r));
  out.write(c.out);
  std::printf("%s", suite_summary(r).c_str());
  return r.exit_code();
}

int cmd_dump(const RunConfig& c) {
  if (!(c.eps > 0.0)) throw UsageError("--eps must be positive");
  const auto l = load(c);
  const auto family = build_cover(*l.space, l.z, c.eps);
  const auto nerve = build_nerve(family, c.dim_cap);
  std::string text;
  if (c.what == "cover") {
    text = dump_cover(family);
  } else if (c.what == "complex") {
    text = dump_complex(nerve);
  } else if (c.what == "maps") {
    const GMap gm(family, nerve);
    const HMap hm(family, nerve, l.z);
    text = dump_maps(gm, hm);
  } else {
    throw UsageError("--what must be cover, complex or maps");
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    Outputs out;
    out.add(c.what + ".json", text);
    out.write(c.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fill cycles of a subset Z of a metric graph inside Z, and check the construction."};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--space", c.space_path, "space file (JSON)");
    sub->add_option("--z", c.z, "Z override: all, comma-separated vertex ids, or a Z rule");
    sub->add_option("--n", c.n, "connectivity degree; cycles up to this dimension")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", c.seed, "seed for sampled Lipschitz checks");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--dim-cap", c.dim_cap, "largest nerve dimension")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("generate", "write a fixture space file");
  gen->add_option("--generator", c.generator, "path, cycle, grid, grid_with_hole or tree");
  gen->add_option("--params", c.params, "generator parameters, comma separated");
  gen->add_option("--refine", c.refine, "pieces per logical edge")->check(CLI::PositiveNumber);
  gen->add_option("--unit", c.unit, "logical edge length")->check(CLI::PositiveNumber);
  gen->add_option("--name", c.name, "file stem");
  gen->add_option("--z", c.z, "Z rule (default, all, boundary, leaves) or logical ids");
  gen->add_option("--out", c.out, "output directory (stdout when absent)");

  auto* fill = app.add_subcommand("fill", "fill one cycle at one scale");
  common(fill);
  fill->add_option("--eps", c.eps, "scale epsilon")->required();
  fill->add_option("--cycle", c.cycle, "cycle rule, or a chain file (.json)")->required();

  auto* sweep = app.add_subcommand("sweep", "fill one cycle over a decreasing list of scales");
  common(sweep);
  sweep->add_option("--sweep", c.sweep, "E1,E2,... decreasing")->required();
  sweep->add_option("--cycle", c.cycle, "cycle rule, or a chain file (.json)")->required();

  auto* verify = app.add_subcommand("verify", "run the property suite over the fixtures");
  verify->add_option("--fixtures", c.fixtures, "default, or a comma list of fixture names");
  verify->add_option("--sweep", c.sweep, "E1,E2,... decreasing (default 2,1,0.5,0.25)");
  verify->add_option("--n", c.n, "connectivity degree")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", c.seed, "seed for sampled Lipschitz checks");
  verify->add_option("--out", c.out, "output directory");
  verify->add_option("--dim-cap", c.dim_cap, "largest nerve dimension")->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("dump", "print the cover, the nerve or the maps at one scale");
  common(dump);
  dump->add_option("--eps", c.eps, "scale epsilon")->required();
  dump->add_option("--what", c.what, "cover, complex or maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(c);
    if (*fill) return cmd_fill(c);
    if (*sweep) return cmd_sweep(c);
    if (*verify) return cmd_verify(c);
    return cmd_dump(c);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    if (e.is_hypothesis_failure()) return kExitHypothesis;
    if (e.code() == ErrorCode::InvalidInput || e.code() == ErrorCode::NotACycle) return kExitInput;
    if (e.code() == ErrorCode::NonPositiveEpsilon) return kExitUsage;
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitInput;
  }
}
