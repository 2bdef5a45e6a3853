#include "lipfill/io.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace lipfill {

namespace {

using nlohmann::json;

json point_json(const SpacePoint& p) {
  if (p.is_vertex()) return p.u;
  return json{{"edge", {p.u, p.v}}, {"offset", p.offset}};
}

SpacePoint point_from(const json& j, const MetricSpace& space) {
  if (j.is_number_integer()) {
    const auto x = j.get<VertexId>();
    if (x < 0 || x >= space.vertex_count()) throw Error(ErrorCode::InvalidInput, "vertex id out of range");
    return SpacePoint::vertex(x);
  }
  const auto& e = j.at("edge");
  const auto u = e.at(0).get<VertexId>(), v = e.at(1).get<VertexId>();
  if (u < 0 || v < 0 || u >= space.vertex_count() || v >= space.vertex_count())
    throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
  return space.make_point(u, v, j.at("offset").get<double>());
}

json masses_json(const Masses& m) {
  return {{"alpha", m.alpha},   {"alpha_prime", m.alpha_prime}, {"beta", m.beta},
          {"gamma", m.gamma},   {"lambda", m.lambda},           {"P_beta", m.p_beta},
          {"final", m.final_chain}};
}

}  // namespace

SpaceFile parse_space(const std::string& text) {
  SpaceFile out;
  try {
    const json j = json::parse(text);
    out.vertices = j.at("vertices").get<VertexId>();
    for (const auto& e : j.at("edges")) {
      if (e.size() != 3) throw Error(ErrorCode::InvalidInput, "edge entries are [u, v, w]");
      out.edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.at(2).get<double>()});
    }
    if (j.contains("Z")) out.z = j.at("Z").get<std::vector<VertexId>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("space file: ") + e.what());
  }
  if (out.vertices <= 0) throw Error(ErrorCode::InvalidInput, "space file: no vertices");
  for (const auto& e : out.edges)
    if (e.u < 0 || e.v < 0 || e.u >= out.vertices || e.v >= out.vertices)
      throw Error(ErrorCode::InvalidInput, "space file: edge endpoint out of range");
  for (VertexId x : out.z)
    if (x < 0 || x >= out.vertices) throw Error(ErrorCode::InvalidInput, "space file: Z id out of range");
  return out;
}

std::string dump_space(const MetricSpace& space, const std::vector<VertexId>& z) {
  json edges = json::array();
  for (const auto& e : space.edges()) edges.push_back({e.u, e.v, e.w});
  json j{{"vertices", space.vertex_count()}, {"edges", edges}};
  if (!z.empty()) j["Z"] = z;
  return j.dump() + "\n";
}

std::string dump_chain(const Chain<SpacePoint>& c) {
  json terms = json::array();
  for (const auto& [t, k] : c.terms()) {
    json vmap = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<int> coord(t.size(), 0);
      coord[i] = 1;
      vmap.push_back({coord, point_json(t[i])});
    }
    terms.push_back({{"coeff", k}, {"level", 1}, {"vmap", vmap}});
  }
  return json{{"m", c.dim()}, {"terms", terms}}.dump() + "\n";
}

Chain<SpacePoint> parse_chain(const std::string& text, const MetricSpace& space) {
  try {
    const json j = json::parse(text);
    const int m = j.at("m").get<int>();
    if (m < 0) throw Error(ErrorCode::InvalidInput, "chain file: negative dimension");
    Chain<SpacePoint> c(m);
    for (const auto& term : j.at("terms")) {
      if (term.value("level", 1) != 1) throw Error(ErrorCode::InvalidInput, "chain file: only level-1 cells are read");
      std::vector<SpacePoint> cell(static_cast<std::size_t>(m) + 1);
      std::vector<char> seen(cell.size(), 0);
      for (const auto& entry : term.at("vmap")) {
        const auto coord = entry.at(0).get<std::vector<int>>();
        if (coord.size() != cell.size()) throw Error(ErrorCode::InvalidInput, "chain file: lattice coordinate size");
        std::size_t slot = cell.size();
        for (std::size_t i = 0; i < coord.size(); ++i)
          if (coord[i] == 1) slot = i;
        if (slot == cell.size() || seen[slot]) throw Error(ErrorCode::InvalidInput, "chain file: bad lattice corner");
        seen[slot] = 1;
        cell[slot] = point_from(entry.at(1), space);
      }
      for (char s : seen)
        if (!s) throw Error(ErrorCode::InvalidInput, "chain file: missing lattice corner");
      c.add(cell, term.at("coeff").get<std::int64_t>());
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("chain file: ") + e.what());
  }
}

std::string dump_report(const FillingReport& r) {
  const json j{
      {"epsilon", r.epsilon},
      {"m", r.m},
      {"delta", r.delta},
      {"N", r.cells},
      {"c_alpha", r.c_alpha},
      {"cover_size", r.cover_size},
      {"multiplicity", r.multiplicity},
      {"nerve_dim", r.nerve_dim},
      {"masses", masses_json(r.masses)},
      {"constants",
       {{"L_g", r.lg},
        {"L_g_vertices", r.lg_vertices},
        {"g_lipschitz_sampled", r.g_lipschitz},
        {"g_scale", r.g_scale},
        {"h_lipschitz_vertices", r.h_lipschitz},
        {"pullback", r.pullback},
        {"partition_defect", r.partition_defect}}},
      {"snap",
       {{"min_bound", r.min_bound},
        {"min_weight", r.min_weight},
        {"min_snap_weight", r.min_snap_weight},
        {"invalid_first", r.snap_invalid},
        {"invalid_final", r.snap_invalid_final},
        {"beta_step", r.beta_step},
        {"diagnostic", r.snap_diagnostic}}},
      {"checks",
       {{"alpha_is_cycle", r.alpha_is_cycle},
        {"alpha_prime_cycle", r.alpha_prime_cycle},
        {"gamma_identity", r.gamma_identity},
        {"lambda_identity", r.lambda_identity},
        {"p_beta_identity", r.p_beta_identity},
        {"final_identity", r.final_identity},
        {"beta_identity", r.beta_identity},
        {"final_in_z", r.final_in_z},
        {"bump_lipschitz", r.bumps.lipschitz},
        {"bump_core_floor", r.bumps.core_floor},
        {"bump_z_meeting", r.bumps.z_meeting},
        {"bump_covers", r.bumps.covers},
        {"h_vertex_rules", r.h_vertex_rules}}}};
  return j.dump(2) + "\n";
}

std::string report_csv_header() {
  return "epsilon,m,delta,N,c_alpha,cover_size,multiplicity,nerve_dim,L_g,pullback,mass_alpha,mass_alpha_prime,"
         "mass_beta,mass_gamma,mass_lambda,mass_P_beta,mass_final,snap_invalid,identities\n";
}

std::string report_csv_row(const FillingReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.epsilon << ',' << r.m << ',' << r.delta << ',' << r.cells << ',' << r.c_alpha << ',' << r.cover_size << ','
     << r.multiplicity << ',' << r.nerve_dim << ',' << r.lg << ',' << r.pullback << ',' << r.masses.alpha << ','
     << r.masses.alpha_prime << ',' << r.masses.beta << ',' << r.masses.gamma << ',' << r.masses.lambda << ','
     << r.masses.p_beta << ',' << r.masses.final_chain << ',' << r.snap_invalid << ',' << (r.identities_hold() ? 1 : 0)
     << '\n';
  return os.str();
}

std::string dump_cover(const BumpFamily& family) {
  json out = json::array();
  for (const auto& el : family.elements())
    out.push_back({{"k", el.k},
                   {"kind", el.kind == CoverKind::Fine ? "fine" : "coarse"},
                   {"center", el.center},
                   {"core", el.core},
                   {"s_k", el.tau_radius}});
  return json{{"epsilon", family.epsilon()}, {"elements", out}}.dump() + "\n";
}

std::string dump_complex(const NerveComplex& nerve) {
  json vertices = json::array();
  for (int k = 0; k < nerve.vertex_count(); ++k) vertices.push_back({{"k", k}, {"scale", nerve.scale(k)}});
  return json{{"dim", nerve.dim()}, {"vertices", vertices}, {"maximal_simplices", nerve.maximal_simplices()}}.dump() +
         "\n";
}

std::string dump_maps(const GMap& gm, const HMap& hm) {
  return json{{"h_images", hm.vertex_images()},
              {"L_g", gm.lipschitz()},
              {"g_scale", gm.scale_constant()},
              {"h_lipschitz_vertices", hm.vertex_lipschitz()},
              {"pullback", hm.pullback_constant(gm)}}
             .dump() +
         "\n";
}

}  // namespace lipfill
