#include "lipfill/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace lipfill {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kIntTol = 1e-6;
constexpr int kMaxPivots = 200000;
constexpr int kDegenerateRun = 50;

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b, std::size_t n)
      : m_(a.size()), n_(n), width_(n + a.size() + 1), t_((a.size() + 1) * width_, 0.0), basis_(a.size()) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_) throw Error(ErrorCode::MismatchedShape, "LP row of the wrong width");
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * a[i][j];
      at(i, n_ + i) = 1.0;
      rhs(i) = sign * b[i];
      basis_[i] = n_ + i;
    }
    // Phase 1 objective: the sum of the artificials, priced out.
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(m_, j) -= at(i, j);
      rhs(m_) -= rhs(i);
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + width_ - 1]; }

  void optimize() {
    int degenerate = 0;
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = n_;
      double best = -kPivotTol;
      for (std::size_t j = 0; j < n_; ++j) {
        const double d = at(m_, j);
        if (d < best) {
          best = d;
          enter = j;
          if (degenerate > kDegenerateRun) break;  // Bland: first improving column
        }
      }
      if (enter == n_) return;
      std::size_t leave = m_;
      double ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double v = at(i, enter);
        if (v <= kPivotTol) continue;
        const double r = rhs(i) / v;
        if (leave == m_ || r < ratio - 1e-12 || (r <= ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave == m_) throw Error(ErrorCode::OracleFailed, "LP is unbounded");
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::OracleFailed, "LP pivot limit reached");
  }

  void pivot(std::size_t r, std::size_t j) {
    const double p = at(r, j);
    for (std::size_t k = 0; k < width_; ++k) at(r, k) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, j);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < width_; ++k) at(i, k) -= f * at(r, k);
    }
    basis_[r] = j;
  }

  // Moves artificials out of the basis where possible and installs the real
  // objective. Rows that stay artificial are redundant and read zero.
  void start_phase_two(const std::vector<double>& c) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > kPivotTol) {
          pivot(i, j);
          break;
        }
    }
    for (std::size_t k = 0; k < width_; ++k) at(m_, k) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) at(m_, j) = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = basis_[i];
      if (j >= n_ || c[j] == 0.0) continue;
      const double f = c[j];
      for (std::size_t k = 0; k < width_; ++k) at(m_, k) -= f * at(i, k);
    }
  }

  double phase_one_value() { return -rhs(m_); }

  std::vector<double> solution() {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, rhs(i));
    return x;
  }

 private:
  std::size_t m_, n_, width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

// Integer bounds per variable: lower defaults to 0, upper to none.
using Bounds = std::map<std::size_t, std::pair<double, double>>;

double max_pair_distance(const MetricSpace& space, const std::vector<VertexId>& t) {
  double d = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) d = std::max(d, space.dist(t[i], t[j]));
  return d;
}

}  // namespace

LpSolution solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                    const std::vector<double>& c) {
  if (a.size() != b.size()) throw Error(ErrorCode::MismatchedShape, "LP rows and right-hand side differ");
  Tableau t(a, b, c.size());
  t.optimize();
  const double scale = 1.0 + std::accumulate(b.begin(), b.end(), 0.0, [](double s, double v) { return s + std::abs(v); });
  if (t.phase_one_value() > 1e-7 * scale) throw Error(ErrorCode::OracleFailed, "LP is infeasible");
  t.start_phase_two(c);
  t.optimize();
  LpSolution out;
  out.x = t.solution();
  for (std::size_t j = 0; j < c.size(); ++j) out.value += c[j] * out.x[j];
  return out;
}

LpSolution solve_ilp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                     const std::vector<double>& c, int max_nodes) {
  const std::size_t n = c.size();
  LpSolution best;
  bool found = false;
  // Best-first on the parent's LP value; ties go to the older node.
  struct Node {
    double bound;
    int seq;
    Bounds bounds;
    bool operator<(const Node& o) const { return bound != o.bound ? bound > o.bound : seq > o.seq; }
  };
  std::priority_queue<Node> open;
  open.push({-kInf, 0, {}});
  int nodes = 0;
  while (!open.empty()) {
    if (found && open.top().bound >= best.value - 1e-9) break;
    if (++nodes > max_nodes) throw Error(ErrorCode::OracleFailed, "branch and bound node limit reached");
    const Bounds bounds = open.top().bounds;
    open.pop();
    // One row with its own slack column per finite bound side.
    std::vector<std::pair<std::size_t, double>> lower, upper;
    for (const auto& [j, lohi] : bounds) {
      if (lohi.first > 0.0) lower.emplace_back(j, lohi.first);
      if (std::isfinite(lohi.second)) upper.emplace_back(j, lohi.second);
    }
    const std::size_t width = n + lower.size() + upper.size();
    std::vector<std::vector<double>> rows;
    rows.reserve(a.size() + lower.size() + upper.size());
    for (const auto& r : a) {
      auto row = r;
      row.resize(width, 0.0);
      rows.push_back(std::move(row));
    }
    std::vector<double> rhs = b;
    std::size_t slack = n;
    for (const auto& [j, v] : lower) {
      std::vector<double> row(width, 0.0);
      row[j] = 1.0;
      row[slack++] = -1.0;
      rows.push_back(std::move(row));
      rhs.push_back(v);
    }
    for (const auto& [j, v] : upper) {
      std::vector<double> row(width, 0.0);
      row[j] = 1.0;
      row[slack++] = 1.0;
      rows.push_back(std::move(row));
      rhs.push_back(v);
    }
    auto cost = c;
    cost.resize(width, 0.0);
    LpSolution lp;
    try {
      lp = solve_lp(rows, rhs, cost);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OracleFailed) continue;
      throw;
    }
    if (found && lp.value >= best.value - 1e-9) continue;
    std::size_t branch = n;
    double widest = kIntTol;
    for (std::size_t j = 0; j < n; ++j) {
      const double f = std::abs(lp.x[j] - std::round(lp.x[j]));
      if (f > widest) {
        widest = f;
        branch = j;
      }
    }
    if (branch == n) {
      lp.x.resize(n);
      for (auto& v : lp.x) v = std::round(v);
      lp.value = 0.0;
      for (std::size_t j = 0; j < n; ++j) lp.value += c[j] * lp.x[j];
      best = std::move(lp);
      found = true;
      continue;
    }
    auto up = bounds, down = bounds;
    const auto [lo, hi] = bounds.contains(branch) ? bounds.at(branch) : std::pair{0.0, kInf};
    up[branch] = {std::ceil(lp.x[branch]), hi};
    down[branch] = {lo, std::floor(lp.x[branch])};
    open.push({lp.value, 2 * nodes - 1, std::move(down)});
    open.push({lp.value, 2 * nodes, std::move(up)});
  }
  if (!found) throw Error(ErrorCode::OracleFailed, "integer program is infeasible");
  return best;
}

std::vector<std::vector<VertexId>> candidate_cells(const MetricSpace& space, std::span<const VertexId> members, int m) {
  std::vector<char> in(static_cast<std::size_t>(space.vertex_count()), 0);
  for (VertexId x : members) in[x] = 1;
  std::vector<std::vector<VertexId>> out;
  if (m == 0) {
    for (const auto& e : space.edges())
      if (in[e.u] && in[e.v]) out.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    std::sort(out.begin(), out.end());
    return out;
  }
  if (m != 1) throw Error(ErrorCode::InvalidInput, "oracle cells exist for m = 0 and m = 1 only");
  const auto n = static_cast<std::size_t>(space.vertex_count());
  std::vector<std::vector<VertexId>> adj(n);
  for (const auto& e : space.edges())
    if (in[e.u] && in[e.v]) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  auto adjacent = [&](VertexId x, VertexId y) { return std::binary_search(adj[x].begin(), adj[x].end(), y); };
  std::set<std::vector<VertexId>> cells;
  for (VertexId a = 0; a < static_cast<VertexId>(n); ++a) {
    const auto& na = adj[a];
    for (std::size_t i = 0; i < na.size(); ++i) {
      const VertexId b = na[i];
      if (b < a) continue;
      for (std::size_t j = i + 1; j < na.size(); ++j) {
        const VertexId d = na[j];
        if (adjacent(b, d)) {
          cells.insert({a, b, d});
          continue;
        }
        // Chordless 4-cycles a-b-c-d with a lowest, split along a-c.
        for (VertexId c : adj[b]) {
          if (c <= a || c == d || !adjacent(c, d) || adjacent(a, c)) continue;
          std::vector<VertexId> t1{a, b, c}, t2{a, c, d};
          std::sort(t1.begin(), t1.end());
          std::sort(t2.begin(), t2.end());
          cells.insert(t1);
          cells.insert(t2);
        }
      }
    }
  }
  return {cells.begin(), cells.end()};
}

MinimalFilling minimal_filling(const MetricSpace& space, std::span<const VertexId> members,
                               const Chain<SpacePoint>& alpha, int max_cells) {
  MinimalFilling out;
  const int m = alpha.dim();
  out.chain = Chain<SpacePoint>(m + 1);
  out.lp_integral = true;
  if (alpha.empty()) return out;
  for (const auto& [t, k] : alpha.terms())
    for (const auto& p : t)
      if (!p.is_vertex()) throw Error(ErrorCode::InvalidInput, "oracle cycles live on graph vertices");

  const auto cells = candidate_cells(space, members, m);
  out.cells = static_cast<int>(cells.size());
  if (out.cells > max_cells)
    throw Error(ErrorCode::OracleTooLarge,
                std::to_string(cells.size()) + " candidate cells exceed the cap of " + std::to_string(max_cells));

  std::map<std::vector<SpacePoint>, std::size_t> faces;
  std::vector<Chain<SpacePoint>> rims;
  rims.reserve(cells.size());
  for (const auto& cell : cells) {
    std::vector<SpacePoint> t;
    for (VertexId x : cell) t.push_back(SpacePoint::vertex(x));
    rims.push_back(boundary(Chain<SpacePoint>::simplex(t)));
    for (const auto& [f, k] : rims.back().terms()) faces.try_emplace(f, faces.size());
  }
  for (const auto& [t, k] : alpha.terms())
    if (!faces.contains(t)) throw Error(ErrorCode::OracleFailed, "alpha uses a face outside the candidate complex");

  const std::size_t rows = faces.size(), cols = 2 * cells.size();
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  std::vector<double> b(rows, 0.0), c(cols, 0.0);
  for (std::size_t j = 0; j < cells.size(); ++j) {
    for (const auto& [f, k] : rims[j].terms()) {
      a[faces.at(f)][2 * j] = static_cast<double>(k);
      a[faces.at(f)][2 * j + 1] = -static_cast<double>(k);
    }
    c[2 * j] = c[2 * j + 1] = regular_simplex_volume(m + 1, max_pair_distance(space, cells[j]));
  }
  for (const auto& [t, k] : alpha.terms()) b[faces.at(t)] = static_cast<double>(k);

  LpSolution sol;
  try {
    sol = solve_lp(a, b, c);
  } catch (const Error& e) {
    throw Error(ErrorCode::OracleFailed, std::string("alpha bounds nothing in the candidate complex: ") + e.what());
  }
  for (double v : sol.x) out.lp_integral = out.lp_integral && std::abs(v - std::round(v)) <= kIntTol;
  if (!out.lp_integral) sol = solve_ilp(a, b, c);

  for (std::size_t j = 0; j < cells.size(); ++j) {
    const auto k = std::llround(sol.x[2 * j] - sol.x[2 * j + 1]);
    if (k == 0) continue;
    std::vector<SpacePoint> t;
    for (VertexId x : cells[j]) t.push_back(SpacePoint::vertex(x));
    out.chain.add(t, k);
  }
  if (boundary(out.chain) != alpha) throw Error(ErrorCode::OracleFailed, "rounded oracle chain misses alpha");
  out.value = space_mass(space, out.chain);
  return out;
}

FvComparison fv_compare(const MetricSpace& space, const SubsetZ& z, const Chain<SpacePoint>& alpha,
                        std::span<const double> epsilons, const FillingOptions& opt, int max_cells) {
  if (epsilons.empty()) throw Error(ErrorCode::InvalidInput, "empty epsilon list");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1])) throw Error(ErrorCode::InvalidInput, "epsilon list must decrease");
  FvComparison out;
  for (double eps : epsilons) {
    const auto r = fill_in_Z(space, z, alpha, eps, opt).report;
    FvRow row;
    row.epsilon = eps;
    row.mass_final = r.masses.final_chain;
    row.mass_beta = r.masses.beta;
    row.ratio = row.mass_beta > 0.0 ? row.mass_final / row.mass_beta : 0.0;
    out.max_ratio = std::max(out.max_ratio, row.ratio);
    out.rows.push_back(row);
  }
  if (out.rows.size() >= 2) {
    double se = 0, sr = 0, see = 0, ser = 0;
    const double n = static_cast<double>(out.rows.size());
    for (const auto& r : out.rows) {
      se += r.epsilon;
      sr += r.ratio;
      see += r.epsilon * r.epsilon;
      ser += r.epsilon * r.ratio;
    }
    const double slope = (n * ser - se * sr) / (n * see - se * se);
    out.ratio_at_zero = (sr - slope * se) / n;
  } else {
    out.ratio_at_zero = out.rows.front().ratio;
  }
  std::vector<VertexId> all(static_cast<std::size_t>(space.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  try {
    out.fv_x = minimal_filling(space, all, alpha, max_cells).value;
    out.fv_z = minimal_filling(space, z.members, alpha, max_cells).value;
    out.exact = true;
    for (const auto& r : out.rows)
      out.pipeline_constant = std::max(out.pipeline_constant, out.fv_x > 0.0 ? r.mass_final / out.fv_x : 1.0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OracleTooLarge) throw;
  }
  return out;
}

}  // namespace lipfill
