#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "closedexact/errors.hpp"
#include "closedexact/field.hpp"
#include "closedexact/multiindex.hpp"

namespace closedexact {

struct OrbitEdge {
  LatticePoint src;
  LatticePoint dst;
  MultiIndex label;  ///< cone_point(label) == src, cone_point(shift(label, 1)) == dst
  std::optional<double> weight;
};

/// Directed multigraph on the cone points of degree N with largest coordinate <= bound.
struct OrbitGraph {
  int degree = 0;
  int bound = 0;
  std::vector<LatticePoint> vertices;
  std::vector<OrbitEdge> edges;

  std::size_t vertex_index(const LatticePoint& z) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), z);
    if (it == vertices.end() || *it != z) throw PreconditionError("point " + to_text(z) + " is not a vertex");
    return static_cast<std::size_t>(it - vertices.begin());
  }

  bool has_vertex(const LatticePoint& z) const { return std::binary_search(vertices.begin(), vertices.end(), z); }
};

/// Targets of the edge rule: z - e (when z_1 >= 1) and every z + e_i that stays nondecreasing.
inline std::vector<LatticePoint> rule_successors(const LatticePoint& z) {
  std::vector<LatticePoint> out;
  const std::size_t N = z.dim();
  if (N == 0) return {z};
  if (z[0] >= 1) {
    LatticePoint w = z;
    for (int& c : w.coords) --c;
    out.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (i + 1 < N && z[i] == z[i + 1]) continue;
    LatticePoint w = z;
    ++w[i];
    out.push_back(std::move(w));
  }
  return out;
}

/**
 * Vertices are enumerate_orbits(N, bound); each rule edge is labelled by the
 * unique I in the source orbit whose translate tau I lies in the target orbit.
 */
inline OrbitGraph build(int N, int bound) {
  if (N < 0) throw PreconditionError("degree must be nonnegative");
  OrbitGraph g;
  g.degree = N;
  g.bound = bound;
  g.vertices = enumerate_orbits(N, bound);
  for (const auto& src : g.vertices) {
    const auto members = orbit(decode(src));
    for (const auto& dst : rule_successors(src)) {
      if (!g.has_vertex(dst)) continue;
      std::optional<MultiIndex> label;
      for (const auto& I : members) {
        if (cone_point(shift(I, 1)) != dst) continue;
        if (label) throw PreconditionError("edge " + to_text(src) + " -> " + to_text(dst) + " has two labels");
        label = I;
      }
      if (!label) throw PreconditionError("edge " + to_text(src) + " -> " + to_text(dst) + " has no label");
      g.edges.push_back({src, dst, *label, std::nullopt});
    }
  }
  return g;
}

/// Weight of each edge is the coefficient at its label (0 when absent).
inline OrbitGraph assign_weights(OrbitGraph g, const CoefficientField& coeffs) {
  if (coeffs.degree() != g.degree)
    throw PreconditionError("coefficient degree " + std::to_string(coeffs.degree()) + " != graph degree " +
                            std::to_string(g.degree));
  for (auto& e : g.edges) e.weight = coeffs.value(e.label);
  return g;
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Weakly connected components.
inline std::size_t component_count(const OrbitGraph& g) {
  detail::UnionFind uf(g.vertices.size());
  for (const auto& e : g.edges) uf.unite(g.vertex_index(e.src), g.vertex_index(e.dst));
  std::size_t n = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) n += uf.find(v) == v;
  return n;
}

struct CycleReport {
  bool ok = true;
  std::size_t components = 0;
  std::size_t cycles_checked = 0;
  double max_abs_cycle_sum = 0;
  double worst_sum = 0;
  std::vector<LatticePoint> worst_cycle;  ///< closed vertex walk, first == last
};

/**
 * Signed weight sums over the fundamental cycles of a BFS spanning forest.
 * Each tree gives vertex potentials phi (signed weight along the tree path
 * from the root); the non-tree edge u -> v with weight w closes the cycle
 * with sum w + phi(u) - phi(v).  The degree-0 loop is not checked.
 */
inline CycleReport cycle_check(const OrbitGraph& g, double tol = 1e-9) {
  const std::size_t V = g.vertices.size();
  struct Arc {
    std::size_t to;
    std::size_t edge;
    double sign;
  };
  std::vector<std::vector<Arc>> adj(V);
  std::vector<std::size_t> src(g.edges.size()), dst(g.edges.size());
  std::vector<double> w(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!e.weight) throw PreconditionError("cycle_check needs assigned weights");
    src[i] = g.vertex_index(e.src);
    dst[i] = g.vertex_index(e.dst);
    w[i] = *e.weight;
    adj[src[i]].push_back({dst[i], i, 1.0});
    adj[dst[i]].push_back({src[i], i, -1.0});
  }

  CycleReport rep;
  std::vector<bool> seen(V, false), tree_edge(g.edges.size(), false);
  std::vector<double> phi(V, 0.0);
  std::vector<std::size_t> parent(V), depth(V, 0);
  for (std::size_t root = 0; root < V; ++root) {
    if (seen[root]) continue;
    ++rep.components;
    seen[root] = true;
    parent[root] = root;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& a : adj[u]) {
        if (seen[a.to]) continue;
        seen[a.to] = true;
        tree_edge[a.edge] = true;
        parent[a.to] = u;
        depth[a.to] = depth[u] + 1;
        phi[a.to] = phi[u] + a.sign * w[a.edge];
        queue.push_back(a.to);
      }
    }
  }

  std::optional<std::size_t> worst;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (tree_edge[i]) continue;
    if (g.degree == 0) continue;
    const double s = w[i] + phi[src[i]] - phi[dst[i]];
    ++rep.cycles_checked;
    if (!worst || std::abs(s) > rep.max_abs_cycle_sum) {
      rep.max_abs_cycle_sum = std::abs(s);
      rep.worst_sum = s;
      worst = i;
    }
  }
  rep.ok = rep.max_abs_cycle_sum <= tol;
  if (worst) {
    // u -> v, then back up the tree from v to the common ancestor and down to u.
    std::size_t u = src[*worst], v = dst[*worst];
    std::vector<std::size_t> up_v{v}, up_u{u};
    while (depth[up_v.back()] > depth[up_u.back()]) up_v.push_back(parent[up_v.back()]);
    while (depth[up_u.back()] > depth[up_v.back()]) up_u.push_back(parent[up_u.back()]);
    while (up_u.back() != up_v.back()) {
      up_v.push_back(parent[up_v.back()]);
      up_u.push_back(parent[up_u.back()]);
    }
    rep.worst_cycle.push_back(g.vertices[u]);
    for (std::size_t x : up_v) rep.worst_cycle.push_back(g.vertices[x]);
    for (auto it = up_u.rbegin() + 1; it != up_u.rend(); ++it) rep.worst_cycle.push_back(g.vertices[*it]);
  }
  return rep;
}

/**
 * Every degree-N multi-index with sites in [-window, window] whose source and
 * target orbits are vertices labels exactly one edge, and every edge label
 * satisfies the endpoint invariant.
 */
inline bool edge_bijection_check(const OrbitGraph& g, int window) {
  std::map<MultiIndex, int> uses;
  for (const auto& e : g.edges) {
    if (cone_point(e.label) != e.src || cone_point(shift(e.label, 1)) != e.dst) return false;
    ++uses[e.label];
  }
  for (const auto& [I, n] : uses)
    if (n != 1) return false;
  for (const auto& z : enumerate_sorted_points(g.degree, -window, window)) {
    const MultiIndex I = decode(z);
    if (!g.has_vertex(cone_point(I)) || !g.has_vertex(cone_point(shift(I, 1)))) continue;
    if (!uses.contains(I)) return false;
  }
  return true;
}

/// Lines "src | dst | label | weight"; an unassigned weight prints as "-".
inline void write_graph(std::ostream& os, const OrbitGraph& g) {
  os.precision(17);
  for (const auto& e : g.edges) {
    os << e.src << " | " << e.dst << " | " << e.label << " | ";
    if (e.weight)
      os << *e.weight;
    else
      os << '-';
    os << '\n';
  }
}

inline void write_cycle_report(std::ostream& os, const CycleReport& r) {
  os.precision(17);
  os << "component=" << r.components << '\n'
     << "cycles_checked=" << r.cycles_checked << '\n'
     << "max_abs_cycle_sum=" << r.max_abs_cycle_sum << '\n'
     << "ok=" << (r.ok ? "true" : "false") << '\n';
}

}  // namespace closedexact
