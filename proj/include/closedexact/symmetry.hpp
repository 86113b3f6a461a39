#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "closedexact/errors.hpp"
#include "closedexact/multiindex.hpp"

namespace closedexact {

/**
 * @brief Generator of the lattice group S~_N.
 *
 * Slots are 1-based: swap(i, j) exchanges z_i and z_j, gamma1 maps
 * (z_1, z_2, ..., z_N) to (-z_1, z_2 - z_1, ..., z_N - z_1).  Every generator
 * is an involution.
 */
struct Generator {
  enum class Kind { Swap, Gamma1 };
  Kind kind = Kind::Gamma1;
  int i = 1;
  int j = 1;

  static Generator swap(int i, int j) { return {Kind::Swap, i, j}; }
  static Generator gamma1() { return {Kind::Gamma1, 1, 1}; }

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// A word g_1 g_2 ... g_k over generators, acting as g_1(g_2(...g_k(z))).
struct GroupElement {
  std::vector<Generator> word;

  static GroupElement identity() { return {}; }
  static GroupElement of(Generator g) { return {{g}}; }
};

inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  GroupElement out = a;
  out.word.insert(out.word.end(), b.word.begin(), b.word.end());
  return out;
}

inline GroupElement inverse(const GroupElement& g) {
  GroupElement out = g;
  std::reverse(out.word.begin(), out.word.end());
  return out;
}

inline GroupElement power(const GroupElement& g, int k) {
  GroupElement out;
  for (int i = 0; i < k; ++i) out = compose(out, g);
  return out;
}

/// gamma_i, the conjugate of gamma1 by the swap (1, i): slot i becomes -z_i,
/// every other slot j becomes z_j - z_i.
inline GroupElement gamma(int i) {
  if (i == 1) return GroupElement::of(Generator::gamma1());
  return {{Generator::swap(1, i), Generator::gamma1(), Generator::swap(1, i)}};
}

inline LatticePoint apply(const Generator& g, LatticePoint z) {
  const int N = static_cast<int>(z.dim());
  if (g.kind == Generator::Kind::Swap) {
    if (g.i < 1 || g.j < 1 || g.i > N || g.j > N)
      throw PreconditionError("swap slot outside lattice dimension");
    std::swap(z.coords[static_cast<std::size_t>(g.i - 1)], z.coords[static_cast<std::size_t>(g.j - 1)]);
    return z;
  }
  if (N == 0) throw PreconditionError("gamma1 needs dimension >= 1");
  const int z1 = z[0];
  z[0] = -z1;
  for (std::size_t k = 1; k < z.dim(); ++k) z[k] -= z1;
  return z;
}

inline LatticePoint apply(const GroupElement& g, LatticePoint z) {
  for (auto it = g.word.rbegin(); it != g.word.rend(); ++it) z = apply(*it, std::move(z));
  return z;
}

/// Generators used for closures and invariance tests: adjacent swaps and gamma1.
inline std::vector<Generator> generators(int N, bool include_gamma = true) {
  std::vector<Generator> out;
  for (int i = 1; i < N; ++i) out.push_back(Generator::swap(i, i + 1));
  if (include_gamma && N >= 1) out.push_back(Generator::gamma1());
  return out;
}

/// The unique cone point in the S~_N-orbit of z: sort, one gamma1 step if needed, sort.
inline LatticePoint canonicalize(LatticePoint z) {
  z = sorted(std::move(z));
  if (!z.empty() && z[0] < 0) z = sorted(apply(Generator::gamma1(), std::move(z)));
  return z;
}

/// The full S~_N-orbit of z, computed by generator closure.
inline std::set<LatticePoint> extended_orbit(const LatticePoint& z) {
  std::set<LatticePoint> seen{z};
  std::vector<LatticePoint> frontier{z};
  const auto gens = generators(static_cast<int>(z.dim()));
  while (!frontier.empty()) {
    auto p = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& g : gens) {
      auto q = apply(g, p);
      if (seen.insert(q).second) frontier.push_back(std::move(q));
    }
  }
  return seen;
}

/**
 * @brief Bounded S~_N-invariant region P_i.
 *
 * P_i is the union over S~_N of the cone points with largest coordinate
 * <= i - 1.  Points are kept explicitly (sorted); membership uses the
 * canonical form.
 */
class Region {
 public:
  Region(int dim, int index, std::vector<LatticePoint> points)
      : dim_(dim), index_(index), points_(std::move(points)) {}

  int dim() const { return dim_; }
  int index() const { return index_; }
  const std::vector<LatticePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  bool contains(const LatticePoint& z) const {
    if (static_cast<int>(z.dim()) != dim_) return false;
    if (dim_ == 0) return true;
    return canonicalize(z).coords.back() <= index_ - 1;
  }

 private:
  int dim_;
  int index_;
  std::vector<LatticePoint> points_;
};

inline Region region_P(int i, int N) {
  if (i < 1 || N < 1) throw PreconditionError("region_P needs i >= 1 and N >= 1");
  std::set<LatticePoint> pts;
  for (const auto& z : enumerate_orbits(N, i - 1)) {
    auto o = extended_orbit(z);
    pts.insert(o.begin(), o.end());
  }
  return Region(N, i, {pts.begin(), pts.end()});
}

/// Header "N=<dim> kind=P i=<i>", then one point per line.
inline void write_region(std::ostream& os, const Region& r) {
  os << "N=" << r.dim() << " kind=P i=" << r.index() << '\n';
  for (const auto& z : r.points()) os << to_text(z) << '\n';
}

enum class Group { Permutations, Extended };

struct InvarianceReport {
  bool invariant = true;
  std::optional<LatticePoint> witness;
};

/**
 * Checks c(gamma z) == c(z) for every generator of the chosen group and every
 * z in the region.  The region must be closed under those generators.
 */
inline InvarianceReport is_invariant(const std::function<double(const LatticePoint&)>& c,
                                     const std::vector<LatticePoint>& region, Group group,
                                     double tol = 0.0) {
  if (region.empty()) return {};
  const int N = static_cast<int>(region.front().dim());
  const auto gens = generators(N, group == Group::Extended);
  std::set<LatticePoint> members(region.begin(), region.end());
  for (const auto& z : region)
    for (const auto& g : gens)
      if (!members.count(apply(g, z)))
        throw PreconditionError("region is not closed under the group");
  for (const auto& z : region)
    for (const auto& g : gens)
      if (std::abs(c(apply(g, z)) - c(z)) > tol) return {false, z};
  return {};
}

struct GroupRelationReport {
  bool cube_relation = true;        ///< (gamma1 swap(1,2))^3 = id
  bool commuting_relation = true;   ///< gamma1 swap(i,i+1) = swap(i+1,i) gamma1, 2 <= i <= N-1
  bool gamma_commutes_with_first_swap = true;  ///< i = 1 instance; fails on generic points
  std::size_t coset_images = 0;     ///< distinct images of a generic point under the cosets
  std::size_t orbit_size = 0;       ///< closure size of a generic point
  std::size_t expected_order = 0;   ///< (N+1)!
  std::size_t points_checked = 0;

  bool ok() const {
    return cube_relation && commuting_relation && coset_images == expected_order &&
           orbit_size == expected_order;
  }
};

/**
 * Checks the defining relations of S~_N on a fuzz set and counts the coset
 * decomposition S_N u gamma_1 S_N u ... u gamma_N S_N on a generic point.
 *
 * The commutation relation is checked for 2 <= i <= N-1.  For i = 1 it would
 * contradict the cube relation; that instance is recorded separately.
 */
inline GroupRelationReport verify_group_relations(int N, std::size_t fuzz_points = 2000,
                                                  unsigned seed = 12345) {
  if (N < 2) throw PreconditionError("group relations need N >= 2");
  GroupRelationReport rep;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coord(-9, 9);

  const auto cube = power(GroupElement{{Generator::gamma1(), Generator::swap(1, 2)}}, 3);
  for (std::size_t t = 0; t < fuzz_points; ++t) {
    LatticePoint z(std::vector<int>(static_cast<std::size_t>(N)));
    for (int& c : z.coords) c = coord(rng);
    ++rep.points_checked;
    if (apply(cube, z) != z) rep.cube_relation = false;
    for (int i = 2; i <= N - 1; ++i) {
      GroupElement lhs{{Generator::gamma1(), Generator::swap(i, i + 1)}};
      GroupElement rhs{{Generator::swap(i + 1, i), Generator::gamma1()}};
      if (apply(lhs, z) != apply(rhs, z)) rep.commuting_relation = false;
    }
    GroupElement lhs1{{Generator::gamma1(), Generator::swap(1, 2)}};
    GroupElement rhs1{{Generator::swap(2, 1), Generator::gamma1()}};
    if (apply(lhs1, z) != apply(rhs1, z)) rep.gamma_commutes_with_first_swap = false;
  }

  // Generic point: coordinates with pairwise distinct differences.
  LatticePoint generic(std::vector<int>(static_cast<std::size_t>(N)));
  for (int k = 0; k < N; ++k) generic[static_cast<std::size_t>(k)] = 1 + k * k * 7 + k * 3;

  std::vector<int> perm(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) perm[static_cast<std::size_t>(k)] = k;
  std::set<LatticePoint> images;
  do {
    LatticePoint p(std::vector<int>(static_cast<std::size_t>(N)));
    for (int k = 0; k < N; ++k)
      p[static_cast<std::size_t>(k)] = generic[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    images.insert(p);
    for (int i = 1; i <= N; ++i) images.insert(apply(gamma(i), p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  rep.coset_images = images.size();
  rep.orbit_size = extended_orbit(generic).size();
  std::size_t fact = 1;
  for (int k = 2; k <= N + 1; ++k) fact *= static_cast<std::size_t>(k);
  rep.expected_order = fact;
  return rep;
}

/// Remainder of t in [-pi, pi).
inline double mod_2pi(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double b = std::fmod(t + std::numbers::pi, two_pi);
  if (b < 0) b += two_pi;
  b -= std::numbers::pi;
  if (b >= std::numbers::pi) b -= two_pi;
  return b;
}

/// Distance between two phases on the circle.
inline double phase_distance(double a, double b) { return std::abs(mod_2pi(a - b)); }

using Frequency = std::vector<double>;

/// g(alpha) = (mod_2pi(-alpha_1 - ... - alpha_N), alpha_2, ..., alpha_N).
inline Frequency apply_g(Frequency alpha) {
  double s = 0;
  for (double a : alpha) s += a;
  alpha[0] = mod_2pi(-s);
  return alpha;
}

/**
 * The Sigma~_N-orbit of a frequency vector, by closure under adjacent swaps
 * and g.  Two vectors are identified when every component agrees on the
 * circle within tol.
 */
inline std::vector<Frequency> freq_orbit(const Frequency& alpha, double tol = 1e-12) {
  if (alpha.empty()) throw PreconditionError("freq_orbit needs dimension >= 1");
  auto same = [tol](const Frequency& a, const Frequency& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (phase_distance(a[k], b[k]) > tol) return false;
    return true;
  };
  Frequency start = alpha;
  for (double& a : start) a = mod_2pi(a);
  std::vector<Frequency> seen{start};
  std::vector<Frequency> frontier{start};
  while (!frontier.empty()) {
    auto p = std::move(frontier.back());
    frontier.pop_back();
    std::vector<Frequency> next;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      auto q = p;
      std::swap(q[i], q[i + 1]);
      next.push_back(std::move(q));
    }
    next.push_back(apply_g(p));
    for (auto& q : next) {
      bool known = std::any_of(seen.begin(), seen.end(), [&](const Frequency& s) { return same(s, q); });
      if (!known) {
        seen.push_back(q);
        frontier.push_back(std::move(q));
      }
    }
  }
  return seen;
}

}  // namespace closedexact
