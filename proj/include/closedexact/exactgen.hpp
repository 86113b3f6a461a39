#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "closedexact/errors.hpp"
#include "closedexact/field.hpp"
#include "closedexact/hermite.hpp"
#include "closedexact/lattice.hpp"
#include "closedexact/multiindex.hpp"
#include "closedexact/symmetry.hpp"

namespace closedexact {

/// Finitely supported function on the orbits of degree N, keyed by cone points.
template <typename Scalar = double>
class BasicOrbitFunction {
 public:
  explicit BasicOrbitFunction(int degree) : degree_(degree) {
    if (degree < 0) throw PreconditionError("orbit function degree must be >= 0");
  }

  int degree() const { return degree_; }
  const std::map<LatticePoint, Scalar>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  void set(const LatticePoint& z, const Scalar& v) {
    if (static_cast<int>(z.dim()) != degree_) throw PreconditionError("cone point dimension != degree");
    if (!is_cone_point(z)) throw PreconditionError("point " + to_text(z) + " is not a cone point");
    if (is_zero(v))
      values_.erase(z);
    else
      values_[z] = v;
  }

  Scalar operator()(const LatticePoint& z) const {
    auto it = values_.find(z);
    return it == values_.end() ? Scalar{} : it->second;
  }

 private:
  int degree_;
  std::map<LatticePoint, Scalar> values_;
};

using OrbitFunction = BasicOrbitFunction<double>;

/// c~(z) = c(canonicalize(z)) on the given points.
inline LatticeFunction lift(const OrbitFunction& c, const std::vector<LatticePoint>& points) {
  if (c.degree() < 1) throw PreconditionError("lift needs degree >= 1");
  LatticeFunction out(c.degree());
  for (const auto& z : points) out.set(z, c(canonicalize(z)));
  return out;
}

inline LatticeFunction lift(const OrbitFunction& c, const Region& region) { return lift(c, region.points()); }

/// The full lift: c~ on the union of the S~_N-orbits of the support.
inline LatticeFunction lift(const OrbitFunction& c) {
  if (c.degree() < 1) throw PreconditionError("lift needs degree >= 1");
  LatticeFunction out(c.degree());
  for (const auto& [z, v] : c.values())
    for (const auto& w : extended_orbit(z)) out.set(w, v);
  return out;
}

/**
 * Coefficients of the exact function generated by c: xi(z_I) = (T c~)(z_I).
 * Without a window the result gets the smallest window that holds it; an
 * explicit window that is too small is an error.
 */
inline CoefficientField gen_exact(const VectorField& field, const OrbitFunction& c,
                                  std::optional<int> window = std::nullopt) {
  const LatticeFunction t = apply_T(field, lift(c));
  const int needed = t.radius();
  if (window && *window < needed)
    throw PreconditionError("window " + std::to_string(*window) + " too small for generated function (needs " +
                            std::to_string(needed) + ")");
  return to_coefficient_field(t, window.value_or(needed));
}

/// sum_o c(o) D_0 [ sum_n tau^n H_{R(o) + delta_0} ], computed term by term.
template <typename Scalar>
BasicExpansion<Scalar> gen_exact_symbolic(const BasicVectorField<Scalar>& field,
                                          const BasicOrbitFunction<Scalar>& c) {
  BasicExpansion<Scalar> out;
  for (const auto& [z, v] : c.values()) {
    BasicExpansion<Scalar> g(decode(z).plus(0), v);
    out += exact_from_local(field, g);
  }
  return out;
}

/// Constant produced from g = x_0: the coefficient sum, zero iff the field has no constant exact part.
template <typename Scalar>
Scalar gen_exact_degree0(const BasicVectorField<Scalar>& field) {
  return field.coefficient_sum();
}

/// Orbit function file: "degree N", then "z_1 ... z_N value" lines with cone points.
inline OrbitFunction read_orbit_function(std::istream& is) {
  std::string line;
  int lineno = 0;
  std::optional<OrbitFunction> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!out) {
      std::string kw;
      int N = -1;
      std::string rest;
      if (!(ls >> kw >> N) || kw != "degree" || N < 0 || (ls >> rest))
        throw ParseError("orbit function file must start with 'degree N'");
      out.emplace(N);
      continue;
    }
    LatticePoint z;
    for (int a = 0; a < out->degree(); ++a) {
      int v = 0;
      if (!(ls >> v)) throw ParseError("orbit function line " + std::to_string(lineno) + ": bad coordinate");
      z.coords.push_back(v);
    }
    double v = 0;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ParseError("orbit function line " + std::to_string(lineno) + ": bad value");
    try {
      out->set(z, (*out)(z) + v);
    } catch (const PreconditionError& e) {
      throw ParseError("orbit function line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!out) throw ParseError("empty orbit function file");
  return *out;
}

inline void write_orbit_function(std::ostream& os, const OrbitFunction& c) {
  os.precision(17);
  os << "degree " << c.degree() << '\n';
  for (const auto& [z, v] : c.values()) {
    const auto text = to_text(z);
    os << text << (text.empty() ? "" : " ") << v << '\n';
  }
}

}  // namespace closedexact
