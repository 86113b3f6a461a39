#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "closedexact/errors.hpp"
#include "closedexact/field.hpp"
#include "closedexact/multiindex.hpp"

namespace closedexact {

/// Finitely supported real function on Z^N.
class LatticeFunction {
 public:
  explicit LatticeFunction(int dim) : dim_(dim) {
    if (dim < 1) throw PreconditionError("lattice function dimension must be >= 1");
  }

  int dim() const { return dim_; }
  const std::map<LatticePoint, double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator()(const LatticePoint& z) const {
    auto it = values_.find(z);
    return it == values_.end() ? 0.0 : it->second;
  }

  void set(const LatticePoint& z, double v) {
    check(z);
    if (v == 0.0)
      values_.erase(z);
    else
      values_[z] = v;
  }

  void add(const LatticePoint& z, double v) {
    check(z);
    values_[z] += v;
  }

  /// Drops entries that are exactly zero after accumulation.
  void prune() { std::erase_if(values_, [](const auto& kv) { return kv.second == 0.0; }); }

  double norm_sq() const {
    double s = 0;
    for (const auto& [z, v] : values_) s += v * v;
    return s;
  }

  /// max over the support of max |coordinate|.
  int radius() const {
    int r = 0;
    for (const auto& [z, v] : values_)
      for (int c : z) r = std::max(r, std::abs(c));
    return r;
  }

  /// Largest per-axis extent (max - min) of the support.
  int diameter() const {
    if (values_.empty()) return 0;
    int d = 0;
    for (int a = 0; a < dim_; ++a) {
      int lo = values_.begin()->first[static_cast<std::size_t>(a)], hi = lo;
      for (const auto& [z, v] : values_) {
        lo = std::min(lo, z[static_cast<std::size_t>(a)]);
        hi = std::max(hi, z[static_cast<std::size_t>(a)]);
      }
      d = std::max(d, hi - lo);
    }
    return d;
  }

  friend LatticeFunction operator-(const LatticeFunction& a, const LatticeFunction& b) {
    LatticeFunction out = a;
    for (const auto& [z, v] : b.values_) out.values_[z] -= v;
    out.prune();
    return out;
  }

 private:
  void check(const LatticePoint& z) const {
    if (static_cast<int>(z.dim()) != dim_) throw PreconditionError("point dimension mismatch");
  }

  int dim_;
  std::map<LatticePoint, double> values_;
};

inline double inner(const LatticeFunction& a, const LatticeFunction& b) {
  double s = 0;
  for (const auto& [z, v] : a.values()) s += v * b(z);
  return s;
}

/// The S_N-invariant lattice function carried by a coefficient field.
inline LatticeFunction to_lattice_function(const CoefficientField& xi) {
  LatticeFunction out(xi.degree());
  for (const auto& [z, v] : xi.values()) {
    auto p = z.coords;
    do {
      out.set(LatticePoint(p), v);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return out;
}

/// Restriction to sorted points inside [-window, window]; the function must be S_N-invariant.
inline CoefficientField to_coefficient_field(const LatticeFunction& f, int window) {
  CoefficientField out(f.dim(), window);
  for (const auto& [z, v] : f.values()) {
    if (!std::is_sorted(z.begin(), z.end())) continue;
    if (!out.in_window(z)) throw PreconditionError("lattice function escapes window");
    out.set(z, v);
  }
  return out;
}

/// (T c)(z) = sum_k a_k c(z - k e), e = (1, ..., 1).
inline LatticeFunction apply_T(const VectorField& field, const LatticeFunction& c) {
  LatticeFunction out(c.dim());
  for (const auto& [z, v] : c.values()) {
    for (const auto& [k, a] : field.coeffs()) {
      LatticePoint w = z;
      for (int& x : w.coords) x += k;
      out.add(w, a * v);
    }
  }
  out.prune();
  return out;
}

/// (T* c)(z) = sum_k a_k c(z + k e).
inline LatticeFunction adjoint_T(const VectorField& field, const LatticeFunction& c) {
  LatticeFunction out(c.dim());
  for (const auto& [z, v] : c.values()) {
    for (const auto& [k, a] : field.coeffs()) {
      LatticePoint w = z;
      for (int& x : w.coords) x -= k;
      out.add(w, a * v);
    }
  }
  out.prune();
  return out;
}

/// Header "N=<dim>", then "z_1 ... z_N value" lines.
inline void write_lattice_function(std::ostream& os, const LatticeFunction& f) {
  os.precision(17);
  os << "N=" << f.dim() << '\n';
  for (const auto& [z, v] : f.values()) os << to_text(z) << ' ' << v << '\n';
}

inline LatticeFunction read_lattice_function(std::istream& is) {
  std::string line;
  int lineno = 0;
  std::optional<LatticeFunction> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    if (!out) {
      if (line.rfind("N=", 0) != 0) throw ParseError("lattice function file must start with 'N=<dim>'");
      try {
        out.emplace(std::stoi(line.substr(2)));
      } catch (const std::exception&) {
        throw ParseError("bad lattice function header '" + line + "'");
      }
      continue;
    }
    std::istringstream ls(line);
    LatticePoint z;
    for (int a = 0; a < out->dim(); ++a) {
      int c = 0;
      if (!(ls >> c)) throw ParseError("lattice function line " + std::to_string(lineno) + ": bad coordinate");
      z.coords.push_back(c);
    }
    double v = 0;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ParseError("lattice function line " + std::to_string(lineno) + ": bad value");
    out->add(z, v);
  }
  if (!out) throw ParseError("empty lattice function file");
  out->prune();
  return *out;
}

}  // namespace closedexact
