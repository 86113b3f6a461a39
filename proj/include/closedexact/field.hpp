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
#include "closedexact/hermite.hpp"
#include "closedexact/multiindex.hpp"

namespace closedexact {

/**
 * @brief Constant-coefficient vector field D_0 = sum_k a_k d/dx_k.
 *
 * Only nonzero coefficients are stored and at least one is required.  The
 * translates D_n = sum_k a_k d/dx_{k+n} are obtained through apply_D.
 */
template <typename Scalar = double>
class BasicVectorField {
 public:
  explicit BasicVectorField(const std::map<int, Scalar>& coeffs) {
    for (const auto& [k, a] : coeffs)
      if (!is_zero(a)) coeffs_.emplace(k, a);
    if (coeffs_.empty()) throw PreconditionError("vector field needs a nonzero coefficient");
    for (const auto& [k, a] : coeffs_) sum_ += a;
  }

  const std::map<int, Scalar>& coeffs() const { return coeffs_; }
  Scalar coefficient(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Scalar{} : it->second;
  }
  Scalar coefficient_sum() const { return sum_; }
  int min_k() const { return coeffs_.begin()->first; }
  int max_k() const { return coeffs_.rbegin()->first; }
  /// max |k| over the support.
  int radius() const { return std::max(std::abs(min_k()), std::abs(max_k())); }

  template <typename Other>
  BasicVectorField<Other> cast() const {
    std::map<int, Other> c;
    for (const auto& [k, a] : coeffs_) c.emplace(k, static_cast<Other>(a));
    return BasicVectorField<Other>(c);
  }

  friend bool operator==(const BasicVectorField&, const BasicVectorField&) = default;

 private:
  std::map<int, Scalar> coeffs_;
  Scalar sum_{};
};

using VectorField = BasicVectorField<double>;

template <typename Scalar>
Scalar coefficient_sum(const BasicVectorField<Scalar>& f) {
  return f.coefficient_sum();
}

/// Built-in fields: "d0" (Glauber), "Y0" (second-order GL), "X0" (fourth-order GL), "d3-d0".
template <typename Scalar = double>
std::optional<BasicVectorField<Scalar>> builtin_field(const std::string& name) {
  using F = BasicVectorField<Scalar>;
  if (name == "d0") return F({{0, Scalar(1)}});
  if (name == "Y0") return F({{1, Scalar(1)}, {0, Scalar(-1)}});
  if (name == "X0") return F({{1, Scalar(1)}, {0, Scalar(-2)}, {-1, Scalar(1)}});
  if (name == "d3-d0") return F({{3, Scalar(1)}, {0, Scalar(-1)}});
  return std::nullopt;
}

inline const std::vector<std::string>& builtin_field_names() {
  static const std::vector<std::string> names{"d0", "Y0", "X0", "d3-d0"};
  return names;
}

/// D_n applied to a finite expansion: sum_I c_I sum_k a_k H_{I - delta_{k+n}}.
template <typename Scalar>
BasicExpansion<Scalar> apply_D(const BasicVectorField<Scalar>& field, int n,
                               const BasicExpansion<Scalar>& e) {
  BasicExpansion<Scalar> out;
  for (const auto& [I, c] : e.terms())
    for (const auto& [k, a] : field.coeffs())
      if (auto J = I.minus(k + n)) out.add(*J, a * c);
  return out;
}

/**
 * The exact function xi^g = sum_k D_0(tau^k g).  Only translates whose
 * occupied sites meet the field's support contribute, so the sum runs over
 * k in [min_k - max site, max_k - min site].
 */
template <typename Scalar>
BasicExpansion<Scalar> exact_from_local(const BasicVectorField<Scalar>& field,
                                        const BasicExpansion<Scalar>& g) {
  BasicExpansion<Scalar> out;
  for (const auto& [I, c] : g.terms()) {
    if (I.is_zero()) continue;
    BasicExpansion<Scalar> term(I, c);
    for (int k = field.min_k() - I.max_site(); k <= field.max_k() - I.min_site(); ++k)
      out += apply_D(field, 0, translate(term, k));
  }
  return out;
}

template <typename Scalar>
struct SymbolicViolation {
  int n = 0;
  int m = 0;
  BasicExpansion<Scalar> difference;  ///< D_n(tau^m xi) - D_m(tau^n xi)
};

template <typename Scalar>
struct SymbolicClosednessReport {
  bool closed = true;
  int range = 0;
  std::size_t pairs_checked = 0;
  std::vector<SymbolicViolation<Scalar>> violations;
};

/// Smallest range for which every pair (n, m) outside [-range, range]^2 is a
/// translate of a checked pair or has both sides identically zero.
template <typename Scalar>
int sufficient_range(const BasicVectorField<Scalar>& field, const BasicExpansion<Scalar>& e) {
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto& [I, c] : e.terms()) {
    if (I.is_zero()) continue;
    lo = any ? std::min(lo, I.min_site()) : I.min_site();
    hi = any ? std::max(hi, I.max_site()) : I.max_site();
    any = true;
  }
  if (!any) return 0;
  // Nontrivial pairs have m - n in [min_k - hi, max_k - lo] or its negative.
  const int d = std::max({std::abs(field.min_k() - hi), std::abs(field.max_k() - lo)});
  return (d + 1) / 2;
}

/// Checks D_n(tau^m xi) == D_m(tau^n xi) for all |n|, |m| <= range.
template <typename Scalar>
SymbolicClosednessReport<Scalar> is_closed_symbolic(const BasicVectorField<Scalar>& field,
                                                    const BasicExpansion<Scalar>& e, int range,
                                                    double tol = 0.0) {
  SymbolicClosednessReport<Scalar> rep;
  rep.range = range;
  std::map<int, BasicExpansion<Scalar>> shifted;
  for (int m = -range; m <= range; ++m) shifted.emplace(m, translate(e, m));
  for (int n = -range; n <= range; ++n) {
    for (int m = -range; m <= range; ++m) {
      ++rep.pairs_checked;
      auto diff = apply_D(field, n, shifted.at(m)) - apply_D(field, m, shifted.at(n));
      bool zero = true;
      for (const auto& [I, c] : diff.terms())
        if (!is_zero(c, tol)) zero = false;
      if (!zero) {
        rep.closed = false;
        rep.violations.push_back({n, m, std::move(diff)});
      }
    }
  }
  return rep;
}

/**
 * @brief Degree-N Fourier coefficients on the window [-W, W].
 *
 * Values are stored once per S_N-class under the sorted lattice point.
 * Inside the window a missing key reads as 0; outside the window the value
 * is unknown.
 */
class CoefficientField {
 public:
  CoefficientField(int degree, int window) : degree_(degree), window_(window) {
    if (degree < 1) throw PreconditionError("coefficient field degree must be >= 1");
    if (window < 0) throw PreconditionError("coefficient field window must be >= 0");
  }

  int degree() const { return degree_; }
  int window() const { return window_; }
  const std::map<LatticePoint, double>& values() const { return values_; }

  bool in_window(const LatticePoint& z) const {
    return std::all_of(z.begin(), z.end(), [&](int c) { return std::abs(c) <= window_; });
  }

  void set(const LatticePoint& z, double v) {
    if (static_cast<int>(z.dim()) != degree_) throw PreconditionError("point dimension != degree");
    if (!in_window(z)) throw PreconditionError("point " + to_text(z) + " outside window");
    auto key = sorted(z);
    if (v == 0.0)
      values_.erase(key);
    else
      values_[key] = v;
  }

  void add(const LatticePoint& z, double v) { set(z, value_or_zero(z) + v); }

  /// nullopt outside the window.
  std::optional<double> value(const LatticePoint& z) const {
    if (!in_window(z)) return std::nullopt;
    return value_or_zero(z);
  }

  double value_or_zero(const LatticePoint& z) const {
    auto it = values_.find(sorted(z));
    return it == values_.end() ? 0.0 : it->second;
  }

  double value(const MultiIndex& I) const { return value_or_zero(encode(I)); }

  /// Same data on a larger window; the caller asserts the data is genuinely zero outside.
  CoefficientField with_window(int window) const {
    CoefficientField out(degree_, std::max(window, window_));
    out.values_ = values_;
    return out;
  }

  /// max |coordinate| over stored points (0 if empty).
  int support_radius() const {
    int r = 0;
    for (const auto& [z, v] : values_)
      for (int c : z) r = std::max(r, std::abs(c));
    return r;
  }

 private:
  int degree_;
  int window_;
  std::map<LatticePoint, double> values_;
};

struct CoefficientViolation {
  int n = 0;
  MultiIndex I;  ///< degree N-1
  double lhs = 0;
  double rhs = 0;
};

struct ClosednessReport {
  std::size_t relations_checked = 0;
  int window = 0;
  int n_min = 0;  ///< extent of shifts actually checked
  int n_max = 0;
  std::vector<CoefficientViolation> violations;

  bool closed() const { return violations.empty(); }
};

/// Window on which every nontrivial relation of a field supported in
/// [-support_radius, support_radius] has all its references available.
template <typename Scalar>
int sufficient_window(const BasicVectorField<Scalar>& field, int support_radius) {
  return 2 * support_radius + 2 * field.radius();
}

/**
 * Fourier-coefficient closedness:
 *   sum_k a_k xi(I + delta_{n+k}) == sum_k a_k xi(tau^n (I + delta_k))
 * for every n and every I of degree N-1 whose referenced multi-indices all
 * lie inside the window.  Relations touching unknown values are skipped, so
 * the report states what was covered.
 */
inline ClosednessReport is_closed_coeffs(const VectorField& field, const CoefficientField& xi,
                                         double tol = 1e-9) {
  ClosednessReport rep;
  rep.window = xi.window();
  const int W = xi.window();
  const int kmin = field.min_k(), kmax = field.max_k();
  bool first = true;
  for (const auto& z : enumerate_sorted_points(xi.degree() - 1, -W, W)) {
    const MultiIndex I = decode(z);
    int lo = std::max(-W - kmin, kmax - W);
    int hi = std::min(W - kmax, kmin + W);
    if (!I.is_zero()) {
      lo = std::max(lo, I.max_site() - W);
      hi = std::min(hi, I.min_site() + W);
    }
    for (int n = lo; n <= hi; ++n) {
      double lhs = 0, rhs = 0;
      for (const auto& [k, a] : field.coeffs()) {
        lhs += a * xi.value(I.plus(n + k));
        rhs += a * xi.value(shift(I.plus(k), n));
      }
      ++rep.relations_checked;
      if (first) {
        rep.n_min = rep.n_max = n;
        first = false;
      }
      rep.n_min = std::min(rep.n_min, n);
      rep.n_max = std::max(rep.n_max, n);
      if (std::abs(lhs - rhs) > tol) rep.violations.push_back({n, I, lhs, rhs});
    }
  }
  return rep;
}

/// Degree-N part of an expansion as lattice coefficients.
template <typename Scalar>
CoefficientField expansion_to_coeffs(const BasicExpansion<Scalar>& e, int N, int window) {
  CoefficientField out(N, window);
  for (const auto& [I, c] : e.terms()) {
    if (I.degree() != N) continue;
    auto z = encode(I);
    if (!out.in_window(z))
      throw PreconditionError("term " + to_text(I) + " escapes window " + std::to_string(window));
    out.set(z, static_cast<double>(c));
  }
  return out;
}

inline HermiteExpansion coeffs_to_expansion(const CoefficientField& xi) {
  HermiteExpansion e;
  for (const auto& [z, v] : xi.values()) e.add(decode(z), v);
  return e;
}

// ---- file formats -------------------------------------------------------

/// Vector field file: lines "k a_k".
inline VectorField read_vector_field(std::istream& is) {
  std::map<int, double> c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    int k = 0;
    double a = 0;
    std::string rest;
    if (!(ls >> k >> a) || (ls >> rest))
      throw ParseError("field line " + std::to_string(lineno) + ": expected 'k a_k'");
    c[k] += a;
  }
  try {
    return VectorField(c);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline void write_vector_field(std::ostream& os, const VectorField& f) {
  os.precision(17);
  for (const auto& [k, a] : f.coeffs()) os << k << ' ' << a << '\n';
}

/// Coefficient field file: "degree N window W", then "z_1 ... z_N value" lines.
inline CoefficientField read_coefficient_field(std::istream& is) {
  std::string line;
  int lineno = 0;
  std::optional<CoefficientField> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!out) {
      std::string kw1, kw2;
      int N = 0, W = 0;
      if (!(ls >> kw1 >> N >> kw2 >> W) || kw1 != "degree" || kw2 != "window")
        throw ParseError("coefficient file must start with 'degree N window W'");
      try {
        out.emplace(N, W);
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
      continue;
    }
    std::vector<double> nums;
    double v = 0;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof() || static_cast<int>(nums.size()) != out->degree() + 1)
      throw ParseError("coefficient line " + std::to_string(lineno) + ": expected " +
                       std::to_string(out->degree()) + " coordinates and a value");
    LatticePoint z;
    for (int i = 0; i < out->degree(); ++i) {
      double c = nums[static_cast<std::size_t>(i)];
      if (c != std::floor(c)) throw ParseError("non-integer coordinate on line " + std::to_string(lineno));
      z.coords.push_back(static_cast<int>(c));
    }
    try {
      out->add(z, nums.back());
    } catch (const PreconditionError& e) {
      throw ParseError("coefficient line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!out) throw ParseError("empty coefficient file");
  return *out;
}

inline void write_coefficient_field(std::ostream& os, const CoefficientField& xi) {
  os.precision(17);
  os << "degree " << xi.degree() << " window " << xi.window() << '\n';
  for (const auto& [z, v] : xi.values()) os << to_text(z) << ' ' << v << '\n';
}

}  // namespace closedexact
