#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "closedexact/errors.hpp"
#include "closedexact/multiindex.hpp"

namespace closedexact {

/// Zero test used by the symbolic layer: exact for non-floating scalars.
template <typename Scalar>
bool is_zero(const Scalar& v, double tol = 0.0) {
  if constexpr (std::is_floating_point_v<Scalar>)
    return std::abs(v) <= tol;
  else
    return v == Scalar{};
}

/**
 * H_i(x) with the 1/i! normalization, so that H_i' = H_{i-1} and
 * ||H_i||^2 = 1/i! under the standard Gaussian.  Three-term recurrence
 * H_{i+1} = (x H_i - H_{i-1}) / (i + 1).
 */
inline double hermite_eval(int i, double x) {
  if (i < 0) return 0.0;
  double prev = 1.0, cur = x;
  if (i == 0) return prev;
  for (int k = 1; k < i; ++k) {
    double next = (x * cur - prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Gauss rule for the standard Gaussian probability measure (weights sum to 1).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the
/// probabilists' Hermite recurrence.  Exact for polynomials of degree <= 2n-1.
inline GaussRule gauss_hermite_rule(int n) {
  if (n < 1) throw PreconditionError("quadrature needs at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(es.eigenvalues()(k));
    double v0 = es.eigenvectors()(0, k);
    rule.weights.push_back(v0 * v0);
  }
  return rule;
}

/**
 * @brief Finite real combination of multidimensional Hermite polynomials.
 *
 * Terms with zero coefficient are never stored.
 */
template <typename Scalar = double>
class BasicExpansion {
 public:
  using Terms = std::map<MultiIndex, Scalar>;

  BasicExpansion() = default;
  explicit BasicExpansion(const MultiIndex& I, Scalar c = Scalar(1)) { add(I, c); }

  static BasicExpansion constant(Scalar c) { return BasicExpansion(MultiIndex{}, c); }

  void add(const MultiIndex& I, const Scalar& c) {
    auto [it, inserted] = terms_.try_emplace(I, c);
    if (!inserted) it->second += c;
    if (is_zero(it->second)) terms_.erase(it);
  }

  Scalar coefficient(const MultiIndex& I) const {
    auto it = terms_.find(I);
    return it == terms_.end() ? Scalar{} : it->second;
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int max_degree() const {
    int d = 0;
    for (const auto& [I, c] : terms_) d = std::max(d, I.degree());
    return d;
  }

  BasicExpansion& operator+=(const BasicExpansion& o) {
    for (const auto& [I, c] : o.terms_) add(I, c);
    return *this;
  }
  BasicExpansion& operator-=(const BasicExpansion& o) {
    for (const auto& [I, c] : o.terms_) add(I, -c);
    return *this;
  }
  BasicExpansion& operator*=(const Scalar& s) {
    if (is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [I, c] : terms_) c *= s;
    return *this;
  }
  friend BasicExpansion operator+(BasicExpansion a, const BasicExpansion& b) { return a += b; }
  friend BasicExpansion operator-(BasicExpansion a, const BasicExpansion& b) { return a -= b; }
  friend BasicExpansion operator*(const Scalar& s, BasicExpansion a) { return a *= s; }
  friend bool operator==(const BasicExpansion&, const BasicExpansion&) = default;

 private:
  Terms terms_;
};

using HermiteExpansion = BasicExpansion<double>;

/// Function-level shift tau^m: tau^m H_I = H_{tau^{-m} I}, i.e. particles move by +m.
template <typename Scalar>
BasicExpansion<Scalar> translate(const BasicExpansion<Scalar>& e, int m) {
  BasicExpansion<Scalar> out;
  for (const auto& [I, c] : e.terms()) out.add(shift(I, -m), c);
  return out;
}

/// Annihilation: d/dx_n H_I = H_{I - delta_n}, zero when i_n = 0.
template <typename Scalar>
BasicExpansion<Scalar> partial(const BasicExpansion<Scalar>& e, int n) {
  BasicExpansion<Scalar> out;
  for (const auto& [I, c] : e.terms())
    if (auto J = I.minus(n)) out.add(*J, c);
  return out;
}

/// Terms of total degree exactly N.
template <typename Scalar>
BasicExpansion<Scalar> project(const BasicExpansion<Scalar>& e, int N) {
  BasicExpansion<Scalar> out;
  for (const auto& [I, c] : e.terms())
    if (I.degree() == N) out.add(I, c);
  return out;
}

/// sum_I c_I^2 prod_n 1/i_n!.
inline double norm_sq(const HermiteExpansion& e) {
  double s = 0;
  for (const auto& [I, c] : e.terms()) {
    double w = 1.0;
    for (auto [site, k] : I.entries()) w /= factorial(k);
    s += c * c * w;
  }
  return s;
}

/// Sum of squared coefficients (the l^2 norm on Fourier coefficients).
inline double coefficient_norm_sq(const HermiteExpansion& e) {
  double s = 0;
  for (const auto& [I, c] : e.terms()) s += c * c;
  return s;
}

/// Evaluate at a configuration given as site -> value; every occupied site must be present.
inline double eval(const HermiteExpansion& e, const std::map<int, double>& x) {
  double total = 0;
  for (const auto& [I, c] : e.terms()) {
    double prod = c;
    for (auto [site, k] : I.entries()) {
      auto it = x.find(site);
      if (it == x.end())
        throw PreconditionError("configuration has no value at site " + std::to_string(site));
      prod *= hermite_eval(k, it->second);
    }
    total += prod;
  }
  return total;
}

/**
 * Gaussian inner product <a, b> by site-wise Gauss-Hermite quadrature.
 * The node count is max per-site degree + 2, which integrates every product
 * H_i H_j exactly.
 */
inline double inner_product(const HermiteExpansion& a, const HermiteExpansion& b) {
  int max_deg = 0;
  for (const auto* e : {&a, &b})
    for (const auto& [I, c] : e->terms())
      for (auto [site, k] : I.entries()) max_deg = std::max(max_deg, k);
  const GaussRule rule = gauss_hermite_rule(max_deg + 2);
  auto site_integral = [&](int i, int j) {
    double s = 0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += rule.weights[q] * hermite_eval(i, rule.nodes[q]) * hermite_eval(j, rule.nodes[q]);
    return s;
  };
  double total = 0;
  for (const auto& [I, ca] : a.terms()) {
    for (const auto& [J, cb] : b.terms()) {
      std::vector<int> sites = I.support();
      for (int s : J.support()) sites.push_back(s);
      std::sort(sites.begin(), sites.end());
      sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
      double prod = ca * cb;
      for (int s : sites) prod *= site_integral(I.count(s), J.count(s));
      total += prod;
    }
  }
  return total;
}

/// Expansion file: one "multiindex<TAB>coefficient" line per term.
inline void write_expansion(std::ostream& os, const HermiteExpansion& e) {
  os.precision(17);
  for (const auto& [I, c] : e.terms()) os << to_text(I) << '\t' << c << '\n';
}

inline HermiteExpansion read_expansion(std::istream& is) {
  HermiteExpansion e;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("expansion line " + std::to_string(lineno) + ": missing TAB");
    std::istringstream cs(line.substr(tab + 1));
    double c = 0;
    if (!(cs >> c)) throw ParseError("expansion line " + std::to_string(lineno) + ": bad coefficient");
    e.add(parse_multiindex(line.substr(0, tab)), c);
  }
  return e;
}

}  // namespace closedexact
