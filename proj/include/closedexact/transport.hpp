#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "closedexact/errors.hpp"
#include "closedexact/field.hpp"
#include "closedexact/lattice.hpp"
#include "closedexact/spectral_grid.hpp"
#include "closedexact/symmetry.hpp"

namespace closedexact {

struct UnitRoot {
  double phase = 0;  ///< in [-pi, pi)
  int multiplicity = 1;
};

namespace detail {

inline std::complex<double> poly_eval(const std::vector<double>& b, std::complex<double> x, int deriv) {
  // Horner on the deriv-th derivative of sum_j b_j x^j.
  std::complex<double> acc = 0;
  for (int j = static_cast<int>(b.size()) - 1; j >= deriv; --j) {
    double f = 1;
    for (int t = 0; t < deriv; ++t) f *= j - t;
    acc = acc * x + f * b[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace detail

/**
 * Roots of p on the unit circle.  p(x) x^{-min_k} is a polynomial; its
 * companion-matrix eigenvalues are grouped into clusters (a multiple root
 * splits into a small ring), each cluster is polished by Newton's method on
 * the derivative of order multiplicity-1, and clusters whose polished root has
 * ||r| - 1| <= tol are kept.
 */
inline std::vector<UnitRoot> unit_circle_roots(const VectorField& field, double tol = 1e-9,
                                               double cluster_radius = 1e-4) {
  const int kmin = field.min_k();
  const int d = field.max_k() - kmin;
  if (d == 0) return {};
  std::vector<double> b(static_cast<std::size_t>(d) + 1, 0.0);
  for (const auto& [k, a] : field.coeffs()) b[static_cast<std::size_t>(k - kmin)] = a;

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  for (int r = 1; r < d; ++r) C(r, r - 1) = 1.0;
  for (int r = 0; r < d; ++r) C(r, d - 1) = -b[static_cast<std::size_t>(r)] / b.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<std::complex<double>> eig(es.eigenvalues().data(), es.eigenvalues().data() + d);

  std::vector<int> cluster(eig.size());
  std::iota(cluster.begin(), cluster.end(), 0);
  auto find = [&](int x) {
    while (cluster[static_cast<std::size_t>(x)] != x) x = cluster[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t i = 0; i < eig.size(); ++i)
    for (std::size_t j = i + 1; j < eig.size(); ++j)
      if (std::abs(eig[i] - eig[j]) <= cluster_radius * std::max(1.0, std::abs(eig[i])))
        cluster[static_cast<std::size_t>(find(static_cast<int>(j)))] = find(static_cast<int>(i));

  std::vector<UnitRoot> out;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (find(static_cast<int>(i)) != static_cast<int>(i)) continue;
    std::complex<double> centre = 0;
    int m = 0;
    for (std::size_t j = 0; j < eig.size(); ++j)
      if (find(static_cast<int>(j)) == static_cast<int>(i)) {
        centre += eig[j];
        ++m;
      }
    std::complex<double> r = centre / static_cast<double>(m);
    for (int it = 0; it < 60; ++it) {
      auto f = detail::poly_eval(b, r, m - 1);
      auto df = detail::poly_eval(b, r, m);
      if (df == 0.0) break;
      auto step = f / df;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    if (std::abs(std::abs(r) - 1.0) <= tol) out.push_back({mod_2pi(std::arg(r)), m});
  }
  std::sort(out.begin(), out.end(), [](const UnitRoot& a, const UnitRoot& b) { return a.phase < b.phase; });
  return out;
}

/// p(x) = sum a_k x^k with its cached unit-circle roots.
class Symbol {
 public:
  explicit Symbol(const VectorField& field, double tol = 1e-9)
      : field_(field), roots_(unit_circle_roots(field, tol)) {}

  const VectorField& field() const { return field_; }
  const std::vector<UnitRoot>& roots() const { return roots_; }

  std::vector<double> phases() const {
    std::vector<double> out;
    for (const auto& r : roots_) out.push_back(r.phase);
    return out;
  }

  /// p(e^{i theta}).
  std::complex<double> operator()(double theta) const {
    std::complex<double> s = 0;
    for (const auto& [k, a] : field_.coeffs()) s += a * std::polar(1.0, k * theta);
    return s;
  }

 private:
  VectorField field_;
  std::vector<UnitRoot> roots_;
};

/**
 * Membership in the spectral mask A_n: every Sigma~_N-image of alpha has its
 * coordinate sum at circular distance > 1/n from every root phase.
 */
inline bool mask_membership(const Frequency& alpha, const std::vector<double>& phases, int n) {
  if (n < 1) throw PreconditionError("mask parameter must be >= 1");
  if (phases.empty()) return true;
  const double eps = 1.0 / n;
  for (const auto& beta : freq_orbit(alpha)) {
    const double s = mod_2pi(std::accumulate(beta.begin(), beta.end(), 0.0));
    for (double r : phases)
      if (phase_distance(s, r) <= eps) return false;
  }
  return true;
}

/// Circular T on a real grid: out(z) = sum_k a_k c(z - k e mod M).
inline std::vector<double> apply_T_circular(const VectorField& field, const SpectralGrid& shape,
                                            const std::vector<double>& c) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    auto j = shape.node(idx);
    for (const auto& [k, a] : field.coeffs()) {
      auto w = j;
      for (int& x : w) x -= k;
      out[idx] += a * c[shape.index(w)];
    }
  }
  return out;
}

/// max |c(j) - c(gen j)| over nodes and the generators of S~_N acting mod M.
inline double torus_invariance_defect(const SpectralGrid& shape, const std::vector<double>& c) {
  const int N = shape.dim();
  double defect = 0;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    auto j = shape.node(idx);
    for (int a = 0; a + 1 < N; ++a) {
      auto w = j;
      std::swap(w[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(a) + 1]);
      defect = std::max(defect, std::abs(c[idx] - c[shape.index(w)]));
    }
    LatticePoint w = apply(Generator::gamma1(), LatticePoint(j));
    defect = std::max(defect, std::abs(c[idx] - c[shape.index(w)]));
  }
  return defect;
}

struct SolveDiagnostics {
  int n_mask = 0;
  int grid = 0;
  double mask_fraction = 0;      ///< share of grid nodes inside A_n
  double spectral_residual = 0;  ///< sum over masked-out nodes of |F xi|^2 / M^N
  double torus_residual = 0;     ///< ||T_circ c - xi||^2 on the grid, computed spatially
  double invariance_defect = 0;  ///< S~_N defect of c on the torus
  double max_imag = 0;           ///< largest discarded imaginary part
};

struct MaskedSolve {
  LatticeFunction c;          ///< grid solution on the box [-M/2, M/2)^N
  std::vector<double> grid;   ///< same values, flat grid order
  SolveDiagnostics diagnostics;
};

/**
 * c_n = F^{-1}( 1_{A_n} F xi / p(e^{i sum alpha}) ) on the M^N grid.  The
 * support of xi must fit in the box with diameter <= M/4.
 */
inline MaskedSolve solve_masked(const VectorField& field, const CoefficientField& xi, int n_mask, int M) {
  if (n_mask < 1) throw PreconditionError("mask parameter must be >= 1");
  const int N = xi.degree();
  SpectralGrid grid(N, M);
  const LatticeFunction xl = to_lattice_function(xi);
  if (xl.diameter() > M / 4)
    throw PreconditionError("coefficient support diameter " + std::to_string(xl.diameter()) +
                            " exceeds M/4 = " + std::to_string(M / 4) + "; increase the grid");
  for (const auto& [z, v] : xl.values()) {
    if (!grid.in_box(z)) throw PreconditionError("coefficient support leaves the grid box; increase the grid");
    grid[grid.index(z)] = v;
  }
  std::vector<double> xi_grid(grid.length());
  for (std::size_t idx = 0; idx < grid.length(); ++idx) xi_grid[idx] = grid[idx].real();

  const Symbol p(field);
  const auto phases = p.phases();
  grid.forward();

  SolveDiagnostics diag;
  diag.n_mask = n_mask;
  diag.grid = M;
  std::size_t kept = 0;
  for (std::size_t idx = 0; idx < grid.length(); ++idx) {
    const Frequency alpha = grid.frequency(idx);
    if (mask_membership(alpha, phases, n_mask)) {
      const auto s = p(std::accumulate(alpha.begin(), alpha.end(), 0.0));
      if (std::abs(s) < 1e-12)
        throw PreconditionError("symbol vanishes at an unmasked grid node; lower the mask parameter or change M");
      grid[idx] /= s;
      ++kept;
    } else {
      diag.spectral_residual += std::norm(grid[idx]);
      grid[idx] = 0.0;
    }
  }
  const double volume = static_cast<double>(grid.length());
  diag.mask_fraction = static_cast<double>(kept) / volume;
  diag.spectral_residual /= volume;

  grid.inverse();
  double norm = 0;
  for (const auto& v : grid.data()) {
    norm += std::norm(v);
    diag.max_imag = std::max(diag.max_imag, std::abs(v.imag()));
  }
  norm = std::sqrt(norm);
  if (diag.max_imag > 1e-8 * norm)
    throw PreconditionError("inverse transform is not real (max imaginary part " + std::to_string(diag.max_imag) +
                            "); the coefficient data is not conjugate-symmetric");

  MaskedSolve out{LatticeFunction(N), std::vector<double>(grid.length()), diag};
  for (std::size_t idx = 0; idx < grid.length(); ++idx) {
    out.grid[idx] = grid[idx].real();
    out.c.set(grid.point(idx), out.grid[idx]);
  }
  const auto tc = apply_T_circular(field, grid, out.grid);
  for (std::size_t idx = 0; idx < tc.size(); ++idx)
    out.diagnostics.torus_residual += (tc[idx] - xi_grid[idx]) * (tc[idx] - xi_grid[idx]);
  out.diagnostics.invariance_defect = torus_invariance_defect(grid, out.grid);
  return out;
}

struct ScheduleStage {
  int n_mask = 0;
  int grid = 0;
  int i_trunc = 0;
};

/// Stages whose residuals decrease for the built-in fields at degree 1, 2 or 3.
inline std::vector<ScheduleStage> default_schedule(int N) {
  switch (N) {
    case 1: return {{5, 2048, 256}, {10, 8192, 1024}, {20, 32768, 4096}};
    case 2: return {{5, 64, 16}, {10, 128, 32}, {20, 256, 64}};
    case 3: return {{5, 16, 4}, {10, 32, 8}, {20, 64, 16}};
    default: throw PreconditionError("no default schedule for degree " + std::to_string(N));
  }
}

struct ApproximationStage {
  ScheduleStage stage;
  LatticeFunction c;      ///< solution restricted to P_i
  double residual = 0;    ///< ||T c_i - xi||_{l2} by exact spatial convolution
  SolveDiagnostics diagnostics;
};

/// c * 1_{P_i}.
inline LatticeFunction truncate_to_region(const LatticeFunction& c, int i) {
  if (i < 1) throw PreconditionError("truncation index must be >= 1");
  LatticeFunction out(c.dim());
  for (const auto& [z, v] : c.values())
    if (canonicalize(z).coords.back() <= i - 1) out.set(z, v);
  return out;
}

inline std::vector<ApproximationStage> approximate_exact_sequence(const VectorField& field,
                                                                  const CoefficientField& xi,
                                                                  const std::vector<ScheduleStage>& schedule) {
  if (schedule.empty()) throw PreconditionError("schedule must be nonempty");
  const LatticeFunction target = to_lattice_function(xi);
  std::vector<ApproximationStage> out;
  for (const auto& st : schedule) {
    if (st.i_trunc < 1 || st.i_trunc > st.grid / 2)
      throw PreconditionError("truncation index must lie in [1, M/2]");
    auto solved = solve_masked(field, xi, st.n_mask, st.grid);
    auto ci = truncate_to_region(solved.c, st.i_trunc);
    const double r = std::sqrt((apply_T(field, ci) - target).norm_sq());
    out.push_back({st, std::move(ci), r, solved.diagnostics});
  }
  return out;
}

/// max over the grid of |F(T_circ c) - p(e^{i sum alpha}) F c|, c wrapped modulo M.
inline double dft_diagonalization_check(const VectorField& field, const LatticeFunction& c, int M) {
  SpectralGrid fc(c.dim(), M);
  for (const auto& [z, v] : c.values()) fc[fc.index(z)] += v;
  std::vector<double> real(fc.length());
  for (std::size_t idx = 0; idx < fc.length(); ++idx) real[idx] = fc[idx].real();
  const auto t = apply_T_circular(field, fc, real);
  SpectralGrid ftc(c.dim(), M);
  for (std::size_t idx = 0; idx < t.size(); ++idx) ftc[idx] = t[idx];
  fc.forward();
  ftc.forward();
  const Symbol p(field);
  double dev = 0;
  for (std::size_t idx = 0; idx < fc.length(); ++idx) {
    const auto alpha = fc.frequency(idx);
    const auto s = p(std::accumulate(alpha.begin(), alpha.end(), 0.0));
    dev = std::max(dev, std::abs(ftc[idx] - s * fc[idx]));
  }
  return dev;
}

/// Sign of the first coordinate on the right-hand side of the lattice closedness form.
enum class LatticeForm {
  Derived,  ///< xi(k - z_1, z_2 - z_1, ...), equivalent to coefficient closedness
  Printed   ///< xi(-(z_1 + k), z_2 - z_1, ...), agrees with Derived for symmetric fields only
};

/**
 * max over z in [-radius, radius]^N of
 * |sum_k a_k xi(z + k e_1) - sum_k a_k xi(w_k(z))|, with w_k chosen by form.
 */
inline double lattice_closedness_defect(const VectorField& field, const LatticeFunction& xi, int radius,
                                        LatticeForm form = LatticeForm::Derived) {
  const int N = xi.dim();
  double defect = 0;
  std::vector<int> z(static_cast<std::size_t>(N), -radius);
  while (true) {
    double lhs = 0, rhs = 0;
    for (const auto& [k, a] : field.coeffs()) {
      LatticePoint u(z);
      u[0] += k;
      lhs += a * xi(u);
      LatticePoint w(z);
      for (int t = 1; t < N; ++t) w[static_cast<std::size_t>(t)] -= z[0];
      w[0] = form == LatticeForm::Derived ? k - z[0] : -(z[0] + k);
      rhs += a * xi(w);
    }
    defect = std::max(defect, std::abs(lhs - rhs));
    int a = N - 1;
    while (a >= 0 && z[static_cast<std::size_t>(a)] == radius) z[static_cast<std::size_t>(a--)] = -radius;
    if (a < 0) break;
    ++z[static_cast<std::size_t>(a)];
  }
  return defect;
}

/**
 * Frequency-side closedness on the M-grid:
 * max |p(e^{-i alpha_1}) F xi(alpha) - p(e^{i sum alpha}) F xi(g alpha)|.
 */
inline double fourier_closedness_defect(const VectorField& field, const LatticeFunction& xi, int M) {
  SpectralGrid f(xi.dim(), M);
  for (const auto& [z, v] : xi.values()) f[f.index(z)] += v;
  f.forward();
  const Symbol p(field);
  double defect = 0;
  for (std::size_t idx = 0; idx < f.length(); ++idx) {
    auto j = f.node(idx);
    const auto alpha = f.frequency(idx);
    auto gj = j;
    gj[0] = -std::accumulate(j.begin(), j.end(), 0);
    const auto lhs = p(-alpha[0]) * f[idx];
    const auto rhs = p(std::accumulate(alpha.begin(), alpha.end(), 0.0)) * f[f.index(gj)];
    defect = std::max(defect, std::abs(lhs - rhs));
  }
  return defect;
}

/// "key=value" diagnostic lines.
/// Diagnostics as "key=value" lines; residual_l2 is written when a spatial residual is known.
inline void write_diagnostics(std::ostream& os, const SolveDiagnostics& d,
                              std::optional<double> residual_l2 = std::nullopt) {
  os.precision(12);
  if (residual_l2) os << "residual_l2=" << *residual_l2 << '\n';
  os << "n_mask=" << d.n_mask << '\n'
     << "grid=" << d.grid << '\n'
     << "mask_fraction=" << d.mask_fraction << '\n'
     << "spectral_residual=" << d.spectral_residual << '\n'
     << "torus_residual=" << d.torus_residual << '\n'
     << "invariance_defect=" << d.invariance_defect << '\n'
     << "max_imag=" << d.max_imag << '\n';
}

}  // namespace closedexact
