#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "closedexact/hermite.hpp"
#include "support/oracles.hpp"

using namespace closedexact;
using oracle::Q;

namespace {

MultiIndex mi(const char* text) { return parse_multiindex(text); }

/// All multi-indices on the given sites with total degree <= max_degree.
std::vector<MultiIndex> small_indices(const std::vector<int>& sites, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> counts(sites.size(), 0);
  while (true) {
    int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total <= max_degree) {
      std::map<int, int> m;
      for (std::size_t a = 0; a < sites.size(); ++a) m[sites[a]] = counts[a];
      out.push_back(MultiIndex::from_counts(m));
    }
    std::size_t a = 0;
    while (a < counts.size() && counts[a] == max_degree) counts[a++] = 0;
    if (a == counts.size()) break;
    ++counts[a];
  }
  return out;
}

}  // namespace

TEST(Hermite, Eval) {
  EXPECT_EQ(hermite_eval(0, 3.7), 1.0);
  for (double x : {-2.0, -0.3, 0.0, 1.0, 2.5}) EXPECT_NEAR(hermite_eval(2, x), (x * x - 1) / 2, 1e-15);
  EXPECT_EQ(hermite_eval(3, 0.0), 0.0);
}

TEST(Hermite, RecurrenceMatchesRodriguesPolynomials) {
  for (int i = 0; i <= 8; ++i) {
    const auto p = oracle::hermite_poly(0, i);
    for (double x : {-1.7, -0.5, 0.0, 0.25, 1.3, 2.0}) {
      double v = 0;
      for (const auto& [mono, c] : p) {
        double term = boost::rational_cast<double>(c);
        for (auto [s, k] : mono) term *= std::pow(x, k);
        v += term;
      }
      EXPECT_NEAR(hermite_eval(i, x), v, 1e-12) << "i=" << i << " x=" << x;
    }
  }
}

TEST(Hermite, EvalExpansion) {
  EXPECT_EQ(eval(HermiteExpansion(MultiIndex::delta(0)), {{0, 2.5}}), 2.5);
  EXPECT_EQ(eval(HermiteExpansion(MultiIndex::delta(0, 2)), {{0, 1.0}}), 0.0);
  EXPECT_EQ(eval(HermiteExpansion::constant(1.0), {}), 1.0);
  EXPECT_THROW(eval(HermiteExpansion(MultiIndex::delta(3)), {{0, 1.0}}), PreconditionError);
}

TEST(Hermite, InnerProduct) {
  EXPECT_NEAR(inner_product(HermiteExpansion(MultiIndex::delta(0)), HermiteExpansion(MultiIndex::delta(1))), 0.0,
              1e-14);
  EXPECT_NEAR(inner_product(HermiteExpansion(MultiIndex::delta(0, 2)), HermiteExpansion(MultiIndex::delta(0, 2))),
              0.5, 1e-14);
}

TEST(Hermite, OrthogonalitySweep) {
  const auto basis = small_indices({-1, 0, 2}, 4);
  for (const auto& I : basis)
    for (const auto& J : basis) {
      double expect = 0;
      if (I == J) {
        expect = 1;
        for (auto [s, k] : I.entries()) expect /= factorial(k);
      }
      EXPECT_NEAR(inner_product(HermiteExpansion(I), HermiteExpansion(J)), expect, 1e-10) << I << " vs " << J;
    }
}

TEST(Hermite, GaussRuleIntegratesMoments) {
  auto rule = gauss_hermite_rule(6);
  // E[x^k] for a standard Gaussian: 0 for odd k, (k-1)!! for even k.
  for (int k = 0; k <= 11; ++k) {
    double s = 0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) s += rule.weights[q] * std::pow(rule.nodes[q], k);
    double expect = k % 2 ? 0.0 : 1.0;
    for (int j = k - 1; j > 0; j -= 2) expect *= j;
    EXPECT_NEAR(s, expect, 1e-9 * std::max(1.0, expect)) << k;
  }
  EXPECT_THROW(gauss_hermite_rule(0), PreconditionError);
}

TEST(Hermite, NormSq) {
  EXPECT_EQ(norm_sq(HermiteExpansion(MultiIndex::delta(0))), 1.0);
  EXPECT_EQ(norm_sq(HermiteExpansion(MultiIndex::delta(0, 2), 2.0)), 2.0);
  EXPECT_EQ(norm_sq(HermiteExpansion{}), 0.0);
}

TEST(Hermite, NormEquivalenceBounds) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> val(-2, 2);
  for (int N = 1; N <= 4; ++N) {
    double cn = 1;
    for (int k = 0; k < N; ++k) cn *= factorial(N);
    std::vector<MultiIndex> deg_n;
    for (const auto& I : small_indices({-1, 0, 1, 3}, N))
      if (I.degree() == N) deg_n.push_back(I);
    for (int t = 0; t < 30; ++t) {
      HermiteExpansion e;
      for (const auto& I : deg_n) e.add(I, val(rng));
      const double n2 = norm_sq(e), c2 = coefficient_norm_sq(e);
      EXPECT_LE(c2 / cn, n2 + 1e-12);
      EXPECT_LE(n2, c2 + 1e-12);
      EXPECT_NEAR(inner_product(e, e), n2, 1e-9 * std::max(1.0, n2));
    }
  }
}

TEST(Hermite, Project) {
  auto e = HermiteExpansion(MultiIndex::delta(0)) + HermiteExpansion(MultiIndex::delta(1, 2));
  EXPECT_EQ(project(e, 1), HermiteExpansion(MultiIndex::delta(0)));
  EXPECT_TRUE(project(e, 3).empty());
  HermiteExpansion sum;
  for (int N = 0; N <= e.max_degree(); ++N) sum += project(e, N);
  EXPECT_EQ(sum, e);
}

TEST(Hermite, NoStoredZeros) {
  HermiteExpansion e(MultiIndex::delta(0), 1.5);
  e.add(MultiIndex::delta(0), -1.5);
  EXPECT_TRUE(e.empty());
  e = 2.0 * HermiteExpansion(MultiIndex::delta(1));
  e *= 0.0;
  EXPECT_TRUE(e.empty());
}

TEST(Hermite, AnnihilationIdentityExact) {
  // d/dx_n H_I = H_{I - delta_n}, checked on exact polynomials.
  for (const auto& I : small_indices({-1, 0, 1}, 4)) {
    BasicExpansion<Q> e(I, Q(1));
    for (int n = -2; n <= 2; ++n)
      EXPECT_EQ(oracle::diff(oracle::to_poly(e), n), oracle::to_poly(partial(e, n))) << I << " n=" << n;
  }
}

TEST(Hermite, CreationIdentityExact) {
  // (x_n - d/dx_n) H_I = (i_n + 1) H_{I + delta_n}.
  for (const auto& I : small_indices({-1, 0, 1}, 4)) {
    const auto p = oracle::to_poly(BasicExpansion<Q>(I, Q(1)));
    for (int n = -1; n <= 2; ++n) {
      const auto lhs = oracle::sub(oracle::times_x(p, n), oracle::diff(p, n));
      const auto rhs = oracle::to_poly(BasicExpansion<Q>(I.plus(n), Q(I.count(n) + 1)));
      EXPECT_EQ(lhs, rhs) << I << " n=" << n;
    }
  }
}

TEST(Hermite, ShiftIdentityByEvaluation) {
  // (tau f)(x) = f(tau x) with (tau x)_n = x_{n+1}; translate(e, 1) represents tau e.
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  for (const auto& I : small_indices({-1, 0, 2}, 3)) {
    HermiteExpansion e(I, 1.0);
    for (int m = -2; m <= 2; ++m) {
      std::map<int, double> x;
      for (int s = -6; s <= 6; ++s) x[s] = g(rng);
      std::map<int, double> tx;  // (tau^m x)_n = x_{n+m}
      for (int s = -4; s <= 4; ++s) tx[s] = x[s + m];
      EXPECT_NEAR(eval(translate(e, m), x), eval(e, tx), 1e-12) << I << " m=" << m;
    }
  }
  EXPECT_EQ(translate(HermiteExpansion(MultiIndex::delta(0)), 1), HermiteExpansion(MultiIndex::delta(1)));
}

TEST(Hermite, ExpansionFileRoundTrip) {
  HermiteExpansion e;
  e.add(mi("-1:1,3:2"), 0.25);
  e.add(MultiIndex{}, -3.0);
  e.add(mi("0:1"), 1e-7);
  std::stringstream ss;
  write_expansion(ss, e);
  EXPECT_EQ(read_expansion(ss), e);
  std::istringstream bad("0:1 1.0\n");
  EXPECT_THROW(read_expansion(bad), ParseError);
  std::istringstream bad2("0:1\tx\n");
  EXPECT_THROW(read_expansion(bad2), ParseError);
}
