#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "closedexact/field.hpp"
#include "support/oracles.hpp"

using namespace closedexact;
using oracle::Q;

namespace {

MultiIndex mi(const char* text) { return parse_multiindex(text); }

VectorField named(const std::string& n) { return *builtin_field<double>(n); }
BasicVectorField<Q> exact_named(const std::string& n) { return *builtin_field<Q>(n); }

BasicExpansion<Q> x(int site, Q c = Q(1)) { return BasicExpansion<Q>(MultiIndex::delta(site), c); }

CoefficientField coeffs(int N, int W, std::initializer_list<std::pair<LatticePoint, double>> values) {
  CoefficientField f(N, W);
  for (const auto& [z, v] : values) f.set(z, v);
  return f;
}

}  // namespace

TEST(Field, Construction) {
  EXPECT_THROW(VectorField({{0, 0.0}}), PreconditionError);
  auto f = VectorField({{2, 1.0}, {0, 0.0}, {-1, -3.0}});
  EXPECT_EQ(f.coeffs().size(), 2u);
  EXPECT_EQ(f.min_k(), -1);
  EXPECT_EQ(f.max_k(), 2);
  EXPECT_EQ(f.radius(), 2);
  EXPECT_EQ(f.coefficient_sum(), -2.0);
  for (const auto& n : builtin_field_names()) EXPECT_TRUE(builtin_field<double>(n).has_value());
  EXPECT_FALSE(builtin_field<double>("nope").has_value());
}

TEST(Field, CoefficientSum) {
  EXPECT_EQ(coefficient_sum(named("Y0")), 0.0);
  EXPECT_EQ(coefficient_sum(named("X0")), 0.0);
  EXPECT_EQ(coefficient_sum(named("d0")), 1.0);
  EXPECT_EQ(coefficient_sum(named("d3-d0")), 0.0);
}

TEST(Field, ApplyD) {
  auto Y0 = exact_named("Y0");
  auto X0 = exact_named("X0");
  EXPECT_EQ(apply_D(Y0, 0, x(1)), BasicExpansion<Q>::constant(Q(1)));
  EXPECT_EQ(apply_D(X0, 0, x(0)), BasicExpansion<Q>::constant(Q(-2)));
  EXPECT_TRUE(apply_D(X0, 3, BasicExpansion<Q>::constant(Q(5))).empty());
}

TEST(Field, ApplyDMatchesPolynomialOracle) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> site(-3, 3), deg(1, 4), coef(-3, 3);
  for (const auto& name : builtin_field_names()) {
    auto f = exact_named(name);
    auto fq = oracle::rational_field(named(name));
    for (int t = 0; t < 40; ++t) {
      BasicExpansion<Q> e;
      for (int k = 0; k < 3; ++k) {
        std::vector<int> s(static_cast<std::size_t>(deg(rng)));
        for (int& v : s) v = site(rng);
        e.add(MultiIndex::from_sites(s), Q(coef(rng), 2));
      }
      for (int n = -2; n <= 2; ++n)
        EXPECT_EQ(oracle::to_poly(apply_D(f, n, e)), oracle::apply_D(fq, n, oracle::to_poly(e)));
    }
  }
}

TEST(Field, ExactFromLocal) {
  auto Y0 = exact_named("Y0");
  EXPECT_EQ(exact_from_local(Y0, BasicExpansion<Q>(MultiIndex::delta(0, 2))), x(1) - x(0));
  EXPECT_TRUE(exact_from_local(Y0, x(0)).empty());
  EXPECT_EQ(exact_from_local(exact_named("d0"), x(0)), BasicExpansion<Q>::constant(Q(1)));
}

TEST(Field, ExactFromLocalMatchesTruncatedSum) {
  // sum_k D_0 tau^k g over a generous k range, computed on polynomials.
  std::mt19937 rng(10);
  std::uniform_int_distribution<int> site(-2, 2), deg(1, 3), coef(-4, 4);
  for (const auto& name : builtin_field_names()) {
    auto f = exact_named(name);
    auto fq = oracle::rational_field(named(name));
    for (int t = 0; t < 25; ++t) {
      BasicExpansion<Q> g;
      for (int k = 0; k < 2; ++k) {
        std::vector<int> s(static_cast<std::size_t>(deg(rng)));
        for (int& v : s) v = site(rng);
        g.add(MultiIndex::from_sites(s), Q(coef(rng)));
      }
      oracle::Poly want;
      for (int k = -12; k <= 12; ++k) want = oracle::add(want, oracle::apply_D(fq, 0, oracle::tau(oracle::to_poly(g), k)));
      EXPECT_EQ(oracle::to_poly(exact_from_local(f, g)), want);
    }
  }
}

TEST(Field, DegreeZeroExactness) {
  // A nonzero constant is exact iff the coefficient sum is nonzero.
  for (const auto& coeffs : std::vector<std::map<int, Q>>{
           {{0, Q(1)}}, {{1, Q(1)}}, {{1, Q(1)}, {0, Q(-1)}}, {{1, Q(1)}, {0, Q(-2)}, {-1, Q(1)}}, {{3, Q(1)}, {0, Q(-1)}}}) {
    BasicVectorField<Q> f(coeffs);
    auto c = exact_from_local(f, x(0));
    EXPECT_EQ(c.coefficient(MultiIndex{}), f.coefficient_sum());
    EXPECT_EQ(c.empty(), f.coefficient_sum() == Q(0));
  }
}

TEST(Field, ClosedSymbolicExamples) {
  auto Y0 = exact_named("Y0");
  auto X0 = exact_named("X0");
  auto r = is_closed_symbolic(Y0, x(0), 3);
  EXPECT_FALSE(r.closed);
  bool at01 = false;
  for (const auto& v : r.violations) at01 = at01 || (v.n == 0 && v.m == 1);
  EXPECT_TRUE(at01);
  EXPECT_TRUE(is_closed_symbolic(X0, x(0), 3).closed);
  EXPECT_TRUE(is_closed_symbolic(X0, x(2) + x(-2), 4).closed);
  EXPECT_TRUE(is_closed_symbolic(X0, BasicExpansion<Q>::constant(Q(1)), 3).closed);
  EXPECT_TRUE(is_closed_symbolic(Y0, x(1) - x(0), 3).closed);
}

TEST(Field, SufficientRangeFindsEveryViolation) {
  // Violations found at a large range are translates of ones found at the sufficient range.
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> site(-2, 3), deg(1, 3), coef(-2, 2);
  for (const auto& name : builtin_field_names()) {
    auto f = exact_named(name);
    for (int t = 0; t < 30; ++t) {
      BasicExpansion<Q> e;
      for (int k = 0; k < 2; ++k) {
        std::vector<int> s(static_cast<std::size_t>(deg(rng)));
        for (int& v : s) v = site(rng);
        e.add(MultiIndex::from_sites(s), Q(coef(rng)));
      }
      const int r = sufficient_range(f, e);
      EXPECT_EQ(is_closed_symbolic(f, e, r).closed, is_closed_symbolic(f, e, r + 6).closed);
    }
  }
}

TEST(Field, ClosedCoeffsExamples) {
  auto X0 = named("X0");
  auto Y0 = named("Y0");
  auto x0 = coeffs(1, 5, {{{0}, 1.0}});
  EXPECT_TRUE(is_closed_coeffs(X0, x0).closed());
  auto rep = is_closed_coeffs(Y0, x0);
  ASSERT_EQ(rep.violations.size(), 2u);
  EXPECT_EQ(rep.violations[0].n, -1);
  EXPECT_EQ(rep.violations[1].n, 1);
  EXPECT_TRUE(rep.violations[0].I.is_zero());
  auto x1_minus_x0 = coeffs(1, 5, {{{0}, -1.0}, {{1}, 1.0}});
  EXPECT_TRUE(is_closed_coeffs(Y0, x1_minus_x0).closed());
  EXPECT_GT(rep.relations_checked, 0u);
  EXPECT_EQ(rep.window, 5);
}

TEST(Field, ClosedCoeffsAgreesWithSymbolicOracle) {
  // For finitely supported data with enough window margin, the coefficient
  // relations and the polynomial definition of closedness agree.
  std::mt19937 rng(14);
  for (const auto& name : builtin_field_names()) {
    auto f = named(name);
    auto fq = oracle::rational_field(f);
    for (int N = 1; N <= 3; ++N) {
      const int s = N == 3 ? 1 : 2;
      const auto pts = enumerate_sorted_points(N, -s, s);
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      std::uniform_int_distribution<int> coef(-2, 2);
      int closed_seen = 0;
      for (int t = 0; t < 40; ++t) {
        CoefficientField xi(N, s);
        const int terms = t % 4 == 0 ? 0 : 1 + t % 3;
        for (int k = 0; k < terms; ++k) xi.add(pts[pick(rng)], coef(rng));
        if (t % 5 == 1) {
          // add a known closed piece: the symmetric pair around 0 for degree 1
          xi = CoefficientField(N, s);
          for (const auto& z : pts)
            if (N == 1 && std::abs(z[0]) <= 1) xi.set(z, 1.0);
        }
        const auto big = xi.with_window(sufficient_window(f, s));
        const bool coeff_closed = is_closed_coeffs(f, big).closed();
        const auto poly = oracle::to_poly(coeffs_to_expansion(xi));
        const bool sym_closed = oracle::closed_poly(fq, poly, 2 * s + 2 * f.radius() + 1);
        EXPECT_EQ(coeff_closed, sym_closed) << name << " N=" << N << " t=" << t;
        closed_seen += sym_closed;
      }
      EXPECT_GT(closed_seen, 0);
    }
  }
}

TEST(Field, ExactIsClosed) {
  std::mt19937 rng(16);
  std::uniform_int_distribution<int> site(-2, 2), deg(1, 3), coef(-3, 3);
  for (const auto& name : builtin_field_names()) {
    auto f = exact_named(name);
    for (int t = 0; t < 25; ++t) {
      BasicExpansion<Q> g;
      for (int k = 0; k < 3; ++k) {
        std::vector<int> s(static_cast<std::size_t>(deg(rng)));
        for (int& v : s) v = site(rng);
        g.add(MultiIndex::from_sites(s), Q(coef(rng)));
      }
      auto xi = exact_from_local(f, g);
      EXPECT_TRUE(is_closed_symbolic(f, xi, sufficient_range(f, xi)).closed);
    }
  }
}

TEST(Field, Linearity) {
  auto X0 = exact_named("X0");
  auto a = x(0), b = x(3) + x(-3);
  for (Q s : {Q(2), Q(-1, 3)}) {
    EXPECT_TRUE(is_closed_symbolic(X0, s * a, 4).closed);
    EXPECT_TRUE(is_closed_symbolic(X0, a + s * b, 5).closed);
  }
  auto Y0 = exact_named("Y0");
  EXPECT_FALSE(is_closed_symbolic(Y0, Q(3) * x(0), 3).closed);
}

TEST(Field, ExpansionToCoeffs) {
  auto e1 = expansion_to_coeffs(HermiteExpansion(MultiIndex::delta(0)), 1, 2);
  EXPECT_EQ(e1.values().size(), 1u);
  EXPECT_EQ(e1.value_or_zero(LatticePoint{0}), 1.0);
  HermiteExpansion lap;
  lap.add(MultiIndex::delta(1), 1);
  lap.add(MultiIndex::delta(0), -2);
  lap.add(MultiIndex::delta(-1), 1);
  auto e2 = expansion_to_coeffs(lap, 1, 2);
  EXPECT_EQ(e2.value_or_zero(LatticePoint{-1}), 1.0);
  EXPECT_EQ(e2.value_or_zero(LatticePoint{0}), -2.0);
  EXPECT_EQ(e2.value_or_zero(LatticePoint{1}), 1.0);
  EXPECT_TRUE(expansion_to_coeffs(HermiteExpansion::constant(1.0), 1, 3).values().empty());
  EXPECT_THROW(expansion_to_coeffs(HermiteExpansion(MultiIndex::delta(4)), 1, 3), PreconditionError);
  EXPECT_EQ(coeffs_to_expansion(e2), lap);
}

TEST(Field, CoefficientFieldWindow) {
  CoefficientField f(2, 3);
  f.set(LatticePoint{2, -1}, 4.0);
  EXPECT_EQ(f.value_or_zero(LatticePoint{-1, 2}), 4.0);
  EXPECT_EQ(f.value(LatticePoint{0, 0}), 0.0);
  EXPECT_FALSE(f.value(LatticePoint{0, 4}).has_value());
  EXPECT_THROW(f.set(LatticePoint{0, 4}, 1.0), PreconditionError);
  EXPECT_THROW(f.set(LatticePoint{0}, 1.0), PreconditionError);
  EXPECT_THROW(CoefficientField(0, 3), PreconditionError);
}

TEST(Field, FileFormats) {
  std::istringstream fin("# X0\n-1 1\n0 -2\n1 1\n");
  EXPECT_EQ(read_vector_field(fin), named("X0"));
  std::istringstream bad_field("1 x\n");
  EXPECT_THROW(read_vector_field(bad_field), ParseError);
  std::istringstream zero_field("0 0\n");
  EXPECT_THROW(read_vector_field(zero_field), ParseError);

  auto xi = coeffs(2, 3, {{{0, 1}, 0.5}, {{-2, 3}, -1.25}});
  std::stringstream ss;
  write_coefficient_field(ss, xi);
  auto back = read_coefficient_field(ss);
  EXPECT_EQ(back.degree(), 2);
  EXPECT_EQ(back.window(), 3);
  EXPECT_EQ(back.values(), xi.values());

  std::istringstream no_header("0 1\n");
  EXPECT_THROW(read_coefficient_field(no_header), ParseError);
  std::istringstream outside("degree 1 window 2\n5 1\n");
  EXPECT_THROW(read_coefficient_field(outside), ParseError);
  std::istringstream short_line("degree 2 window 2\n1 1\n");
  EXPECT_THROW(read_coefficient_field(short_line), ParseError);
}
