#include <doctest.h>

#include <random>

#include "support.hpp"
#include "vizsos/polynomial_io.hpp"

using namespace vizsos;
using vizsos::testing::kSeed;

namespace {

VarTablePtr xyz() { return VarTable::generic({"x", "y", "z", "w"}); }

RatPoly poly(const std::string& text, const VarTablePtr& vars) { return parse_rat_poly(text, vars); }
QuadPoly qpoly(const std::string& text, const VarTablePtr& vars) { return parse_quad_poly(text, vars); }

Monomial random_monomial(std::mt19937_64& rng, const VarTablePtr& v) {
  const RatPoly p = testing::random_poly(rng, v, 1, 4);
  return p.is_zero() ? Monomial() : p.leading_monomial();
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("rationals are kept in lowest terms") {
  const Rat r(6, -4);
  CHECK(r.numerator() == -3);
  CHECK(r.denominator() == 2);
  CHECK(Rat(0, 7).denominator() == 1);
  CHECK(Rat(0, 7) == Rat(0));
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-1, 3).str() == "-1/3");
  CHECK(Rat(8).str() == "8");
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("rational parse") {
  CHECK(Rat::parse("-8/3") == Rat(-8, 3));
  CHECK(Rat::parse("+4/6") == Rat(2, 3));
  CHECK(Rat::parse("12") == Rat(12));
  CHECK_FALSE(Rat::parse("1/0"));
  CHECK_FALSE(Rat::parse("abc"));
  CHECK_FALSE(Rat::parse(""));
}

TEST_CASE("random rationals stay canonical") {
  std::mt19937_64 rng(kSeed);
  for (int k = 0; k < 1000; ++k) {
    const Rat a = testing::random_rat(rng, 50, 30), b = testing::random_rat(rng, 50, 30);
    for (const Rat& r : {a + b, a - b, a * b}) {
      CHECK(r.denominator() > 0);
      CHECK(gcd(r.numerator(), r.denominator()) == 1);
      CHECK(Rat::parse(r.str()) == r);
    }
  }
}

TEST_CASE("quadratic field arithmetic") {
  const QuadExt a(Rat(1), Rat(1));  // 1 + √2
  const QuadExt b(Rat(1), Rat(-1));
  CHECK(a * b == QuadExt(-1));
  CHECK((a * b).is_rational());
  CHECK(a.norm() == Rat(-1));
  CHECK(a.conjugate() == b);
  CHECK(a * a.inverse() == QuadExt(1));
  CHECK(QuadExt::sqrt_times(Rat(1)) * QuadExt::sqrt_times(Rat(1)) == QuadExt(2));
  CHECK(QuadExt(Rat(3), Rat(0)) == QuadExt(3));
  CHECK(QuadExt(Rat(3), Rat(0)).discriminant() == 1);
  CHECK(a.sign() == 1);
  CHECK(QuadExt(Rat(1), Rat(-1)).sign() == -1);
  CHECK(QuadExt(Rat(-3), Rat(2)).sign() == -1);  // 2√2 < 3
  CHECK(QuadExt(Rat(-2), Rat(3, 2)).sign() == 1);  // 1.5√2 > 2
  CHECK_THROWS(QuadExt::sqrt_times(Rat(1), 2) + QuadExt::sqrt_times(Rat(1), 3));
  CHECK_THROWS(QuadExt(Rat(1), Rat(1), 4));
}

TEST_CASE("exact square roots") {
  CHECK(exact_sqrt(Rat(8)) == QuadExt::sqrt_times(Rat(2)));
  CHECK(exact_sqrt(Rat(9, 4)) == QuadExt(Rat(3, 2)));
  CHECK(exact_sqrt(Rat(2, 9)) == QuadExt::sqrt_times(Rat(1, 3)));
  CHECK(exact_sqrt(Rat(1, 2)) == QuadExt::sqrt_times(Rat(1, 2)));
  CHECK_FALSE(exact_sqrt(Rat(-1)));
  CHECK(exact_sqrt(Rat(0)) == QuadExt(0));
  CHECK(is_squarefree(6));
  CHECK_FALSE(is_squarefree(12));
}

TEST_CASE("addition") {
  const auto v = xyz();
  CHECK(poly("x + 1", v) + poly("-x", v) == poly("1", v));
  const RatPoly p = poly("3*x*y - 1/2*z + 4", v);
  CHECK(p + RatPoly(v) == p);
  CHECK(p + RatPoly() == p);
  CHECK(poly("2/3*x", v) + poly("1/3*x", v) == poly("x", v));
  CHECK((p - p).is_zero());
}

TEST_CASE("multiplication") {
  const auto v = xyz();
  CHECK(poly("1 - x", v) * poly("1 - x", v) == poly("x^2 - 2*x + 1", v));
  const RatPoly p = poly("3*x*y - 1/2*z + 4", v);
  CHECK(p * RatPoly(v, Rat(1)) == p);
  CHECK((p * RatPoly(v)).is_zero());
  const QuadPoly a = qpoly("(1+sqrt(2))", v), b = qpoly("(1-sqrt(2))", v);
  CHECK(a * b == QuadPoly(v, QuadExt(-1)));
  CHECK(poly("x", v) * poly("x", v) == poly("x^2", v));
  CHECK((poly("x^2*y", v) * poly("x*z", v)).leading_monomial().degree() == 5);
}

TEST_CASE("mismatched rings are rejected") {
  const auto a = VarTable::generic({"x", "y"});
  const auto b = VarTable::generic({"y", "x"});
  CHECK_THROWS_AS(RatPoly::variable(a, 0) + RatPoly::variable(b, 0), std::invalid_argument);
  CHECK_THROWS_AS(RatPoly::variable(a, 0) * RatPoly::variable(b, 0), std::invalid_argument);
  const auto a2 = VarTable::generic({"x", "y"});
  CHECK_NOTHROW(RatPoly::variable(a, 0) + RatPoly::variable(a2, 1));
}

TEST_CASE("rational and radical parts") {
  const auto v = xyz();
  const auto p1 = rational_parts(qpoly("(sqrt(2))*x", v));
  CHECK(p1.rational.is_zero());
  CHECK(p1.radical == poly("x", v));
  CHECK(p1.discriminant == 2);

  const auto p2 = rational_parts(qpoly("(1+sqrt(2))*x + 3", v));
  CHECK(p2.rational == poly("x + 3", v));
  CHECK(p2.radical == poly("x", v));

  const QuadPoly s = qpoly("(sqrt(2))*x", v);
  const auto p3 = rational_parts(s * s);
  CHECK(p3.rational == poly("2*x^2", v));
  CHECK(p3.radical.is_zero());
  CHECK(p3.discriminant == 1);

  CHECK_THROWS_AS(rational_parts(qpoly("(sqrt(2))*x + (sqrt(3))*y", v)), std::domain_error);
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(kSeed);
  const auto v = xyz();
  for (int k = 0; k < 1000; ++k) {
    const RatPoly a = testing::random_poly(rng, v, 4, 3);
    const RatPoly b = testing::random_poly(rng, v, 4, 3);
    const RatPoly c = testing::random_poly(rng, v, 3, 2);
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a - a).is_zero());
    if (!a.is_zero() && !b.is_zero()) REQUIRE((a * b).degree() == a.degree() + b.degree());
  }
}

TEST_CASE("quadratic parts recombine") {
  std::mt19937_64 rng(kSeed + 1);
  const auto v = xyz();
  const QuadPoly root2 = QuadPoly(v, QuadExt::sqrt_times(Rat(1)));
  for (int k = 0; k < 1000; ++k) {
    const QuadPoly p = testing::random_quad_poly(rng, v, 3, 2);
    const QuadPoly sq = p * p;
    const auto parts = rational_parts(sq);
    REQUIRE(to_quad(parts.rational) + root2 * to_quad(parts.radical) == sq);
    const auto own = rational_parts(p);
    REQUIRE(to_quad(own.rational) + root2 * to_quad(own.radical) == p);
  }
}

TEST_CASE("canonical text") {
  const auto vars = VarTable::for_graph_classes(GraphClassParams::parse("1,1,3,2"));
  const RatPoly p = poly("1 - 8/3*x[0,1]*x[0,2]", vars);
  CHECK(to_string(p) == "-8/3*x[0,1]*x[0,2] + 1");
  CHECK(to_string(poly("x[0,0] - x[0,1] + 2", vars)) == "x[0,0] - x[0,1] + 2");
  CHECK(to_string(RatPoly(vars)) == "0");
  CHECK(to_string(qpoly("(sqrt(2))*x[0,0] - (2/3*sqrt(2))", vars)) ==
        "(sqrt(2))*x[0,0] + (-2/3*sqrt(2))");
  CHECK(to_string(qpoly("(1+sqrt(2))", vars)) == "(1+sqrt(2))");
  CHECK_THROWS_AS(parse_rat_poly("(sqrt(2))*x[0,0]", vars), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat_poly("x[9,9]", vars), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat_poly("x[0,0] +", vars), std::invalid_argument);
}

TEST_CASE("print then parse is the identity") {
  std::mt19937_64 rng(kSeed + 2);
  const auto vars = VarTable::for_graph_classes(GraphClassParams::parse("2,1,3,2"));
  for (int k = 0; k < 1000; ++k) {
    const RatPoly p = testing::random_poly(rng, vars, 5, 3);
    REQUIRE(parse_rat_poly(to_string(p), vars) == p);
    const QuadPoly q = testing::random_quad_poly(rng, vars, 4, 2);
    REQUIRE(parse_quad_poly(to_string(q), vars) == q);
  }
}

TEST_CASE("grevlex is a graded total order compatible with multiplication") {
  std::mt19937_64 rng(kSeed + 3);
  const auto v = xyz();
  const Monomial x = Monomial::variable(0), y = Monomial::variable(1), z = Monomial::variable(2);
  CHECK(x > y);
  CHECK(y > z);
  CHECK(x * x > x * y);
  CHECK(y * y > x * z);  // grevlex: the smaller power of the last variable wins
  CHECK(z * z > x);
  for (int k = 0; k < 1000; ++k) {
    const Monomial a = random_monomial(rng, v), b = random_monomial(rng, v);
    const Monomial c = Monomial::variable(k % 4);
    const bool lt = a < b, gt = a > b, eq = a == b;
    REQUIRE(int(lt) + int(gt) + int(eq) == 1);
    if (a.degree() < b.degree()) REQUIRE(lt);
    if (lt) REQUIRE(a * c < b * c);
  }
}

TEST_CASE("monomial helpers") {
  const Monomial m = Monomial::from_exponents({{0, 2}, {3, 1}});
  CHECK(m.degree() == 3);
  CHECK(m.exponent(0) == 2);
  CHECK_FALSE(m.is_multilinear());
  CHECK(m.multilinear() == Monomial::from_mask(0b1001));
  CHECK(Monomial::variable(0).divides(m));
  CHECK(Monomial::variable(0).quotient_of(m) == Monomial::from_exponents({{0, 1}, {3, 1}}));
  CHECK(m.lcm(Monomial::variable(1)) == m * Monomial::variable(1));
  CHECK(Monomial::from_mask(0b11).boolean_product(Monomial::from_mask(0b110)) == Monomial::from_mask(0b111));
}

TEST_CASE("graph class variable table") {
  const auto vars = VarTable::for_graph_classes(GraphClassParams::parse("3,2,3,2"));
  CHECK(vars->size() == 15);
  CHECK(vars->vertex(0, 0) == 0);
  CHECK(vars->name(vars->vertex(2, 1)) == "x[2,1]");
  CHECK(vars->edge_g(2, 0) == vars->edge_g(0, 2));
  CHECK(vars->name(vars->edge_g(2, 0)) == "eG[0,2]");
  CHECK(vars->name(vars->edge_h(1, 2)) == "eH[1,2]");
  CHECK(vars->find("eH[0,1]") == vars->edge_h(0, 1));
  CHECK_FALSE(vars->find("eH[1,0]"));
  for (int n_g = 1; n_g <= 4; ++n_g)
    for (int n_h = 1; n_h <= 4; ++n_h) {
      const auto t = VarTable::for_graph_classes({n_g, 1, n_h, 1});
      CHECK(t->size() == static_cast<std::size_t>(n_g * (n_g - 1) / 2 + n_h * (n_h - 1) / 2 + n_g * n_h));
    }
  CHECK_THROWS(GraphClassParams::parse("3,4,3,2").validate());
  CHECK_THROWS(GraphClassParams::parse("3,2,3"));
}

}  // TEST_SUITE
