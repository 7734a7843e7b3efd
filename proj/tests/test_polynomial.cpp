#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyint/polynomial.hpp"

using namespace polyint;

namespace {

Polynomial P(std::string_view text, std::size_t dim = 3) { return parse_polynomial(text, dim); }

}  // namespace

TEST_CASE("monomial canonical form") {
  const auto m = Monomial::from_pairs({{VarId(2), 1}, {VarId(0), 2}, {VarId(2), 0}, {VarId(0), 1}});
  REQUIRE(m.factors().size() == 2);
  CHECK(m.exponent(VarId(0)) == 3);
  CHECK(m.exponent(VarId(2)) == 1);
  CHECK(m.exponent(VarId(1)) == 0);
  CHECK(m.degree() == 4);
  CHECK(m.min_dim() == 3);
  CHECK(Monomial().is_constant());
  CHECK(Monomial().degree() == 0);

  const std::vector<VarId> flat{VarId(1), VarId(0), VarId(0)};
  CHECK(Monomial::from_factors(flat) == Monomial::from_pairs({{VarId(0), 2}, {VarId(1), 1}}));
  CHECK(Monomial::from_factors(flat).flatten() == std::vector<VarId>{VarId(0), VarId(0), VarId(1)});
  CHECK(Monomial::var(VarId(0), 2) * Monomial::var(VarId(1)) == Monomial::from_factors(flat));
}

TEST_CASE("graded order") {
  GradedLex lt;
  const auto x1 = Monomial::var(VarId(0));
  const auto x2 = Monomial::var(VarId(1));
  CHECK(lt(Monomial(), x2));
  CHECK(lt(x2, x1 * x1));
  CHECK(lt(x1 * x1, x1 * x2));
  CHECK(lt(x1 * x2, x2 * x2));
  CHECK_FALSE(lt(x1, x1));
}

TEST_CASE("evaluation") {
  CHECK(P("x1^2*x2 + 3").eval(std::vector<double>{2, 5, 0}) == doctest::Approx(23));
  CHECK(Polynomial(2).eval(std::vector<double>{1, 1}) == 0.0);
  CHECK_THROWS_AS(P("x1").eval(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("partial derivatives") {
  CHECK(P("3").partial(VarId(0)).is_zero());
  CHECK(P("x1*x2").partial(VarId(0)) == P("x2"));
  CHECK(P("x1^3*x2^2 - x3").partial(VarId(1)) == P("2*x1^3*x2"));
  const auto g = P("x1^2 + x2*x3").gradient();
  REQUIRE(g.size() == 3);
  CHECK(g[0] == P("2*x1"));
  CHECK(g[2] == P("x2"));
}

TEST_CASE("ring operations") {
  CHECK((P("x1 + x2") - P("x1 + x2")).is_zero());
  CHECK(P("x1 + x2") * P("x1 - x2") == P("x1^2 - x2^2"));
  CHECK(scale(P("x2^4"), 0.25) == P("0.25*x2^4"));
  CHECK(P("x1 + 1").pow(2) == P("x1^2 + 2*x1 + 1"));
  CHECK(P("x1").pow(0) == P("1"));
  CHECK(P("x1") + 2.0 == P("x1 + 2"));
  CHECK(-P("x1 - x2") == P("x2 - x1"));
  CHECK_THROWS_AS(P("x1", 2) + P("x1", 3), std::invalid_argument);
}

TEST_CASE("degree and coefficients") {
  CHECK(Polynomial(2).degree() == -1);
  CHECK(P("7").degree() == 0);
  const auto p = P("0.5*x1^2 + 0.25*x2^4");
  CHECK(p.size() == 2);
  CHECK(p.degree() == 4);
  CHECK(p.coefficient(Monomial::var(VarId(1), 4)) == 0.25);
  CHECK(p.coefficient(Monomial::var(VarId(2))) == 0.0);
  CHECK(p.max_abs_coeff() == 0.5);
}

TEST_CASE("substitution") {
  const auto p = P("x1*x3 + x2");
  CHECK(substitute(p, {}, 3) == p);
  // x1 * y with y -> x1 * x2
  const auto q = substitute(P("x1*x3", 3), {{VarId(2), P("x1*x2", 2)}}, 2);
  CHECK(q == P("x1^2*x2", 2));
  CHECK_THROWS(substitute(P("x1*x3", 3), {}, 2));
}

TEST_CASE("parsing") {
  CHECK(P("x1 - x1").is_zero());
  CHECK(P("-x1 + 2*x2*x2") == P("2*x2^2 - x1"));
  CHECK(P("1.5e2*x1") == P("150*x1"));
  CHECK(P("  x1^2 *  x2 ") == P("x1^2*x2"));

  SUBCASE("errors carry a location") {
    try {
      parse_polynomial("x1 + x0", 2, 4, 10);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
      CHECK(e.column() == 16);
    }
    CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 +", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1^", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 x2", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("y1", 2), ParseError);
  }
}

TEST_CASE("text round trip on random polynomials") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const auto p = oracle::random_polynomial(rng, 4, 6, 8);
    CHECK(parse_polynomial(to_string(p), 4) == p);
  }
  CHECK(to_string(Polynomial(2)) == "0");
  CHECK(to_string(P("x1 - 1")) == "-1 + x1");
  CHECK(to_string(P("2*x1^2*x2 - x3")) == "-x3 + 2*x1^2*x2");
}

TEST_CASE("multiplication agrees with dense expansion") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto a = oracle::random_polynomial(rng, 3, 4, 5);
    const auto b = oracle::random_polynomial(rng, 3, 4, 5);
    oracle::Dense expected;
    for (const auto& [ea, ca] : oracle::dense(a, 3)) {
      for (const auto& [eb, cb] : oracle::dense(b, 3)) {
        oracle::Exps e(3);
        for (int i = 0; i < 3; ++i) e[i] = ea[i] + eb[i];
        expected[e] += ca * cb;
      }
    }
    CHECK(oracle::max_dev(oracle::dense(a * b, 3), expected) <= 1e-14);
  }
}
