#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyint/problems.hpp"
#include "polyint/skewform.hpp"

using namespace polyint;

namespace {

std::vector<Polynomial> polys(std::initializer_list<const char*> texts, std::size_t dim) {
  std::vector<Polynomial> out;
  for (const char* t : texts) out.push_back(parse_polynomial(t, dim));
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("canonical quartic oscillator") {
  const ReducedSystem sys(polys({"-x2^3", "x1"}, 2), polys({"0.5*x1^2 + 0.25*x2^4"}, 2), CanonicalJ{});
  CHECK(sys.n() == 2);
  CHECK(sys.m() == 1);
  CHECK(sys.extended_dim() == 3);
  CHECK(sys.field_degree() == 3);
  CHECK(structure_name(sys.structure()) == "canonical");

  // f(x, y) = (-x2 * y, x1) away from lifted points.
  const auto f = sys.reduced_field(std::vector<double>{0.5, 2.0, 3.0});
  CHECK(f[0] == doctest::Approx(-6.0));
  CHECK(f[1] == doctest::Approx(0.5));
  CHECK(sys.eval_original_field(std::vector<double>{1, 2}) == std::vector<double>{-8, 1});

  const auto report = verify_system(sys);
  CHECK(report.pass);
  CHECK(report.samples == 200);
  CHECK(report.orthogonality <= 1e-12);
  CHECK(report.consistency <= 1e-12);
}

TEST_CASE("construction is validated") {
  const auto field = polys({"-x2^3", "x1", "0"}, 3);
  CHECK_THROWS_AS(ReducedSystem(field, polys({"x3"}, 3), CanonicalJ{}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedSystem(polys({"-x2", "x1"}, 2), polys({"x1^2 + x2^2", "x1"}, 2), DefaultWedge{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReducedSystem(polys({"-x2", "x1"}, 2), {}, DefaultWedge{}), std::invalid_argument);
  CHECK_THROWS_AS(ReducedSystem(polys({"-x2", "x1"}, 3), polys({"x1^2 + x2^2"}, 2), CanonicalJ{}),
                  std::invalid_argument);

  ExplicitMatrix bad{{polys({"0", "1", "0"}, 3), polys({"1", "0", "0"}, 3), polys({"0", "0", "0"}, 3)}};
  CHECK_THROWS_AS(ReducedSystem(field, polys({"x3"}, 3), bad), std::invalid_argument);
}

TEST_CASE("corrupted integral fails verification with an O(1) residual") {
  const ReducedSystem sys(polys({"-x2^3", "x1"}, 2), polys({"0.5*x1^2 + 0.25*x2^4 + x1"}, 2), CanonicalJ{});
  const auto r = verify_system(sys);
  CHECK_FALSE(r.pass);
  CHECK(r.orthogonality > 0.01);
  CHECK(r.consistency >= 1.0 - 1e-12);
  CHECK(r.summary().find("FAIL") != std::string::npos);
}

TEST_CASE("property: random explicit-matrix systems are consistent and conservative") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 3;
    const auto H = oracle::random_polynomial(rng, n, 7, 6);
    const auto grad = H.gradient();
    std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        s[i][j] = u(rng);
        s[j][i] = -s[i][j];
      }
    ExplicitMatrix S;
    std::vector<Polynomial> field(n, Polynomial(n));
    for (std::size_t i = 0; i < n; ++i) {
      S.entries.emplace_back();
      for (std::size_t j = 0; j < n; ++j) {
        S.entries[i].push_back(Polynomial::constant(n, s[i][j]));
        field[i] += s[i][j] * grad[j];
      }
    }
    const ReducedSystem sys(field, {H}, S);
    CHECK(verify_system(sys).pass);
    for (int p = 0; p < 10; ++p) {
      const auto x = oracle::random_vec(rng, n, -1.5, 1.5);
      const auto expected = sys.eval_original_field(x);
      const auto got = sys.reduced_field(sys.tower().lift(x));
      CHECK(oracle::max_diff(got, expected) <= 1e-11 * std::max(1.0, oracle::max_abs(expected)));

      // Arbitrary extended point, not on the lifted manifold.
      const auto z = oracle::random_vec(rng, sys.extended_dim(), -1.5, 1.5);
      const auto f = sys.reduced_field(z);
      const auto g = sys.total_gradient(0, z);
      CHECK(std::abs(dot(f, g)) <= 1e-10 * std::max(1.0, oracle::max_abs(f) * oracle::max_abs(g)));
    }
  }
}

TEST_CASE("property: wedge form flips sign under adjacent transpositions") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 6;
    const std::size_t m = 1 + k % 4;
    const auto f = oracle::random_vec(rng, n, -1, 1);
    std::vector<std::vector<double>> grads;
    for (std::size_t i = 0; i < m; ++i) grads.push_back(oracle::random_vec(rng, n, -1, 1));

    std::vector<std::vector<double>> v;
    for (std::size_t i = 0; i <= m; ++i) v.push_back(oracle::random_vec(rng, n, -1, 1));
    // T(v0, v1, ..., vm) = <v0, contract(f, g; v1..vm)>
    auto T = [&](const std::vector<std::vector<double>>& args) {
      const std::vector<std::vector<double>> rest(args.begin() + 1, args.end());
      return dot(args[0], contract_default(f, grads, rest));
    };
    const double base = T(v);
    for (std::size_t i = 0; i < m; ++i) {
      auto w = v;
      std::swap(w[i], w[i + 1]);
      const double flipped = T(w);
      CHECK(std::abs(base + flipped) <= 1e-10 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("wedge contraction reproduces an orthogonal field") {
  std::mt19937_64 rng(43);
  const std::size_t n = 5;
  std::vector<std::vector<double>> grads{oracle::random_vec(rng, n, -1, 1), oracle::random_vec(rng, n, -1, 1)};
  auto f = oracle::random_vec(rng, n, -1, 1);
  // Gram-Schmidt f against the gradients.
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::vector<double>> basis;
    for (auto g : grads) {
      for (const auto& b : basis) {
        const double c = dot(g, b);
        for (std::size_t i = 0; i < n; ++i) g[i] -= c * b[i];
      }
      const double nrm = std::sqrt(dot(g, g));
      for (auto& a : g) a /= nrm;
      basis.push_back(g);
    }
    for (const auto& b : basis) {
      const double c = dot(f, b);
      for (std::size_t i = 0; i < n; ++i) f[i] -= c * b[i];
    }
  }
  const auto u = contract_default(f, grads, grads);
  CHECK(oracle::max_diff(u, f) <= 1e-13);
}

TEST_CASE("wedge singularity is reported") {
  // grad H1 = (2x1, 0, 0) and grad H2 = (2x1, 2x2, 0) are parallel when x2 = 0.
  const ReducedSystem sys(polys({"0", "0", "1"}, 3), polys({"x1^2", "x1^2 + x2^2"}, 3), DefaultWedge{});
  CHECK_THROWS_AS(sys.reduced_field(std::vector<double>{1.0, 0.0, 0.5}), StructuralSingularity);
  CHECK(sys.gram_determinant(std::vector<double>{1.0, 0.0, 0.5}) == 0.0);
  CHECK_NOTHROW(sys.reduced_field(std::vector<double>{1.0, 1.0, 0.5}));
  try {
    sys.reduced_field(std::vector<double>{1.0, 0.0, 0.5});
  } catch (const StructuralSingularity& e) {
    CHECK(e.gram_determinant() == 0.0);
  }
}

TEST_CASE("property: conservation at arbitrary extended points") {
  std::mt19937_64 rng(47);
  for (const char* name : {"quartic-oscillator", "octic-oscillator", "quartic-ham", "toda3", "nambu-2int"}) {
    CAPTURE(name);
    const ProblemSpec p = builtin(name);
    const ReducedSystem& sys = *p.system;
    for (int k = 0; k < 100; ++k) {
      // Stay near the initial condition so the toda wedge stays regular.
      auto z = sys.tower().lift(p.ic);
      for (auto& v : z) v += std::uniform_real_distribution<double>(-0.2, 0.2)(rng);
      const auto f = sys.reduced_field(z);
      for (std::size_t i = 0; i < sys.m(); ++i) {
        const auto g = sys.total_gradient(i, z);
        CHECK(std::abs(dot(f, g)) <= 1e-10 * std::max(1.0, oracle::max_abs(f) * oracle::max_abs(g)));
      }
    }
  }
}

TEST_CASE("random wedge systems are consistent") {
  // f = grad H1 x grad H2 in three dimensions preserves both integrals.
  std::mt19937_64 rng(53);
  for (int k = 0; k < 10; ++k) {
    const auto H1 = oracle::random_polynomial(rng, 3, 4, 4);
    const auto H2 = oracle::random_polynomial(rng, 3, 4, 4);
    const auto a = H1.gradient();
    const auto b = H2.gradient();
    const std::vector<Polynomial> f{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const ReducedSystem sys(f, {H1, H2}, DefaultWedge{});
    int checked = 0;
    for (int p = 0; p < 20; ++p) {
      const auto x = oracle::random_vec(rng, 3, -1, 1);
      const auto ga = sys.original_gradient(0, x);
      const auto gb = sys.original_gradient(1, x);
      const double scale = dot(ga, ga) * dot(gb, gb);
      if (sys.gram_determinant(x) < 1e-3 * scale) continue;
      const auto expected = sys.eval_original_field(x);
      const auto got = sys.reduced_field(sys.tower().lift(x));
      CHECK(oracle::max_diff(got, expected) <= 1e-10 * std::max(1.0, oracle::max_abs(expected)));
      ++checked;
    }
    CHECK(checked > 0);
  }
}
