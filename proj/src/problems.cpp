#include "polyint/problems.hpp"

#include <algorithm>
#include <filesystem>

namespace polyint {

namespace {

/// Variables x1..xn of an n-dimensional space, 0-based.
struct Vars {
  std::size_t dim;
  Polynomial operator[](std::size_t i) const { return Polynomial::variable(dim, VarId{i}); }
  Polynomial c(double v) const { return Polynomial::constant(dim, v); }
};

Monomial mono(std::initializer_list<std::pair<std::size_t, std::uint32_t>> pairs) {
  std::vector<std::pair<VarId, std::uint32_t>> v;
  for (const auto& [i, e] : pairs) v.emplace_back(VarId{i}, e);
  return Monomial::from_pairs(std::move(v));
}

ProblemSpec finish(ProblemSpec spec, SkewStructure structure, const ReductionParams& params = {},
                   Tower tower = {}) {
  spec.n = spec.field.size();
  spec.system = std::make_shared<const ReducedSystem>(spec.field, spec.integrals, std::move(structure),
                                                      params, std::move(tower));
  spec.verification = verify_system(*spec.system);
  if (!spec.verification.pass) {
    throw ProblemError("problem '" + spec.name + "' failed verification: " + spec.verification.summary());
  }
  return spec;
}

ProblemSpec quartic_oscillator() {
  const Vars x{2};
  ProblemSpec p;
  p.name = "quartic-oscillator";
  p.description = "H = x1^2/2 + x2^4/4, canonical structure";
  p.field = {-(x[1].pow(3)), x[0]};
  p.integrals = {0.5 * x[0].pow(2) + 0.25 * x[1].pow(4)};
  p.ic = {1.0, 1.0};
  p.h = 0.1;
  return finish(std::move(p), CanonicalJ{});
}

ProblemSpec octic_oscillator() {
  const Vars x{2};
  ProblemSpec p;
  p.name = "octic-oscillator";
  p.description = "H = x1^2/2 + x2^8/8, canonical structure";
  p.field = {-(x[1].pow(7)), x[0]};
  p.integrals = {0.5 * x[0].pow(2) + 0.125 * x[1].pow(8)};
  p.ic = {1.0, 1.0};
  p.h = 0.1;
  return finish(std::move(p), CanonicalJ{});
}

ProblemSpec nambu_2int() {
  const Vars x{3};
  ProblemSpec p;
  p.name = "nambu-2int";
  p.description = "three-dimensional system with integrals of degree 8 and 4, explicit reduced field";
  p.field = nambu_original_field();
  p.integrals = {x[0].pow(4) * x[1].pow(4) + x[0] * x[2] + x[1].pow(4) * x[2].pow(2),
                 (x[1].pow(2) - 1.0) * (x[0].pow(2) + x[1].pow(2) + x[2].pow(2))};
  p.ic = {0.5, 0.5, 0.5};
  p.h = 0.05;

  Tower tower(3);
  const VarId y11 = tower.product(VarId{0}, VarId{0});
  const VarId y22 = tower.product(VarId{1}, VarId{1});
  const VarId y33 = tower.product(VarId{2}, VarId{2});
  const VarId y13 = tower.product(VarId{0}, VarId{2});
  const VarId y1111 = tower.product(y11, y11);
  const VarId y2222 = tower.product(y22, y22);

  const Vars z{tower.dim()};
  const Polynomial x1 = z[0], x2 = z[1], x3 = z[2];
  const Polynomial Y11 = z[y11.index], Y22 = z[y22.index], Y33 = z[y33.index];
  const Polynomial Y1111 = z[y1111.index], Y2222 = z[y2222.index];
  (void)y13;

  const Polynomial a = Y33 + Y1111;
  const Polynomial b = x1 + 2.0 * x3 * Y2222;
  const Polynomial c = Y11 + 2.0 * Y22 + Y33 - 1.0;
  const Polynomial d = x3 + 4.0 * x1 * Y11 * Y2222;
  const Polynomial e = Y22 - 1.0;
  ExplicitField reduced_field{{
      8.0 * x2 * x3 * Y22 * a * e - 2.0 * x2 * b * c,
      2.0 * x1 * b * e - 2.0 * x3 * d * e,
      2.0 * x2 * d * c - 8.0 * x1 * x2 * Y22 * a * e,
  }};

  // x2^4 x3^2 -> y2222*y33; quadratic terms become the level-one variables.
  ReductionParams params;
  params.set(mono({{1, 4}, {2, 2}}), {{mono({{1, 4}}), mono({{2, 2}}), 1.0}});
  params.set(mono({{0, 1}, {2, 1}}), {{mono({{0, 1}, {2, 1}}), Monomial{}, 1.0}});
  for (std::size_t i = 0; i < 3; ++i) params.set(mono({{i, 2}}), {{mono({{i, 2}}), Monomial{}, 1.0}});

  return finish(std::move(p), std::move(reduced_field), params, std::move(tower));
}

ProblemSpec toda3() {
  const Vars x{6};
  const Polynomial a1 = x[0], a2 = x[1], a3 = x[2], b1 = x[3], b2 = x[4], b3 = x[5];
  ProblemSpec p;
  p.name = "toda3";
  p.description = "periodic Toda lattice, N = 3, four integrals, wedge structure";
  p.field = {a1 * (b2 - b1), a2 * (b3 - b2), a3 * (b1 - b3), a1 - a3, a2 - a1, a3 - a2};
  p.integrals = {
      b1 + b2 + b3,
      a1 * a2 * a3,
      (1.0 / 3.0) * (b3.pow(3) + b1.pow(3) + b2.pow(3)) + a1 * b1 + a2 * b2 + a3 * b3 + a1 * b2 +
          a2 * b3 + a3 * b1,
      0.5 * (b1.pow(2) + b2.pow(2) + b3.pow(2)) + a1 + a2 + a3,
  };
  p.ic = {1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6, 6.0 / 6};
  p.h = 0.1;
  return finish(std::move(p), DefaultWedge{});
}

}  // namespace

std::vector<Polynomial> nambu_original_field() {
  const Vars x{3};
  const Polynomial x1 = x[0], x2 = x[1], x3 = x[2];
  const Polynomial a = x1.pow(4) + x3.pow(2);
  const Polynomial b = 2.0 * x3 * x2.pow(4) + x1;
  const Polynomial c = x1.pow(2) + 2.0 * x2.pow(2) + x3.pow(2) - 1.0;
  const Polynomial d = 4.0 * x1.pow(3) * x2.pow(4) + x3;
  const Polynomial e = x2.pow(2) - 1.0;
  return {
      8.0 * x2.pow(3) * x3 * a * e - 2.0 * x2 * b * c,
      2.0 * x1 * e * b - 2.0 * x3 * e * d,
      2.0 * x2 * d * c - 8.0 * x1 * x2.pow(3) * a * e,
  };
}

ProblemSpec quartic_ham(double alpha) {
  const Vars x{2};
  ProblemSpec p;
  p.name = "quartic-ham";
  p.description = "H = x1^2/2 + x2^4 + x1^2 x2^2, canonical structure";
  p.field = {-2.0 * x[0].pow(2) * x[1] - 4.0 * x[1].pow(3), 2.0 * x[0] * x[1].pow(2) + x[0]};
  p.integrals = {0.5 * x[0].pow(2) + x[1].pow(4) + x[0].pow(2) * x[1].pow(2)};
  p.ic = {2.0, 0.0};
  p.h = 0.1;

  ReductionParams params;
  std::vector<Splitting> alternatives;
  if (alpha != 0.0) alternatives.push_back({mono({{0, 2}}), mono({{1, 2}}), alpha});
  if (alpha != 1.0) alternatives.push_back({mono({{0, 1}, {1, 1}}), mono({{0, 1}, {1, 1}}), 1.0 - alpha});
  params.set(mono({{0, 2}, {1, 2}}), std::move(alternatives));
  return finish(std::move(p), CanonicalJ{}, params);
}

std::vector<std::string> builtin_names() {
  return {"quartic-oscillator", "octic-oscillator", "quartic-ham", "nambu-2int", "toda3"};
}

ProblemSpec builtin(const std::string& name) {
  if (name == "quartic-oscillator") return quartic_oscillator();
  if (name == "octic-oscillator") return octic_oscillator();
  if (name == "quartic-ham") return quartic_ham(0.0);
  if (name == "nambu-2int") return nambu_2int();
  if (name == "toda3") return toda3();
  throw ProblemError("unknown builtin problem '" + name + "'");
}

ProblemSpec resolve_problem(const std::string& name_or_path) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_problem(name_or_path);
  throw ProblemError("'" + name_or_path + "' is neither a builtin problem nor a readable file");
}

}  // namespace polyint
