#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the code under test beyond reading plain data (tower layout, reduced
// polynomial terms, field evaluations).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polyint/polynomial.hpp"
#include "polyint/problems.hpp"
#include "polyint/skewform.hpp"
#include "polyint/tower.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Exps = std::vector<int>;
using Dense = std::map<Exps, double>;
using Field = std::function<Vec(const Vec&)>;

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

inline double max_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (auto& a : v) a = u(rng);
  return v;
}

// --- dense expansion -----------------------------------------------------

/// Exponent vector over x of every extended variable, rebuilt from the
/// factor pairs alone.
inline std::vector<Exps> lift_exponents(const polyint::Tower& t) {
  const std::size_t n = t.original_dim();
  std::vector<Exps> e(t.dim(), Exps(n, 0));
  for (std::size_t i = 0; i < n; ++i) e[i][i] = 1;
  for (const auto& a : t.aux_vars()) {
    for (std::size_t i = 0; i < n; ++i) e[a.id.index][i] = e[a.left.index][i] + e[a.right.index][i];
  }
  return e;
}

inline Dense dense(const polyint::Polynomial& p, std::size_t n) {
  Dense d;
  for (const auto& term : p.terms()) {
    Exps e(n, 0);
    for (const auto& f : term.monomial.factors()) e.at(f.var.index) += static_cast<int>(f.exponent);
    d[e] += term.coeff;
  }
  return d;
}

/// Expands a polynomial over the extended space into x by replacing every
/// extended variable with its lifted monomial.
inline Dense expand(const polyint::Polynomial& reduced, const polyint::Tower& t) {
  const auto lifts = lift_exponents(t);
  const std::size_t n = t.original_dim();
  Dense d;
  for (const auto& term : reduced.terms()) {
    Exps e(n, 0);
    for (const auto& f : term.monomial.factors()) {
      for (std::size_t i = 0; i < n; ++i) e[i] += lifts.at(f.var.index)[i] * static_cast<int>(f.exponent);
    }
    d[e] += term.coeff;
  }
  return d;
}

inline double max_dev(const Dense& a, const Dense& b) {
  double worst = 0.0;
  auto visit = [&](const Dense& p, const Dense& q) {
    for (const auto& [e, c] : p) {
      const auto it = q.find(e);
      const double other = it == q.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(c - other) / std::max({1.0, std::abs(c), std::abs(other)}));
    }
  };
  visit(a, b);
  visit(b, a);
  return worst;
}

/// Random polynomial in n variables with up to `terms` terms of degree
/// <= max_degree and coefficients in [-1, 1].
inline polyint::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree,
                                             int terms) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<polyint::Term> out;
  for (int k = 0; k < terms; ++k) {
    const int d = deg(rng);
    std::vector<polyint::VarId> vars;
    for (int j = 0; j < d; ++j) vars.emplace_back(var(rng));
    out.push_back({polyint::Monomial::from_factors(vars), coeff(rng)});
  }
  return polyint::Polynomial::from_terms(n, std::move(out));
}

// --- implicit one-step oracles --------------------------------------------

/// Plain fixed-point solve of x' = x + h * g(x'), iterated until successive
/// iterates agree to a few ulps and then polished.
inline Vec solve(const Vec& x, double h, const Field& g) {
  Vec cur = x;
  int settled = 0;
  for (int it = 0; it < 5000 && settled < 5; ++it) {
    const Vec inc = g(cur);
    Vec next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + h * inc[i];
    if (max_diff(next, cur) <= 1e-14 * std::max(1.0, max_abs(next))) ++settled;
    cur = std::move(next);
  }
  return cur;
}

inline Vec midpoint(const Field& f, const Vec& x, double h) {
  return solve(x, h, [&](const Vec& guess) {
    Vec mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + guess[i]);
    return f(mid);
  });
}

/// AVF with Simpson's rule, exact for cubic fields.
inline Vec simpson_avf(const Field& f, const Vec& x, double h) {
  return solve(x, h, [&](const Vec& guess) {
    Vec mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + guess[i]);
    const Vec a = f(x);
    const Vec b = f(mid);
    const Vec c = f(guess);
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (a[i] + 4.0 * b[i] + c[i]) / 6.0;
    return out;
  });
}

/// The extended ODE: z' = (f(x, y), d/dt of every auxiliary product), where
/// d(l*r)/dt = z_l * F_r + z_r * F_l. Auxiliary variables only refer to
/// earlier ones, so one forward pass fills F.
inline Vec extended_field(const polyint::ReducedSystem& sys, const Vec& z) {
  Vec F(z.size(), 0.0);
  const Vec fx = sys.reduced_field(z);
  std::copy(fx.begin(), fx.end(), F.begin());
  for (const auto& a : sys.tower().aux_vars()) {
    F[a.id.index] = z[a.left.index] * F[a.right.index] + z[a.right.index] * F[a.left.index];
  }
  return F;
}

inline Vec lift(const polyint::Tower& t, const Vec& x) {
  Vec z(t.dim(), 0.0);
  std::copy(x.begin(), x.end(), z.begin());
  for (const auto& a : t.aux_vars()) z[a.id.index] = z[a.left.index] * z[a.right.index];
  return z;
}

/// Midpoint rule on the extended system from the lifted point, projected to x.
inline Vec projected_extended_midpoint(const polyint::ReducedSystem& sys, const Vec& x, double h) {
  const Vec z0 = lift(sys.tower(), x);
  const Vec z1 = midpoint([&](const Vec& z) { return extended_field(sys, z); }, z0, h);
  return Vec(z1.begin(), z1.begin() + static_cast<std::ptrdiff_t>(x.size()));
}

/// Quartic oscillator written out by hand in the variables (x1, x2, y) with
/// y = x2^2 and H~ = x1^2/2 + y^2/4: x1' = -x2*y, x2' = x1, y' = 2*x2*x1.
inline Vec quartic_extended_midpoint(const Vec& x, double h) {
  const Field F = [](const Vec& z) { return Vec{-z[1] * z[2], z[0], 2.0 * z[1] * z[0]}; };
  const Vec z1 = midpoint(F, {x[0], x[1], x[1] * x[1]}, h);
  return {z1[0], z1[1]};
}

// --- random systems --------------------------------------------------------

/// f = J * M * x for symmetric M, so Q = x^T M x / 2 is a quadratic invariant.
struct QuadraticSystem {
  std::size_t n = 0;
  std::vector<Vec> M;

  double Q(const Vec& x) const {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += 0.5 * x[i] * M[i][j] * x[j];
    return q;
  }
  Vec f(const Vec& x) const {
    const std::size_t half = n / 2;
    Vec g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g[i] += M[i][j] * x[j];
    Vec out(n);
    for (std::size_t i = 0; i < half; ++i) {
      out[i] = -g[half + i];
      out[half + i] = g[i];
    }
    return out;
  }
};

inline QuadraticSystem random_quadratic_system(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QuadraticSystem s{n, std::vector<Vec>(n, Vec(n))};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s.M[i][j] = s.M[j][i] = u(rng);
  return s;
}

/// General planar quartic H = sum a_k m_k over the 14 monomials of degree 1..4,
/// ordered x1, x2, x1^2, x1x2, x2^2, x1^3, x1^2x2, x1x2^2, x2^3, x1^4, ...
struct PlanarQuartic {
  std::array<double, 14> a{};

  double H(const Vec& x) const {
    const double p = x[0], q = x[1];
    return a[0] * p + a[1] * q + a[2] * p * p + a[3] * p * q + a[4] * q * q + a[5] * p * p * p +
           a[6] * p * p * q + a[7] * p * q * q + a[8] * q * q * q + a[9] * p * p * p * p +
           a[10] * p * p * p * q + a[11] * p * p * q * q + a[12] * p * q * q * q + a[13] * q * q * q * q;
  }
  /// (-dH/dx2, dH/dx1).
  Vec f(const Vec& x) const {
    const double p = x[0], q = x[1];
    const double hp = a[0] + 2 * a[2] * p + a[3] * q + 3 * a[5] * p * p + 2 * a[6] * p * q + a[7] * q * q +
                      4 * a[9] * p * p * p + 3 * a[10] * p * p * q + 2 * a[11] * p * q * q + a[12] * q * q * q;
    const double hq = a[1] + a[3] * p + 2 * a[4] * q + a[6] * p * p + 2 * a[7] * p * q + 3 * a[8] * q * q +
                      a[10] * p * p * p + 2 * a[11] * p * p * q + 3 * a[12] * p * q * q + 4 * a[13] * q * q * q;
    return {-hq, hp};
  }
  std::string text() const {
    static const char* mons[14] = {"x1",       "x2",       "x1^2",     "x1*x2",    "x2^2",
                                   "x1^3",     "x1^2*x2",  "x1*x2^2",  "x2^3",     "x1^4",
                                   "x1^3*x2",  "x1^2*x2^2", "x1*x2^3", "x2^4"};
    std::string s;
    for (int k = 0; k < 14; ++k) {
      s += a[k] < 0 ? " - " : (k ? " + " : "");
      s += polyint::format_real(std::abs(a[k])) + "*" + mons[k];
    }
    return s;
  }
};

inline PlanarQuartic random_planar_quartic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PlanarQuartic p;
  for (auto& c : p.a) c = u(rng);
  return p;
}

}  // namespace oracle
