#pragma once

// Sparse multivariate polynomials with real coefficients over an indexed
// variable set. Variables are addressed by zero-based VarId internally and
// printed/parsed 1-based ("x1", "x2", ...).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyint {

struct VarId {
  std::uint32_t index = 0;

  constexpr VarId() = default;
  constexpr explicit VarId(std::uint32_t i) : index(i) {}
  constexpr explicit VarId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
  constexpr explicit VarId(int i) : index(static_cast<std::uint32_t>(i)) {}

  friend constexpr auto operator<=>(VarId, VarId) = default;
};

/// Product of variable powers. Factors are kept sorted by variable with
/// strictly positive exponents, so the empty monomial is the constant 1.
class Monomial {
 public:
  struct Factor {
    VarId var;
    std::uint32_t exponent;
    friend constexpr bool operator==(const Factor&, const Factor&) = default;
  };

  Monomial() = default;
  static Monomial var(VarId v, std::uint32_t exponent = 1);
  /// Builds from unsorted (var, exponent) pairs; repeated variables merge and
  /// zero exponents are dropped.
  static Monomial from_pairs(std::vector<std::pair<VarId, std::uint32_t>> pairs);
  /// Builds from a flat multiset of variables, e.g. {x1, x1, x2} -> x1^2*x2.
  static Monomial from_factors(std::span<const VarId> vars);

  std::span<const Factor> factors() const { return factors_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(VarId v) const;
  bool is_constant() const { return factors_.empty(); }
  /// Largest variable index + 1, or 0 for the constant monomial.
  std::size_t min_dim() const;

  /// Flat ascending factor list: x1^2*x2 -> {x1, x1, x2}.
  std::vector<VarId> flatten() const;

  double eval(std::span<const double> point) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
  std::uint32_t degree_ = 0;
};

/// Graded order: lower total degree first; within a degree the monomial with
/// the larger exponent on the lowest-index differing variable comes first.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct Term {
  Monomial monomial;
  double coeff = 0.0;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t dim) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, double c);
  static Polynomial variable(std::size_t dim, VarId v);
  static Polynomial monomial(std::size_t dim, Monomial m, double coeff = 1.0);
  /// Canonicalizes: merges equal monomials and drops exact-zero coefficients.
  static Polynomial from_terms(std::size_t dim, std::vector<Term> terms);

  std::size_t dim() const { return dim_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  double coefficient(const Monomial& m) const;
  double max_abs_coeff() const;

  double eval(std::span<const double> point) const;

  Polynomial partial(VarId v) const;
  /// Partials with respect to the first `count` variables.
  std::vector<Polynomial> gradient(std::size_t count) const;
  std::vector<Polynomial> gradient() const { return gradient(dim_); }

  /// Same polynomial viewed in a space with `dim` >= min required variables.
  Polynomial embedded(std::size_t dim) const;
  Polynomial pow(unsigned exponent) const;

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
  friend Polynomial operator-(Polynomial p) { return p *= -1.0; }
  friend Polynomial operator+(Polynomial p, double c);
  friend Polynomial operator-(Polynomial p, double c) { return std::move(p) + (-c); }

  /// Exact term-map equality (same space, same monomials, identical coefficients).
  friend bool operator==(const Polynomial& p, const Polynomial& q);

 private:
  void check_space(const Polynomial& q) const;

  std::size_t dim_ = 0;
  std::vector<Term> terms_;  // sorted by GradedLex, no zero coefficients
};

Polynomial scale(const Polynomial& p, double s);

/// Largest coefficient deviation between p and q, each measured relative to
/// max(1, |coefficient|).
double max_coeff_deviation(const Polynomial& p, const Polynomial& q);
bool approx_equal(const Polynomial& p, const Polynomial& q, double rel_tol = 1e-12);

/// Replaces bound variables by polynomials in a space of dimension
/// `target_dim`. Unbound variables map to the same-index variable of the
/// target space, which must therefore contain them.
Polynomial substitute(const Polynomial& p, const std::map<VarId, Polynomial>& bindings,
                      std::size_t target_dim);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the polynomial grammar
///   expr   := term (("+"|"-") term)*
///   term   := number ("*" factor)* | factor ("*" factor)*
///   factor := "x" INT ("^" INT)?
/// with 1-based variable indices bounded by `dim`. A leading sign before the
/// first term is accepted. `line`/`column_offset` locate the text inside a
/// larger document for error reporting.
Polynomial parse_polynomial(std::string_view text, std::size_t dim, std::size_t line = 1,
                            std::size_t column_offset = 0);

/// Canonical text: terms in GradedLex order, coefficients with 17 significant
/// digits, unit coefficients omitted. parse_polynomial(to_string(p)) == p.
std::string to_string(const Polynomial& p);

/// Lossless decimal text of a double ("%.17g").
std::string format_real(double v);

}  // namespace polyint
