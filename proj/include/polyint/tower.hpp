#pragma once

// Auxiliary-variable tower and reduction of polynomial integrals to
// quadratics in the extended variables.
//
// The extended space orders the n original variables first, followed by the
// auxiliary variables in creation order. Every auxiliary variable is the
// product of two earlier variables, so its lift is a product tree over x.

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyint/polynomial.hpp"

namespace polyint {

struct AuxVar {
  VarId id;
  VarId left;
  VarId right;
  unsigned degree;  // degree of the lift in x
};

class Tower {
 public:
  Tower() = default;
  explicit Tower(std::size_t n) : n_(n) {}

  std::size_t original_dim() const { return n_; }
  std::size_t dim() const { return n_ + aux_.size(); }
  std::span<const AuxVar> aux_vars() const { return aux_; }
  bool is_original(VarId v) const { return v.index < n_; }
  unsigned lift_degree(VarId v) const;

  /// Returns the variable standing for a*b, creating it if the (unordered)
  /// pair has not been seen before.
  VarId product(VarId a, VarId b);
  /// Variable whose lift is the given monomial of degree >= 1, built by the
  /// canonical split (ascending factors, larger half first).
  VarId variable_for(const Monomial& m);

  /// (x, v1, v2, ...) with each auxiliary value the product of its factors.
  std::vector<double> lift(std::span<const double> x) const;
  /// Overwrites the auxiliary entries of an extended point from its x part.
  void lift_in_place(std::span<double> z) const;

  /// Lift of every extended variable as a polynomial in x.
  std::vector<Polynomial> lift_polynomials() const;

  /// Induced quadric integrals v - left*right, one per auxiliary variable,
  /// as polynomials in the extended space.
  std::vector<Polynomial> quadric_integrals() const;

  /// Reverse sweep through the product rule: given partials of some function
  /// with respect to every extended variable (treated as independent), folds
  /// them onto x. `adjoint` has extended length and is consumed.
  void pull_back(std::span<const double> z, std::span<double> adjoint) const;

  std::string describe() const;

 private:
  VarId build_from_factors(std::span<const VarId> factors);

  std::size_t n_ = 0;
  std::vector<AuxVar> aux_;
  std::map<std::pair<VarId, VarId>, VarId> dedup_;
};

/// One alternative representation of a monomial as the product of the tower
/// variables for `left` and `right` (`right` may be the constant monomial, in
/// which case the term becomes linear in a single tower variable).
struct Splitting {
  Monomial left;
  Monomial right;
  double weight = 1.0;
};

/// Overrides of the canonical split for specific monomials. The weights of
/// each monomial's alternatives must sum to one.
struct ReductionParams {
  std::map<Monomial, std::vector<Splitting>, GradedLex> overrides;

  ReductionParams& set(Monomial target, std::vector<Splitting> alternatives);
};

struct ReducedIntegral {
  Polynomial original;  // in x
  Polynomial reduced;   // in the extended space, degree <= 2
  std::vector<Polynomial> partials;  // d(reduced)/dz_k for every extended variable
};

/// Rewrites every monomial of degree >= 3 as a product of at most two tower
/// variables, creating variables on demand. The reduced polynomial lives in
/// the extended space as it stands after the call.
ReducedIntegral reduce(const Polynomial& h, Tower& tower, const ReductionParams& params = {});

/// Re-targets a reduced integral to the (possibly grown) extended space.
ReducedIntegral embed(const ReducedIntegral& r, const Tower& tower);

/// dH~/dx along the tower: partials of the reduced integral at z with every
/// extended variable independent, pulled back through the product rule.
std::vector<double> total_gradient(const Tower& tower, const ReducedIntegral& r,
                                   std::span<const double> z);

struct ConsistencyReport {
  bool pass = false;
  double residual = 0.0;   // max coefficient deviation of H~(x, y(x)) - H
  Polynomial difference;   // H~(x, y(x)) - H, expanded in x
};

ConsistencyReport check_consistency(const Tower& tower, const ReducedIntegral& r,
                                    double rel_tol = 1e-12);

}  // namespace polyint
