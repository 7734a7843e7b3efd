#pragma once

// Skew structures and the reduced-degree vector field.
//
// A ReducedSystem bundles an ODE x' = f(x) on R^n with m < n polynomial first
// integrals, their quadratic reductions over a shared tower, and a skew
// structure that turns total gradients of the reduced integrals back into a
// vector field on the extended space.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "polyint/polynomial.hpp"
#include "polyint/tower.hpp"

namespace polyint {

/// J = [[0, -I], [I, 0]] acting on the total gradient of the first integral.
struct CanonicalJ {};

/// S(x) given entrywise as polynomials in x; acts on the first integral.
struct ExplicitMatrix {
  std::vector<std::vector<Polynomial>> entries;
};

/// The reduced-degree field supplied directly as polynomials in the extended
/// space. The tower passed to the system must already contain every
/// auxiliary variable these polynomials mention.
struct ExplicitField {
  std::vector<Polynomial> components;
};

/// Wedge f ^ grad H_1 ^ ... ^ grad H_m normalized by the Gram determinant of
/// the gradients, built from the original field at the x part of the point.
struct DefaultWedge {
  double singularity_threshold = 1e-10;
};

using SkewStructure = std::variant<CanonicalJ, ExplicitMatrix, ExplicitField, DefaultWedge>;

std::string structure_name(const SkewStructure& s);

/// Raised when the Gram determinant of the integral gradients is too small
/// for the wedge construction.
class StructuralSingularity : public std::runtime_error {
 public:
  StructuralSingularity(double gram_determinant, double threshold);
  double gram_determinant() const { return det_; }

 private:
  double det_;
};

/// Contracts the (m+1)-vector f ^ g_1 ^ ... ^ g_m with m argument vectors:
/// u_i = det[[f_i, <f,a_1>, ..., <f,a_m>], [g1_i, <g1,a_1>, ...], ...] / det Gram(g).
/// With args == grads and f orthogonal to every g this returns f.
std::vector<double> contract_default(std::span<const double> f_val,
                                     const std::vector<std::vector<double>>& grads,
                                     const std::vector<std::vector<double>>& args,
                                     double singularity_threshold = 1e-10);

class ReducedSystem {
 public:
  /// Reduces each integral over `tower` (which may be pre-seeded with
  /// auxiliary variables) and validates the structure against n and m.
  ReducedSystem(std::vector<Polynomial> field, std::vector<Polynomial> integrals,
                SkewStructure structure, const ReductionParams& params = {}, Tower tower = {});

  std::size_t n() const { return n_; }
  std::size_t m() const { return integrals_.size(); }
  std::size_t extended_dim() const { return tower_.dim(); }
  const Tower& tower() const { return tower_; }
  const std::vector<ReducedIntegral>& integrals() const { return integrals_; }
  const SkewStructure& structure() const { return structure_; }
  const std::vector<Polynomial>& original_field() const { return field_; }
  /// Maximum total degree over the components of the original field.
  int field_degree() const;

  void eval_original_field(std::span<const double> x, std::span<double> out) const;
  std::vector<double> eval_original_field(std::span<const double> x) const;

  /// f(x, y) at an extended point z.
  void reduced_field(std::span<const double> z, std::span<double> out) const;
  std::vector<double> reduced_field(std::span<const double> z) const;

  /// grad H_i(x) of the original integral.
  std::vector<double> original_gradient(std::size_t i, std::span<const double> x) const;
  std::vector<double> total_gradient(std::size_t i, std::span<const double> z) const;
  std::vector<double> integral_values(std::span<const double> x) const;

  /// Gram determinant of the original gradients at x (1 for m = 0).
  double gram_determinant(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::vector<Polynomial> field_;
  Tower tower_;
  std::vector<ReducedIntegral> integrals_;
  std::vector<std::vector<Polynomial>> gradients_;  // original, per integral
  SkewStructure structure_;
};

struct VerifyOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 20210601;
  double box = 2.0;  // sample x uniformly in [-box, box]^n
  double tolerance = 1e-10;
};

/// Residuals are scaled: orthogonality by max(1, |f||grad H|), consistency by
/// max(1, |f|_inf), antisymmetry by max(1, max |S_ij|).
struct VerificationReport {
  std::size_t samples = 0;
  double orthogonality = 0.0;  // max_i |f . grad H_i|
  double consistency = 0.0;    // |f(x, y(x)) - f(x)|_inf
  double antisymmetry = 0.0;   // |S + S^T|, explicit matrices only
  std::size_t singular_samples = 0;
  bool pass = false;

  std::string summary() const;
};

VerificationReport verify_system(const ReducedSystem& sys, const VerifyOptions& opts = {});

}  // namespace polyint
