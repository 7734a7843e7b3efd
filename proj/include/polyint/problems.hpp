#pragma once

// Built-in example systems and the line-oriented problem-file format.
//
//   # comment
//   name = quartic
//   dim = 2
//   field = -x2^3; x1
//   integral = 0.5*x1^2 + 0.25*x2^4
//   structure = canonical        # or: wedge
//   ic = 1, 1
//   h = 0.1

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyint/skewform.hpp"
#include "polyint/stepper.hpp"

namespace polyint {

struct ProblemSpec {
  std::string name;
  std::string description;
  std::size_t n = 0;
  std::vector<Polynomial> field;
  std::vector<Polynomial> integrals;
  std::shared_ptr<const ReducedSystem> system;
  State ic;
  double h = 0.1;
  VerificationReport verification;
};

/// Problem could not be assembled or failed verification.
class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> builtin_names();
/// quartic-oscillator, octic-oscillator, quartic-ham, nambu-2int, toda3.
ProblemSpec builtin(const std::string& name);
/// The quartic-ham system with reduction parameter alpha: the x1^2*x2^2 term
/// becomes alpha*y11*y22 + (1 - alpha)*y12^2.
ProblemSpec quartic_ham(double alpha);

/// The Nambu example's original field, written out as in its factored form.
std::vector<Polynomial> nambu_original_field();

ProblemSpec parse_problem(std::string_view text, const std::string& origin = "<string>");
ProblemSpec load_problem(const std::string& path);

/// Builtin name or path to a problem file.
ProblemSpec resolve_problem(const std::string& name_or_path);

}  // namespace polyint
