#pragma once

// Implicit one-step methods: the reduced-degree midpoint rule, the standard
// midpoint rule, the averaged vector field method, and compositions of these
// with sub-steps b_1 h, ..., b_s h.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyint/skewform.hpp"

namespace polyint {

using State = std::vector<double>;

/// Right-hand side f evaluated into `out`.
using FieldFn = std::function<void(std::span<const double> x, std::span<double> out)>;

struct SolverConfig {
  double tolerance = 1.11e-15;     // successive-iterate max-norm
  int max_iterations = 100;
  double divergence_bound = 1e8;   // iterate/state max-norm deemed blow-up
  double relaxation = 1.0;         // 1 = plain fixed point, < 1 damped
  /// A failed solve is retried with the relaxation halved while it stays at
  /// or above this value. 1 disables retries.
  double min_relaxation = 0.125;
  /// Also accept the iterate once the smallest successive difference seen is
  /// within stagnation_ulps * eps * max(1, |x'|_inf) and has not improved
  /// for four iterations. 0 enforces the tolerance strictly.
  double stagnation_ulps = 64.0;

  void validate() const;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { NonConvergence, Divergence };

  SolverError(Kind kind, const std::string& what, int substep = -1);
  Kind kind() const { return kind_; }
  /// Index of the failing sub-step inside a composition, -1 otherwise.
  int substep() const { return substep_; }

 private:
  Kind kind_;
  int substep_;
};

struct StepResult {
  State x;
  int iterations = 0;
};

/// Solves x' = x + h * F(x, x') by fixed-point iteration from x' = x.
/// `increment` writes F(x, guess) into its output.
StepResult solve_fixed_point(std::span<const double> x, double h,
                             const std::function<void(std::span<const double>, std::span<double>)>& increment,
                             const SolverConfig& cfg);

/// (x' - x)/h = f((x + x')/2, (y(x) + y(x'))/2) with f the reduced field.
StepResult rd_midpoint_step(const ReducedSystem& sys, std::span<const double> x, double h,
                            const SolverConfig& cfg = {});

/// (x' - x)/h = f((x + x')/2).
StepResult midpoint_step(const FieldFn& f, std::span<const double> x, double h,
                         const SolverConfig& cfg = {});

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(std::size_t points);

/// Number of Gauss-Legendre points integrating a degree-d polynomial exactly.
std::size_t avf_points_for_degree(int degree);

/// (x' - x)/h = integral_0^1 f((1 - s) x + s x') ds, quadrature exact for
/// polynomial f of the given degree. `points` = 0 picks the minimal rule.
StepResult avf_step(const FieldFn& f, int field_degree, std::span<const double> x, double h,
                    const SolverConfig& cfg = {}, std::size_t points = 0);

enum class BaseMethod { Midpoint, ReducedMidpoint, Avf };

struct Method {
  std::string name;
  BaseMethod base = BaseMethod::ReducedMidpoint;
  std::vector<double> coefficients{1.0};
  int order = 2;
};

namespace coefficients {
std::vector<double> disrk4();
std::vector<double> disrk6();
std::vector<double> c8();
}  // namespace coefficients

/// mp2, rd-mp2, disrk4, rd-disrk4, disrk6, rd-disrk6, c8, rd-c8, avf.
Method method_from_name(const std::string& name);
std::vector<std::string> method_names();

using StepFn = std::function<StepResult(std::span<const double> x, double h)>;

/// Phi_{b_s h} o ... o Phi_{b_1 h}. A failing sub-step aborts the whole step
/// and is reported with its index.
StepResult compose_step(const StepFn& base, std::span<const double> coeffs,
                        std::span<const double> x, double h);

/// One step of `method` on `sys`.
StepResult step(const ReducedSystem& sys, const Method& method, std::span<const double> x,
                double h, const SolverConfig& cfg = {});

enum class TrajectoryStatus { Completed, Diverged, SolverFailure };
std::string to_string(TrajectoryStatus s);

struct Trajectory {
  double h = 0.0;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<std::vector<double>> integral_errors;  // H_i(x_k) - H_i(x_0)
  std::vector<int> iterations;                       // solver iterations per step
  TrajectoryStatus status = TrajectoryStatus::Completed;
  std::size_t failed_step = 0;  // step index that failed, when not completed
  std::string message;

  bool completed() const { return status == TrajectoryStatus::Completed; }
  double max_integral_error() const;
  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

Trajectory integrate(const ReducedSystem& sys, const Method& method, std::span<const double> x0,
                     double h, std::size_t steps, const SolverConfig& cfg = {});

}  // namespace polyint
