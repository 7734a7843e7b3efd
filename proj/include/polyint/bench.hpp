#pragma once

// Experiment drivers behind the command-line tool: trajectory output,
// convergence studies and the orbit stability sweep.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polyint/problems.hpp"
#include "polyint/stepper.hpp"

namespace polyint::bench {

/// step,t,x1..xn,dH1..dHm,iters followed by '#' footer lines.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ProblemSpec& problem,
                          const Method& method, const SolverConfig& cfg);

/// Least-squares slope of log(error) against log(h).
double fit_loglog_slope(const std::vector<double>& hs, const std::vector<double>& errors);

struct ConvergenceRow {
  std::string method;
  double h = 0.0;
  std::size_t steps = 0;
  double error = 0.0;  // NaN when the run did not complete
  bool failed = false;
};

struct ConvergenceResult {
  double t_end = 0.0;
  double reference_h = 0.0;
  double floor = 0.0;
  std::vector<ConvergenceRow> rows;  // grouped by method in request order, h descending
  /// Slope per method over the completed rows with error above the floor;
  /// empty when fewer than two such rows exist.
  std::vector<std::pair<std::string, std::optional<double>>> slopes;

  std::optional<double> slope(const std::string& method) const;
};

struct ConvergenceOptions {
  double t_end = 1.0;
  /// Errors at or below this are treated as round-off and excluded from fits.
  double floor = 1e-13;
  /// Reference step = min(h) / reference_divisor, integrated with rd-c8.
  double reference_divisor = 50.0;
  SolverConfig solver;
};

/// Terminal max-norm error at t_end for each method and step size, measured
/// against an rd-c8 reference run.
ConvergenceResult run_convergence(const ProblemSpec& problem, const std::vector<std::string>& methods,
                                  std::vector<double> hs, const ConvergenceOptions& opts = {});

void write_convergence_csv(std::ostream& out, const ConvergenceResult& result);

struct OrbitRow {
  int index = 0;
  std::string method;
  double x1 = 0.0;
  bool stable = false;
  double max_dh = 0.0;
  std::size_t steps_completed = 0;
  TrajectoryStatus status = TrajectoryStatus::Completed;
};

struct OrbitOptions {
  int count = 13;  // initial conditions (2 + 2i/3, 0), i = 0..count-1
  double h = 0.1;
  std::size_t steps = 10000;
  std::vector<std::string> methods{"mp2", "avf", "rd-mp2"};
  SolverConfig solver{.max_iterations = 200};
};

/// Sweep of the quartic-ham system (alpha = 0). Rows sorted by method, then i.
std::vector<OrbitRow> run_orbits(const OrbitOptions& opts = {});

void write_orbits_csv(std::ostream& out, const std::vector<OrbitRow>& rows);

}  // namespace polyint::bench
