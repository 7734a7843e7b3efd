// polyint: integral-preserving integration of polynomial ODEs.
//
//   polyint list
//   polyint check    --problem <name|file> [--samples N] [--seed S]
//   polyint run      --problem <name|file> --method <m> [--h H] [--steps N] [--x0 a,b,..]
//                    [--out file.csv] [--tol T] [--max-iter K] [--relaxation w]
//   polyint converge --problem <name|file> [--methods m1,m2,..] [--h-list h1,h2,..]
//                    [--t-end T] [--out file.csv]
//   polyint orbits   [--out file.csv] [--steps N]
//
// Exit codes: 0 success, 1 failed run/check, 2 usage error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "polyint/bench.hpp"
#include "polyint/problems.hpp"

namespace {

using namespace polyint;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    stream = &file;
  }
  std::ostream& operator*() { return *stream; }
};

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--tol", cfg.tolerance, "Fixed-point absolute tolerance (max-norm)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", cfg.max_iterations, "Fixed-point iteration limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--divergence-bound", cfg.divergence_bound, "State norm treated as blow-up")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--relaxation", cfg.relaxation, "Damping factor in (0, 1]")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--min-relaxation", cfg.min_relaxation,
                  "Retry failed solves with halved relaxation down to this value")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--stagnation-ulps", cfg.stagnation_ulps,
                  "Accept stalled iterates within this many ulps (0 = strict tolerance)")
      ->check(CLI::NonNegativeNumber);
}

int cmd_list() {
  for (const auto& name : builtin_names()) {
    const ProblemSpec p = builtin(name);
    std::cout << name << "\tn=" << p.n << " m=" << p.integrals.size()
              << " structure=" << structure_name(p.system->structure()) << "\t" << p.description << '\n';
  }
  return 0;
}

int cmd_check(const std::string& problem, const VerifyOptions& opts) {
  ProblemSpec p;
  try {
    p = resolve_problem(problem);
  } catch (const ProblemError& e) {
    std::cout << "FAIL  " << e.what() << '\n';
    return kExitFailure;
  } catch (const ParseError& e) {
    std::cout << "FAIL  " << problem << ": " << e.what() << '\n';
    return kExitFailure;
  }
  const VerificationReport report = verify_system(*p.system, opts);
  std::cout << p.name << ": " << report.summary() << '\n';
  if (std::holds_alternative<DefaultWedge>(p.system->structure())) {
    std::cout << "gram_determinant_at_ic=" << format_real(p.system->gram_determinant(p.ic)) << '\n';
  }
  std::cout << p.system->tower().describe();
  return report.pass ? 0 : kExitFailure;
}

int cmd_run(const std::string& problem, const std::string& method_name, std::optional<double> h,
            std::size_t steps, const std::vector<double>& x0, const std::string& out,
            const SolverConfig& cfg) {
  const ProblemSpec p = resolve_problem(problem);
  const Method method = method_from_name(method_name);
  State start = x0.empty() ? p.ic : State(x0);
  if (start.size() != p.n) {
    std::cerr << "--x0 needs " << p.n << " values\n";
    return kExitUsage;
  }
  const Trajectory traj = integrate(*p.system, method, start, h.value_or(p.h), steps, cfg);
  Output o(out);
  bench::write_trajectory_csv(*o, traj, p, method, cfg);
  if (!traj.completed()) {
    std::cerr << "run " << to_string(traj.status) << " at step " << traj.failed_step << ": "
              << traj.message << '\n';
    return kExitFailure;
  }
  return 0;
}

int cmd_converge(const std::string& problem, const std::vector<std::string>& methods,
                 const std::vector<double>& hs, const bench::ConvergenceOptions& opts,
                 const std::string& out) {
  const ProblemSpec p = resolve_problem(problem);
  const auto result = bench::run_convergence(p, methods, hs, opts);
  Output o(out);
  bench::write_convergence_csv(*o, result);
  for (const auto& row : result.rows) {
    if (row.failed) return kExitFailure;
  }
  return 0;
}

int cmd_orbits(const bench::OrbitOptions& opts, const std::string& out) {
  const auto rows = bench::run_orbits(opts);
  Output o(out);
  bench::write_orbits_csv(*o, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral-preserving integration of polynomial ODEs"};
  app.require_subcommand(1);
  // "-h" is reserved for the step size.
  app.set_help_flag("--help", "Print this help message and exit");

  auto* list = app.add_subcommand("list", "List builtin problems");

  std::string problem;
  VerifyOptions verify;
  auto* check = app.add_subcommand("check", "Verify a problem's integrals and reduced field");
  check->add_option("--problem", problem, "Builtin name or problem file")->required();
  check->add_option("--samples", verify.samples, "Random sample points");
  check->add_option("--seed", verify.seed, "Sampling seed");
  check->add_option("--box", verify.box, "Sample box half-width")->check(CLI::PositiveNumber);
  check->add_option("--tolerance", verify.tolerance, "Residual tolerance")->check(CLI::PositiveNumber);

  std::string method = "rd-mp2";
  std::optional<double> h;
  std::size_t steps = 1000;
  std::vector<double> x0;
  std::string out;
  SolverConfig cfg;
  auto* run = app.add_subcommand("run", "Integrate one trajectory and write CSV");
  run->add_option("--problem", problem, "Builtin name or problem file")->required();
  run->add_option("--method", method, "mp2|rd-mp2|disrk4|rd-disrk4|disrk6|rd-disrk6|c8|rd-c8|avf")
      ->check(CLI::IsMember(method_names()));
  run->add_option("--h", h, "Step size (default: problem's)");
  run->add_option("--steps", steps, "Number of steps");
  run->add_option("--x0", x0, "Initial condition")->delimiter(',');
  run->add_option("--out", out, "CSV output path (default stdout)");
  add_solver_flags(run, cfg);

  std::vector<std::string> methods{"mp2", "rd-mp2", "disrk4", "rd-disrk4",
                                   "disrk6", "rd-disrk6", "c8", "rd-c8"};
  std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  bench::ConvergenceOptions conv;
  auto* converge = app.add_subcommand("converge", "Terminal-error convergence study");
  converge->add_option("--problem", problem, "Builtin name or problem file")->required();
  converge->add_option("--methods", methods, "Methods to compare")
      ->delimiter(',')
      ->check(CLI::IsMember(method_names()));
  converge->add_option("--h-list", hs, "Step sizes")->delimiter(',')->check(CLI::PositiveNumber);
  converge->add_option("--t-end", conv.t_end, "Final time")->check(CLI::PositiveNumber);
  converge->add_option("--floor", conv.floor, "Round-off floor excluded from slope fits");
  converge->add_option("--out", out, "CSV output path (default stdout)");
  add_solver_flags(converge, conv.solver);

  bench::OrbitOptions orbit;
  auto* orbits = app.add_subcommand("orbits", "Stability sweep on the quartic Hamiltonian system");
  orbits->add_option("--steps", orbit.steps, "Steps per orbit");
  orbits->add_option("--h", orbit.h, "Step size")->check(CLI::PositiveNumber);
  orbits->add_option("--out", out, "CSV output path (default stdout)");
  add_solver_flags(orbits, orbit.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*check) return cmd_check(problem, verify);
    if (*run) return cmd_run(problem, method, h, steps, x0, out, cfg);
    if (*converge) return cmd_converge(problem, methods, hs, conv, out);
    if (*orbits) return cmd_orbits(orbit, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
