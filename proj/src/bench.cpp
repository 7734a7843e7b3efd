#include "polyint/bench.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace polyint::bench {

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ProblemSpec& problem,
                          const Method& method, const SolverConfig& cfg) {
  const std::size_t n = problem.n;
  const std::size_t m = problem.integrals.size();
  out << "step,t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",dH" << i;
  out << ",iters\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k << ',' << format_real(traj.times[k]);
    for (double v : traj.states[k]) out << ',' << format_real(v);
    for (double e : traj.integral_errors[k]) out << ',' << format_real(e);
    out << ',' << traj.iterations[k] << '\n';
  }
  out << "# status=" << to_string(traj.status);
  if (!traj.completed()) out << " step=" << traj.failed_step << " reason=\"" << traj.message << '"';
  out << '\n';
  out << "# problem=" << problem.name << " method=" << method.name << " h=" << format_real(traj.h)
      << " steps=" << traj.steps() << '\n';
  out << "# tol=" << format_real(cfg.tolerance) << " max_iter=" << cfg.max_iterations
      << " divergence_bound=" << format_real(cfg.divergence_bound)
      << " relaxation=" << format_real(cfg.relaxation)
      << " min_relaxation=" << format_real(cfg.min_relaxation)
      << " stagnation_ulps=" << format_real(cfg.stagnation_ulps) << '\n';
  out << "# max_abs_dH=" << format_real(traj.max_integral_error()) << '\n';
}

double fit_loglog_slope(const std::vector<double>& hs, const std::vector<double>& errors) {
  if (hs.size() != errors.size() || hs.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two (h, error) pairs");
  }
  const double count = static_cast<double>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const double lx = std::log(hs[k]);
    const double ly = std::log(errors[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

std::optional<double> ConvergenceResult::slope(const std::string& method) const {
  for (const auto& [name, s] : slopes) {
    if (name == method) return s;
  }
  return std::nullopt;
}

namespace {

std::size_t steps_for(double t_end, double h) {
  const double ratio = t_end / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("t-end " + format_real(t_end) + " is not a multiple of h = " + format_real(h));
  }
  return static_cast<std::size_t>(rounded);
}

double max_norm_diff(const State& a, const State& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

ConvergenceResult run_convergence(const ProblemSpec& problem, const std::vector<std::string>& methods,
                                  std::vector<double> hs, const ConvergenceOptions& opts) {
  if (methods.empty() || hs.empty()) throw std::invalid_argument("convergence study needs methods and step sizes");
  std::sort(hs.begin(), hs.end(), std::greater<>());
  const ReducedSystem& sys = *problem.system;

  ConvergenceResult result;
  result.t_end = opts.t_end;
  result.floor = opts.floor;
  result.reference_h = hs.back() / opts.reference_divisor;

  std::vector<Method> parsed;
  for (const auto& name : methods) parsed.push_back(method_from_name(name));
  std::vector<std::size_t> counts;
  for (double h : hs) counts.push_back(steps_for(opts.t_end, h));

  const std::size_t ref_steps = steps_for(opts.t_end, result.reference_h);
  const Trajectory reference =
      integrate(sys, method_from_name("rd-c8"), problem.ic, result.reference_h, ref_steps, opts.solver);
  if (!reference.completed()) {
    throw std::runtime_error("reference run failed: " + reference.message);
  }
  const State& exact = reference.states.back();

  std::vector<std::future<ConvergenceRow>> cells;
  for (const auto& method : parsed) {
    for (std::size_t k = 0; k < hs.size(); ++k) {
      cells.push_back(std::async(std::launch::async, [&, method, k] {
        ConvergenceRow row{method.name, hs[k], counts[k], 0.0, false};
        const Trajectory t = integrate(sys, method, problem.ic, hs[k], counts[k], opts.solver);
        if (t.completed()) {
          row.error = max_norm_diff(t.states.back(), exact);
        } else {
          row.error = std::numeric_limits<double>::quiet_NaN();
          row.failed = true;
        }
        return row;
      }));
    }
  }
  for (auto& c : cells) result.rows.push_back(c.get());

  for (const auto& method : parsed) {
    std::vector<double> fit_h;
    std::vector<double> fit_e;
    for (const auto& row : result.rows) {
      if (row.method == method.name && !row.failed && row.error > opts.floor) {
        fit_h.push_back(row.h);
        fit_e.push_back(row.error);
      }
    }
    std::optional<double> s;
    if (fit_h.size() >= 2) s = fit_loglog_slope(fit_h, fit_e);
    result.slopes.emplace_back(method.name, s);
  }
  return result;
}

void write_convergence_csv(std::ostream& out, const ConvergenceResult& result) {
  out << "method,h,steps,error,slope\n";
  for (const auto& row : result.rows) {
    out << row.method << ',' << format_real(row.h) << ',' << row.steps << ',';
    out << (row.failed ? std::string("nan") : format_real(row.error)) << ',';
    if (auto s = result.slope(row.method)) out << format_real(*s);
    out << '\n';
  }
  for (const auto& row : result.rows) {
    if (row.failed) out << "# failed: method=" << row.method << " h=" << format_real(row.h) << '\n';
  }
  out << "# t_end=" << format_real(result.t_end) << " reference=rd-c8 reference_h="
      << format_real(result.reference_h) << " floor=" << format_real(result.floor) << '\n';
}

std::vector<OrbitRow> run_orbits(const OrbitOptions& opts) {
  const ProblemSpec problem = quartic_ham(0.0);
  const ReducedSystem& sys = *problem.system;

  std::vector<std::future<OrbitRow>> cells;
  for (const auto& name : opts.methods) {
    const Method method = method_from_name(name);
    for (int i = 0; i < opts.count; ++i) {
      cells.push_back(std::async(std::launch::async, [&, method, i] {
        const State x0{2.0 + 2.0 * i / 3.0, 0.0};
        const Trajectory t = integrate(sys, method, x0, opts.h, opts.steps, opts.solver);
        OrbitRow row;
        row.index = i;
        row.method = method.name;
        row.x1 = x0[0];
        row.stable = t.completed();
        row.max_dh = t.max_integral_error();
        row.steps_completed = t.steps();
        row.status = t.status;
        return row;
      }));
    }
  }
  std::vector<OrbitRow> rows;
  for (auto& c : cells) rows.push_back(c.get());
  return rows;
}

void write_orbits_csv(std::ostream& out, const std::vector<OrbitRow>& rows) {
  out << "i,method,x1_0,stable,max_dH,steps_completed,status\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.method << ',' << format_real(r.x1) << ',' << (r.stable ? 1 : 0) << ','
        << format_real(r.max_dh) << ',' << r.steps_completed << ',' << to_string(r.status) << '\n';
  }
}

}  // namespace polyint::bench
