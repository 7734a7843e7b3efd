#include "polyint/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace polyint {

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("solver needs at least one iteration");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) {
    throw std::invalid_argument("relaxation factor must lie in (0, 1]");
  }
  if (!(min_relaxation > 0.0)) throw std::invalid_argument("minimum relaxation must be positive");
  if (!(divergence_bound > 0.0)) throw std::invalid_argument("divergence bound must be positive");
  if (!(stagnation_ulps >= 0.0)) throw std::invalid_argument("stagnation_ulps must be non-negative");
}

SolverError::SolverError(Kind kind, const std::string& what, int substep)
    : std::runtime_error(what), kind_(kind), substep_(substep) {}

namespace {

constexpr int kStallWindow = 4;

StepResult fixed_point_pass(std::span<const double> x, double h,
                            const std::function<void(std::span<const double>, std::span<double>)>& increment,
                            const SolverConfig& cfg, int& used) {
  const std::size_t n = x.size();
  State guess(x.begin(), x.end());
  State next(n);
  State f(n);
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    used = it;
    increment(guess, f);
    double diff = 0.0;
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = x[i] + h * f[i];
      if (cfg.relaxation != 1.0) v = guess[i] + cfg.relaxation * (v - guess[i]);
      next[i] = v;
      diff = std::max(diff, std::abs(v - guess[i]));
      size = std::max(size, std::abs(v));
    }
    if (!std::isfinite(size) || !std::isfinite(diff) || size > cfg.divergence_bound) {
      throw SolverError(SolverError::Kind::Divergence,
                        "fixed-point iterate diverged at iteration " + std::to_string(it));
    }
    guess.swap(next);
    if (diff <= cfg.tolerance) return {std::move(guess), it};
    const double floor = cfg.stagnation_ulps * std::numeric_limits<double>::epsilon() * std::max(1.0, size);
    if (diff < best) {
      best = diff;
      stalled = 0;
    } else if (++stalled >= kStallWindow && best <= floor) {
      return {std::move(guess), it};
    }
  }
  throw SolverError(SolverError::Kind::NonConvergence,
                    "fixed-point iteration did not converge in " +
                        std::to_string(cfg.max_iterations) + " iterations");
}

}  // namespace

StepResult solve_fixed_point(std::span<const double> x, double h,
                             const std::function<void(std::span<const double>, std::span<double>)>& increment,
                             const SolverConfig& cfg) {
  SolverConfig pass = cfg;
  int spent = 0;
  for (;;) {
    int used = 0;
    try {
      StepResult r = fixed_point_pass(x, h, increment, pass, used);
      r.iterations += spent;
      return r;
    } catch (const SolverError&) {
      if (pass.relaxation * 0.5 < cfg.min_relaxation) throw;
      spent += used;
      pass.relaxation *= 0.5;
    }
  }
}

StepResult rd_midpoint_step(const ReducedSystem& sys, std::span<const double> x, double h,
                            const SolverConfig& cfg) {
  const Tower& tower = sys.tower();
  const std::size_t n = sys.n();
  const State z0 = tower.lift(x);
  State z1(tower.dim());
  State mid(tower.dim());
  auto increment = [&](std::span<const double> guess, std::span<double> out) {
    std::copy(guess.begin(), guess.end(), z1.begin());
    tower.lift_in_place(z1);
    for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (z0[k] + z1[k]);
    sys.reduced_field(mid, out.first(n));
  };
  return solve_fixed_point(x, h, increment, cfg);
}

StepResult midpoint_step(const FieldFn& f, std::span<const double> x, double h,
                         const SolverConfig& cfg) {
  State mid(x.size());
  auto increment = [&](std::span<const double> guess, std::span<double> out) {
    for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (x[k] + guess[k]);
    f(mid, out);
  };
  return solve_fixed_point(x, h, increment, cfg);
}

Quadrature gauss_legendre(std::size_t points) {
  if (points == 0) throw std::invalid_argument("quadrature needs at least one point");
  if (points == 1) return {{0.5}, {1.0}};
  Quadrature q;
  q.nodes.resize(points);
  q.weights.resize(points);
  const double n = static_cast<double>(points);
  for (std::size_t i = 0; i < (points + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double t = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = t;
      for (std::size_t k = 2; k <= points; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * t * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // Map [-1, 1] to [0, 1]; nodes ascending.
    q.nodes[i] = 0.5 * (1.0 - t);
    q.nodes[points - 1 - i] = 0.5 * (1.0 + t);
    q.weights[i] = 0.5 * w;
    q.weights[points - 1 - i] = 0.5 * w;
  }
  return q;
}

std::size_t avf_points_for_degree(int degree) {
  return static_cast<std::size_t>(std::max(1, (degree + 2) / 2));
}

StepResult avf_step(const FieldFn& f, int field_degree, std::span<const double> x, double h,
                    const SolverConfig& cfg, std::size_t points) {
  const Quadrature q = gauss_legendre(points == 0 ? avf_points_for_degree(field_degree) : points);
  const std::size_t n = x.size();
  State node(n);
  State value(n);
  auto increment = [&](std::span<const double> guess, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      const double c = q.nodes[k];
      for (std::size_t i = 0; i < n; ++i) node[i] = (1.0 - c) * x[i] + c * guess[i];
      f(node, value);
      for (std::size_t i = 0; i < n; ++i) out[i] += q.weights[k] * value[i];
    }
  };
  return solve_fixed_point(x, h, increment, cfg);
}

namespace coefficients {

namespace {

std::vector<double> palindrome(std::vector<double> half) {
  std::vector<double> full = half;
  for (auto it = half.rbegin() + 1; it != half.rend(); ++it) full.push_back(*it);
  return full;
}

}  // namespace

std::vector<double> disrk4() {
  const double b1 = (std::cbrt(2.0) + 1.0 / std::cbrt(2.0) + 2.0) / 3.0;
  return {b1, 1.0 - 2.0 * b1, b1};
}

std::vector<double> disrk6() {
  return palindrome({0.6152247129651358, -0.9769283017304923, 0.7756222228585488,
                     1.1870793818191547, -1.1292359636503542, 0.05647589547601459});
}

std::vector<double> c8() {
  return palindrome({0.7416703643506129, -0.4091008258000315, 0.1907547102962383,
                     -0.5738624711160822, 0.2990641813036559, 0.3346249182452981,
                     0.3152930923967665, -0.7968879393529163});
}

}  // namespace coefficients

Method method_from_name(const std::string& name) {
  const bool reduced = name.starts_with("rd-");
  const std::string core = reduced ? name.substr(3) : name;
  Method m;
  m.name = name;
  m.base = reduced ? BaseMethod::ReducedMidpoint : BaseMethod::Midpoint;
  if (core == "mp2") {
    m.coefficients = {1.0};
    m.order = 2;
  } else if (core == "disrk4") {
    m.coefficients = coefficients::disrk4();
    m.order = 4;
  } else if (core == "disrk6") {
    m.coefficients = coefficients::disrk6();
    m.order = 6;
  } else if (core == "c8") {
    m.coefficients = coefficients::c8();
    m.order = 8;
  } else if (core == "avf" && !reduced) {
    m.base = BaseMethod::Avf;
    m.coefficients = {1.0};
    m.order = 2;
  } else {
    throw std::invalid_argument("unknown method '" + name + "'");
  }
  return m;
}

std::vector<std::string> method_names() {
  return {"mp2", "rd-mp2", "disrk4", "rd-disrk4", "disrk6", "rd-disrk6", "c8", "rd-c8", "avf"};
}

StepResult compose_step(const StepFn& base, std::span<const double> coeffs,
                        std::span<const double> x, double h) {
  const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  if (coeffs.empty() || std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("composition coefficients must sum to one");
  }
  StepResult result{State(x.begin(), x.end()), 0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    try {
      StepResult sub = base(result.x, coeffs[k] * h);
      result.x = std::move(sub.x);
      result.iterations += sub.iterations;
    } catch (const SolverError& e) {
      if (coeffs.size() == 1) throw;
      throw SolverError(e.kind(), "sub-step " + std::to_string(k + 1) + ": " + e.what(),
                        static_cast<int>(k));
    }
  }
  return result;
}

namespace {

FieldFn original_field_fn(const ReducedSystem& sys) {
  return [&sys](std::span<const double> x, std::span<double> out) { sys.eval_original_field(x, out); };
}

StepFn base_step(const ReducedSystem& sys, const Method& method, const SolverConfig& cfg) {
  switch (method.base) {
    case BaseMethod::ReducedMidpoint:
      return [&sys, &cfg](std::span<const double> x, double h) { return rd_midpoint_step(sys, x, h, cfg); };
    case BaseMethod::Midpoint:
      return [&sys, &cfg, f = original_field_fn(sys)](std::span<const double> x, double h) {
        return midpoint_step(f, x, h, cfg);
      };
    case BaseMethod::Avf:
      return [&sys, &cfg, f = original_field_fn(sys)](std::span<const double> x, double h) {
        return avf_step(f, sys.field_degree(), x, h, cfg);
      };
  }
  throw std::logic_error("unhandled base method");
}

}  // namespace

StepResult step(const ReducedSystem& sys, const Method& method, std::span<const double> x, double h,
                const SolverConfig& cfg) {
  return compose_step(base_step(sys, method, cfg), method.coefficients, x, h);
}

std::string to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::Diverged: return "diverged";
    case TrajectoryStatus::SolverFailure: return "solver-failure";
  }
  return "unknown";
}

double Trajectory::max_integral_error() const {
  double worst = 0.0;
  for (const auto& row : integral_errors) {
    for (double e : row) worst = std::max(worst, std::abs(e));
  }
  return worst;
}

Trajectory integrate(const ReducedSystem& sys, const Method& method, std::span<const double> x0,
                     double h, std::size_t steps, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != sys.n()) throw std::invalid_argument("initial condition has the wrong dimension");
  const StepFn base = base_step(sys, method, cfg);
  const auto h0 = sys.integral_values(x0);

  Trajectory traj;
  traj.h = h;
  traj.times.push_back(0.0);
  traj.states.emplace_back(x0.begin(), x0.end());
  traj.integral_errors.emplace_back(sys.m(), 0.0);
  traj.iterations.push_back(0);

  State x(x0.begin(), x0.end());
  for (std::size_t k = 1; k <= steps; ++k) {
    StepResult r;
    try {
      r = compose_step(base, method.coefficients, x, h);
    } catch (const SolverError& e) {
      traj.status = e.kind() == SolverError::Kind::Divergence ? TrajectoryStatus::Diverged
                                                              : TrajectoryStatus::SolverFailure;
      traj.failed_step = k;
      traj.message = e.what();
      return traj;
    }
    double size = 0.0;
    for (double v : r.x) size = std::max(size, std::abs(v));
    if (!std::isfinite(size) || size > cfg.divergence_bound) {
      traj.status = TrajectoryStatus::Diverged;
      traj.failed_step = k;
      traj.message = "state norm exceeded the divergence bound";
      return traj;
    }
    x = std::move(r.x);
    const auto hk = sys.integral_values(x);
    std::vector<double> err(hk.size());
    for (std::size_t i = 0; i < hk.size(); ++i) err[i] = hk[i] - h0[i];
    traj.times.push_back(static_cast<double>(k) * h);
    traj.states.push_back(x);
    traj.integral_errors.push_back(std::move(err));
    traj.iterations.push_back(r.iterations);
  }
  return traj;
}

}  // namespace polyint
