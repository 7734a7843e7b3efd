#include "polyint/skewform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace polyint {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string structure_name(const SkewStructure& s) {
  struct Visitor {
    std::string operator()(const CanonicalJ&) const { return "canonical"; }
    std::string operator()(const ExplicitMatrix&) const { return "matrix"; }
    std::string operator()(const ExplicitField&) const { return "explicit-field"; }
    std::string operator()(const DefaultWedge&) const { return "wedge"; }
  };
  return std::visit(Visitor{}, s);
}

StructuralSingularity::StructuralSingularity(double gram_determinant, double threshold)
    : std::runtime_error("structural singularity: Gram determinant " + format_real(gram_determinant) +
                         " below threshold " + format_real(threshold)),
      det_(gram_determinant) {}

std::vector<double> contract_default(std::span<const double> f_val,
                                     const std::vector<std::vector<double>>& grads,
                                     const std::vector<std::vector<double>>& args,
                                     double singularity_threshold) {
  const std::size_t n = f_val.size();
  const std::size_t m = grads.size();
  if (args.size() != m) throw std::invalid_argument("contract_default: need one argument per gradient");
  for (std::size_t j = 0; j < m; ++j) {
    if (grads[j].size() != n || args[j].size() != n) {
      throw std::invalid_argument("contract_default: vector length mismatch");
    }
  }

  // Columns of W are f, g_1, ..., g_m.
  Eigen::MatrixXd w(n, m + 1);
  Eigen::MatrixXd a(n, m);
  w.col(0) = Eigen::Map<const Eigen::VectorXd>(f_val.data(), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < m; ++j) {
    w.col(static_cast<Eigen::Index>(j + 1)) =
        Eigen::Map<const Eigen::VectorXd>(grads[j].data(), static_cast<Eigen::Index>(n));
    a.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(args[j].data(), static_cast<Eigen::Index>(n));
  }

  const Eigen::MatrixXd g = w.rightCols(static_cast<Eigen::Index>(m));
  const double gram = m == 0 ? 1.0 : (g.transpose() * g).determinant();
  double scale = 1.0;
  for (std::size_t j = 0; j < m; ++j) scale *= g.col(static_cast<Eigen::Index>(j)).squaredNorm();
  if (!(std::abs(gram) >= singularity_threshold * scale) || scale == 0.0) {
    throw StructuralSingularity(gram, singularity_threshold * scale);
  }

  // Expanding each u_i along its first column leaves the cofactors of
  // B = W^T A, which do not depend on i.
  const Eigen::MatrixXd b = w.transpose() * a;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd minor(m, m);
  for (std::size_t r = 0; r <= m; ++r) {
    for (std::size_t row = 0, k = 0; row <= m; ++row) {
      if (row == r) continue;
      minor.row(static_cast<Eigen::Index>(k++)) = b.row(static_cast<Eigen::Index>(row));
    }
    const double cof = (m == 0 ? 1.0 : minor.determinant()) * (r % 2 == 0 ? 1.0 : -1.0);
    u += cof * w.col(static_cast<Eigen::Index>(r));
  }
  u /= gram;
  return {u.data(), u.data() + u.size()};
}

// ----------------------------------------------------------- ReducedSystem

ReducedSystem::ReducedSystem(std::vector<Polynomial> field, std::vector<Polynomial> integrals,
                             SkewStructure structure, const ReductionParams& params, Tower tower)
    : n_(field.size()), field_(std::move(field)), tower_(std::move(tower)), structure_(std::move(structure)) {
  if (n_ == 0) throw std::invalid_argument("system needs at least one component");
  if (tower_.original_dim() == 0 && tower_.dim() == 0) tower_ = Tower(n_);
  if (tower_.original_dim() != n_) throw std::invalid_argument("tower dimension does not match the field");
  for (const auto& c : field_) {
    if (c.dim() != n_) throw std::invalid_argument("field components must be polynomials in x1..xn");
  }
  if (integrals.empty()) throw std::invalid_argument("system needs at least one integral");
  if (integrals.size() >= n_) {
    throw std::invalid_argument("need fewer integrals than dimensions (m < n), got m = " +
                                std::to_string(integrals.size()) + ", n = " + std::to_string(n_));
  }

  std::vector<ReducedIntegral> reduced;
  for (const auto& h : integrals) {
    if (h.dim() != n_) throw std::invalid_argument("integrals must be polynomials in x1..xn");
    reduced.push_back(reduce(h, tower_, params));
  }
  for (const auto& r : reduced) integrals_.push_back(embed(r, tower_));
  for (const auto& h : integrals) gradients_.push_back(h.gradient());

  if (std::holds_alternative<CanonicalJ>(structure_) && n_ % 2 != 0) {
    throw std::invalid_argument("canonical structure requires an even dimension");
  }
  if (auto* s = std::get_if<ExplicitMatrix>(&structure_)) {
    if (s->entries.size() != n_) throw std::invalid_argument("structure matrix must be n x n");
    for (const auto& row : s->entries) {
      if (row.size() != n_) throw std::invalid_argument("structure matrix must be n x n");
      for (const auto& e : row) {
        if (e.dim() != n_) throw std::invalid_argument("structure matrix entries must be in x");
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        if (!approx_equal(s->entries[i][j] + s->entries[j][i], Polynomial(n_))) {
          throw std::invalid_argument("structure matrix is not antisymmetric");
        }
      }
    }
  }
  if (auto* s = std::get_if<ExplicitField>(&structure_)) {
    if (s->components.size() != n_) throw std::invalid_argument("explicit field needs n components");
    for (auto& c : s->components) c = c.embedded(tower_.dim());
  }
}

int ReducedSystem::field_degree() const {
  int d = 0;
  for (const auto& c : field_) d = std::max(d, c.degree());
  return d;
}

void ReducedSystem::eval_original_field(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < n_; ++i) out[i] = field_[i].eval(x);
}

std::vector<double> ReducedSystem::eval_original_field(std::span<const double> x) const {
  std::vector<double> out(n_);
  eval_original_field(x, out);
  return out;
}

std::vector<double> ReducedSystem::original_gradient(std::size_t i, std::span<const double> x) const {
  std::vector<double> g(n_);
  for (std::size_t k = 0; k < n_; ++k) g[k] = gradients_.at(i)[k].eval(x);
  return g;
}

std::vector<double> ReducedSystem::total_gradient(std::size_t i, std::span<const double> z) const {
  return polyint::total_gradient(tower_, integrals_.at(i), z);
}

std::vector<double> ReducedSystem::integral_values(std::span<const double> x) const {
  std::vector<double> v;
  v.reserve(integrals_.size());
  for (const auto& r : integrals_) v.push_back(r.original.eval(x));
  return v;
}

double ReducedSystem::gram_determinant(std::span<const double> x) const {
  const std::size_t m = integrals_.size();
  Eigen::MatrixXd g(n_, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = original_gradient(j, x);
    for (std::size_t k = 0; k < n_; ++k) g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = col[k];
  }
  return (g.transpose() * g).determinant();
}

void ReducedSystem::reduced_field(std::span<const double> z, std::span<double> out) const {
  if (z.size() != tower_.dim()) throw std::invalid_argument("reduced_field: extended dimension mismatch");
  const auto x = z.first(n_);
  struct Visitor {
    const ReducedSystem& sys;
    std::span<const double> z;
    std::span<const double> x;
    std::span<double> out;

    void operator()(const CanonicalJ&) const {
      const auto g = sys.total_gradient(0, z);
      const std::size_t half = sys.n_ / 2;
      for (std::size_t i = 0; i < half; ++i) {
        out[i] = -g[i + half];
        out[i + half] = g[i];
      }
    }
    void operator()(const ExplicitMatrix& s) const {
      const auto g = sys.total_gradient(0, z);
      for (std::size_t i = 0; i < sys.n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < sys.n_; ++j) {
          if (!s.entries[i][j].is_zero()) acc += s.entries[i][j].eval(x) * g[j];
        }
        out[i] = acc;
      }
    }
    void operator()(const ExplicitField& s) const {
      for (std::size_t i = 0; i < sys.n_; ++i) out[i] = s.components[i].eval(z);
    }
    void operator()(const DefaultWedge& s) const {
      const auto f = sys.eval_original_field(x);
      std::vector<std::vector<double>> grads;
      std::vector<std::vector<double>> args;
      for (std::size_t i = 0; i < sys.m(); ++i) {
        grads.push_back(sys.original_gradient(i, x));
        args.push_back(sys.total_gradient(i, z));
      }
      const auto u = contract_default(f, grads, args, s.singularity_threshold);
      std::copy(u.begin(), u.end(), out.begin());
    }
  };
  std::visit(Visitor{*this, z, x, out}, structure_);
}

std::vector<double> ReducedSystem::reduced_field(std::span<const double> z) const {
  std::vector<double> out(n_);
  reduced_field(z, out);
  return out;
}

// ------------------------------------------------------------ verification

std::string VerificationReport::summary() const {
  std::ostringstream out;
  out << (pass ? "PASS" : "FAIL") << "  samples=" << samples
      << "  orthogonality=" << format_real(orthogonality)
      << "  consistency=" << format_real(consistency)
      << "  antisymmetry=" << format_real(antisymmetry);
  if (singular_samples > 0) out << "  singular=" << singular_samples;
  return out.str();
}

VerificationReport verify_system(const ReducedSystem& sys, const VerifyOptions& opts) {
  VerificationReport report;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-opts.box, opts.box);
  const std::size_t n = sys.n();
  const auto* matrix = std::get_if<ExplicitMatrix>(&sys.structure());

  std::vector<double> x(n);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    for (auto& v : x) v = dist(rng);
    ++report.samples;

    const auto f = sys.eval_original_field(x);
    for (std::size_t i = 0; i < sys.m(); ++i) {
      const auto g = sys.original_gradient(i, x);
      const double r = std::abs(dot(f, g)) / std::max(1.0, norm2(f) * norm2(g));
      report.orthogonality = std::max(report.orthogonality, r);
    }

    const auto z = sys.tower().lift(x);
    try {
      const auto red = sys.reduced_field(z);
      double diff = 0.0;
      for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs(red[k] - f[k]));
      report.consistency = std::max(report.consistency, diff / std::max(1.0, max_abs(f)));
    } catch (const StructuralSingularity&) {
      ++report.singular_samples;
    }

    if (matrix != nullptr) {
      double worst = 0.0;
      double biggest = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double sij = matrix->entries[i][j].eval(x);
          const double sji = matrix->entries[j][i].eval(x);
          worst = std::max(worst, std::abs(sij + sji));
          biggest = std::max(biggest, std::abs(sij));
        }
      }
      report.antisymmetry = std::max(report.antisymmetry, worst / biggest);
    }
  }
  report.pass = report.orthogonality <= opts.tolerance && report.consistency <= opts.tolerance &&
                report.antisymmetry <= opts.tolerance && report.singular_samples < report.samples;
  return report;
}

}  // namespace polyint
