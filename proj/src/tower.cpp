#include "polyint/tower.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polyint {

namespace {

std::string var_name(VarId v) { return "x" + std::to_string(v.index + 1); }

}  // namespace

unsigned Tower::lift_degree(VarId v) const {
  if (v.index < n_) return 1;
  const std::size_t k = v.index - n_;
  if (k >= aux_.size()) throw std::out_of_range("tower variable " + var_name(v) + " out of range");
  return aux_[k].degree;
}

VarId Tower::product(VarId a, VarId b) {
  if (a.index >= dim() || b.index >= dim()) {
    throw std::out_of_range("tower product of undefined variables");
  }
  if (b < a) std::swap(a, b);
  const auto key = std::make_pair(a, b);
  if (auto it = dedup_.find(key); it != dedup_.end()) return it->second;
  const VarId id{dim()};
  aux_.push_back({id, a, b, lift_degree(a) + lift_degree(b)});
  dedup_.emplace(key, id);
  return id;
}

VarId Tower::build_from_factors(std::span<const VarId> factors) {
  if (factors.size() == 1) return factors.front();
  const std::size_t half = (factors.size() + 1) / 2;
  const VarId left = build_from_factors(factors.first(half));
  const VarId right = build_from_factors(factors.subspan(half));
  return product(left, right);
}

VarId Tower::variable_for(const Monomial& m) {
  if (m.is_constant()) throw std::invalid_argument("no tower variable for a constant");
  if (m.min_dim() > n_) throw std::invalid_argument("monomial outside the original variables");
  const auto flat = m.flatten();
  return build_from_factors(flat);
}

std::vector<double> Tower::lift(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("lift: expected a point of the original dimension");
  std::vector<double> z(dim());
  std::copy(x.begin(), x.end(), z.begin());
  lift_in_place(z);
  return z;
}

void Tower::lift_in_place(std::span<double> z) const {
  for (const auto& a : aux_) z[a.id.index] = z[a.left.index] * z[a.right.index];
}

std::vector<Polynomial> Tower::lift_polynomials() const {
  std::vector<Polynomial> lifts;
  lifts.reserve(dim());
  for (std::size_t i = 0; i < n_; ++i) lifts.push_back(Polynomial::variable(n_, VarId{i}));
  for (const auto& a : aux_) lifts.push_back(lifts[a.left.index] * lifts[a.right.index]);
  return lifts;
}

std::vector<Polynomial> Tower::quadric_integrals() const {
  std::vector<Polynomial> out;
  const std::size_t d = dim();
  for (const auto& a : aux_) {
    out.push_back(Polynomial::variable(d, a.id) -
                  Polynomial::variable(d, a.left) * Polynomial::variable(d, a.right));
  }
  return out;
}

void Tower::pull_back(std::span<const double> z, std::span<double> adjoint) const {
  for (auto it = aux_.rbegin(); it != aux_.rend(); ++it) {
    const double g = adjoint[it->id.index];
    if (g == 0.0) continue;
    adjoint[it->left.index] += g * z[it->right.index];
    adjoint[it->right.index] += g * z[it->left.index];
    adjoint[it->id.index] = 0.0;
  }
}

std::string Tower::describe() const {
  std::ostringstream out;
  for (const auto& a : aux_) {
    out << var_name(a.id) << " = " << var_name(a.left) << "*" << var_name(a.right)
        << "  (degree " << a.degree << ")\n";
  }
  return out.str();
}

ReductionParams& ReductionParams::set(Monomial target, std::vector<Splitting> alternatives) {
  double total = 0.0;
  for (const auto& s : alternatives) {
    if (!(s.left * s.right == target)) {
      throw std::invalid_argument("splitting does not multiply back to its monomial");
    }
    if (s.left.is_constant()) throw std::invalid_argument("splitting with an empty left factor");
    total += s.weight;
  }
  if (alternatives.empty() || std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("splitting weights must sum to one");
  }
  overrides[std::move(target)] = std::move(alternatives);
  return *this;
}

namespace {

std::vector<Polynomial> partials_of(const Polynomial& p) { return p.gradient(); }

}  // namespace

ReducedIntegral reduce(const Polynomial& h, Tower& tower, const ReductionParams& params) {
  if (h.dim() != tower.original_dim()) {
    throw std::invalid_argument("reduce: integral not in the tower's original space");
  }
  // (coefficient, first variable, optional second variable)
  struct Piece {
    double coeff;
    VarId a;
    bool has_b;
    VarId b;
  };
  std::vector<Piece> pieces;
  std::vector<Term> low;

  for (const auto& t : h.terms()) {
    if (auto it = params.overrides.find(t.monomial); it != params.overrides.end()) {
      for (const auto& s : it->second) {
        if (s.weight == 0.0) continue;
        const VarId a = tower.variable_for(s.left);
        if (s.right.is_constant()) {
          pieces.push_back({t.coeff * s.weight, a, false, VarId{}});
        } else {
          pieces.push_back({t.coeff * s.weight, a, true, tower.variable_for(s.right)});
        }
      }
      continue;
    }
    if (t.monomial.degree() <= 2) {
      low.push_back(t);
      continue;
    }
    const auto flat = t.monomial.flatten();
    const std::size_t half = (flat.size() + 1) / 2;
    const VarId a = tower.variable_for(Monomial::from_factors(std::span(flat).first(half)));
    const VarId b = tower.variable_for(Monomial::from_factors(std::span(flat).subspan(half)));
    pieces.push_back({t.coeff, a, true, b});
  }

  const std::size_t d = tower.dim();
  Polynomial reduced = Polynomial::from_terms(d, std::move(low));
  std::vector<Term> high;
  for (const auto& p : pieces) {
    Monomial m = Monomial::var(p.a);
    if (p.has_b) m = m * Monomial::var(p.b);
    high.push_back({std::move(m), p.coeff});
  }
  reduced += Polynomial::from_terms(d, std::move(high));

  ReducedIntegral r{h, std::move(reduced), {}};
  r.partials = partials_of(r.reduced);
  return r;
}

ReducedIntegral embed(const ReducedIntegral& r, const Tower& tower) {
  ReducedIntegral out{r.original, r.reduced.embedded(tower.dim()), {}};
  out.partials = partials_of(out.reduced);
  return out;
}

std::vector<double> total_gradient(const Tower& tower, const ReducedIntegral& r,
                                   std::span<const double> z) {
  if (z.size() != tower.dim() || r.partials.size() != tower.dim()) {
    throw std::invalid_argument("total_gradient: extended dimension mismatch");
  }
  std::vector<double> adjoint(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) adjoint[k] = r.partials[k].eval(z);
  tower.pull_back(z, adjoint);
  adjoint.resize(tower.original_dim());
  return adjoint;
}

ConsistencyReport check_consistency(const Tower& tower, const ReducedIntegral& r, double rel_tol) {
  const auto lifts = tower.lift_polynomials();
  std::map<VarId, Polynomial> bindings;
  for (const auto& a : tower.aux_vars()) {
    if (a.id.index < r.reduced.dim()) bindings.emplace(a.id, lifts[a.id.index]);
  }
  const Polynomial expanded = substitute(r.reduced, bindings, tower.original_dim());
  ConsistencyReport report;
  report.residual = max_coeff_deviation(expanded, r.original);
  report.difference = expanded - r.original;
  report.pass = report.residual <= rel_tol;
  return report;
}

}  // namespace polyint
