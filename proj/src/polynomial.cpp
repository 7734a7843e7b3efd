#include "polyint/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace polyint {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(VarId v, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) {
    m.factors_.push_back({v, exponent});
    m.degree_ = exponent;
  }
  return m;
}

Monomial Monomial::from_pairs(std::vector<std::pair<VarId, std::uint32_t>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Monomial m;
  for (const auto& [v, e] : pairs) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().var == v) {
      m.factors_.back().exponent += e;
    } else {
      m.factors_.push_back({v, e});
    }
    m.degree_ += e;
  }
  return m;
}

Monomial Monomial::from_factors(std::span<const VarId> vars) {
  std::vector<std::pair<VarId, std::uint32_t>> pairs;
  pairs.reserve(vars.size());
  for (VarId v : vars) pairs.emplace_back(v, 1u);
  return from_pairs(std::move(pairs));
}

std::uint32_t Monomial::exponent(VarId v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, VarId x) { return f.var < x; });
  return (it != factors_.end() && it->var == v) ? it->exponent : 0u;
}

std::size_t Monomial::min_dim() const {
  return factors_.empty() ? 0 : std::size_t{factors_.back().var.index} + 1;
}

std::vector<VarId> Monomial::flatten() const {
  std::vector<VarId> out;
  out.reserve(degree_);
  for (const auto& f : factors_) out.insert(out.end(), f.exponent, f.var);
  return out;
}

double Monomial::eval(std::span<const double> point) const {
  double value = 1.0;
  for (const auto& f : factors_) {
    const double base = point[f.var.index];
    double p = base;
    for (std::uint32_t k = 1; k < f.exponent; ++k) p *= base;
    value *= p;
  }
  return value;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto ia = a.factors_.begin();
  auto ib = b.factors_.begin();
  while (ia != a.factors_.end() || ib != b.factors_.end()) {
    if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->var < ib->var)) {
      m.factors_.push_back(*ia++);
    } else if (ia == a.factors_.end() || ib->var < ia->var) {
      m.factors_.push_back(*ib++);
    } else {
      m.factors_.push_back({ia->var, ia->exponent + ib->exponent});
      ++ia;
      ++ib;
    }
  }
  m.degree_ = a.degree_ + b.degree_;
  return m;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto fa = a.factors();
  const auto fb = b.factors();
  const std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (fa[k].var != fb[k].var) return fa[k].var < fb[k].var;
    if (fa[k].exponent != fb[k].exponent) return fa[k].exponent > fb[k].exponent;
  }
  return false;
}

// -------------------------------------------------------------- Polynomial

namespace {

using TermMap = std::map<Monomial, double, GradedLex>;

std::vector<Term> flatten_map(const TermMap& map) {
  std::vector<Term> out;
  out.reserve(map.size());
  for (const auto& [m, c] : map) {
    if (c != 0.0) out.push_back({m, c});
  }
  return out;
}

void check_fits(const Monomial& m, std::size_t dim) {
  if (m.min_dim() > dim) {
    throw std::invalid_argument("monomial references x" + std::to_string(m.min_dim()) +
                                " outside a " + std::to_string(dim) + "-variable space");
  }
}

}  // namespace

Polynomial Polynomial::constant(std::size_t dim, double c) {
  Polynomial p(dim);
  if (c != 0.0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, VarId v) {
  return monomial(dim, Monomial::var(v), 1.0);
}

Polynomial Polynomial::monomial(std::size_t dim, Monomial m, double coeff) {
  check_fits(m, dim);
  Polynomial p(dim);
  if (coeff != 0.0) p.terms_.push_back({std::move(m), coeff});
  return p;
}

Polynomial Polynomial::from_terms(std::size_t dim, std::vector<Term> terms) {
  TermMap map;
  for (auto& t : terms) {
    check_fits(t.monomial, dim);
    map[std::move(t.monomial)] += t.coeff;
  }
  Polynomial p(dim);
  p.terms_ = flatten_map(map);
  return p;
}

int Polynomial::degree() const {
  return terms_.empty() ? -1 : static_cast<int>(terms_.back().monomial.degree());
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& x) {
    return GradedLex{}(t.monomial, x);
  });
  return (it != terms_.end() && it->monomial == m) ? it->coeff : 0.0;
}

double Polynomial::max_abs_coeff() const {
  double out = 0.0;
  for (const auto& t : terms_) out = std::max(out, std::abs(t.coeff));
  return out;
}

double Polynomial::eval(std::span<const double> point) const {
  if (point.size() != dim_) {
    throw std::invalid_argument("polynomial evaluation: point has " +
                                std::to_string(point.size()) + " entries, space has " +
                                std::to_string(dim_));
  }
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.coeff * t.monomial.eval(point);
  return sum;
}

Polynomial Polynomial::partial(VarId v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const std::uint32_t e = t.monomial.exponent(v);
    if (e == 0) continue;
    std::vector<std::pair<VarId, std::uint32_t>> pairs;
    for (const auto& f : t.monomial.factors()) {
      pairs.emplace_back(f.var, f.var == v ? f.exponent - 1 : f.exponent);
    }
    out.push_back({Monomial::from_pairs(std::move(pairs)), t.coeff * e});
  }
  return from_terms(dim_, std::move(out));
}

std::vector<Polynomial> Polynomial::gradient(std::size_t count) const {
  std::vector<Polynomial> g;
  g.reserve(count);
  for (std::size_t i = 0; i < count; ++i) g.push_back(partial(VarId{i}));
  return g;
}

Polynomial Polynomial::embedded(std::size_t dim) const {
  for (const auto& t : terms_) check_fits(t.monomial, dim);
  Polynomial p = *this;
  p.dim_ = dim;
  return p;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(dim_, 1.0);
  for (unsigned k = 0; k < exponent; ++k) result *= *this;
  return result;
}

void Polynomial::check_space(const Polynomial& q) const {
  if (dim_ != q.dim_) {
    throw std::invalid_argument("polynomial space mismatch: " + std::to_string(dim_) + " vs " +
                                std::to_string(q.dim_) + " variables");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  check_space(q);
  TermMap map;
  for (const auto& t : terms_) map.emplace(t.monomial, t.coeff);
  for (const auto& t : q.terms_) map[t.monomial] += t.coeff;
  terms_ = flatten_map(map);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  check_space(q);
  TermMap map;
  for (const auto& t : terms_) map.emplace(t.monomial, t.coeff);
  for (const auto& t : q.terms_) map[t.monomial] -= t.coeff;
  terms_ = flatten_map(map);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& q) {
  *this = *this * q;
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
  return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  p.check_space(q);
  TermMap map;
  for (const auto& a : p.terms_) {
    for (const auto& b : q.terms_) map[a.monomial * b.monomial] += a.coeff * b.coeff;
  }
  Polynomial r(p.dim_);
  r.terms_ = flatten_map(map);
  return r;
}

Polynomial operator+(Polynomial p, double c) {
  return p += Polynomial::constant(p.dim(), c);
}

bool operator==(const Polynomial& p, const Polynomial& q) {
  if (p.dim_ != q.dim_ || p.terms_.size() != q.terms_.size()) return false;
  for (std::size_t k = 0; k < p.terms_.size(); ++k) {
    if (!(p.terms_[k].monomial == q.terms_[k].monomial) || p.terms_[k].coeff != q.terms_[k].coeff) {
      return false;
    }
  }
  return true;
}

Polynomial scale(const Polynomial& p, double s) { return p * s; }

double max_coeff_deviation(const Polynomial& p, const Polynomial& q) {
  TermMap map;
  for (const auto& t : p.terms()) map[t.monomial] = t.coeff;
  std::map<Monomial, double, GradedLex> other;
  for (const auto& t : q.terms()) other[t.monomial] = t.coeff;
  double worst = 0.0;
  auto deviation = [](double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
  };
  for (const auto& [m, c] : map) {
    auto it = other.find(m);
    worst = std::max(worst, deviation(c, it == other.end() ? 0.0 : it->second));
  }
  for (const auto& [m, c] : other) {
    if (!map.contains(m)) worst = std::max(worst, deviation(0.0, c));
  }
  return worst;
}

bool approx_equal(const Polynomial& p, const Polynomial& q, double rel_tol) {
  return p.dim() == q.dim() && max_coeff_deviation(p, q) <= rel_tol;
}

Polynomial substitute(const Polynomial& p, const std::map<VarId, Polynomial>& bindings,
                      std::size_t target_dim) {
  for (const auto& [v, image] : bindings) {
    if (v.index >= p.dim()) {
      throw std::invalid_argument("substitute: bound variable x" + std::to_string(v.index + 1) +
                                  " outside the source space");
    }
    if (image.dim() != target_dim) {
      throw std::invalid_argument("substitute: binding image not in the target space");
    }
  }
  // Powers of each image are reused across terms.
  std::map<std::pair<VarId, std::uint32_t>, Polynomial> powers;
  auto power_of = [&](VarId v, std::uint32_t e) -> const Polynomial& {
    auto key = std::make_pair(v, e);
    if (auto it = powers.find(key); it != powers.end()) return it->second;
    Polynomial base;
    if (auto b = bindings.find(v); b != bindings.end()) {
      base = b->second;
    } else if (v.index < target_dim) {
      base = Polynomial::variable(target_dim, v);
    } else {
      throw std::invalid_argument("substitute: unbound variable x" + std::to_string(v.index + 1) +
                                  " is absent from the target space");
    }
    return powers.emplace(key, base.pow(e)).first->second;
  };

  Polynomial result(target_dim);
  for (const auto& t : p.terms()) {
    Polynomial product = Polynomial::constant(target_dim, t.coeff);
    for (const auto& f : t.monomial.factors()) product *= power_of(f.var, f.exponent);
    result += product;
  }
  return result;
}

// ---------------------------------------------------------------- printing

std::string format_real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    double c = t.coeff;
    if (first) {
      if (c < 0 && !t.monomial.is_constant() && c == -1.0) {
        out += "-";
        c = 1.0;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      c = std::abs(c);
    }
    std::string factors;
    for (const auto& f : t.monomial.factors()) {
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(f.var.index + 1);
      if (f.exponent > 1) factors += "^" + std::to_string(f.exponent);
    }
    if (t.monomial.is_constant()) {
      out += format_real(c);
    } else if (c == 1.0) {
      out += factors;
    } else {
      out += format_real(c) + "*" + factors;
    }
    first = false;
  }
  return out;
}

}  // namespace polyint
