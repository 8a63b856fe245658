#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vizsos/monomial.hpp"
#include "vizsos/quadratic.hpp"
#include "vizsos/rational.hpp"
#include "vizsos/var_table.hpp"

namespace vizsos {

template <class Scalar>
struct PolyTerm {
  Monomial monomial;
  Scalar coeff;
  friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept strictly decreasing in grevlex with no zero coefficients, so
/// two polynomials over the same ring are equal iff their term lists are.
/// A default-constructed polynomial is the zero of no particular ring and
/// adopts the ring of whatever it is combined with.
template <class Scalar>
class Polynomial {
 public:
  using Term = PolyTerm<Scalar>;

  Polynomial() = default;
  explicit Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {}
  Polynomial(VarTablePtr vars, Scalar constant) : vars_(std::move(vars)) {
    if (!is_zero_scalar(constant)) terms_.push_back({Monomial(), std::move(constant)});
  }

  static Polynomial variable(VarTablePtr vars, std::size_t index) {
    if (!vars || index >= vars->size()) throw std::out_of_range("Polynomial: no such variable");
    return monomial(std::move(vars), Monomial::variable(index));
  }
  static Polynomial monomial(VarTablePtr vars, Monomial m, Scalar c = Scalar(1)) {
    Polynomial p(std::move(vars));
    if (!is_zero_scalar(c)) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  /// Any order; equal monomials are combined and zeros dropped.
  static Polynomial from_terms(VarTablePtr vars, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
    Polynomial p(std::move(vars));
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coeff += t.coeff;
      } else {
        if (!p.terms_.empty() && is_zero_scalar(p.terms_.back().coeff)) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && is_zero_scalar(p.terms_.back().coeff)) p.terms_.pop_back();
    return p;
  }
  /// Caller guarantees strictly decreasing monomials and nonzero coefficients.
  static Polynomial from_sorted_terms(VarTablePtr vars, std::vector<Term> terms) {
    Polynomial p(std::move(vars));
    p.terms_ = std::move(terms);
    return p;
  }

  const VarTablePtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }

  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }
  const Term& leading_term() const {
    if (terms_.empty()) throw std::logic_error("Polynomial: leading term of zero");
    return terms_.front();
  }
  const Monomial& leading_monomial() const { return leading_term().monomial; }
  const Scalar& leading_coeff() const { return leading_term().coeff; }

  Scalar coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.monomial > key; });
    if (it != terms_.end() && it->monomial == m) return it->coeff;
    return Scalar(0);
  }
  Scalar constant_term() const { return coefficient(Monomial()); }

  bool is_multilinear() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.monomial.is_multilinear(); });
  }

  Polynomial& operator+=(const Polynomial& other) { return *this = merge(*this, other, false); }
  Polynomial& operator-=(const Polynomial& other) { return *this = merge(*this, other, true); }
  Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }
  Polynomial& operator*=(const Scalar& c) {
    if (is_zero_scalar(c)) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.coeff *= c;
    }
    return *this;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }
  friend Polynomial operator-(Polynomial a) {
    for (auto& t : a.terms_) t.coeff = -t.coeff;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const Scalar& c) { return a *= c; }
  friend Polynomial operator*(const Scalar& c, Polynomial a) { return a *= c; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(common_ring(a, b));
    if (a.is_zero() || b.is_zero()) return out;
    if (b.size() == 1) return a.multiply_term(b.terms_[0].monomial, b.terms_[0].coeff);
    if (a.size() == 1) return b.multiply_term(a.terms_[0].monomial, a.terms_[0].coeff);
    std::unordered_map<Monomial, Scalar> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        auto [it, inserted] = acc.try_emplace(s.monomial * t.monomial, s.coeff);
        if (inserted) {
          it->second *= t.coeff;
        } else {
          it->second += s.coeff * t.coeff;
        }
      }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!is_zero_scalar(c)) terms.push_back({m, std::move(c)});
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.monomial > y.monomial; });
    out.terms_ = std::move(terms);
    return out;
  }

  /// c·m·p; monomial multiplication preserves the order so no re-sort is needed.
  Polynomial multiply_term(const Monomial& m, const Scalar& c) const {
    Polynomial out(vars_);
    if (is_zero_scalar(c)) return out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({m * t.monomial, t.coeff * c});
    return out;
  }

  /// Value at a 0/1 point given as a bitmask over variable indices.
  Scalar evaluate_boolean(std::uint64_t point) const {
    Scalar acc(0);
    for (const auto& t : terms_)
      if ((t.monomial.support() & ~point) == 0) acc += t.coeff;
    return acc;
  }

  template <class Fn>
  auto map_coefficients(Fn&& fn) const {
    using Out = std::decay_t<decltype(fn(std::declval<const Scalar&>()))>;
    std::vector<PolyTerm<Out>> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) {
      Out c = fn(t.coeff);
      if (!Polynomial<Out>::is_zero_scalar(c)) terms.push_back({t.monomial, std::move(c)});
    }
    return Polynomial<Out>::from_sorted_terms(vars_, std::move(terms));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_ != b.terms_) return false;
    if (a.is_zero() || !a.vars_ || !b.vars_) return true;
    return same_ring(a.vars_, b.vars_);
  }

  static bool is_zero_scalar(const Scalar& c) { return c.is_zero(); }

 private:
  static VarTablePtr common_ring(const Polynomial& a, const Polynomial& b) {
    if (!a.vars_) return b.vars_;
    if (!b.vars_) return a.vars_;
    if (!same_ring(a.vars_, b.vars_)) throw std::invalid_argument("Polynomial: mismatched variable tables");
    return a.vars_;
  }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    Polynomial out(common_ring(a, b));
    out.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->monomial > j->monomial)) {
        out.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->monomial > i->monomial) {
        out.terms_.push_back({j->monomial, subtract ? -j->coeff : j->coeff});
        ++j;
      } else {
        Scalar c = subtract ? i->coeff - j->coeff : i->coeff + j->coeff;
        if (!is_zero_scalar(c)) out.terms_.push_back({i->monomial, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  VarTablePtr vars_;
  std::vector<Term> terms_;
};

using RatPoly = Polynomial<Rat>;
using QuadPoly = Polynomial<QuadExt>;

inline QuadPoly to_quad(const RatPoly& p) {
  return p.map_coefficients([](const Rat& c) { return QuadExt(c); });
}

/// Split p = r + s·√d. Throws std::domain_error when coefficients use
/// different discriminants; d is 1 when p is rational.
struct RationalParts {
  RatPoly rational;
  RatPoly radical;
  std::int64_t discriminant = 1;
};
RationalParts rational_parts(const QuadPoly& p);

/// Image of p in the quotient by all x²−x (exponents clipped to 1).
template <class Scalar>
Polynomial<Scalar> multilinearize(const Polynomial<Scalar>& p) {
  if (p.is_multilinear()) return p;
  std::vector<PolyTerm<Scalar>> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.monomial.multilinear(), t.coeff});
  return Polynomial<Scalar>::from_terms(p.vars(), std::move(terms));
}

}  // namespace vizsos
