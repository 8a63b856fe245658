#include "vizsos/groebner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "vizsos/digest.hpp"
#include "vizsos/polynomial_io.hpp"

namespace vizsos {

namespace {

using Term = RatPoly::Term;

bool is_field_equation(const RatPoly& p, std::size_t* var = nullptr) {
  if (p.size() != 2) return false;
  const Term& lead = p.terms()[0];
  const Term& tail = p.terms()[1];
  if (lead.monomial.degree() != 2 || lead.monomial.factors().size() != 1) return false;
  const std::size_t v = lead.monomial.factors()[0].first;
  if (!(tail.monomial == Monomial::variable(v))) return false;
  if (!(tail.coeff == -lead.coeff)) return false;
  if (var) *var = v;
  return true;
}

RatPoly field_equation(const VarTablePtr& vars, std::size_t v) {
  return RatPoly::from_sorted_terms(vars, {{Monomial::variable(v, 2), Rat(1)}, {Monomial::variable(v), Rat(-1)}});
}

RatPoly make_monic(RatPoly p) {
  if (p.is_zero() || p.leading_coeff().is_one()) return p;
  return p * p.leading_coeff().inverse();
}

/// Division by a list of monic divisors with full (tail) reduction.
///
/// In boolean mode inputs and divisors are multilinear and monomial products
/// are taken in the quotient by all x²−x; the quotient term is t with the
/// divisor's leading support removed, which keeps every product below t.
class Reducer {
 public:
  Reducer(bool boolean, std::uint64_t* steps, std::uint64_t budget)
      : boolean_(boolean), steps_(steps), budget_(budget) {}

  void add(const RatPoly* divisor) {
    divisors_.push_back(divisor);
    masks_.push_back(divisor->leading_monomial().support());
  }
  void clear() {
    divisors_.clear();
    masks_.clear();
  }

  RatPoly reduce(const RatPoly& p) const {
    std::map<Monomial, Rat, MonomialGreater> work;
    for (const auto& t : p.terms()) work.emplace(t.monomial, t.coeff);
    std::vector<Term> rest;
    while (!work.empty()) {
      auto top = work.begin();
      Monomial t = top->first;
      Rat c = std::move(top->second);
      work.erase(top);
      const RatPoly* d = find(t);
      if (!d) {
        rest.push_back({std::move(t), std::move(c)});
        continue;
      }
      if (steps_ && ++*steps_ > budget_)
        throw ResourceLimitExceeded("Groebner reduction step budget of " + std::to_string(budget_) +
                                    " exceeded");
      const Monomial& lead = d->leading_monomial();
      const Monomial q = boolean_ ? Monomial::from_mask(t.support() & ~lead.support()) : lead.quotient_of(t);
      const auto& dt = d->terms();
      for (std::size_t k = 1; k < dt.size(); ++k) {
        Monomial m = boolean_ ? q.boolean_product(dt[k].monomial) : q * dt[k].monomial;
        Rat delta = c * dt[k].coeff;
        auto [pos, inserted] = work.try_emplace(std::move(m));
        if (inserted) {
          pos->second = -delta;
        } else {
          pos->second -= delta;
          if (pos->second.is_zero()) work.erase(pos);
        }
      }
    }
    return RatPoly::from_sorted_terms(p.vars(), std::move(rest));
  }

 private:
  const RatPoly* find(const Monomial& t) const {
    if (boolean_) {
      const std::uint64_t s = t.support();
      for (std::size_t i = 0; i < masks_.size(); ++i)
        if ((masks_[i] & ~s) == 0) return divisors_[i];
      return nullptr;
    }
    for (const RatPoly* d : divisors_)
      if (d->leading_monomial().divides(t)) return d;
    return nullptr;
  }

  bool boolean_;
  std::uint64_t* steps_;
  std::uint64_t budget_;
  std::vector<const RatPoly*> divisors_;
  std::vector<std::uint64_t> masks_;
};

RatPoly s_polynomial(const RatPoly& f, const RatPoly& g, bool boolean) {
  const Monomial l = f.leading_monomial().lcm(g.leading_monomial());
  const Monomial qf = f.leading_monomial().quotient_of(l);
  const Monomial qg = g.leading_monomial().quotient_of(l);
  RatPoly a = f.multiply_term(qf, g.leading_coeff());
  RatPoly b = g.multiply_term(qg, f.leading_coeff());
  if (boolean) return multilinearize(a) - multilinearize(b);
  return a - b;
}

/// x_v·f in the boolean quotient.
RatPoly boolean_times_variable(const RatPoly& f, std::size_t v) {
  return multilinearize(f.multiply_term(Monomial::variable(v), Rat(1)));
}

struct Pair {
  Monomial lcm;
  std::size_t first;
  std::size_t second;  // kFieldPair: pairs `first` with x_var² − x_var
  std::size_t var = 0;
};
constexpr std::size_t kFieldPair = std::numeric_limits<std::size_t>::max();

struct PairLess {
  bool operator()(const Pair& a, const Pair& b) const {
    const auto c = GrevlexOrder::compare(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    if (a.first != b.first) return a.first < b.first;
    if (a.second != b.second) return a.second < b.second;
    return a.var < b.var;
  }
};

class Buchberger {
 public:
  Buchberger(VarTablePtr vars, bool boolean, const GroebnerOptions& options, GroebnerStats& stats)
      : vars_(std::move(vars)), boolean_(boolean), stats_(stats),
        reducer_(boolean, &stats.steps, options.max_steps) {}

  /// Returns false when 1 entered the ideal.
  bool add_input(const RatPoly& generator) {
    RatPoly h = reducer_.reduce(boolean_ ? multilinearize(generator) : generator);
    return insert(std::move(h));
  }

  bool run() {
    while (!pairs_.empty()) {
      const Pair pair = *pairs_.begin();
      pairs_.erase(pairs_.begin());
      ++stats_.pairs_reduced;
      RatPoly s = pair.second == kFieldPair ? boolean_times_variable(polys_[pair.first], pair.var)
                                            : s_polynomial(polys_[pair.first], polys_[pair.second], boolean_);
      RatPoly h = reducer_.reduce(s);
      if (h.is_zero()) {
        ++stats_.zero_reductions;
        continue;
      }
      if (!insert(std::move(h))) return false;
    }
    return true;
  }

  std::vector<RatPoly> active() const {
    std::vector<RatPoly> out;
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if (active_[i]) out.push_back(polys_[i]);
    return out;
  }

 private:
  bool insert(RatPoly h) {
    if (h.is_zero()) return true;
    if (h.leading_monomial().is_one()) return false;
    h = make_monic(std::move(h));
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    active_.push_back(true);
    update(hi);
    rebuild_reducer();
    return true;
  }

  void rebuild_reducer() {
    reducer_.clear();
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if (active_[i]) reducer_.add(&polys_[i]);
  }

  // Gebauer–Möller installation of the new element `hi`.
  void update(std::size_t hi) {
    const Monomial& lh = polys_[hi].leading_monomial();
    std::vector<std::pair<std::size_t, Monomial>> candidates;
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g]) candidates.emplace_back(g, lh.lcm(polys_[g].leading_monomial()));

    std::vector<bool> keep(candidates.size(), false);
    std::vector<bool> alive(candidates.size(), true);
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      alive[a] = false;
      const auto& [g1, l1] = candidates[a];
      bool ok = lh.coprime(polys_[g1].leading_monomial());
      if (!ok) {
        ok = true;
        for (std::size_t b = 0; b < candidates.size() && ok; ++b) {
          if (b == a || !(alive[b] || keep[b])) continue;
          if (candidates[b].second.divides(l1)) ok = false;
        }
      }
      keep[a] = ok;
    }

    for (auto it = pairs_.begin(); it != pairs_.end();) {
      if (it->second != kFieldPair && lh.divides(it->lcm) &&
          !(lh.lcm(polys_[it->first].leading_monomial()) == it->lcm) &&
          !(lh.lcm(polys_[it->second].leading_monomial()) == it->lcm)) {
        it = pairs_.erase(it);
      } else {
        ++it;
      }
    }

    for (std::size_t a = 0; a < candidates.size(); ++a) {
      const auto& [g, l] = candidates[a];
      if (keep[a] && !lh.coprime(polys_[g].leading_monomial())) {
        pairs_.insert({l, g, hi, 0});
        ++stats_.pairs_created;
      }
    }
    if (boolean_) {
      for (const auto& [v, e] : lh.factors()) {
        pairs_.insert({lh * Monomial::variable(v), hi, kFieldPair, v});
        ++stats_.pairs_created;
      }
    }
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && lh.divides(polys_[g].leading_monomial())) active_[g] = false;
  }

  VarTablePtr vars_;
  bool boolean_;
  GroebnerStats& stats_;
  Reducer reducer_;
  std::vector<RatPoly> polys_;
  std::vector<bool> active_;
  std::set<Pair, PairLess> pairs_;
};

bool boolean_generators(const IdealBasis& basis) {
  std::vector<bool> covered(basis.vars->size(), false);
  for (const auto& g : basis.generators) {
    std::size_t v = 0;
    if (is_field_equation(g, &v)) covered[v] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

}  // namespace

std::string ideal_digest(const IdealBasis& basis) {
  std::string text = std::string(GrevlexOrder::kName) + "\n";
  for (std::size_t i = 0; i < basis.vars->size(); ++i) text += basis.vars->name(i) + " ";
  text += "\n";
  for (const auto& g : basis.generators) text += to_string(g) + "\n";
  return sha256_hex(text);
}

GroebnerBasis::GroebnerBasis(VarTablePtr vars, std::vector<RatPoly> elements, std::string source_digest)
    : vars_(std::move(vars)), elements_(std::move(elements)), source_digest_(std::move(source_digest)) {
  if (!vars_) throw std::invalid_argument("GroebnerBasis: missing variable table");
  for (const auto& e : elements_) {
    if (e.is_zero()) throw std::invalid_argument("GroebnerBasis: zero element");
    if (!e.leading_coeff().is_one()) throw std::invalid_argument("GroebnerBasis: element not monic");
    if (!same_ring(vars_, e.vars())) throw std::invalid_argument("GroebnerBasis: mismatched variable tables");
  }
  for (std::size_t i = 0; i < elements_.size(); ++i)
    for (std::size_t j = 0; j < elements_.size(); ++j) {
      if (i == j) continue;
      const Monomial& lead = elements_[j].leading_monomial();
      for (const auto& t : elements_[i].terms())
        if (lead.divides(t.monomial))
          throw std::invalid_argument("GroebnerBasis: elements are not inter-reduced");
    }
  std::sort(elements_.begin(), elements_.end(),
            [](const RatPoly& a, const RatPoly& b) { return a.leading_monomial() < b.leading_monomial(); });
  boolean_ = !is_whole_ring();
  for (std::size_t v = 0; v < vars_->size() && boolean_; ++v) {
    NormalFormOptions plain;
    plain.plain_division = true;
    boolean_ = normal_form(field_equation(vars_, v), *this, plain).is_zero();
  }
}

GroebnerBasis buchberger(const IdealBasis& basis, const GroebnerOptions& options, GroebnerStats* stats) {
  if (!basis.vars || basis.vars->size() == 0) throw std::invalid_argument("buchberger: empty variable table");
  GroebnerStats local;
  GroebnerStats& st = stats ? *stats : local;
  const bool boolean = boolean_generators(basis);
  const std::string digest = ideal_digest(basis);
  const VarTablePtr& vars = basis.vars;

  Buchberger engine(vars, boolean, options, st);
  bool proper = true;
  for (const auto& g : basis.generators) {
    if (boolean && is_field_equation(g)) continue;
    if (!(proper = engine.add_input(g))) break;
  }
  if (proper) proper = engine.run();
  if (!proper) return GroebnerBasis(vars, {RatPoly(vars, Rat(1))}, digest);

  std::vector<RatPoly> reduced = engine.active();
  // Inter-reduce tails; leading monomials are already minimal.
  std::uint64_t unused = 0;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    Reducer others(boolean, &unused, std::numeric_limits<std::uint64_t>::max());
    for (std::size_t j = 0; j < reduced.size(); ++j)
      if (j != i) others.add(&reduced[j]);
    const Term lead = reduced[i].leading_term();
    RatPoly tail = RatPoly::from_sorted_terms(
        vars, std::vector<Term>(reduced[i].terms().begin() + 1, reduced[i].terms().end()));
    reduced[i] = RatPoly::monomial(vars, lead.monomial, lead.coeff) + others.reduce(tail);
  }
  if (boolean) {
    for (std::size_t v = 0; v < vars->size(); ++v) {
      const Monomial xv = Monomial::variable(v);
      const bool linear_lead = std::any_of(reduced.begin(), reduced.end(),
                                           [&](const RatPoly& p) { return p.leading_monomial() == xv; });
      if (!linear_lead) reduced.push_back(field_equation(vars, v));
    }
  }
  return GroebnerBasis(vars, std::move(reduced), digest);
}

RatPoly normal_form(const RatPoly& p, const GroebnerBasis& gb, const NormalFormOptions& options) {
  if (!same_ring(p.vars(), gb.vars()) && p.vars()) throw std::invalid_argument("normal_form: mismatched variable tables");
  const auto& elems = gb.elements();
  std::vector<std::size_t> order = options.divisor_order;
  if (order.empty()) {
    order.resize(elems.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  }
  const bool boolean = gb.is_boolean() && !options.plain_division;
  Reducer reducer(boolean, nullptr, 0);
  for (std::size_t i : order) {
    const RatPoly& e = elems.at(i);
    if (boolean && !e.leading_monomial().is_multilinear()) continue;  // x²−x, applied by multilinearize
    reducer.add(&e);
  }
  RatPoly input = p.vars() ? p : RatPoly(gb.vars()) + p;
  return reducer.reduce(boolean ? multilinearize(input) : input);
}

std::vector<Monomial> reduced_monomials(const GroebnerBasis& gb, unsigned ell) {
  if (gb.is_whole_ring()) throw WholeRingError("the ideal is the whole ring; no standard monomials");
  std::vector<Monomial> leads;
  for (const auto& e : gb.elements()) leads.push_back(e.leading_monomial());
  const auto standard = [&](const Monomial& m) {
    return std::none_of(leads.begin(), leads.end(), [&](const Monomial& l) { return l.divides(m); });
  };
  std::vector<Monomial> all{Monomial()};
  std::vector<Monomial> level{Monomial()};
  const std::size_t n = gb.vars()->size();
  for (unsigned d = 1; d <= ell && !level.empty(); ++d) {
    std::vector<Monomial> next;
    for (const auto& m : level) {
      // extend only by variables at or after the largest index present, so each monomial is built once
      const std::size_t start = m.is_one() ? 0 : static_cast<std::size_t>(63 - std::countl_zero(m.support()));
      for (std::size_t v = start; v < n; ++v) {
        Monomial candidate = m * Monomial::variable(v);
        if (standard(candidate)) next.push_back(std::move(candidate));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(all.begin(), all.end(), MonomialGreater());
  return all;
}

bool saturation_check(const GroebnerBasis& gb, unsigned ell) {
  return reduced_monomials(gb, ell + 1).size() == reduced_monomials(gb, ell).size();
}

bool is_groebner_basis(const GroebnerBasis& gb) {
  const auto& elems = gb.elements();
  NormalFormOptions plain;
  plain.plain_division = true;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (!elems[i].leading_coeff().is_one()) return false;
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : elems[i].terms())
        if (elems[j].leading_monomial().divides(t.monomial)) return false;
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (elems[i].leading_monomial().coprime(elems[j].leading_monomial())) continue;
      if (!normal_form(s_polynomial(elems[i], elems[j], false), gb, plain).is_zero()) return false;
    }
  return true;
}

}  // namespace vizsos
