#include "vizsos/polynomial_io.hpp"

#include <cctype>
#include <stdexcept>

namespace vizsos {

RationalParts rational_parts(const QuadPoly& p) {
  RationalParts out{RatPoly(p.vars()), RatPoly(p.vars()), 1};
  std::vector<RatPoly::Term> rational;
  std::vector<RatPoly::Term> radical;
  for (const auto& t : p.terms()) {
    const QuadExt& c = t.coeff;
    if (!c.is_rational()) {
      if (out.discriminant != 1 && out.discriminant != c.discriminant())
        throw std::domain_error("rational_parts: mixed discriminants");
      out.discriminant = c.discriminant();
      radical.push_back({t.monomial, c.radical_part()});
    }
    if (!c.rational_part().is_zero()) rational.push_back({t.monomial, c.rational_part()});
  }
  out.rational = RatPoly::from_sorted_terms(p.vars(), std::move(rational));
  out.radical = RatPoly::from_sorted_terms(p.vars(), std::move(radical));
  return out;
}

std::string to_string(const Monomial& m, const VarTable& vars) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += "*";
    out += vars.name(v);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

namespace {

template <class Scalar>
std::string format(const Polynomial<Scalar>& p) {
  if (p.is_zero()) return "0";
  if (!p.vars()) throw std::logic_error("to_string: polynomial without variable table");
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const QuadExt c(t.coeff);
    const bool has_mono = !t.monomial.is_one();
    std::string body;
    if (!c.is_rational()) {
      body = "(" + c.str() + ")";
      if (has_mono) body += "*" + to_string(t.monomial, *p.vars());
      out += first ? body : " + " + body;
    } else {
      const Rat& r = c.rational_part();
      const Rat mag = r.abs();
      if (!has_mono) {
        body = mag.str();
      } else if (mag.is_one()) {
        body = to_string(t.monomial, *p.vars());
      } else {
        body = mag.str() + "*" + to_string(t.monomial, *p.vars());
      }
      if (first) {
        out += (r.sign() < 0 ? "-" : "") + body;
      } else {
        out += (r.sign() < 0 ? " - " : " + ") + body;
      }
    }
    first = false;
  }
  return out;
}

class Cursor {
 public:
  Cursor(std::string_view text, const VarTable& vars) : text_(text), vars_(vars) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool consume_word(std::string_view w) {
    skip_space();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " +
                                what + " in '" + std::string(text_) + "'");
  }

  std::string digits() {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  Rat unsigned_rational() {
    std::string s = digits();
    if (peek() == '/') {
      ++pos_;
      s += "/" + digits();
    }
    auto r = Rat::parse(s);
    if (!r) fail("bad rational '" + s + "'");
    return *r;
  }

  std::int64_t sqrt_arg() {
    expect('(');
    const std::string d = digits();
    expect(')');
    return std::stoll(d);
  }

  // Inside "( ... )"
  QuadExt quadratic() {
    int s1 = 1;
    if (consume('-')) s1 = -1;
    else consume('+');
    if (consume_word("sqrt")) return QuadExt(Rat(0), Rat(s1), sqrt_arg());
    const Rat r1 = unsigned_rational() * Rat(s1);
    if (consume('*')) {
      if (!consume_word("sqrt")) fail("expected sqrt");
      return QuadExt(Rat(0), r1, sqrt_arg());
    }
    int s2 = 0;
    if (consume('+')) s2 = 1;
    else if (consume('-')) s2 = -1;
    if (s2 == 0) return QuadExt(r1);
    if (consume_word("sqrt")) return QuadExt(r1, Rat(s2), sqrt_arg());
    const Rat r2 = unsigned_rational() * Rat(s2);
    expect('*');
    if (!consume_word("sqrt")) fail("expected sqrt");
    return QuadExt(r1, r2, sqrt_arg());
  }

  std::size_t variable() {
    skip_space();
    const auto start = pos_;
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      fail("expected variable name");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '[') {
      const auto close = text_.find(']', pos_);
      if (close == std::string_view::npos) fail("unterminated '['");
      pos_ = close + 1;
    }
    std::string name;
    for (char ch : text_.substr(start, pos_ - start))
      if (!std::isspace(static_cast<unsigned char>(ch))) name += ch;
    const auto idx = vars_.find(name);
    if (!idx) fail("unknown variable '" + name + "'");
    return *idx;
  }

  Monomial monomial() {
    std::vector<std::pair<std::size_t, unsigned>> powers;
    do {
      const std::size_t v = variable();
      unsigned e = 1;
      if (consume('^')) e = static_cast<unsigned>(std::stoul(digits()));
      powers.emplace_back(v, e);
    } while (consume('*'));
    return Monomial::from_exponents(powers);
  }

  bool at_variable() {
    const char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  QuadPoly::Term term(int sign) {
    QuadExt coeff(sign);
    bool have_coeff = false;
    if (peek() == '(') {
      ++pos_;
      coeff *= quadratic();
      expect(')');
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff *= QuadExt(unsigned_rational());
      have_coeff = true;
    }
    if (have_coeff) {
      if (!consume('*')) return {Monomial(), coeff};
      if (!at_variable()) fail("expected monomial after '*'");
    }
    return {monomial(), coeff};
  }

 private:
  std::string_view text_;
  const VarTable& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const RatPoly& p) { return format(p); }
std::string to_string(const QuadPoly& p) { return format(p); }

QuadPoly parse_quad_poly(std::string_view text, const VarTablePtr& vars) {
  if (!vars) throw std::invalid_argument("parse: missing variable table");
  Cursor cur(text, *vars);
  std::vector<QuadPoly::Term> terms;
  int sign = 1;
  if (cur.consume('-')) sign = -1;
  else cur.consume('+');
  terms.push_back(cur.term(sign));
  while (!cur.done()) {
    if (cur.consume('+')) sign = 1;
    else if (cur.consume('-')) sign = -1;
    else cur.fail("expected '+' or '-'");
    terms.push_back(cur.term(sign));
  }
  return QuadPoly::from_terms(vars, std::move(terms));
}

RatPoly parse_rat_poly(std::string_view text, const VarTablePtr& vars) {
  const QuadPoly q = parse_quad_poly(text, vars);
  const RationalParts parts = rational_parts(q);
  if (!parts.radical.is_zero())
    throw std::invalid_argument("expected rational coefficients in '" + std::string(text) + "'");
  return parts.rational;
}

Monomial parse_monomial(std::string_view text, const VarTable& vars) {
  Cursor cur(text, vars);
  if (cur.peek() == '1') {
    cur.consume('1');
    if (!cur.done()) cur.fail("trailing input");
    return Monomial();
  }
  Monomial m = cur.monomial();
  if (!cur.done()) cur.fail("trailing input");
  return m;
}

}  // namespace vizsos
