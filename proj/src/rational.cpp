#include "vizsos/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vizsos {

Rat::Rat(long numerator, long denominator) : value_(numerator, denominator) {
  if (denominator == 0) throw std::domain_error("Rat: zero denominator");
  value_.canonicalize();
}

Rat::Rat(const mpz_class& numerator, const mpz_class& denominator)
    : value_(numerator, denominator) {
  if (denominator == 0) throw std::domain_error("Rat: zero denominator");
  value_.canonicalize();
}

Rat::Rat(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rat Rat::from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("Rat: non-finite double");
  mpq_class q(value);  // exact
  q.canonicalize();
  return Rat(std::move(q));
}

std::optional<Rat> Rat::parse(std::string_view text) {
  auto is_int = [](std::string_view s) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!is_int(num)) return std::nullopt;
  if (slash == std::string_view::npos) return Rat(mpz_class(num), mpz_class(1));
  std::string den(text.substr(slash + 1));
  if (!is_int(den) || den[0] == '-' || den[0] == '+') return std::nullopt;
  mpz_class d(den);
  if (d == 0) return std::nullopt;
  return Rat(mpz_class(num), d);
}

Rat Rat::inverse() const {
  if (is_zero()) throw std::domain_error("Rat: inverse of zero");
  return Rat(mpq_class(1) / value_);
}

std::string Rat::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rat& Rat::operator+=(const Rat& other) {
  value_ += other.value_;
  return *this;
}
Rat& Rat::operator-=(const Rat& other) {
  value_ -= other.value_;
  return *this;
}
Rat& Rat::operator*=(const Rat& other) {
  value_ *= other.value_;
  return *this;
}
Rat& Rat::operator/=(const Rat& other) {
  if (other.is_zero()) throw std::domain_error("Rat: division by zero");
  value_ /= other.value_;
  return *this;
}

std::size_t Rat::hash() const {
  // Low limbs of numerator and denominator are enough to spread small values.
  const auto limb = [](const mpz_class& z) -> std::size_t {
    return mpz_size(z.get_mpz_t()) == 0 ? 0 : mpz_getlimbn(z.get_mpz_t(), 0);
  };
  std::size_t h = limb(value_.get_num()) * 0x9E3779B97F4A7C15ull;
  h ^= limb(value_.get_den()) + 0x7F4A7C15ull + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(sgn(value_) + 1);
}

std::ostream& operator<<(std::ostream& os, const Rat& value) { return os << value.str(); }

}  // namespace vizsos
