#include "vizsos/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace vizsos {

bool is_squarefree(std::int64_t d) {
  if (d <= 0) return false;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

QuadExt::QuadExt(Rat a, Rat b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (!is_squarefree(d)) throw std::domain_error("QuadExt: discriminant must be squarefree");
  if (d_ == 1) {
    a_ += b_;
    b_ = Rat(0);
  }
  if (b_.is_zero()) d_ = 1;
}

std::int64_t QuadExt::common_discriminant(const QuadExt& other) const {
  if (other.b_.is_zero()) return d_;
  if (b_.is_zero()) return other.d_;
  if (d_ != other.d_) throw std::domain_error("QuadExt: mixed discriminants");
  return d_;
}

QuadExt& QuadExt::operator+=(const QuadExt& other) {
  d_ = common_discriminant(other);
  a_ += other.a_;
  b_ += other.b_;
  if (b_.is_zero()) d_ = 1;
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& other) {
  d_ = common_discriminant(other);
  a_ -= other.a_;
  b_ -= other.b_;
  if (b_.is_zero()) d_ = 1;
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& other) {
  const std::int64_t d = common_discriminant(other);
  if (b_.is_zero() && other.b_.is_zero()) {
    a_ *= other.a_;
    return *this;
  }
  Rat a = a_ * other.a_ + Rat(static_cast<long>(d)) * b_ * other.b_;
  Rat b = a_ * other.b_ + b_ * other.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  d_ = b_.is_zero() ? 1 : d;
  return *this;
}

QuadExt QuadExt::conjugate() const { return QuadExt(a_, -b_, d_); }

QuadExt QuadExt::inverse() const {
  if (is_zero()) throw std::domain_error("QuadExt: inverse of zero");
  const Rat n = norm();
  return QuadExt(a_ / n, -b_ / n, d_);
}

double QuadExt::to_double() const {
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(d_));
}

int QuadExt::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rat lhs = a_ * a_;
  const Rat rhs = Rat(static_cast<long>(d_)) * b_ * b_;
  // a² = d·b² has no rational solution with b ≠ 0 when d > 1 is squarefree.
  return lhs > rhs ? sa : sb;
}

std::string QuadExt::str() const {
  if (b_.is_zero()) return a_.str();
  std::string out;
  if (!a_.is_zero()) out = a_.str();
  if (b_.sign() < 0)
    out += "-";
  else if (!out.empty())
    out += "+";
  const Rat mag = b_.abs();
  if (!mag.is_one()) out += mag.str() + "*";
  out += "sqrt(" + std::to_string(d_) + ")";
  return out;
}

std::size_t QuadExt::hash() const {
  return a_.hash() * 31 + b_.hash() * 17 + static_cast<std::size_t>(d_);
}

std::ostream& operator<<(std::ostream& os, const QuadExt& value) { return os << value.str(); }

std::optional<SquarefreeSplit> squarefree_split(const mpz_class& n) {
  if (n <= 0) return std::nullopt;
  constexpr unsigned long kTrialBound = 1u << 20;
  mpz_class rest = n;
  mpz_class root = 1;
  mpz_class free = 1;
  for (unsigned long p = 2; p <= kTrialBound; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > rest) break;
    unsigned count = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++count;
    }
    for (unsigned i = 0; i + 1 < count; i += 2) root *= p;
    if (count % 2 == 1) free *= p;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      mpz_class s;
      mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
      root *= s;
    } else if (rest <= mpz_class(kTrialBound) * kTrialBound) {
      free *= rest;  // no factor up to its square root: prime
    } else {
      return std::nullopt;
    }
  }
  return SquarefreeSplit{root, free};
}

std::optional<QuadExt> exact_sqrt(const Rat& r) {
  if (r.sign() < 0) return std::nullopt;
  if (r.is_zero()) return QuadExt(Rat(0));
  // sqrt(p/q) = sqrt(p*q)/q
  const mpz_class q = r.denominator();
  const auto split = squarefree_split(r.numerator() * q);
  if (!split || !split->squarefree.fits_slong_p()) return std::nullopt;
  const Rat coefficient(split->square_root, q);
  const long d = split->squarefree.get_si();
  if (d == 1) return QuadExt(coefficient);
  return QuadExt(Rat(0), coefficient, d);
}

}  // namespace vizsos
