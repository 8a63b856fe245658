#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace vizsos {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper around mpq_class; every constructor canonicalizes so the
/// (numerator, denominator) pair is unique for each value.
class Rat {
 public:
  Rat() = default;
  Rat(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
  Rat(long numerator, long denominator);
  Rat(const mpz_class& numerator, const mpz_class& denominator);
  explicit Rat(mpq_class value);

  /// The exact binary value of a finite double.
  static Rat from_double(double value);
  /// Parses `num` or `num/den` with an optional leading sign.
  static std::optional<Rat> parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& get() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }
  Rat abs() const { return Rat(::abs(value_)); }
  Rat inverse() const;

  /// `num` when integral, otherwise `num/den`.
  std::string str() const;

  Rat& operator+=(const Rat& other);
  Rat& operator-=(const Rat& other);
  Rat& operator*=(const Rat& other);
  Rat& operator/=(const Rat& other);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rat& value);

}  // namespace vizsos

template <>
struct std::hash<vizsos::Rat> {
  std::size_t operator()(const vizsos::Rat& r) const noexcept { return r.hash(); }
};
