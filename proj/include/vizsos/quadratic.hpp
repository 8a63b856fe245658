#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "vizsos/rational.hpp"

namespace vizsos {

/// Element a + b·√d of the quadratic field Q(√d), d squarefree.
///
/// Rational values are stored with b = 0 and d = 1 so that equality is
/// componentwise. Mixing two irrational values with different d throws.
class QuadExt {
 public:
  static constexpr std::int64_t kDefaultDiscriminant = 2;

  QuadExt() = default;
  QuadExt(Rat a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  QuadExt(long a) : a_(a) {}            // NOLINT(google-explicit-constructor)
  QuadExt(int a) : a_(a) {}             // NOLINT(google-explicit-constructor)
  QuadExt(Rat a, Rat b, std::int64_t d = kDefaultDiscriminant);

  /// b·√d
  static QuadExt sqrt_times(Rat b, std::int64_t d = kDefaultDiscriminant) {
    return QuadExt(Rat(0), std::move(b), d);
  }

  const Rat& rational_part() const { return a_; }
  const Rat& radical_part() const { return b_; }
  std::int64_t discriminant() const { return d_; }
  bool is_rational() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_one() const { return b_.is_zero() && a_.is_one(); }

  /// a² − d·b²
  Rat norm() const { return a_ * a_ - Rat(static_cast<long>(d_)) * b_ * b_; }
  QuadExt conjugate() const;
  QuadExt inverse() const;
  double to_double() const;
  /// Exact sign of a + b√d.
  int sign() const;

  QuadExt& operator+=(const QuadExt& other);
  QuadExt& operator-=(const QuadExt& other);
  QuadExt& operator*=(const QuadExt& other);
  QuadExt& operator/=(const QuadExt& other) { return *this *= other.inverse(); }

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }
  friend QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a_, -x.b_, x.d_); }
  friend bool operator==(const QuadExt&, const QuadExt&) = default;

  /// Canonical text: `A` when rational, otherwise `A+B*sqrt(d)` (see polynomial_io.hpp).
  std::string str() const;
  std::size_t hash() const;

 private:
  std::int64_t common_discriminant(const QuadExt& other) const;

  Rat a_;
  Rat b_;
  std::int64_t d_ = 1;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& value);

bool is_squarefree(std::int64_t d);

/// n = s²·d with d squarefree, found by trial division. Returns nullopt when a
/// cofactor above the trial bound cannot be classified.
struct SquarefreeSplit {
  mpz_class square_root;  // s
  mpz_class squarefree;   // d
};
std::optional<SquarefreeSplit> squarefree_split(const mpz_class& n);

/// Exact √r for r ≥ 0 as an element of Q(√d); nullopt if r < 0, if the
/// squarefree part does not fit in int64, or if factoring gives up.
std::optional<QuadExt> exact_sqrt(const Rat& r);

}  // namespace vizsos

template <>
struct std::hash<vizsos::QuadExt> {
  std::size_t operator()(const vizsos::QuadExt& q) const noexcept { return q.hash(); }
};
