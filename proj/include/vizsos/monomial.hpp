#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace vizsos {

/// Power product over at most 64 variables.
///
/// Variables with exponent ≥ 1 live in a bitmask; exponents ≥ 2 are kept in a
/// short sorted side list, so multilinear monomials (the normal forms modulo
/// every ideal built here) never allocate.
class Monomial {
 public:
  static constexpr std::size_t kMaxVariables = 64;

  Monomial() = default;
  static Monomial variable(std::size_t index, unsigned exponent = 1);
  static Monomial from_mask(std::uint64_t mask);
  /// Builds from (variable, exponent) pairs; repeated variables add.
  static Monomial from_exponents(const std::vector<std::pair<std::size_t, unsigned>>& powers);

  std::uint64_t support() const { return support_; }
  unsigned degree() const { return degree_; }
  bool is_one() const { return support_ == 0; }
  bool is_multilinear() const { return powers_.empty(); }
  unsigned exponent(std::size_t var) const;
  /// (variable, exponent) pairs in increasing variable index.
  std::vector<std::pair<std::size_t, unsigned>> factors() const;

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// other / *this; requires divides(other).
  Monomial quotient_of(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  bool coprime(const Monomial& other) const { return (support_ & other.support_) == 0; }
  /// Product in the quotient by all x²−x: supports are OR-ed.
  Monomial boolean_product(const Monomial& other) const;
  /// Image in the quotient by all x²−x.
  Monomial multilinear() const { return from_mask(support_); }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::size_t hash() const;

 private:
  void add_power(std::size_t var, unsigned exponent);

  std::uint64_t support_ = 0;
  unsigned degree_ = 0;
  std::vector<std::pair<std::uint8_t, std::uint16_t>> powers_;  // exponents >= 2
};

/// Graded reverse lexicographic order, variable 0 largest.
///
/// Variable indices follow the VarTable numbering: vertex variables x[g,h]
/// first (lexicographic by (g,h)), then eG pairs, then eH pairs.
struct GrevlexOrder {
  static constexpr const char* kName = "grevlex(x>eG>eH)";
  static std::strong_ordering compare(const Monomial& a, const Monomial& b);
};

inline std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  return GrevlexOrder::compare(a, b);
}

/// Descending grevlex, for sorted containers holding leading terms first.
struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return GrevlexOrder::compare(a, b) > 0;
  }
};

}  // namespace vizsos

template <>
struct std::hash<vizsos::Monomial> {
  std::size_t operator()(const vizsos::Monomial& m) const noexcept { return m.hash(); }
};
