#include "vizsos/monomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace vizsos {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

}  // namespace

Monomial Monomial::variable(std::size_t index, unsigned exponent) {
  Monomial m;
  m.add_power(index, exponent);
  return m;
}

Monomial Monomial::from_mask(std::uint64_t mask) {
  Monomial m;
  m.support_ = mask;
  m.degree_ = static_cast<unsigned>(std::popcount(mask));
  return m;
}

Monomial Monomial::from_exponents(const std::vector<std::pair<std::size_t, unsigned>>& powers) {
  Monomial m;
  for (const auto& [var, e] : powers) m.add_power(var, e);
  return m;
}

void Monomial::add_power(std::size_t var, unsigned exponent) {
  if (var >= kMaxVariables) throw std::out_of_range("Monomial: variable index exceeds 64");
  if (exponent == 0) return;
  const unsigned total = this->exponent(var) + exponent;
  if (total > 0xFFFF) throw std::overflow_error("Monomial: exponent overflow");
  degree_ += exponent;
  support_ |= bit(var);
  auto it = std::lower_bound(powers_.begin(), powers_.end(), var,
                             [](const auto& p, std::size_t v) { return p.first < v; });
  if (it != powers_.end() && it->first == var) {
    it->second = static_cast<std::uint16_t>(total);
  } else if (total >= 2) {
    powers_.insert(it, {static_cast<std::uint8_t>(var), static_cast<std::uint16_t>(total)});
  }
}

unsigned Monomial::exponent(std::size_t var) const {
  if (var >= kMaxVariables || !(support_ & bit(var))) return 0;
  for (const auto& [v, e] : powers_) {
    if (v == var) return e;
    if (v > var) break;
  }
  return 1;
}

std::vector<std::pair<std::size_t, unsigned>> Monomial::factors() const {
  std::vector<std::pair<std::size_t, unsigned>> out;
  for (std::uint64_t s = support_; s; s &= s - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(s));
    out.emplace_back(v, exponent(v));
  }
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  if ((support_ & ~other.support_) != 0) return false;
  if (degree_ > other.degree_) return false;
  for (const auto& [v, e] : powers_) {
    if (other.exponent(v) < e) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (powers_.empty() && other.powers_.empty() && (support_ & other.support_) == 0) {
    return from_mask(support_ | other.support_);
  }
  Monomial m = *this;
  for (const auto& [v, e] : other.factors()) m.add_power(v, e);
  return m;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  if (powers_.empty() && other.powers_.empty()) return from_mask(other.support_ & ~support_);
  std::vector<std::pair<std::size_t, unsigned>> out;
  for (const auto& [v, e] : other.factors()) {
    const unsigned mine = exponent(v);
    if (mine > e) throw std::domain_error("Monomial: quotient of non-multiple");
    if (e > mine) out.emplace_back(v, e - mine);
  }
  return from_exponents(out);
}

Monomial Monomial::lcm(const Monomial& other) const {
  if (powers_.empty() && other.powers_.empty()) return from_mask(support_ | other.support_);
  std::vector<std::pair<std::size_t, unsigned>> out;
  for (std::uint64_t s = support_ | other.support_; s; s &= s - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(s));
    out.emplace_back(v, std::max(exponent(v), other.exponent(v)));
  }
  return from_exponents(out);
}

Monomial Monomial::boolean_product(const Monomial& other) const {
  return from_mask(support_ | other.support_);
}

std::size_t Monomial::hash() const {
  std::size_t h = static_cast<std::size_t>(support_ * 0x9E3779B97F4A7C15ull);
  for (const auto& [v, e] : powers_) h ^= (static_cast<std::size_t>(v) << 16 | e) + (h << 6) + (h >> 2);
  return h;
}

std::strong_ordering GrevlexOrder::compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  if (a.is_multilinear() && b.is_multilinear()) {
    const std::uint64_t diff = a.support() ^ b.support();
    if (diff == 0) return std::strong_ordering::equal;
    // Last (smallest) variable where exponents differ; the smaller exponent wins.
    const auto last = 63 - std::countl_zero(diff);
    return (a.support() >> last) & 1 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  const std::uint64_t both = a.support() | b.support();
  for (int v = 63; v >= 0; --v) {
    if (!((both >> v) & 1)) continue;
    const unsigned ea = a.exponent(static_cast<std::size_t>(v));
    const unsigned eb = b.exponent(static_cast<std::size_t>(v));
    if (ea != eb) return ea < eb ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

}  // namespace vizsos
