#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizsos/model.hpp"
#include "vizsos/polynomial.hpp"

namespace vizsos {

/// Thrown when Buchberger exceeds its step budget; no partial basis escapes.
class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by reduced_monomials when 1 lies in the ideal.
class WholeRingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroebnerOptions {
  /// Budget on single-term reduction steps across the whole run.
  std::uint64_t max_steps = 10'000'000;
};

struct GroebnerStats {
  std::uint64_t pairs_created = 0;
  std::uint64_t pairs_reduced = 0;
  std::uint64_t zero_reductions = 0;
  std::uint64_t steps = 0;
};

/// Reduced Gröbner basis under grevlex; elements monic, sorted by leading
/// monomial ascending.
class GroebnerBasis {
 public:
  GroebnerBasis() = default;
  /// Wraps elements that already form a reduced basis (e.g. read from a file).
  /// Checks monic, minimal and tail-reduced, and detects whether x²−x lies in
  /// the ideal for every variable; throws std::invalid_argument otherwise.
  /// Does not re-verify S-pairs; see is_groebner_basis.
  GroebnerBasis(VarTablePtr vars, std::vector<RatPoly> elements, std::string source_digest);

  const VarTablePtr& vars() const { return vars_; }
  const std::vector<RatPoly>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  /// True when every variable satisfies x² = x modulo the ideal; normal forms
  /// are then multilinear and reduction runs in the boolean quotient.
  bool is_boolean() const { return boolean_; }
  bool is_whole_ring() const { return elements_.size() == 1 && elements_[0].is_constant(); }
  const std::string& source_digest() const { return source_digest_; }
  static const char* order_name() { return GrevlexOrder::kName; }

 private:
  VarTablePtr vars_;
  std::vector<RatPoly> elements_;
  std::string source_digest_;
  bool boolean_ = false;
};

/// SHA-256 over the order name, the variable names and the generator texts.
std::string ideal_digest(const IdealBasis& basis);

GroebnerBasis buchberger(const IdealBasis& basis, const GroebnerOptions& options = {},
                         GroebnerStats* stats = nullptr);

struct NormalFormOptions {
  /// Order in which basis elements are tried as divisors (indices into
  /// elements()); empty means natural order.
  std::vector<std::size_t> divisor_order;
  /// Skip the boolean shortcut and divide by every element, x²−x included.
  bool plain_division = false;
};

/// Unique representative of p + I. Linear, idempotent, zero exactly on I.
RatPoly normal_form(const RatPoly& p, const GroebnerBasis& gb, const NormalFormOptions& options = {});

/// Standard monomials of degree ≤ ell, decreasing. Throws WholeRingError if 1 ∈ I.
std::vector<Monomial> reduced_monomials(const GroebnerBasis& gb, unsigned ell);

/// True iff raising ell to ell+1 adds no standard monomial.
bool saturation_check(const GroebnerBasis& gb, unsigned ell);

/// Independent check: every S-polynomial reduces to zero by plain division and
/// the basis is reduced. Quadratic in the basis size; meant for tests.
bool is_groebner_basis(const GroebnerBasis& gb);

}  // namespace vizsos
