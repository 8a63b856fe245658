#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vizsos/certify.hpp"
#include "vizsos/groebner.hpp"
#include "vizsos/model.hpp"

namespace vizsos::testing {

// Fixed seed so every failure reproduces.
inline constexpr std::uint64_t kSeed = 20240611;

/// Gröbner basis of I_sos(params), computed once per process.
const GroebnerBasis& sos_basis(const GraphClassParams& params);
const GroebnerBasis& sos_basis(const std::string& params);

/// Random polynomial with up to `terms` terms of degree ≤ max_degree and
/// small rational coefficients.
RatPoly random_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t terms, unsigned max_degree);
QuadPoly random_quad_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t terms, unsigned max_degree);
Rat random_rat(std::mt19937_64& rng, long range = 9, long max_den = 6);

/// Exact BᵀB for a random small-integer B with `rank` rows.
RatMatrix random_psd(std::mt19937_64& rng, std::size_t n, std::size_t rank);

struct PropertyResult {
  bool ok = true;
  std::size_t cases = 0;
  std::string detail;
};

/// Normal forms of random polynomials do not depend on the divisor order.
PropertyResult gb_confluence(const GroebnerBasis& gb, std::size_t cases, std::uint64_t seed = kSeed);

/// Solves the ℓ-SDP, and at every variety point compares Σ_k (S_k·v)² with f*.
PropertyResult numeric_certificate_matches(const GraphClassParams& params, unsigned ell, double tol = 1e-4);

/// verify_gram agrees with verify_certificate(gram_to_polys(·)) on random PSD
/// Gram matrices; half of them are built to certify f*.
PropertyResult gram_check_equivalence(std::size_t cases, std::uint64_t seed = kSeed);

/// rationalize(p/q) == p/q for every reduced p/q with q ≤ max_den and |p/q| ≤ bound.
PropertyResult rationalize_round_trip(long max_den, long bound = 10);

}  // namespace vizsos::testing
