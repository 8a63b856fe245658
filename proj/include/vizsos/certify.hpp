#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "vizsos/groebner.hpp"
#include "vizsos/sdp.hpp"

namespace Eigen {
template <>
struct NumTraits<vizsos::Rat> : GenericNumTraits<vizsos::Rat> {
  using Real = vizsos::Rat;
  using NonInteger = vizsos::Rat;
  using Literal = vizsos::Rat;
  using Nested = vizsos::Rat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 100
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};
}  // namespace Eigen

namespace vizsos {

using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;

/// Closest continued-fraction convergent of x with denominator ≤ max_den.
/// Exact for every double whose value is p/q with q ≤ max_den.
Rat rationalize(double x, long max_den = 99);

/// Entrywise rationalize, then mirror the upper triangle.
RatMatrix round_gram(const Eigen::MatrixXd& X, long max_den = 99);

Eigen::MatrixXd to_double(const RatMatrix& Q);

/// PᵀQP = L·diag(D)·Lᵀ with L unit lower triangular, or the principal minor
/// that proves Q is not positive semidefinite.
struct PsdWitness {
  bool psd = false;
  std::vector<std::size_t> perm;  // column k of QP is column perm[k] of Q
  RatMatrix L;
  std::vector<Rat> D;
  std::vector<std::size_t> minor;  // set on failure, indices into Q
  Rat minor_value;                 // determinant of that principal minor (< 0)
};

PsdWitness psd_witness(const RatMatrix& Q);

struct GramCertificate {
  VarTablePtr vars;
  std::vector<RatPoly> basis;
  RatMatrix Q;
  unsigned ell = 0;
};

struct PolyCertificate {
  VarTablePtr vars;
  std::vector<QuadPoly> summands;
  unsigned ell = 0;
};

/// s_k = √D_k·Σ_i L_ik·v_perm[i] over the nonzero pivots. Returns nullopt when
/// Q is not PSD or a pivot's square root cannot be split (huge integers).
std::optional<PolyCertificate> gram_to_polys(const GramCertificate& cert);

/// Outcome of an exact check; `residual` holds NF(Σ s² − f*) (rational part)
/// and `radical_residuals` the √d parts that failed to vanish.
struct Verification {
  bool verified = false;
  bool degree_ok = true;
  bool psd = true;
  RatPoly residual;
  std::vector<std::pair<std::int64_t, RatPoly>> radical_residuals;
  std::string detail;

  explicit operator bool() const { return verified; }
  /// Up to `terms` leading terms of each failing residual.
  std::string summary(std::size_t terms = 5) const;
};

Verification verify_certificate(const PolyCertificate& cert, const GroebnerBasis& gb, const RatPoly& fstar);
Verification verify_gram(const GramCertificate& cert, const GroebnerBasis& gb, const RatPoly& fstar);

/// Σ_ij Q_ij b_i b_j.
RatPoly gram_form(const GramCertificate& cert);
/// Gram matrix of a certificate over a basis: Q_ij = Σ_k coeff_k(b_i)·coeff_k(b_j)
/// where each summand is a combination of the basis elements. Nullopt when a
/// summand is not in the span or the result is irrational.
std::optional<RatMatrix> certificate_gram(const PolyCertificate& cert, const std::vector<RatPoly>& basis);

struct NamedVector {
  std::string name;
  std::vector<QuadExt> entries;
};

struct InnerProductTarget {
  std::string left;
  std::string right;
  QuadExt value;
};

/// max over targets of |⟨u, w⟩ − value|, exact. Throws on unknown names or
/// length mismatches.
QuadExt inner_product_residual(const std::vector<NamedVector>& vectors, const std::vector<InnerProductTarget>& targets);

/// Exact orthogonal projection of Q onto {Q : ⟨A_t, Q⟩ = b_t} in the
/// Frobenius norm. Nullopt when the constraints are inconsistent.
std::optional<RatMatrix> project_onto_constraints(const RatMatrix& Q, const SdpProblem& problem);

}  // namespace vizsos
