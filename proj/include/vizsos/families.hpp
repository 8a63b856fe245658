#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizsos/certify.hpp"

namespace vizsos {

enum class FamilyKind { kThm46, kThm51, kThm52, kConj54 };

struct FamilyId {
  FamilyKind kind = FamilyKind::kThm51;
  unsigned j = 0;  // only for kConj54

  /// "thm46", "thm51", "thm52" or "conj54:J".
  static FamilyId parse(const std::string& text);
  std::string str() const;
  /// Degree bound of the family's summands.
  unsigned degree() const;
};

/// Throws std::domain_error naming the violated condition.
void check_domain(const FamilyId& id, const GraphClassParams& params);

/// Σ_{S ⊆ V(H), |S| = q} Π_{h∈S} x[g,h]; q = 0 gives 1.
RatPoly elementary_sum(const VarTablePtr& vars, int g, unsigned q);

/// {1} followed by elementary_sum(g, q) for g = 0..n_G−1 and q = 1..degree.
std::vector<RatPoly> grouped_basis(const VarTablePtr& vars, unsigned degree);

struct Thm46Coefficients {
  QuadExt alpha, beta, gamma;
};
Thm46Coefficients thm46_coefficients(int n_g);

struct Thm52Coefficients {
  QuadExt alpha, beta, gamma;
};
Thm52Coefficients thm52_coefficients(int n_h);

/// s_0 = α + β·ΣΣ x + γ·Σ_g e_2(g) and s_g = (e_1(g) − 2·e_2(g))/3.
PolyCertificate cert_thm46(const GraphClassParams& params);
/// s_g = e_1(g) − k_H.
PolyCertificate cert_thm51(const GraphClassParams& params);
/// s_g = α + β·e_1(g) + γ·e_2(g).
PolyCertificate cert_thm52(const GraphClassParams& params);
PolyCertificate family_certificate(const FamilyId& id, const GraphClassParams& params);

/// Right-hand side minus left-hand side of the three equations whose common
/// solutions make s_g = α + β·e_1 + γ·e_2 a certificate.
std::array<QuadExt, 3> check_system_52(const QuadExt& alpha, const QuadExt& beta, const QuadExt& gamma, int n_h);

/// Columns of S for the degree-2 certificate at k_G = n_G − 1, n_H = 3, k_H = 2,
/// over the summands (s_1, …, s_{n_G}, s_0): a for the constant, b_g for
/// e_1(g) and c_g for e_2(g).
std::vector<NamedVector> example44_vectors(int n_g);
/// The inner products those columns must have, one entry per pair.
std::vector<InnerProductTarget> example44_targets(int n_g);
/// Gram matrix in grouped_basis(vars, 2) order built from the targets.
RatMatrix example44_gram(int n_g);

/// Outcome of one Conjecture 5.4 instance: the grouped SDP, its rounding and
/// the exact check.
struct AnsatzReport {
  FamilyId id;
  GraphClassParams params;
  std::size_t groups_per_vertex = 0;  // j + 1 sums per g, q = 0..j
  std::size_t basis_size = 0;
  std::size_t constraints = 0;
  SdpStatus status = SdpStatus::kIndeterminate;
  bool rounded = false;
  bool psd = false;
  bool verified = false;
  std::optional<RatMatrix> gram;
  std::vector<std::string> basis_names;
  std::string detail;
};

/// Throws std::domain_error for j < 3 or parameters outside the family.
AnsatzReport ansatz_conj54(unsigned j, const GraphClassParams& params, long max_den = 99,
                           const GroebnerBasis* gb = nullptr, const SolverOptions& options = {});

}  // namespace vizsos
