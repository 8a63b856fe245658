#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vizsos/groebner.hpp"

namespace vizsos {

/// Retained basis monomials. Applying a mask keeps basis order.
struct MonomialMask {
  std::vector<Monomial> retained;

  bool contains(const Monomial& m) const;
  std::size_t size() const { return retained.size(); }
};

/// One monomial per line in canonical text, `#` comments allowed.
MonomialMask read_mask(const std::string& path, const VarTable& vars);
void write_mask(const std::string& path, const MonomialMask& mask, const VarTable& vars);

enum class ObjectiveKind { kZero, kTraceMin, kTraceMax, kCustom, kOrbit };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kZero;
  /// Weights for kCustom; must be symmetric with the problem's dimension.
  Eigen::MatrixXd weights;
  std::string source;  // file name for kCustom
  /// For kOrbit: polynomials whose span X is steered into. The weights are the
  /// projector onto the complement of that span in a monomial basis, so a zero
  /// objective value means every summand is a combination of them.
  std::vector<RatPoly> span;

  /// "zero", "trace-min", "trace-max", "orbit" or "custom:FILE" (FILE is a CSV
  /// matrix). "orbit" leaves `span` empty for the caller to fill.
  static Objective parse(const std::string& text);
  std::string str() const;
};

/// A(i, j) = A(j, i) = value; entries stored with i ≤ j.
struct SymEntry {
  std::size_t i;
  std::size_t j;
  Rat value;
};

struct SdpConstraint {
  Monomial monomial;
  std::vector<SymEntry> entries;
  Rat rhs;
};

/// ⟨A_t, X⟩ = b_t for every standard monomial t, where A_t collects the
/// coefficient of t in NF(v_i·v_j) and b_t is the coefficient of t in NF(f*).
struct SdpProblem {
  VarTablePtr vars;
  /// Entries of v: monomials, or sums of monomials for a grouped basis.
  std::vector<RatPoly> basis;
  std::vector<std::string> basis_names;
  std::vector<SdpConstraint> constraints;
  Eigen::MatrixXd objective;
  std::vector<std::string> warnings;

  std::size_t dim() const { return basis.size(); }
  std::size_t num_constraints() const { return constraints.size(); }
  /// ⟨A_t, X⟩ for every t.
  Eigen::VectorXd apply(const Eigen::MatrixXd& X) const;
  /// Σ y_t A_t.
  Eigen::MatrixXd adjoint(const Eigen::VectorXd& y) const;
  Eigen::VectorXd rhs() const;
};

SdpProblem build_sdp(const GroebnerBasis& gb, const RatPoly& fstar, unsigned ell,
                     const MonomialMask* mask = nullptr, const Objective& objective = {});

/// Same construction over an explicit basis of polynomials.
SdpProblem build_sdp_from_basis(const GroebnerBasis& gb, const RatPoly& fstar, std::vector<RatPoly> basis,
                                const Objective& objective = {});

enum class SdpStatus { kFeasible, kInfeasible, kIndeterminate };
const char* to_string(SdpStatus s);

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  /// Per-iteration log lines on stderr.
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kIndeterminate;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::MatrixXd Z;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;
  int iterations = 0;
  /// For kInfeasible: y with bᵀy = 1 and Σ y_t A_t ⪯ 0 up to witness_margin.
  Eigen::VectorXd infeasibility_ray;
  double witness_margin = 0;
  std::string message;
};

/// Homogeneous self-dual primal-dual interior-point method with the HKM
/// direction and Mehrotra predictor-corrector steps.
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// Weak-duality check of a ray: bᵀy > 0 and λ_max(Σ y_t A_t) ≤ tol·bᵀy.
bool check_infeasibility_ray(const SdpProblem& problem, const Eigen::VectorXd& y, double tol);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations;
/// eigenvalues descending, eigenvectors as columns.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& A, double tol = 1e-14, int max_sweeps = 100);

struct SpectralFactor {
  /// One row per retained eigenvalue; SᵀS ≈ X.
  Eigen::MatrixXd S;
  Eigen::VectorXd eigenvalues;
  double threshold = 0;
};

/// Drops eigenvalues below eig_tol·max(1, λ_max). Throws std::domain_error
/// when X has an eigenvalue below −eig_tol·max(1, λ_max).
SpectralFactor spectral_factor(const Eigen::MatrixXd& X, double eig_tol = 1e-6);

/// Keeps basis entries whose column in S has an entry above col_tol in
/// absolute value; the constant monomial is always kept.
MonomialMask suggest_mask(const SpectralFactor& factor, const SdpProblem& problem, double col_tol = 1e-5);

/// Writes PREFIX.csv (header = basis names, one row per summand) and
/// PREFIX.pgm (grayscale, each entry drawn as a cell×cell block).
void export_heatmap(const SpectralFactor& factor, const std::vector<std::string>& column_names,
                    const std::string& prefix, int cell = 16);

/// Sparse SDPA text format of the dual form: max bᵀy s.t. Σ y_t A_t ⪯ C.
void export_sdpa(const SdpProblem& problem, const std::string& path);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M,
                      const std::vector<std::string>& header = {});
/// Reads a CSV of numbers; a first line that does not parse as numbers is
/// taken as a header and returned through `header`.
Eigen::MatrixXd read_matrix_csv(const std::string& path, std::vector<std::string>* header = nullptr);

}  // namespace vizsos
