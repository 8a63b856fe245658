#include "vizsos/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vizsos/polynomial_io.hpp"

namespace vizsos {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool MonomialMask::contains(const Monomial& m) const {
  return std::find(retained.begin(), retained.end(), m) != retained.end();
}

MonomialMask read_mask(const std::string& path, const VarTable& vars) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mask file '" + path + "'");
  MonomialMask mask;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    mask.retained.push_back(parse_monomial(line.substr(first, last - first + 1), vars));
  }
  return mask;
}

void write_mask(const std::string& path, const MonomialMask& mask, const VarTable& vars) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mask file '" + path + "'");
  for (const auto& m : mask.retained) out << to_string(m, vars) << "\n";
}

Objective Objective::parse(const std::string& text) {
  Objective o;
  if (text == "zero") return o;
  if (text == "trace-min") {
    o.kind = ObjectiveKind::kTraceMin;
    return o;
  }
  if (text == "trace-max") {
    o.kind = ObjectiveKind::kTraceMax;
    return o;
  }
  if (text == "orbit") {
    o.kind = ObjectiveKind::kOrbit;
    return o;
  }
  if (text.rfind("custom:", 0) == 0) {
    o.kind = ObjectiveKind::kCustom;
    o.source = text.substr(7);
    o.weights = read_matrix_csv(o.source);
    return o;
  }
  throw std::invalid_argument("unknown objective '" + text + "'");
}

std::string Objective::str() const {
  switch (kind) {
    case ObjectiveKind::kZero: return "zero";
    case ObjectiveKind::kTraceMin: return "trace-min";
    case ObjectiveKind::kTraceMax: return "trace-max";
    case ObjectiveKind::kCustom: return "custom:" + source;
    case ObjectiveKind::kOrbit: return "orbit";
  }
  return "zero";
}

namespace {

MatrixXd orbit_weights(const std::vector<RatPoly>& span, const std::vector<RatPoly>& basis) {
  if (span.empty()) throw std::invalid_argument("orbit objective needs the polynomials to steer into");
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatrixXd P = MatrixXd::Zero(n, static_cast<Eigen::Index>(span.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const RatPoly& b = basis[static_cast<std::size_t>(i)];
    if (b.size() != 1) throw std::invalid_argument("orbit objective needs a monomial basis");
    for (std::size_t k = 0; k < span.size(); ++k)
      P(i, static_cast<Eigen::Index>(k)) = span[k].coefficient(b.leading_monomial()).to_double();
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(P);
  const MatrixXd Q = MatrixXd(qr.householderQ()).leftCols(qr.rank());
  return MatrixXd::Identity(n, n) - Q * Q.transpose();
}

MatrixXd objective_matrix(const Objective& objective, const std::vector<RatPoly>& basis) {
  const std::size_t p = basis.size();
  const auto n = static_cast<Eigen::Index>(p);
  switch (objective.kind) {
    case ObjectiveKind::kZero: return MatrixXd::Zero(n, n);
    case ObjectiveKind::kTraceMin: return MatrixXd::Identity(n, n);
    case ObjectiveKind::kTraceMax: return -MatrixXd::Identity(n, n);
    case ObjectiveKind::kCustom:
      if (objective.weights.rows() != n || objective.weights.cols() != n)
        throw std::invalid_argument("custom objective has dimension " + std::to_string(objective.weights.rows()) +
                                    "x" + std::to_string(objective.weights.cols()) + ", expected " +
                                    std::to_string(p));
      if (!objective.weights.isApprox(objective.weights.transpose()))
        throw std::invalid_argument("custom objective is not symmetric");
      return objective.weights;
    case ObjectiveKind::kOrbit: return orbit_weights(objective.span, basis);
  }
  return MatrixXd::Zero(n, n);
}

}  // namespace

SdpProblem build_sdp_from_basis(const GroebnerBasis& gb, const RatPoly& fstar, std::vector<RatPoly> basis,
                                const Objective& objective) {
  if (basis.empty()) throw std::invalid_argument("build_sdp: empty basis");
  SdpProblem problem;
  problem.vars = gb.vars();
  for (const auto& b : basis)
    problem.basis_names.push_back(b.size() == 1 && b.leading_coeff().is_one()
                                      ? to_string(b.leading_monomial(), *gb.vars())
                                      : to_string(b));

  std::map<Monomial, std::size_t, MonomialGreater> index;
  std::vector<std::vector<SymEntry>> entries;
  const auto slot = [&](const Monomial& m) {
    auto [it, inserted] = index.try_emplace(m, entries.size());
    if (inserted) entries.emplace_back();
    return it->second;
  };
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      const RatPoly nf = normal_form(basis[i] * basis[j], gb);
      for (const auto& t : nf.terms()) entries[slot(t.monomial)].push_back({i, j, t.coeff});
    }

  const RatPoly target = normal_form(fstar, gb);
  std::vector<std::string> missing;
  for (const auto& t : target.terms()) {
    if (!index.count(t.monomial)) missing.push_back(to_string(t.monomial, *gb.vars()));
    slot(t.monomial);
  }
  if (!missing.empty()) {
    std::string msg = "basis cannot produce monomials of NF(f*):";
    for (const auto& m : missing) msg += " " + m;
    problem.warnings.push_back(msg);
  }

  for (auto& [mono, idx] : index)
    problem.constraints.push_back({mono, std::move(entries[idx]), target.coefficient(mono)});
  problem.basis = std::move(basis);
  problem.objective = objective_matrix(objective, problem.basis);
  return problem;
}

SdpProblem build_sdp(const GroebnerBasis& gb, const RatPoly& fstar, unsigned ell, const MonomialMask* mask,
                     const Objective& objective) {
  std::vector<Monomial> monomials = reduced_monomials(gb, ell);
  std::vector<std::string> warnings;
  if (mask) {
    for (const auto& m : mask->retained)
      if (std::find(monomials.begin(), monomials.end(), m) == monomials.end())
        warnings.push_back("mask monomial " + to_string(m, *gb.vars()) + " is not a standard monomial of degree <= " +
                           std::to_string(ell) + "; ignored");
    std::erase_if(monomials, [&](const Monomial& m) { return !mask->contains(m); });
  }
  std::vector<RatPoly> basis;
  for (const auto& m : monomials) basis.push_back(RatPoly::monomial(gb.vars(), m));
  SdpProblem problem = build_sdp_from_basis(gb, fstar, std::move(basis), objective);
  problem.warnings.insert(problem.warnings.begin(), warnings.begin(), warnings.end());
  return problem;
}

VectorXd SdpProblem::apply(const MatrixXd& X) const {
  VectorXd out(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t t = 0; t < constraints.size(); ++t) {
    double acc = 0;
    for (const auto& e : constraints[t].entries) {
      const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
      acc += e.value.to_double() * (i == j ? X(i, i) : X(i, j) + X(j, i));
    }
    out(static_cast<Eigen::Index>(t)) = acc;
  }
  return out;
}

MatrixXd SdpProblem::adjoint(const VectorXd& y) const {
  const auto p = static_cast<Eigen::Index>(dim());
  MatrixXd out = MatrixXd::Zero(p, p);
  for (std::size_t t = 0; t < constraints.size(); ++t) {
    const double yt = y(static_cast<Eigen::Index>(t));
    for (const auto& e : constraints[t].entries) {
      const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
      out(i, j) += yt * e.value.to_double();
      if (i != j) out(j, i) += yt * e.value.to_double();
    }
  }
  return out;
}

VectorXd SdpProblem::rhs() const {
  VectorXd b(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t t = 0; t < constraints.size(); ++t) b(static_cast<Eigen::Index>(t)) = constraints[t].rhs.to_double();
  return b;
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kFeasible: return "Feasible";
    case SdpStatus::kInfeasible: return "Infeasible";
    case SdpStatus::kIndeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

bool check_infeasibility_ray(const SdpProblem& problem, const VectorXd& y, double tol) {
  if (y.size() != static_cast<Eigen::Index>(problem.num_constraints())) return false;
  const double by = problem.rhs().dot(y);
  if (!(by > 0)) return false;
  const MatrixXd S = problem.adjoint(y / by);
  const double lmax = Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  return lmax <= tol;
}

namespace {

struct DenseEntry {
  Eigen::Index i;
  Eigen::Index j;
  double v;
};

// Working copy of the constraint operator restricted to independent rows.
class Operator {
 public:
  Operator(const SdpProblem& problem, const std::vector<std::size_t>& rows) {
    for (std::size_t r : rows) {
      std::vector<DenseEntry> list;
      for (const auto& e : problem.constraints[r].entries) {
        const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
        list.push_back({i, j, e.value.to_double()});
        if (i != j) list.push_back({j, i, e.value.to_double()});
      }
      rows_.push_back(std::move(list));
    }
    p_ = static_cast<Eigen::Index>(problem.dim());
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(rows_.size()); }

  VectorXd apply(const MatrixXd& W) const {
    VectorXd out(size());
    for (Eigen::Index t = 0; t < size(); ++t) {
      double acc = 0;
      for (const auto& e : rows_[static_cast<std::size_t>(t)]) acc += e.v * W(e.i, e.j);
      out(t) = acc;
    }
    return out;
  }

  MatrixXd adjoint(const VectorXd& y) const {
    MatrixXd out = MatrixXd::Zero(p_, p_);
    for (Eigen::Index t = 0; t < size(); ++t)
      for (const auto& e : rows_[static_cast<std::size_t>(t)]) out(e.i, e.j) += y(t) * e.v;
    return out;
  }

  /// M(i, j) = tr(A_i X A_j Z⁻¹).
  MatrixXd schur(const MatrixXd& X, const MatrixXd& Zinv) const {
    const Eigen::Index m = size();
    MatrixXd M(m, m);
    MatrixXd XA(p_, p_);
    for (Eigen::Index t = 0; t < m; ++t) {
      XA.setZero();
      for (const auto& e : rows_[static_cast<std::size_t>(t)]) XA.col(e.j) += e.v * X.col(e.i);
      const MatrixXd W = XA * Zinv;
      M.col(t) = apply(W);
    }
    return 0.5 * (M + M.transpose());
  }

 private:
  std::vector<std::vector<DenseEntry>> rows_;
  Eigen::Index p_ = 0;
};

double inner(const MatrixXd& A, const MatrixXd& B) { return A.cwiseProduct(B).sum(); }

MatrixXd symmetrized(const MatrixXd& A) { return 0.5 * (A + A.transpose()); }

// Largest α with X + α·dX ⪰ 0 (infinity when dX keeps X feasible for all α).
double max_step(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0;
  const MatrixXd L = llt.matrixL();
  MatrixXd T = L.triangularView<Eigen::Lower>().solve(dX);
  const MatrixXd Tt = T.transpose();
  T = L.triangularView<Eigen::Lower>().solve(Tt).transpose();
  const double lmin =
      Eigen::SelfAdjointEigenSolver<MatrixXd>(symmetrized(T), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double scalar_step(double v, double dv) { return dv < 0 ? -v / dv : std::numeric_limits<double>::infinity(); }

// Independent constraint rows via a column-pivoted QR of the constraint
// matrix in scaled half-vectorized form (inner products preserved).
struct RowSelection {
  std::vector<std::size_t> rows;
  std::optional<VectorXd> inconsistency_ray;
};

RowSelection select_rows(const SdpProblem& problem, double tol) {
  const std::size_t p = problem.dim();
  const auto m = static_cast<Eigen::Index>(problem.num_constraints());
  const auto n = static_cast<Eigen::Index>(p * (p + 1) / 2);
  MatrixXd At = MatrixXd::Zero(n, m);
  const auto pos = [p](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(j * (j + 1) / 2 + i); };
  for (Eigen::Index t = 0; t < m; ++t)
    for (const auto& e : problem.constraints[static_cast<std::size_t>(t)].entries)
      At(pos(e.i, e.j), t) = e.value.to_double() * (e.i == e.j ? 1.0 : std::sqrt(2.0));
  Eigen::ColPivHouseholderQR<MatrixXd> qr(At);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  RowSelection out;
  for (Eigen::Index k = 0; k < rank; ++k) out.rows.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(k)));
  std::sort(out.rows.begin(), out.rows.end());
  if (rank < m) {
    // Every null vector k of Aᵀ with bᵀk ≠ 0 is a Farkas ray with A*(k) = 0.
    const VectorXd b = problem.rhs();
    Eigen::FullPivLU<MatrixXd> lu(At);
    lu.setThreshold(1e-10);
    const MatrixXd kernel = lu.kernel();
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      VectorXd k = kernel.col(c);
      const double bk = b.dot(k);
      if (std::abs(bk) > 1e3 * tol * k.norm() * (1 + b.norm())) {
        out.inconsistency_ray = k / bk;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  const auto p = static_cast<Eigen::Index>(problem.dim());
  if (p < 1) throw std::invalid_argument("solve: empty problem");
  SdpSolution sol;
  const double tol = options.tol;

  RowSelection sel = select_rows(problem, tol);
  if (sel.inconsistency_ray) {
    sol.status = SdpStatus::kInfeasible;
    sol.infeasibility_ray = *sel.inconsistency_ray;
    const MatrixXd S = problem.adjoint(sol.infeasibility_ray);
    sol.witness_margin = Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    sol.message = "linear constraints are inconsistent";
    return sol;
  }
  const Operator A(problem, sel.rows);
  const Eigen::Index m = A.size();
  VectorXd b(m);
  for (Eigen::Index t = 0; t < m; ++t) b(t) = problem.constraints[sel.rows[static_cast<std::size_t>(t)]].rhs.to_double();
  const MatrixXd& C = problem.objective;
  const double nb = b.norm(), nC = C.norm();

  MatrixXd X = MatrixXd::Identity(p, p), Z = MatrixXd::Identity(p, p);
  VectorXd y = VectorXd::Zero(m);
  double tau = 1, kappa = 1;
  const double nu = static_cast<double>(p) + 1;

  const auto expand_y = [&](const VectorXd& reduced) {
    VectorXd full = VectorXd::Zero(static_cast<Eigen::Index>(problem.num_constraints()));
    for (Eigen::Index t = 0; t < m; ++t) full(static_cast<Eigen::Index>(sel.rows[static_cast<std::size_t>(t)])) = reduced(t);
    return full;
  };

  const auto keep_iterate = [&] {
    sol.X = X / tau;
    sol.Z = Z / tau;
    sol.y = expand_y(y / tau);
  };

  double best_mu = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0;; ++it) {
    sol.iterations = it;
    const VectorXd AX = A.apply(X);
    const MatrixXd ATy = A.adjoint(y);
    const VectorXd Rp = AX - b * tau;
    const MatrixXd Rd = ATy + Z - C * tau;
    const double by = b.dot(y), cx = inner(C, X);
    const double Rg = cx - by + kappa;
    const double mu = (inner(X, Z) + tau * kappa) / nu;

    const double pobj = cx / tau, dobj = by / tau;
    sol.primal_residual = (AX / tau - b).norm() / (1 + nb);
    sol.dual_residual = ((ATy + Z) / tau - C).norm() / (1 + nC);
    sol.gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    if (sol.primal_residual <= tol && sol.dual_residual <= tol && sol.gap <= tol) {
      sol.status = SdpStatus::kFeasible;
      sol.X = X / tau;
      sol.Z = Z / tau;
      sol.y = expand_y(y / tau);
      sol.message = "optimal";
      return sol;
    }
    if (by > 0 && (ATy + Z).norm() / by <= tol) {
      sol.status = SdpStatus::kInfeasible;
      sol.infeasibility_ray = expand_y(y / by);
      const MatrixXd S = problem.adjoint(sol.infeasibility_ray);
      sol.witness_margin = Eigen::SelfAdjointEigenSolver<MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
      sol.message = "primal infeasible";
      return sol;
    }
    if (cx < 0 && AX.norm() / -cx <= tol) {
      sol.status = SdpStatus::kIndeterminate;
      sol.message = "dual infeasible (objective unbounded below)";
      return sol;
    }
    if (mu < 0.999 * best_mu) {
      best_mu = mu;
      stalled = 0;
    } else if (++stalled >= 10) {
      keep_iterate();
      sol.status = SdpStatus::kIndeterminate;
      sol.message = "no progress in the last 10 iterations";
      return sol;
    }
    if (it >= options.max_iterations) {
      keep_iterate();
      sol.status = SdpStatus::kIndeterminate;
      sol.message = "iteration limit reached";
      return sol;
    }

    if (options.verbose)
      std::fprintf(stderr, "%3d  mu %.2e  tau %.2e  kappa %.2e  pres %.2e  dres %.2e  gap %.2e\n", it, mu, tau, kappa,
                   sol.primal_residual, sol.dual_residual, sol.gap);
    Eigen::LLT<MatrixXd> zchol(Z);
    if (zchol.info() != Eigen::Success) {
      sol.status = SdpStatus::kIndeterminate;
      keep_iterate();
      sol.message = "lost positive definiteness";
      return sol;
    }
    MatrixXd Zinv = zchol.solve(MatrixXd::Identity(p, p));
    Zinv = symmetrized(Zinv);
    const MatrixXd M0 = A.schur(X, Zinv);
    MatrixXd M = M0;
    Eigen::LLT<MatrixXd> mfac(M);
    double shift = 1e-14 * std::max(1.0, M.diagonal().maxCoeff());
    for (int attempt = 0; mfac.info() != Eigen::Success && attempt < 6; ++attempt, shift *= 100) {
      M.diagonal().array() += shift;
      mfac.compute(M);
    }
    if (mfac.info() != Eigen::Success) {
      keep_iterate();
      sol.status = SdpStatus::kIndeterminate;
      sol.message = "Schur complement factorization failed";
      return sol;
    }
    // A shifted factorization solves M0 only approximately; a few rounds of
    // refinement against M0 recover most of the lost accuracy.
    const auto schur_solve = [&](const VectorXd& r) {
      VectorXd x = mfac.solve(r);
      for (int k = 0; k < 3; ++k) x += mfac.solve(r - M0 * x);
      return x;
    };
    const MatrixXd XCZ = X * C * Zinv;
    const VectorXd q = A.apply(XCZ);
    const VectorXd w = schur_solve(b + q);
    const double cc = inner(C, XCZ);

    struct Step {
      MatrixXd dX, dZ;
      VectorXd dy;
      double dtau = 0, dkappa = 0;
    };
    const auto direction = [&](double eta, const MatrixXd& Rc, double rctau) {
      Step s;
      const MatrixXd G = Rc * Zinv + eta * X * Rd * Zinv;
      const VectorXd u = schur_solve(-eta * Rp - A.apply(G));
      const double c0 = inner(C, G);
      s.dtau = (-eta * Rg + b.dot(u) - q.dot(u) - c0 - rctau / tau) / (-b.dot(w) + q.dot(w) - cc - kappa / tau);
      s.dy = u + w * s.dtau;
      const MatrixXd ATdy = A.adjoint(s.dy);
      s.dZ = -eta * Rd - ATdy + C * s.dtau;
      s.dZ = symmetrized(s.dZ);
      s.dX = G + X * ATdy * Zinv - XCZ * s.dtau;
      s.dX = symmetrized(s.dX);
      s.dkappa = (rctau - kappa * s.dtau) / tau;
      return s;
    };
    const auto step_length = [&](const Step& s) {
      double a = std::min({max_step(X, s.dX), max_step(Z, s.dZ), scalar_step(tau, s.dtau), scalar_step(kappa, s.dkappa)});
      return std::min(1.0, options.step_fraction * a);
    };

    const MatrixXd XZ = X * Z;
    const Step pred = direction(1.0, -XZ, -tau * kappa);
    const double ap = step_length(pred);
    const double mu_aff = (inner(X + ap * pred.dX, Z + ap * pred.dZ) + (tau + ap * pred.dtau) * (kappa + ap * pred.dkappa)) / nu;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);
    const MatrixXd Rc = sigma * mu * MatrixXd::Identity(p, p) - XZ - pred.dX * pred.dZ;
    const Step corr = direction(1.0 - sigma, Rc, sigma * mu - tau * kappa - pred.dtau * pred.dkappa);
    const double a = step_length(corr);

    X += a * corr.dX;
    Z += a * corr.dZ;
    y += a * corr.dy;
    tau += a * corr.dtau;
    kappa += a * corr.dkappa;
    X = symmetrized(X);
    Z = symmetrized(Z);
  }
}

SymmetricEigen jacobi_eigen(const MatrixXd& input, double tol, int max_sweeps) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const Eigen::Index n = input.rows();
  MatrixXd A = 0.5 * (input + input.transpose());
  MatrixXd V = MatrixXd::Identity(n, n);
  SymmetricEigen out;
  const double scale = std::max(A.norm(), 1e-300);
  for (out.sweeps = 0; out.sweeps < max_sweeps; ++out.sweeps) {
    double off = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= tol * scale) break;
    for (Eigen::Index pi = 0; pi < n; ++pi)
      for (Eigen::Index qi = pi + 1; qi < n; ++qi) {
        const double apq = A(pi, qi);
        if (apq == 0) continue;
        const double theta = (A(qi, qi) - A(pi, pi)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, pi), akq = A(k, qi);
          A(k, pi) = c * akp - s * akq;
          A(k, qi) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(pi, k), aqk = A(qi, k);
          A(pi, k) = c * apk - s * aqk;
          A(qi, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, pi), vkq = V(k, qi);
          V(k, pi) = c * vkp - s * vkq;
          V(k, qi) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return A(a, a) > A(b, b); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = A(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = V.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

SpectralFactor spectral_factor(const MatrixXd& X, double eig_tol) {
  const SymmetricEigen eig = jacobi_eigen(X);
  SpectralFactor f;
  f.eigenvalues = eig.values;
  const double lmax = eig.values.size() ? eig.values(0) : 0.0;
  f.threshold = eig_tol * std::max(1.0, lmax);
  if (eig.values.size() && eig.values(eig.values.size() - 1) < -f.threshold)
    throw std::domain_error("spectral_factor: matrix is indefinite (eigenvalue " +
                            std::to_string(eig.values(eig.values.size() - 1)) + ")");
  Eigen::Index keep = 0;
  while (keep < eig.values.size() && eig.values(keep) > f.threshold) ++keep;
  f.S.resize(keep, X.cols());
  for (Eigen::Index k = 0; k < keep; ++k) f.S.row(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k).transpose();
  return f;
}

MonomialMask suggest_mask(const SpectralFactor& factor, const SdpProblem& problem, double col_tol) {
  if (factor.S.cols() != static_cast<Eigen::Index>(problem.dim()))
    throw std::invalid_argument("suggest_mask: factor and problem dimensions differ");
  MonomialMask mask;
  for (Eigen::Index c = 0; c < factor.S.cols(); ++c) {
    const RatPoly& b = problem.basis[static_cast<std::size_t>(c)];
    if (b.size() != 1) throw std::invalid_argument("suggest_mask: basis is not made of monomials");
    const bool constant = b.leading_monomial().is_one();
    const double peak = factor.S.rows() ? factor.S.col(c).cwiseAbs().maxCoeff() : 0.0;
    if (constant || peak > col_tol) mask.retained.push_back(b.leading_monomial());
  }
  return mask;
}

namespace {

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_matrix_csv(const std::string& path, const MatrixXd& M, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << csv_field(header[c]);
    out << "\n";
  }
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) out << (c ? "," : "") << csv_number(M(r, c));
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

MatrixXd read_matrix_csv(const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    std::vector<double> values;
    bool numeric = true;
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0') {
        numeric = false;
        break;
      }
      values.push_back(v);
    }
    if (!numeric) {
      if (!first) throw std::runtime_error("'" + path + "': non-numeric row");
      if (header) *header = fields;
      first = false;
      continue;
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size()) throw std::runtime_error("'" + path + "': ragged rows");
    rows.push_back(std::move(values));
  }
  MatrixXd M(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return M;
}

void export_heatmap(const SpectralFactor& factor, const std::vector<std::string>& column_names,
                    const std::string& prefix, int cell) {
  const MatrixXd& S = factor.S;
  if (static_cast<Eigen::Index>(column_names.size()) != S.cols())
    throw std::invalid_argument("export_heatmap: header size does not match the factor");
  if (cell < 1) throw std::invalid_argument("export_heatmap: cell size must be positive");
  write_matrix_csv(prefix + ".csv", S, column_names);

  std::ofstream out(prefix + ".pgm");
  if (!out) throw std::runtime_error("cannot write '" + prefix + ".pgm'");
  const double lo = S.size() ? S.minCoeff() : 0.0, hi = S.size() ? S.maxCoeff() : 0.0;
  const auto shade = [&](double v) { return hi > lo ? static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo))) : 128; };
  out << "P2\n" << S.cols() * cell << " " << S.rows() * cell << "\n255\n";
  for (Eigen::Index r = 0; r < S.rows(); ++r)
    for (int dy = 0; dy < cell; ++dy) {
      for (Eigen::Index c = 0; c < S.cols(); ++c)
        for (int dx = 0; dx < cell; ++dx) out << shade(S(r, c)) << ((c + 1 == S.cols() && dx + 1 == cell) ? "" : " ");
      out << "\n";
    }
  if (!out) throw std::runtime_error("write failed for '" + prefix + ".pgm'");
}

void export_sdpa(const SdpProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "\"constraints " << problem.num_constraints() << ", basis " << problem.dim() << "\"\n";
  out << problem.num_constraints() << "\n1\n" << problem.dim() << "\n";
  for (std::size_t t = 0; t < problem.num_constraints(); ++t)
    out << (t ? " " : "") << csv_number(problem.constraints[t].rhs.to_double());
  out << "\n";
  const MatrixXd& C = problem.objective;
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (Eigen::Index j = i; j < C.cols(); ++j)
      if (C(i, j) != 0) out << "0 1 " << i + 1 << " " << j + 1 << " " << csv_number(-C(i, j)) << "\n";
  for (std::size_t t = 0; t < problem.num_constraints(); ++t)
    for (const auto& e : problem.constraints[t].entries)
      out << t + 1 << " 1 " << e.i + 1 << " " << e.j + 1 << " " << csv_number(e.value.to_double()) << "\n";
}

}  // namespace vizsos
