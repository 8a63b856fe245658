#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "support.hpp"
#include "vizsos/families.hpp"
#include "vizsos/polynomial_io.hpp"
#include "vizsos/sdp.hpp"

using namespace vizsos;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using vizsos::testing::kSeed;
using vizsos::testing::sos_basis;

namespace {

const GroebnerBasis& gb3232() { return sos_basis("3,2,3,2"); }
RatPoly fstar3232() { return build_fstar(gb3232().vars()); }

// {1, x_gh, x_gh·x_gh'}: constant, vertex variables and same-g pairs.
MonomialMask nineteen(const VarTable& vars) {
  MonomialMask mask;
  mask.retained.push_back(Monomial());
  for (int g = 0; g < 3; ++g)
    for (int h = 0; h < 3; ++h) {
      mask.retained.push_back(Monomial::variable(vars.vertex(g, h)));
      for (int h2 = h + 1; h2 < 3; ++h2)
        mask.retained.push_back(Monomial::variable(vars.vertex(g, h)) * Monomial::variable(vars.vertex(g, h2)));
    }
  return mask;
}

double min_eigenvalue(const MatrixXd& X) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(X, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::path("sdp-test-out");
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("problem dimensions") {
  const auto l1 = build_sdp(gb3232(), fstar3232(), 1);
  CHECK(l1.dim() == 12);
  CHECK(l1.num_constraints() == 67);
  const auto l2 = build_sdp(gb3232(), fstar3232(), 2);
  CHECK(l2.dim() == 67);
  CHECK(l2.num_constraints() == 359);
  const MonomialMask mask = nineteen(*gb3232().vars());
  const auto masked = build_sdp(gb3232(), fstar3232(), 2, &mask);
  CHECK(masked.dim() == 19);
  CHECK(masked.num_constraints() == 99);
  CHECK(masked.warnings.empty());
}

TEST_CASE("constraints are the standard monomials of the products") {
  for (unsigned ell : {1u, 2u}) {
    const auto problem = build_sdp(gb3232(), fstar3232(), ell);
    const RatPoly target = normal_form(fstar3232(), gb3232());
    std::set<Monomial, MonomialGreater> expected;
    for (const auto& a : problem.basis)
      for (const auto& b : problem.basis) {
        const RatPoly nf = normal_form(a * b, gb3232());
        for (const auto& t : nf.terms()) expected.insert(t.monomial);
      }
    for (const auto& t : target.terms()) expected.insert(t.monomial);
    REQUIRE(problem.num_constraints() == expected.size());
    for (const auto& c : problem.constraints) {
      CHECK(expected.count(c.monomial) == 1);
      CHECK(c.rhs == target.coefficient(c.monomial));
      for (const auto& e : c.entries) CHECK(e.i <= e.j);
    }
  }
}

TEST_CASE("operator and adjoint are transposes") {
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> normal;
  const auto problem = build_sdp(gb3232(), fstar3232(), 1);
  const auto p = static_cast<Eigen::Index>(problem.dim()), m = static_cast<Eigen::Index>(problem.num_constraints());
  for (int k = 0; k < 20; ++k) {
    MatrixXd X(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) X(i, j) = normal(rng);
    X = 0.5 * (X + X.transpose()).eval();
    VectorXd y(m);
    for (Eigen::Index t = 0; t < m; ++t) y(t) = normal(rng);
    const MatrixXd Aty = problem.adjoint(y);
    CHECK(Aty.isApprox(Aty.transpose()));
    CHECK(problem.apply(X).dot(y) == doctest::Approx(X.cwiseProduct(Aty).sum()).epsilon(1e-10));
  }
}

TEST_CASE("feasibility pattern") {
  SolverOptions options;
  options.tol = 1e-8;

  auto t0 = std::chrono::steady_clock::now();
  const auto l1 = build_sdp(gb3232(), fstar3232(), 1);
  const SdpSolution s1 = solve(l1, options);
  CHECK(s1.status == SdpStatus::kInfeasible);
  CHECK(check_infeasibility_ray(l1, s1.infeasibility_ray, 1e-6));
  CHECK(seconds_since(t0) < 60);

  t0 = std::chrono::steady_clock::now();
  const auto l2 = build_sdp(gb3232(), fstar3232(), 2);
  const SdpSolution s2 = solve(l2, options);
  CHECK(s2.status == SdpStatus::kFeasible);
  CHECK(s2.primal_residual <= 1e-8);
  CHECK(s2.gap <= 1e-8);
  CHECK(seconds_since(t0) < 60);

  t0 = std::chrono::steady_clock::now();
  const MonomialMask mask = nineteen(*gb3232().vars());
  const auto masked = build_sdp(gb3232(), fstar3232(), 2, &mask);
  const SdpSolution s3 = solve(masked, options);
  CHECK(s3.status == SdpStatus::kFeasible);
  CHECK(s3.primal_residual <= 1e-8);
  CHECK(s3.gap <= 1e-8);
  CHECK(seconds_since(t0) < 60);

  for (const auto* pair : {&l2, &masked}) {
    const SdpSolution& s = pair == &l2 ? s2 : s3;
    CHECK((pair->apply(s.X) - pair->rhs()).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(min_eigenvalue(s.X) >= -1e-6);
  }
}

TEST_CASE("grouped basis solve") {
  const auto problem = build_sdp_from_basis(gb3232(), fstar3232(), grouped_basis(gb3232().vars(), 2));
  CHECK(problem.dim() == 7);
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.status == SdpStatus::kFeasible);
  CHECK(spectral_factor(sol.X).S.rows() == 4);
}

TEST_CASE("orbit objective steers the masked problem to four summands") {
  const MonomialMask mask = nineteen(*gb3232().vars());
  Objective orbit = Objective::parse("orbit");
  CHECK_THROWS_AS(build_sdp(gb3232(), fstar3232(), 2, &mask, orbit), std::invalid_argument);
  orbit.span = grouped_basis(gb3232().vars(), 2);
  const auto problem = build_sdp(gb3232(), fstar3232(), 2, &mask, orbit);
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.status == SdpStatus::kFeasible);
  CHECK(problem.objective.cwiseProduct(sol.X).sum() == doctest::Approx(0).epsilon(1e-6).scale(1));
  const SpectralFactor factor = spectral_factor(sol.X);
  CHECK(factor.S.rows() == 4);
  CHECK(factor.S.cols() == 19);

  const auto prefix = (scratch_dir() / "masked").string();
  export_heatmap(factor, problem.basis_names, prefix);
  std::vector<std::string> header;
  const MatrixXd back = read_matrix_csv(prefix + ".csv", &header);
  CHECK(back.rows() == 4);
  CHECK(back.cols() == 19);
  CHECK(header == problem.basis_names);
  CHECK(back.isApprox(factor.S, 1e-12));
}

TEST_CASE("full solution factors by its eigenvalues") {
  const auto problem = build_sdp(gb3232(), fstar3232(), 2);
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.status == SdpStatus::kFeasible);
  const SpectralFactor factor = spectral_factor(sol.X);
  const double cut = factor.threshold;
  const auto above = (factor.eigenvalues.array() > cut).count();
  CHECK(factor.S.rows() == above);
  CHECK((factor.S.transpose() * factor.S - sol.X).norm() <= 1e-5 * (1 + sol.X.norm()));
  MESSAGE("zero-objective factor keeps " << factor.S.rows() << " of 67 rows");
}

TEST_CASE("numeric certificate matches f* on the variety") {
  for (const char* params : {"2,1,2,1", "2,2,3,2", "3,2,3,2"}) {
    const auto r = testing::numeric_certificate_matches(GraphClassParams::parse(params), 2);
    CHECK_MESSAGE(r.ok, r.detail);
  }
}

TEST_CASE("spectral factor") {
  const SpectralFactor id = spectral_factor(MatrixXd::Identity(3, 3));
  CHECK(id.S.rows() == 3);
  CHECK((id.S.transpose() * id.S).isApprox(MatrixXd::Identity(3, 3)));
  MatrixXd rank1 = VectorXd::Ones(4) * VectorXd::Ones(4).transpose();
  CHECK(spectral_factor(rank1).S.rows() == 1);
  MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(spectral_factor(indefinite), std::domain_error);
}

TEST_CASE("jacobi eigenvalues agree with a library solver") {
  std::mt19937_64 rng(kSeed + 1);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 30; ++k) {
    const Eigen::Index n = 1 + k % 9;
    MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = normal(rng);
    A = (A + A.transpose()).eval();
    const SymmetricEigen mine = jacobi_eigen(A);
    VectorXd ref = Eigen::SelfAdjointEigenSolver<MatrixXd>(A).eigenvalues().reverse();
    CHECK((mine.values - ref).cwiseAbs().maxCoeff() <= 1e-10 * (1 + A.norm()));
    const MatrixXd recon = mine.vectors * mine.values.asDiagonal() * mine.vectors.transpose();
    CHECK((recon - A).norm() <= 1e-10 * (1 + A.norm()));
  }
}

TEST_CASE("suggested masks") {
  const auto problem = build_sdp(gb3232(), fstar3232(), 1);
  SpectralFactor factor;
  factor.S = MatrixXd::Ones(2, 12);
  CHECK(suggest_mask(factor, problem).size() == 12);
  factor.S.col(3).setZero();
  const MonomialMask dropped = suggest_mask(factor, problem);
  CHECK(dropped.size() == 11);
  CHECK_FALSE(dropped.contains(problem.constraints.empty() ? Monomial() : problem.basis[3].leading_monomial()));
  // The constant column survives even when it is zero.
  std::size_t constant = 0;
  for (std::size_t i = 0; i < problem.dim(); ++i)
    if (problem.basis[i].leading_monomial().is_one()) constant = i;
  factor.S.col(static_cast<Eigen::Index>(constant)).setZero();
  CHECK(suggest_mask(factor, problem).contains(Monomial()));
}

TEST_CASE("mask files") {
  const auto vars = gb3232().vars();
  const MonomialMask mask = nineteen(*vars);
  const auto path = (scratch_dir() / "nineteen.mask").string();
  write_mask(path, mask, *vars);
  const MonomialMask back = read_mask(path, *vars);
  CHECK(back.retained == mask.retained);
  std::ofstream(path) << "# comment\n1\nx[9,9]\n";
  CHECK_THROWS(read_mask(path, *vars));
}

TEST_CASE("inconsistent linear constraints") {
  MonomialMask mask;
  mask.retained.push_back(Monomial::variable(gb3232().vars()->vertex(0, 0)));
  const auto problem = build_sdp(gb3232(), fstar3232(), 2, &mask);
  CHECK_FALSE(problem.warnings.empty());
  const SdpSolution sol = solve(problem);
  CHECK(sol.status == SdpStatus::kInfeasible);
}

TEST_CASE("heatmap edge cases") {
  SpectralFactor one;
  one.S = MatrixXd::Constant(1, 1, 0.5);
  const auto prefix = (scratch_dir() / "one").string();
  export_heatmap(one, {"1"}, prefix);
  const auto csv = read_lines(prefix + ".csv");
  REQUIRE(csv.size() == 2);
  CHECK(csv[1] == "0.5");

  SpectralFactor zero;
  zero.S = MatrixXd::Zero(2, 3);
  const auto zprefix = (scratch_dir() / "zero").string();
  export_heatmap(zero, {"a", "b", "c"}, zprefix, 2);
  const auto pgm = read_lines(zprefix + ".pgm");
  REQUIRE(pgm.size() == 3 + 4);
  CHECK(pgm[0] == "P2");
  CHECK(pgm[1] == "6 4");
  for (std::size_t r = 3; r < pgm.size(); ++r) CHECK(pgm[r] == "128 128 128 128 128 128");
  CHECK_THROWS_AS(export_heatmap(zero, {"a"}, zprefix), std::invalid_argument);
}

TEST_CASE("SDPA export") {
  const auto problem = build_sdp(gb3232(), fstar3232(), 1);
  const auto path = scratch_dir() / "l1.dat-s";
  export_sdpa(problem, path.string());
  const auto lines = read_lines(path);
  REQUIRE(lines.size() > 5);
  CHECK(lines[1] == "67");
  CHECK(lines[2] == "1");
  CHECK(lines[3] == "12");
  std::size_t entries = 0;
  for (const auto& c : problem.constraints) entries += c.entries.size();
  CHECK(lines.size() == 5 + entries);
}

TEST_CASE("objectives") {
  CHECK(Objective::parse("zero").kind == ObjectiveKind::kZero);
  CHECK(Objective::parse("trace-min").str() == "trace-min");
  CHECK(Objective::parse("orbit").kind == ObjectiveKind::kOrbit);
  CHECK_THROWS_AS(Objective::parse("maximize"), std::invalid_argument);
  const auto path = (scratch_dir() / "weights.csv").string();
  write_matrix_csv(path, MatrixXd::Identity(3, 3));
  const Objective custom = Objective::parse("custom:" + path);
  CHECK(custom.weights.rows() == 3);
  CHECK_THROWS_AS(build_sdp(gb3232(), fstar3232(), 1, nullptr, custom), std::invalid_argument);
  const auto problem = build_sdp(gb3232(), fstar3232(), 1, nullptr, Objective::parse("trace-max"));
  CHECK(problem.objective.isApprox(-MatrixXd::Identity(12, 12)));
}

TEST_CASE("solves are deterministic") {
  const auto problem = build_sdp(gb3232(), fstar3232(), 1, nullptr);
  const auto mask = nineteen(*gb3232().vars());
  const auto masked = build_sdp(gb3232(), fstar3232(), 2, &mask);
  const SdpSolution a = solve(masked), b = solve(masked);
  CHECK(a.iterations == b.iterations);
  CHECK((a.X - b.X).norm() == 0.0);
  CHECK(solve(problem).iterations == solve(problem).iterations);
}

}  // TEST_SUITE
