#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "vizsos/oracle.hpp"
#include "vizsos/polynomial_io.hpp"
#include "vizsos/sdp.hpp"

namespace vizsos::testing {

const GroebnerBasis& sos_basis(const GraphClassParams& params) {
  static std::map<std::string, GroebnerBasis> cache;
  auto it = cache.find(params.str());
  if (it == cache.end()) it = cache.emplace(params.str(), buchberger(build_sos_ideal(params))).first;
  return it->second;
}

const GroebnerBasis& sos_basis(const std::string& params) { return sos_basis(GraphClassParams::parse(params)); }

Rat random_rat(std::mt19937_64& rng, long range, long max_den) {
  std::uniform_int_distribution<long> num(-range, range), den(1, max_den);
  return Rat(num(rng), den(rng));
}

namespace {

Monomial random_monomial(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
  std::vector<std::pair<std::size_t, unsigned>> powers;
  for (unsigned d = deg(rng); d > 0; --d) powers.emplace_back(var(rng), 1);
  return Monomial::from_exponents(powers);
}

}  // namespace

RatPoly random_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t terms, unsigned max_degree) {
  std::vector<PolyTerm<Rat>> list;
  for (std::size_t k = 0; k < terms; ++k) list.push_back({random_monomial(rng, vars->size(), max_degree), random_rat(rng)});
  return RatPoly::from_terms(vars, std::move(list));
}

QuadPoly random_quad_poly(std::mt19937_64& rng, const VarTablePtr& vars, std::size_t terms, unsigned max_degree) {
  std::vector<PolyTerm<QuadExt>> list;
  for (std::size_t k = 0; k < terms; ++k)
    list.push_back({random_monomial(rng, vars->size(), max_degree), QuadExt(random_rat(rng), random_rat(rng))});
  return QuadPoly::from_terms(vars, std::move(list));
}

RatMatrix random_psd(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  std::uniform_int_distribution<long> entry(-3, 3);
  const auto r = static_cast<Eigen::Index>(rank), c = static_cast<Eigen::Index>(n);
  RatMatrix B(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) B(i, j) = Rat(entry(rng));
  // Scaling rows by squares of rationals keeps BᵀB PSD and makes pivots fractional.
  for (Eigen::Index i = 0; i < r; ++i) {
    Rat s = random_rat(rng, 3, 4);
    if (s.is_zero()) s = Rat(1, 2);
    B.row(i) *= s;
  }
  return B.transpose() * B;
}

PropertyResult gb_confluence(const GroebnerBasis& gb, std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult out;
  std::vector<std::size_t> order(gb.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < cases; ++k) {
    const RatPoly p = random_poly(rng, gb.vars(), 4, 4);
    std::shuffle(order.begin(), order.end(), rng);
    const RatPoly a = normal_form(p, gb, {order, true});
    std::shuffle(order.begin(), order.end(), rng);
    const RatPoly b = normal_form(p, gb, {order, true});
    const RatPoly c = normal_form(p, gb);
    ++out.cases;
    if (!(a == b && b == c)) {
      out.ok = false;
      out.detail = "normal forms differ for " + to_string(p);
      return out;
    }
  }
  return out;
}

PropertyResult numeric_certificate_matches(const GraphClassParams& params, unsigned ell, double tol) {
  PropertyResult out;
  const GroebnerBasis& gb = sos_basis(params);
  const IdealBasis ideal = build_sos_ideal(params);
  const RatPoly fstar = build_fstar(gb.vars());
  const SdpProblem problem = build_sdp(gb, fstar, ell);
  const SdpSolution sol = solve(problem);
  if (sol.status != SdpStatus::kFeasible) {
    out.ok = false;
    out.detail = params.str() + ": SDP status " + to_string(sol.status);
    return out;
  }
  const SpectralFactor factor = spectral_factor(sol.X);
  double worst = 0;
  for (std::uint64_t point : enumerate_variety(ideal)) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(problem.dim()));
    for (std::size_t i = 0; i < problem.dim(); ++i)
      v(static_cast<Eigen::Index>(i)) = problem.basis[i].evaluate_boolean(point).to_double();
    const double sos = (factor.S * v).squaredNorm();
    const double f = fstar.evaluate_boolean(point).to_double();
    worst = std::max(worst, std::abs(sos - f));
    ++out.cases;
  }
  out.ok = out.cases > 0 && worst <= tol;
  std::ostringstream ss;
  ss << params.str() << " ell " << ell << ": " << out.cases << " points, max |sum s^2 - f*| = " << worst;
  out.detail = ss.str();
  return out;
}

PropertyResult gram_check_equivalence(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult out;
  const GroebnerBasis& gb = sos_basis("3,2,3,2");
  const std::vector<Monomial> standard = reduced_monomials(gb, 2);
  const RatPoly model_fstar = build_fstar(gb.vars());
  std::size_t agreed_true = 0;
  for (std::size_t k = 0; k < cases; ++k) {
    std::uniform_int_distribution<std::size_t> size(2, 6), pick(0, standard.size() - 1);
    std::vector<Monomial> chosen;
    const std::size_t n = size(rng);
    while (chosen.size() < n) {
      const Monomial m = standard[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), m) == chosen.end()) chosen.push_back(m);
    }
    GramCertificate cert{gb.vars(), {}, random_psd(rng, n, 1 + k % n), 2};
    for (const auto& m : chosen) cert.basis.push_back(RatPoly::monomial(gb.vars(), m));
    // Even cases certify their own Gram form, odd ones the model's f*.
    const RatPoly fstar = k % 2 == 0 ? normal_form(gram_form(cert), gb) : model_fstar;
    const bool by_gram = verify_gram(cert, gb, fstar).verified;
    const auto polys = gram_to_polys(cert);
    const bool by_polys = polys && verify_certificate(*polys, gb, fstar).verified;
    ++out.cases;
    if (by_gram != by_polys) {
      out.ok = false;
      out.detail = "case " + std::to_string(k) + ": verify_gram " + (by_gram ? "true" : "false") +
                   ", verify_certificate " + (by_polys ? "true" : "false");
      return out;
    }
    agreed_true += by_gram ? 1 : 0;
  }
  out.detail = std::to_string(out.cases) + " matrices, " + std::to_string(agreed_true) + " verified by both";
  return out;
}

PropertyResult rationalize_round_trip(long max_den, long bound) {
  PropertyResult out;
  for (long q = 1; q <= max_den; ++q) {
    for (long p = -bound * q; p <= bound * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Rat expected(p, q);
      const Rat got = rationalize(static_cast<double>(p) / static_cast<double>(q), max_den);
      ++out.cases;
      if (got != expected) {
        out.ok = false;
        out.detail = "rationalize(" + expected.str() + ") gave " + got.str();
        return out;
      }
    }
  }
  out.detail = std::to_string(out.cases) + " fractions";
  return out;
}

}  // namespace vizsos::testing
