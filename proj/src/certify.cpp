#include "vizsos/certify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "vizsos/polynomial_io.hpp"

namespace vizsos {

Rat rationalize(double x, long max_den) {
  if (!std::isfinite(x) || std::abs(x) >= 9007199254740992.0)
    throw std::domain_error("rationalize: |x| must be finite and below 2^53");
  if (max_den < 1) throw std::invalid_argument("rationalize: max_den must be positive");
  const bool negative = x < 0;
  mpq_class rest = Rat::from_double(std::abs(x)).get();
  // Convergents h/k of the continued fraction of |x|.
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  mpz_class best_h = 0, best_k = 1;
  for (;;) {
    const mpz_class a = rest.get_num() / rest.get_den();
    const mpz_class h = a * h1 + h2, k = a * k1 + k2;
    if (k > max_den) break;
    best_h = h;
    best_k = k;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const mpq_class frac = rest - mpq_class(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  Rat out(best_h, best_k);
  return negative ? -out : out;
}

RatMatrix round_gram(const Eigen::MatrixXd& X, long max_den) {
  if (X.rows() != X.cols()) throw std::invalid_argument("round_gram: matrix not square");
  RatMatrix Q(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = i; j < X.cols(); ++j) {
      Q(i, j) = rationalize(X(i, j), max_den);
      Q(j, i) = Q(i, j);
    }
  return Q;
}

Eigen::MatrixXd to_double(const RatMatrix& Q) {
  Eigen::MatrixXd out(Q.rows(), Q.cols());
  for (Eigen::Index i = 0; i < Q.rows(); ++i)
    for (Eigen::Index j = 0; j < Q.cols(); ++j) out(i, j) = Q(i, j).to_double();
  return out;
}

PsdWitness psd_witness(const RatMatrix& Q) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument("psd_witness: matrix not square");
  const Eigen::Index n = Q.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (!(Q(i, j) == Q(j, i))) throw std::invalid_argument("psd_witness: matrix not symmetric");

  PsdWitness w;
  RatMatrix S = Q;
  w.L = RatMatrix::Identity(n, n);
  w.D.assign(static_cast<std::size_t>(n), Rat(0));
  w.perm.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) w.perm[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  Rat pivot_product(1);

  const auto fail = [&](Eigen::Index k, std::vector<Eigen::Index> extra, Rat value) {
    w.psd = false;
    for (Eigen::Index i = 0; i < k; ++i) w.minor.push_back(w.perm[static_cast<std::size_t>(i)]);
    for (Eigen::Index e : extra) w.minor.push_back(w.perm[static_cast<std::size_t>(e)]);
    w.minor_value = pivot_product * value;
    return w;
  };

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index r = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (S(i, i) > S(r, r)) r = i;
    if (S(r, r).sign() < 0) return fail(k, {r}, S(r, r));
    if (S(r, r).is_zero()) {
      for (Eigen::Index i = k; i < n; ++i)
        if (S(i, i).sign() < 0) return fail(k, {i}, S(i, i));
      for (Eigen::Index i = k; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
          if (!S(i, j).is_zero()) return fail(k, {i, j}, -(S(i, j) * S(i, j)));
      break;  // the trailing block is zero
    }
    if (r != k) {
      S.row(k).swap(S.row(r));
      S.col(k).swap(S.col(r));
      std::swap(w.perm[static_cast<std::size_t>(k)], w.perm[static_cast<std::size_t>(r)]);
      for (Eigen::Index j = 0; j < k; ++j) std::swap(w.L(k, j), w.L(r, j));
    }
    const Rat d = S(k, k);
    w.D[static_cast<std::size_t>(k)] = d;
    pivot_product *= d;
    for (Eigen::Index i = k + 1; i < n; ++i) w.L(i, k) = S(i, k) / d;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (S(i, k).is_zero()) continue;
      for (Eigen::Index j = i; j < n; ++j) {
        if (S(k, j).is_zero()) continue;
        S(i, j) -= w.L(i, k) * S(k, j);
        S(j, i) = S(i, j);
      }
    }
  }
  w.psd = true;
  return w;
}

std::optional<PolyCertificate> gram_to_polys(const GramCertificate& cert) {
  const PsdWitness w = psd_witness(cert.Q);
  if (!w.psd) return std::nullopt;
  PolyCertificate out{cert.vars, {}, cert.ell};
  const auto n = static_cast<Eigen::Index>(cert.basis.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Rat& d = w.D[static_cast<std::size_t>(k)];
    if (d.is_zero()) continue;
    const std::optional<QuadExt> root = exact_sqrt(d);
    if (!root) return std::nullopt;
    RatPoly combo(cert.vars);
    for (Eigen::Index i = k; i < n; ++i)
      if (!w.L(i, k).is_zero()) combo += cert.basis[w.perm[static_cast<std::size_t>(i)]] * w.L(i, k);
    const QuadExt r = *root;
    out.summands.push_back(combo.map_coefficients([&](const Rat& c) { return r * QuadExt(c); }));
  }
  return out;
}

namespace {

std::string head_terms(const RatPoly& p, std::size_t terms) {
  if (p.size() <= terms) return to_string(p);
  std::vector<RatPoly::Term> head(p.terms().begin(), p.terms().begin() + static_cast<std::ptrdiff_t>(terms));
  return to_string(RatPoly::from_sorted_terms(p.vars(), std::move(head))) + " + ... (" +
         std::to_string(p.size() - terms) + " more terms)";
}

}  // namespace

std::string Verification::summary(std::size_t terms) const {
  if (verified) return "verified";
  std::string out;
  if (!psd) out += "Gram matrix is not positive semidefinite; ";
  if (!degree_ok) out += "degree bound violated; ";
  if (!residual.is_zero()) out += "residual " + head_terms(residual, terms) + "; ";
  for (const auto& [d, r] : radical_residuals)
    out += "sqrt(" + std::to_string(d) + ") part " + head_terms(r, terms) + "; ";
  if (!detail.empty()) out += detail;
  while (!out.empty() && (out.back() == ' ' || out.back() == ';')) out.pop_back();
  return out;
}

Verification verify_certificate(const PolyCertificate& cert, const GroebnerBasis& gb, const RatPoly& fstar) {
  Verification v;
  v.residual = RatPoly(gb.vars());
  RatPoly rational(gb.vars());
  std::map<std::int64_t, RatPoly> radical;
  for (const auto& s : cert.summands) {
    if (s.degree() > cert.ell) v.degree_ok = false;
    const QuadPoly square = gb.is_boolean() ? multilinearize(s * s) : s * s;
    const RationalParts parts = rational_parts(square);
    rational += parts.rational;
    if (!parts.radical.is_zero()) {
      auto [it, inserted] = radical.try_emplace(parts.discriminant, gb.vars());
      it->second += parts.radical;
    }
  }
  v.residual = normal_form(rational - fstar, gb);
  for (auto& [d, r] : radical) {
    RatPoly nf = normal_form(r, gb);
    if (!nf.is_zero()) v.radical_residuals.emplace_back(d, std::move(nf));
  }
  v.verified = v.degree_ok && v.residual.is_zero() && v.radical_residuals.empty();
  return v;
}

RatPoly gram_form(const GramCertificate& cert) {
  RatPoly out(cert.vars);
  const auto n = static_cast<Eigen::Index>(cert.basis.size());
  if (cert.Q.rows() != n || cert.Q.cols() != n) throw std::invalid_argument("gram_form: basis and matrix sizes differ");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      if (cert.Q(i, j).is_zero()) continue;
      const Rat c = i == j ? cert.Q(i, j) : Rat(2) * cert.Q(i, j);
      out += cert.basis[static_cast<std::size_t>(i)] * cert.basis[static_cast<std::size_t>(j)] * c;
    }
  return out;
}

Verification verify_gram(const GramCertificate& cert, const GroebnerBasis& gb, const RatPoly& fstar) {
  Verification v;
  const PsdWitness w = psd_witness(cert.Q);
  v.psd = w.psd;
  if (!w.psd) {
    const std::size_t shown = std::min<std::size_t>(w.minor.size(), 12);
    v.detail = std::to_string(w.minor.size()) + "x" + std::to_string(w.minor.size()) + " principal minor on {";
    for (std::size_t i = 0; i < shown; ++i) v.detail += (i ? "," : "") + std::to_string(w.minor[i]);
    if (shown < w.minor.size()) v.detail += ",...";
    std::string det = w.minor_value.str();
    if (det.size() > 40) {
      std::ostringstream approx;
      approx << "~" << std::setprecision(6) << w.minor_value.to_double();
      det = approx.str();
    }
    v.detail += "} has determinant " + det;
  }
  for (const auto& b : cert.basis)
    if (b.degree() > cert.ell) v.degree_ok = false;
  v.residual = normal_form(gram_form(cert) - fstar, gb);
  v.verified = v.psd && v.degree_ok && v.residual.is_zero();
  return v;
}

std::optional<RatMatrix> certificate_gram(const PolyCertificate& cert, const std::vector<RatPoly>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<std::vector<QuadExt>> coeffs;
  for (const auto& s : cert.summands) {
    std::vector<QuadExt> row;
    QuadPoly rebuilt(s.vars());
    for (const auto& b : basis) {
      const QuadExt c = s.coefficient(b.leading_monomial()) / QuadExt(b.leading_coeff());
      row.push_back(c);
      if (!c.is_zero()) rebuilt += to_quad(b) * c;
    }
    if (!(rebuilt == s)) return std::nullopt;
    coeffs.push_back(std::move(row));
  }
  RatMatrix Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      QuadExt acc(0);
      for (const auto& row : coeffs) acc += row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
      if (!acc.is_rational()) return std::nullopt;
      Q(i, j) = acc.rational_part();
    }
  return Q;
}

QuadExt inner_product_residual(const std::vector<NamedVector>& vectors, const std::vector<InnerProductTarget>& targets) {
  const auto find = [&](const std::string& name) -> const NamedVector& {
    for (const auto& v : vectors)
      if (v.name == name) return v;
    throw std::invalid_argument("inner_product_residual: unknown vector '" + name + "'");
  };
  QuadExt worst(0);
  for (const auto& t : targets) {
    const NamedVector& u = find(t.left);
    const NamedVector& w = find(t.right);
    if (u.entries.size() != w.entries.size())
      throw std::invalid_argument("inner_product_residual: '" + t.left + "' and '" + t.right + "' differ in length");
    QuadExt acc(0);
    for (std::size_t i = 0; i < u.entries.size(); ++i) acc += u.entries[i] * w.entries[i];
    QuadExt diff = acc - t.value;
    if (diff.sign() < 0) diff = -diff;
    if ((diff - worst).sign() > 0) worst = diff;
  }
  return worst;
}

std::optional<RatMatrix> project_onto_constraints(const RatMatrix& Q, const SdpProblem& problem) {
  const auto p = static_cast<Eigen::Index>(problem.dim());
  if (Q.rows() != p || Q.cols() != p) throw std::invalid_argument("project_onto_constraints: dimension mismatch");
  const std::size_t m = problem.num_constraints();
  // Frobenius products ⟨A_s, A_t⟩ and residuals ⟨A_t, Q⟩ − b_t.
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Rat>> rows(m);
  for (std::size_t t = 0; t < m; ++t)
    for (const auto& e : problem.constraints[t].entries) rows[t][{e.i, e.j}] = e.value;
  const auto weight = [](const std::pair<std::size_t, std::size_t>& ij) { return Rat(ij.first == ij.second ? 1 : 2); };

  std::vector<std::vector<Rat>> aug(m, std::vector<Rat>(m + 1, Rat(0)));
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t t = s; t < m; ++t) {
      Rat acc(0);
      const auto& small = rows[s].size() <= rows[t].size() ? rows[s] : rows[t];
      const auto& large = rows[s].size() <= rows[t].size() ? rows[t] : rows[s];
      for (const auto& [ij, v] : small)
        if (auto it = large.find(ij); it != large.end()) acc += weight(ij) * v * it->second;
      aug[s][t] = acc;
      aug[t][s] = acc;
    }
    Rat r = -problem.constraints[s].rhs;
    for (const auto& [ij, v] : rows[s]) r += weight(ij) * v * Q(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second));
    aug[s][m] = r;
  }

  // Gauss-Jordan over Q; dependent rows must have zero residual.
  std::vector<std::size_t> pivot_col(m, m);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m && rank < m; ++c) {
    std::size_t r = rank;
    while (r < m && aug[r][c].is_zero()) ++r;
    if (r == m) continue;
    std::swap(aug[r], aug[rank]);
    const Rat inv = aug[rank][c].inverse();
    for (std::size_t k = c; k <= m; ++k) aug[rank][k] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || aug[i][c].is_zero()) continue;
      const Rat f = aug[i][c];
      for (std::size_t k = c; k <= m; ++k)
        if (!aug[rank][k].is_zero()) aug[i][k] -= f * aug[rank][k];
    }
    pivot_col[rank] = c;
    ++rank;
  }
  for (std::size_t i = rank; i < m; ++i)
    if (!aug[i][m].is_zero()) return std::nullopt;

  std::vector<Rat> z(m, Rat(0));
  for (std::size_t i = 0; i < rank; ++i) z[pivot_col[i]] = aug[i][m];
  RatMatrix out = Q;
  for (std::size_t t = 0; t < m; ++t) {
    if (z[t].is_zero()) continue;
    for (const auto& [ij, v] : rows[t]) {
      const auto i = static_cast<Eigen::Index>(ij.first), j = static_cast<Eigen::Index>(ij.second);
      out(i, j) -= z[t] * v;
      if (i != j) out(j, i) = out(i, j);
    }
  }
  return out;
}

}  // namespace vizsos
