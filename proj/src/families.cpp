#include "vizsos/families.hpp"

#include <algorithm>
#include <functional>

namespace vizsos {

namespace {

QuadExt sqrt2(const Rat& b) { return QuadExt::sqrt_times(b, 2); }

Rat frac(long num, long den) { return Rat(num) / Rat(den); }

void require(bool ok, const std::string& family, const std::string& condition, const GraphClassParams& params) {
  if (!ok) throw std::domain_error(family + " requires " + condition + " (got " + params.str() + ")");
}

// Calls fn(S) for every q-subset S of {0..n-1}, as a sorted index vector.
void for_each_subset(int n, unsigned q, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(q);
  std::function<void(unsigned, int)> rec = [&](unsigned pos, int start) {
    if (pos == q) {
      fn(idx);
      return;
    }
    for (int h = start; h < n; ++h) {
      idx[pos] = h;
      rec(pos + 1, h + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

FamilyId FamilyId::parse(const std::string& text) {
  if (text == "thm46") return {FamilyKind::kThm46, 0};
  if (text == "thm51") return {FamilyKind::kThm51, 0};
  if (text == "thm52") return {FamilyKind::kThm52, 0};
  if (text.rfind("conj54:", 0) == 0) {
    const std::string num = text.substr(7);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad family id '" + text + "'");
    return {FamilyKind::kConj54, static_cast<unsigned>(std::stoul(num))};
  }
  throw std::invalid_argument("unknown family '" + text + "' (thm46, thm51, thm52, conj54:J)");
}

std::string FamilyId::str() const {
  switch (kind) {
    case FamilyKind::kThm46: return "thm46";
    case FamilyKind::kThm51: return "thm51";
    case FamilyKind::kThm52: return "thm52";
    case FamilyKind::kConj54: return "conj54:" + std::to_string(j);
  }
  return "";
}

unsigned FamilyId::degree() const {
  switch (kind) {
    case FamilyKind::kThm51: return 1;
    case FamilyKind::kThm46:
    case FamilyKind::kThm52: return 2;
    case FamilyKind::kConj54: return j;
  }
  return 0;
}

void check_domain(const FamilyId& id, const GraphClassParams& p) {
  p.validate();
  const std::string name = id.str();
  switch (id.kind) {
    case FamilyKind::kThm46:
      require(p.k_g == p.n_g - 1 && p.n_h == 3 && p.k_h == 2 && p.n_g >= 3, name,
              "k_G = n_G-1, n_H = 3, k_H = 2, n_G >= 3", p);
      break;
    case FamilyKind::kThm51:
      require(p.k_g == p.n_g && p.n_g >= 2 && p.k_h == p.n_h - 1 && p.k_h >= 2, name,
              "k_G = n_G >= 2, k_H = n_H-1 >= 2", p);
      break;
    case FamilyKind::kThm52:
      require(p.k_g == p.n_g && p.n_g >= 2 && p.k_h == p.n_h - 2 && p.k_h >= 2, name,
              "k_G = n_G >= 2, k_H = n_H-2 >= 2", p);
      break;
    case FamilyKind::kConj54:
      if (id.j < 3) throw std::domain_error(name + " requires j >= 3");
      require(p.k_g == p.n_g && p.k_h == p.n_h - static_cast<int>(id.j) && p.k_h >= 1, name,
              "k_G = n_G, k_H = n_H-j >= 1", p);
      break;
  }
}

RatPoly elementary_sum(const VarTablePtr& vars, int g, unsigned q) {
  const auto& params = vars->params();
  if (!params) throw std::invalid_argument("elementary_sum: not a graph-class table");
  std::vector<RatPoly::Term> terms;
  for_each_subset(params->n_h, q, [&](const std::vector<int>& subset) {
    Monomial m;
    for (int h : subset) m = m * Monomial::variable(vars->vertex(g, h));
    terms.push_back({m, Rat(1)});
  });
  return RatPoly::from_terms(vars, std::move(terms));
}

std::vector<RatPoly> grouped_basis(const VarTablePtr& vars, unsigned degree) {
  const int n_g = vars->params().value().n_g;
  std::vector<RatPoly> basis{RatPoly(vars, Rat(1))};
  for (unsigned q = 1; q <= degree; ++q)
    for (int g = 0; g < n_g; ++g) basis.push_back(elementary_sum(vars, g, q));
  return basis;
}

Thm46Coefficients thm46_coefficients(int n_g) {
  return {sqrt2(Rat(n_g - 1)), sqrt2(frac(-2, 3)), sqrt2(frac(1, 3))};
}

Thm52Coefficients thm52_coefficients(int n_h) {
  const long n = n_h;
  return {QuadExt(Rat((n - 2) * n), Rat(n - 2) * Rat(n - 1) / Rat(2), 2), QuadExt(Rat(-(2 * n - 3)), Rat(-(n - 2)), 2),
          QuadExt(Rat(2), Rat(1), 2)};
}

PolyCertificate cert_thm46(const GraphClassParams& params) {
  check_domain({FamilyKind::kThm46, 0}, params);
  const VarTablePtr vars = VarTable::for_graph_classes(params);
  const auto [alpha, beta, gamma] = thm46_coefficients(params.n_g);
  PolyCertificate cert{vars, {}, 2};
  QuadPoly s0(vars, alpha);
  for (int g = 0; g < params.n_g; ++g) {
    const RatPoly e1 = elementary_sum(vars, g, 1);
    const RatPoly e2 = elementary_sum(vars, g, 2);
    s0 += to_quad(e1) * beta + to_quad(e2) * gamma;
    cert.summands.push_back(to_quad((e1 - e2 * Rat(2)) * frac(1, 3)));
  }
  cert.summands.insert(cert.summands.begin(), s0);
  return cert;
}

PolyCertificate cert_thm51(const GraphClassParams& params) {
  check_domain({FamilyKind::kThm51, 0}, params);
  const VarTablePtr vars = VarTable::for_graph_classes(params);
  PolyCertificate cert{vars, {}, 1};
  for (int g = 0; g < params.n_g; ++g)
    cert.summands.push_back(to_quad(elementary_sum(vars, g, 1) - RatPoly(vars, Rat(params.k_h))));
  return cert;
}

PolyCertificate cert_thm52(const GraphClassParams& params) {
  check_domain({FamilyKind::kThm52, 0}, params);
  const VarTablePtr vars = VarTable::for_graph_classes(params);
  const auto [alpha, beta, gamma] = thm52_coefficients(params.n_h);
  PolyCertificate cert{vars, {}, 2};
  for (int g = 0; g < params.n_g; ++g)
    cert.summands.push_back(QuadPoly(vars, alpha) + to_quad(elementary_sum(vars, g, 1)) * beta +
                            to_quad(elementary_sum(vars, g, 2)) * gamma);
  return cert;
}

PolyCertificate family_certificate(const FamilyId& id, const GraphClassParams& params) {
  switch (id.kind) {
    case FamilyKind::kThm46: return cert_thm46(params);
    case FamilyKind::kThm51: return cert_thm51(params);
    case FamilyKind::kThm52: return cert_thm52(params);
    case FamilyKind::kConj54: break;
  }
  throw std::invalid_argument("family_certificate: conj54 has no closed form; use ansatz_conj54");
}

std::array<QuadExt, 3> check_system_52(const QuadExt& a, const QuadExt& b, const QuadExt& c, int n_h) {
  const long n = n_h;
  const Rat r1 = Rat(n * (n - 1) * (n - 2) * (3 * n - 5)) / Rat(4);
  const QuadExt e1 = a * a + QuadExt(r1) * c * c + QuadExt(Rat(n * (n - 1) * (n - 2))) * b * c + QuadExt(Rat(n - 2));
  const QuadExt e2 = b * b + QuadExt(2) * a * b - QuadExt(Rat((n - 1) * (n - 2) * (2 * n - 3))) * c * c -
                     QuadExt(Rat(3 * (n - 1) * (n - 2))) * b * c - QuadExt(1);
  const QuadExt e3 = QuadExt(2) * b * b + QuadExt(2) * a * c + QuadExt(Rat(1 + 3 * (n - 1) * (n - 2))) * c * c +
                     QuadExt(Rat(2 * (3 * n - 4))) * b * c;
  return {e1, e2, e3};
}

std::vector<NamedVector> example44_vectors(int n_g) {
  if (n_g < 2) throw std::domain_error("example44_vectors: n_G >= 2 required");
  const auto [alpha, beta, gamma] = thm46_coefficients(n_g);
  const auto n = static_cast<std::size_t>(n_g);
  const auto column = [&](const QuadExt& own, int g, const QuadExt& last) {
    std::vector<QuadExt> v(n + 1, QuadExt(0));
    if (g >= 0) v[static_cast<std::size_t>(g)] = own;
    v[n] = last;
    return v;
  };
  std::vector<NamedVector> out{{"a", column(0, -1, alpha)}};
  for (int g = 0; g < n_g; ++g) out.push_back({"b" + std::to_string(g), column(QuadExt(frac(1, 3)), g, beta)});
  for (int g = 0; g < n_g; ++g) out.push_back({"c" + std::to_string(g), column(QuadExt(frac(-2, 3)), g, gamma)});
  return out;
}

std::vector<InnerProductTarget> example44_targets(int n_g) {
  const long m = n_g - 1;
  std::vector<InnerProductTarget> t{{"a", "a", QuadExt(Rat(2 * m * m))}};
  const auto b = [](int g) { return "b" + std::to_string(g); };
  const auto c = [](int g) { return "c" + std::to_string(g); };
  for (int g = 0; g < n_g; ++g) {
    t.push_back({"a", b(g), QuadExt(Rat(-4 * m) / Rat(3))});
    t.push_back({"a", c(g), QuadExt(Rat(2 * m) / Rat(3))});
    t.push_back({b(g), b(g), QuadExt(1)});
    t.push_back({c(g), c(g), QuadExt(frac(6, 9))});
    t.push_back({b(g), c(g), QuadExt(frac(-6, 9))});
    for (int g2 = 0; g2 < n_g; ++g2) {
      if (g2 == g) continue;
      if (g2 > g) {
        t.push_back({b(g), b(g2), QuadExt(frac(8, 9))});
        t.push_back({c(g), c(g2), QuadExt(frac(2, 9))});
      }
      t.push_back({b(g), c(g2), QuadExt(frac(-4, 9))});
    }
  }
  return t;
}

RatMatrix example44_gram(int n_g) {
  const auto vectors = example44_vectors(n_g);
  const auto n = static_cast<Eigen::Index>(2 * n_g + 1);
  std::vector<std::string> order{"a"};
  for (int g = 0; g < n_g; ++g) order.push_back("b" + std::to_string(g));
  for (int g = 0; g < n_g; ++g) order.push_back("c" + std::to_string(g));
  RatMatrix Q(n, n);
  for (const auto& target : example44_targets(n_g)) {
    const auto pos = [&](const std::string& name) {
      return static_cast<Eigen::Index>(std::find(order.begin(), order.end(), name) - order.begin());
    };
    const Eigen::Index i = pos(target.left), j = pos(target.right);
    Q(i, j) = target.value.rational_part();
    Q(j, i) = target.value.rational_part();
  }
  return Q;
}

AnsatzReport ansatz_conj54(unsigned j, const GraphClassParams& params, long max_den, const GroebnerBasis* gb,
                           const SolverOptions& options) {
  const FamilyId id{FamilyKind::kConj54, j};
  check_domain(id, params);
  AnsatzReport report;
  report.id = id;
  report.params = params;
  report.groups_per_vertex = j + 1;

  std::optional<GroebnerBasis> own;
  if (!gb) {
    own = buchberger(build_sos_ideal(params));
    gb = &*own;
  }
  const VarTablePtr& vars = gb->vars();
  const RatPoly fstar = build_fstar(vars);
  SdpProblem problem = build_sdp_from_basis(*gb, fstar, grouped_basis(vars, j));
  report.basis_size = problem.dim();
  report.constraints = problem.num_constraints();
  report.basis_names = problem.basis_names;

  const SdpSolution sol = solve(problem, options);
  report.status = sol.status;
  if (sol.status != SdpStatus::kFeasible) {
    report.detail = "SDP " + std::string(to_string(sol.status)) + ": " + sol.message;
    return report;
  }
  GramCertificate cert{vars, problem.basis, round_gram(sol.X, max_den), j};
  report.rounded = true;
  Verification v = verify_gram(cert, *gb, fstar);
  if (!v.verified) {
    if (auto projected = project_onto_constraints(cert.Q, problem)) {
      GramCertificate alt{vars, problem.basis, *projected, j};
      Verification w = verify_gram(alt, *gb, fstar);
      if (w.verified) {
        cert = std::move(alt);
        v = std::move(w);
      }
    }
  }
  report.psd = v.psd;
  report.verified = v.verified;
  report.gram = cert.Q;
  report.detail = v.verified ? "verified" : v.summary();
  return report;
}

}  // namespace vizsos
