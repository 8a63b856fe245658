#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vizsos/families.hpp"
#include "vizsos/io.hpp"
#include "vizsos/oracle.hpp"
#include "vizsos/pipeline.hpp"
#include "vizsos/polynomial_io.hpp"

using namespace vizsos;
namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 the requested check failed, 2 usage or input error.
constexpr int kFailed = 1;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    save_text(path, text);
  }
}

template <class T>
T read_with(const std::string& path, T (*reader)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return reader(in);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Source of a Gröbner basis: a GB file, an ideal file or the class parameters.
struct GbSource {
  std::string gb_file;
  std::string ideal_file;
  std::string params;
  std::string cache_dir = "vizsos-cache";
  std::uint64_t max_steps = 10'000'000;

  void add_to(CLI::App* app) {
    app->add_option("--gb", gb_file, "Groebner basis file");
    app->add_option("--ideal", ideal_file, "ideal file");
    app->add_option("--params", params, "class parameters n_G,k_G,n_H,k_H");
    app->add_option("--cache", cache_dir, "Groebner basis cache directory");
    app->add_option("--max-steps", max_steps, "reduction step budget");
  }

  GroebnerBasis load() const {
    if (!gb_file.empty()) return read_with(gb_file, read_groebner);
    GroebnerOptions options;
    options.max_steps = max_steps;
    if (!ideal_file.empty()) return GroebnerCache(cache_dir).load_or_compute(read_with(ideal_file, read_ideal), options);
    if (!params.empty()) return GroebnerCache(cache_dir).load_or_compute(build_sos_ideal(GraphClassParams::parse(params)), options);
    throw CLI::ValidationError("one of --gb, --ideal or --params is required");
  }
};

RatPoly fstar_for(const GroebnerBasis& gb) {
  if (!gb.vars()->params()) throw std::invalid_argument("f* needs a graph-class ring (params header)");
  return build_fstar(gb.vars());
}

int cmd_ideal(const std::string& params, const std::string& out) {
  std::ostringstream text;
  write_ideal(text, build_sos_ideal(GraphClassParams::parse(params)));
  emit(out, text.str());
  return 0;
}

int cmd_groebner(const GbSource& src, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const GroebnerBasis gb = src.load();
  std::ostringstream text;
  write_groebner(text, gb);
  emit(out, text.str());
  std::cerr << "elements: " << gb.size() << "\nvariables: " << gb.vars()->size() << "\nseconds: " << seconds_since(t0)
            << "\n";
  return 0;
}

struct SdpArgs {
  unsigned ell = 2;
  std::string mask;
  std::string objective = "zero";
  double tol = 1e-8;
  int max_iterations = 200;
  double eig_tol = 1e-6;
  double col_tol = 1e-5;
  bool grouped = false;
  bool verbose = false;
  std::string export_sdpa;
  std::string heatmap;
  std::string solution;
  std::string suggest_mask;
};

int cmd_sdp(const GbSource& src, const SdpArgs& a) {
  const GroebnerBasis gb = src.load();
  const RatPoly fstar = fstar_for(gb);
  Objective objective = Objective::parse(a.objective);
  if (objective.kind == ObjectiveKind::kOrbit) objective.span = grouped_basis(gb.vars(), a.ell);
  SdpProblem problem;
  if (a.grouped) {
    if (!a.mask.empty()) throw CLI::ValidationError("--mask and --grouped exclude each other");
    problem = build_sdp_from_basis(gb, fstar, grouped_basis(gb.vars(), a.ell), objective);
  } else if (!a.mask.empty()) {
    const MonomialMask mask = read_mask(a.mask, *gb.vars());
    problem = build_sdp(gb, fstar, a.ell, &mask, objective);
  } else {
    problem = build_sdp(gb, fstar, a.ell, nullptr, objective);
  }
  for (const auto& w : problem.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "dimension: " << problem.dim() << "\nconstraints: " << problem.num_constraints() << "\n";
  if (!a.export_sdpa.empty()) export_sdpa(problem, a.export_sdpa);

  SolverOptions options;
  options.tol = a.tol;
  options.max_iterations = a.max_iterations;
  options.verbose = a.verbose;
  const auto t0 = std::chrono::steady_clock::now();
  const SdpSolution sol = solve(problem, options);
  std::cout << "status: " << to_string(sol.status) << "\niterations: " << sol.iterations
            << "\nprimal-residual: " << sol.primal_residual << "\ndual-residual: " << sol.dual_residual
            << "\ngap: " << sol.gap << "\nmessage: " << sol.message << "\n";
  std::cerr << "seconds: " << seconds_since(t0) << "\n";
  if (sol.status == SdpStatus::kInfeasible) {
    std::cout << "witness-margin: " << sol.witness_margin << "\n";
    if (!a.grouped && a.mask.empty()) std::cout << "saturated: " << (saturation_check(gb, a.ell) ? "true" : "false") << "\n";
  }
  if (sol.status != SdpStatus::kFeasible) return sol.status == SdpStatus::kInfeasible ? 0 : kFailed;

  if (!a.solution.empty()) write_matrix_csv(a.solution, sol.X, problem.basis_names);
  if (!a.heatmap.empty() || !a.suggest_mask.empty()) {
    const SpectralFactor f = spectral_factor(sol.X, a.eig_tol);
    std::cout << "factor-rows: " << f.S.rows() << "\n";
    if (!a.heatmap.empty()) export_heatmap(f, problem.basis_names, a.heatmap);
    if (!a.suggest_mask.empty()) {
      const MonomialMask m = suggest_mask(f, problem, a.col_tol);
      write_mask(a.suggest_mask, m, *gb.vars());
      std::cout << "suggested-mask: " << m.size() << "\n";
    }
  }
  return 0;
}

int cmd_round(const GbSource& src, const std::string& solution, unsigned ell, long max_den, bool project,
              const std::string& out, const std::string& poly_out) {
  const GroebnerBasis gb = src.load();
  std::vector<std::string> names;
  const Eigen::MatrixXd X = read_matrix_csv(solution, &names);
  if (names.size() != static_cast<std::size_t>(X.cols()) || X.rows() != X.cols())
    throw std::runtime_error(solution + ": expected a square matrix with a header of basis entries");
  std::vector<RatPoly> basis;
  for (const auto& n : names) basis.push_back(parse_rat_poly(n, gb.vars()));
  GramCertificate cert{gb.vars(), basis, round_gram(X, max_den), ell};
  if (project) {
    const RatPoly fstar = fstar_for(gb);
    const SdpProblem problem = build_sdp_from_basis(gb, fstar, basis);
    const auto projected = project_onto_constraints(cert.Q, problem);
    if (!projected) throw std::runtime_error("constraints are inconsistent; nothing to project onto");
    cert.Q = *projected;
  }
  const PsdWitness w = psd_witness(cert.Q);
  std::cout << "psd: " << (w.psd ? "true" : "false") << "\n";
  std::ostringstream text;
  write_certificate(text, cert);
  emit(out, text.str());
  if (!poly_out.empty()) {
    const auto polys = gram_to_polys(cert);
    if (!polys) {
      std::cerr << "gram matrix has no exact square-root factor; poly form not written\n";
      return kFailed;
    }
    std::ostringstream ptext;
    write_certificate(ptext, *polys);
    save_text(poly_out, ptext.str());
  }
  return w.psd ? 0 : kFailed;
}

void print_verification(const Verification& v, std::size_t terms) {
  std::cout << "verified: " << (v.verified ? "true" : "false") << "\n";
  if (!v.verified) std::cout << "detail: " << v.summary(terms) << "\n";
}

int cmd_verify(const GbSource& src, const std::string& cert_file, std::size_t terms) {
  const CertificateFile file = read_with(cert_file, read_certificate);
  GbSource s = src;
  if (s.gb_file.empty() && s.ideal_file.empty() && s.params.empty()) {
    auto it = file.headers.find("params");
    if (it == file.headers.end()) throw CLI::ValidationError("certificate has no params header; pass --gb");
    s.params = it->second;
  }
  const GroebnerBasis gb = s.load();
  const RatPoly fstar = fstar_for(gb);
  const auto t0 = std::chrono::steady_clock::now();
  const Verification v = file.poly ? verify_certificate(*file.poly, gb, fstar) : verify_gram(*file.gram, gb, fstar);
  print_verification(v, terms);
  std::cerr << "seconds: " << seconds_since(t0) << "\n";
  return v.verified ? 0 : kFailed;
}

int cmd_family(const std::string& id_text, const std::string& params_text, bool verify, const GbSource& src,
               const std::string& out, long max_den) {
  const FamilyId id = FamilyId::parse(id_text);
  const GraphClassParams params = GraphClassParams::parse(params_text);
  GbSource s = src;
  s.params = params_text;

  if (id.kind == FamilyKind::kConj54) {
    check_domain(id, params);
    const GroebnerBasis gb = s.load();
    const AnsatzReport r = ansatz_conj54(id.j, params, max_den, &gb);
    nlohmann::ordered_json j;
    j["family"] = r.id.str();
    j["params"] = r.params.str();
    j["groups_per_vertex"] = r.groups_per_vertex;
    j["basis"] = r.basis_names;
    j["constraints"] = r.constraints;
    j["status"] = to_string(r.status);
    j["rounded"] = r.rounded;
    j["psd"] = r.psd;
    j["verified"] = r.verified;
    j["detail"] = r.detail;
    if (r.gram) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < r.gram->rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index k = 0; k < r.gram->cols(); ++k) row.push_back((*r.gram)(i, k).str());
        rows.push_back(std::move(row));
      }
      j["gram"] = std::move(rows);
    }
    emit(out, j.dump(2) + "\n");
    return r.verified ? 0 : kFailed;
  }

  const PolyCertificate cert = family_certificate(id, params);
  std::ostringstream text;
  write_certificate(text, cert);
  emit(out, text.str());
  if (!verify) return 0;
  const GroebnerBasis gb = s.load();
  const Verification v = verify_certificate(cert, gb, build_fstar(gb.vars()));
  std::ostream& log = (out.empty() || out == "-") ? std::cerr : std::cout;
  log << "verified: " << (v.verified ? "true" : "false") << "\n";
  if (!v.verified) log << "detail: " << v.summary() << "\n";
  return v.verified ? 0 : kFailed;
}

std::string set_string(std::uint64_t set, int n_h) {
  std::string s = "{";
  bool first = true;
  for (int b = 0; b < 64; ++b)
    if ((set >> b) & 1u) {
      s += (first ? "" : " ") + std::string("(") + std::to_string(b / n_h) + "," + std::to_string(b % n_h) + ")";
      first = false;
    }
  return s + "}";
}

int cmd_oracle(const std::string& params_text) {
  const GraphClassParams p = GraphClassParams::parse(params_text);
  const auto vars = VarTable::for_graph_classes(p);
  std::cout << "params: " << p.str() << "\n";
  std::cout << "class-G: " << enumerate_class(p.n_g, p.k_g).size() << "\n";
  std::cout << "class-H: " << enumerate_class(p.n_h, p.k_h).size() << "\n";
  std::cout << "variety-G: " << enumerate_variety(build_class_ideal(vars, Side::kG)).size() << "\n";
  std::cout << "variety-H: " << enumerate_variety(build_class_ideal(vars, Side::kH)).size() << "\n";
  const ConjectureCheck c = check_conjecture_class(p);
  std::cout << "variety: " << c.points << "\n";
  std::cout << "min-fstar: " << c.min_fstar << "\n";
  const LabeledGraph g = decode_graph(*vars, c.witness, Side::kG);
  const LabeledGraph h = decode_graph(*vars, c.witness, Side::kH);
  const std::uint64_t d = decode_dominating_set(*vars, c.witness);
  std::cout << "witness-G: " << g.str() << "\n";
  std::cout << "witness-H: " << h.str() << "\n";
  std::cout << "witness-D: " << set_string(d, p.n_h) << "\n";
  std::cout << "witness-gamma: " << domination_number(cartesian_product(g, h)) << "\n";
  const bool bijection = check_bijection(p);
  std::cout << "bijection: " << (bijection ? "true" : "false") << "\n";
  return bijection && c.min_fstar >= 0 ? 0 : kFailed;
}

int cmd_pipeline(const std::string& config_file, const std::string& params, int ell, const std::string& out_dir,
                 const std::string& stop_after) {
  PipelineConfig c = config_file.empty() ? PipelineConfig{} : PipelineConfig::load(config_file);
  if (!params.empty()) c.params = GraphClassParams::parse(params);
  if (ell >= 0) c.ell = static_cast<unsigned>(ell);
  if (!out_dir.empty()) c.output_dir = out_dir;
  if (!stop_after.empty()) c.stop_after = parse_stage(stop_after);
  const PipelineReport r = run_pipeline(c);
  std::cout << r.to_json().dump(2) << "\n";
  return r.exit_code();
}

int cmd_config(bool defaults, const std::string& check) {
  if (!check.empty()) {
    std::cout << PipelineConfig::load(check).to_json().dump(2) << "\n";
    return 0;
  }
  if (!defaults) throw CLI::ValidationError("pass --defaults or --check FILE");
  std::cout << PipelineConfig{}.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares certificates for Vizing's conjecture on fixed graph-class partitions"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string params, out;
  auto* ideal = app.add_subcommand("ideal", "write the generators of I_sos");
  ideal->add_option("--params", params, "n_G,k_G,n_H,k_H")->required();
  ideal->add_option("-o,--output", out, "output file (default stdout)");
  ideal->callback([&] { action = [&] { return cmd_ideal(params, out); }; });

  GbSource src;
  auto* groebner = app.add_subcommand("groebner", "compute a reduced Groebner basis");
  src.add_to(groebner);
  groebner->add_option("-o,--output", out, "output file (default stdout)");
  groebner->callback([&] { action = [&] { return cmd_groebner(src, out); }; });

  SdpArgs sa;
  auto* sdp = app.add_subcommand("sdp", "build and solve the feasibility SDP");
  src.add_to(sdp);
  sdp->add_option("--ell", sa.ell, "degree bound")->capture_default_str();
  sdp->add_option("--mask", sa.mask, "mask file of retained monomials");
  sdp->add_flag("--grouped", sa.grouped, "use {1} and the sums e_q(g) as basis");
  sdp->add_option("--objective", sa.objective, "zero, trace-min, trace-max, orbit or custom:FILE")->capture_default_str();
  sdp->add_option("--tol", sa.tol, "residual and gap tolerance")->capture_default_str();
  sdp->add_option("--max-iterations", sa.max_iterations)->capture_default_str();
  sdp->add_option("--eig-tol", sa.eig_tol, "relative eigenvalue cut")->capture_default_str();
  sdp->add_option("--col-tol", sa.col_tol, "column cut for --suggest-mask")->capture_default_str();
  sdp->add_option("--export-sdpa", sa.export_sdpa, "write the problem in SDPA sparse format");
  sdp->add_option("--heatmap", sa.heatmap, "write PREFIX.csv and PREFIX.pgm of the spectral factor");
  sdp->add_option("--solution", sa.solution, "write X as CSV");
  sdp->add_option("--suggest-mask", sa.suggest_mask, "write the mask of nonzero factor columns");
  sdp->add_flag("-v,--verbose", sa.verbose, "log solver iterations");
  sdp->callback([&] { action = [&] { return cmd_sdp(src, sa); }; });

  std::string solution, poly_out;
  unsigned ell = 2;
  long max_den = 99;
  bool project = false;
  auto* round = app.add_subcommand("round", "round a numeric Gram matrix to a rational certificate");
  src.add_to(round);
  round->add_option("--solution", solution, "X as CSV with a header of basis entries")->required();
  round->add_option("--ell", ell)->capture_default_str();
  round->add_option("--max-den", max_den, "denominator bound")->capture_default_str();
  round->add_flag("--project", project, "project exactly onto the linear constraints after rounding");
  round->add_option("-o,--output", out, "gram certificate file (default stdout)");
  round->add_option("--poly", poly_out, "also write the polynomial form");
  round->callback([&] { action = [&] { return cmd_round(src, solution, ell, max_den, project, out, poly_out); }; });

  std::string cert_file;
  std::size_t terms = 5;
  auto* verify = app.add_subcommand("verify", "check a certificate by exact reduction");
  src.add_to(verify);
  verify->add_option("cert", cert_file, "certificate file")->required();
  verify->add_option("--terms", terms, "residual terms shown on failure")->capture_default_str();
  verify->callback([&] { action = [&] { return cmd_verify(src, cert_file, terms); }; });

  std::string family_id;
  bool do_verify = false;
  auto* family = app.add_subcommand("family", "closed-form certificates and the conj54 ansatz");
  family->add_option("--id", family_id, "thm46, thm51, thm52 or conj54:J")->required();
  family->add_option("--params", params, "n_G,k_G,n_H,k_H")->required();
  family->add_flag("--verify", do_verify, "verify against the Groebner basis");
  family->add_option("--cache", src.cache_dir, "Groebner basis cache directory");
  family->add_option("--max-den", max_den)->capture_default_str();
  family->add_option("-o,--output", out, "output file (default stdout)");
  family->callback([&] { action = [&] { return cmd_family(family_id, params, do_verify, src, out, max_den); }; });

  auto* oracle = app.add_subcommand("oracle", "brute-force class sizes, variety and min f*");
  oracle->add_option("--params", params, "n_G,k_G,n_H,k_H")->required();
  oracle->callback([&] { action = [&] { return cmd_oracle(params); }; });

  std::string config_file, stop_after;
  int pipe_ell = -1;
  auto* pipeline = app.add_subcommand("pipeline", "run ideal to verify with one config");
  pipeline->add_option("--config", config_file, "config JSON (see `config --defaults`)");
  pipeline->add_option("--params", params, "override params");
  pipeline->add_option("--ell", pipe_ell, "override ell");
  pipeline->add_option("--output-dir", out, "override output_dir");
  pipeline->add_option("--stop-after", stop_after, "ideal, groebner, sdp, solve, factor, round or verify");
  pipeline->callback([&] { action = [&] { return cmd_pipeline(config_file, params, pipe_ell, out, stop_after); }; });

  bool defaults = false;
  std::string check;
  auto* config = app.add_subcommand("config", "print or check a pipeline config");
  config->add_flag("--defaults", defaults, "print the default config");
  config->add_option("--check", check, "validate FILE and print it with defaults filled in");
  config->callback([&] { action = [&] { return cmd_config(defaults, check); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return action();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
