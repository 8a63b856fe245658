#include "vizsos/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "vizsos/families.hpp"
#include "vizsos/io.hpp"
#include "vizsos/polynomial_io.hpp"

namespace vizsos {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr Stage kStages[] = {Stage::kIdeal, Stage::kGroebner, Stage::kSdp,   Stage::kSolve,
                             Stage::kFactor, Stage::kRound,   Stage::kVerify};

bool positive(double x) { return x > 0; }

bool satisfies_constraints(const RatMatrix& Q, const SdpProblem& problem) {
  for (const auto& c : problem.constraints) {
    Rat acc(0);
    for (const auto& e : c.entries) {
      const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
      acc += e.value * (i == j ? Q(i, i) : Q(i, j) + Q(j, i));
    }
    if (acc != c.rhs) return false;
  }
  return true;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

const char* to_string(Stage s) {
  switch (s) {
    case Stage::kIdeal: return "ideal";
    case Stage::kGroebner: return "groebner";
    case Stage::kSdp: return "sdp";
    case Stage::kSolve: return "solve";
    case Stage::kFactor: return "factor";
    case Stage::kRound: return "round";
    case Stage::kVerify: return "verify";
  }
  return "?";
}

Stage parse_stage(const std::string& text) {
  for (Stage s : kStages)
    if (text == to_string(s)) return s;
  throw std::invalid_argument("unknown stage '" + text + "'");
}

void PipelineConfig::validate() const {
  params.validate();
  if (basis != "monomial" && basis != "grouped") throw std::invalid_argument("basis must be 'monomial' or 'grouped'");
  if (basis == "grouped" && mask) throw std::invalid_argument("a mask applies to the monomial basis only");
  if (!positive(tol.gap) || !positive(tol.eig) || !positive(tol.col) || tol.max_den < 1)
    throw std::invalid_argument("tolerances must be positive");
  if (max_iterations < 1 || max_steps < 1) throw std::invalid_argument("iteration and step budgets must be positive");
  if (objective != "zero" && objective != "trace-min" && objective != "trace-max" && objective != "orbit" &&
      objective.rfind("custom:", 0) != 0)
    throw std::invalid_argument("objective must be zero, trace-min, trace-max, orbit or custom:FILE");
  if (objective == "orbit" && basis == "grouped") throw std::invalid_argument("the orbit objective needs the monomial basis");
}

ordered_json PipelineConfig::to_json() const {
  ordered_json j;
  j["params"] = params.str();
  j["ell"] = ell;
  j["basis"] = basis;
  j["mask"] = mask ? ordered_json(*mask) : ordered_json(nullptr);
  j["objective"] = objective;
  j["tolerances"] = {{"gap", tol.gap}, {"eig", tol.eig}, {"col", tol.col}, {"max_den", tol.max_den}};
  j["max_iterations"] = max_iterations;
  j["max_steps"] = max_steps;
  j["cache_dir"] = cache_dir;
  j["output_dir"] = output_dir;
  j["stop_after"] = to_string(stop_after);
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  static const char* kKeys[] = {"params",         "ell",       "basis",     "mask",       "objective", "tolerances",
                                "max_iterations", "max_steps", "cache_dir", "output_dir", "stop_after"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw std::invalid_argument("unknown config key '" + key + "'");

  PipelineConfig c;
  try {
    if (j.contains("params")) c.params = GraphClassParams::parse(j.at("params").get<std::string>());
    c.ell = get_or(j, "ell", c.ell);
    c.basis = get_or(j, "basis", c.basis);
    if (j.contains("mask") && !j.at("mask").is_null()) c.mask = j.at("mask").get<std::string>();
    c.objective = get_or(j, "objective", c.objective);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      for (const auto& [key, value] : t.items())
        if (key != "gap" && key != "eig" && key != "col" && key != "max_den")
          throw std::invalid_argument("unknown tolerance '" + key + "'");
      c.tol.gap = get_or(t, "gap", c.tol.gap);
      c.tol.eig = get_or(t, "eig", c.tol.eig);
      c.tol.col = get_or(t, "col", c.tol.col);
      c.tol.max_den = get_or(t, "max_den", c.tol.max_den);
    }
    c.max_iterations = get_or(j, "max_iterations", c.max_iterations);
    c.max_steps = get_or(j, "max_steps", c.max_steps);
    c.cache_dir = get_or(j, "cache_dir", c.cache_dir);
    c.output_dir = get_or(j, "output_dir", c.output_dir);
    if (j.contains("stop_after")) c.stop_after = parse_stage(j.at("stop_after").get<std::string>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  try {
    return from_json(json::parse(load_text(path)));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

ordered_json PipelineReport::to_json() const {
  ordered_json j;
  j["status"] = status;
  j["success"] = success;
  if (!sdp_status.empty()) j["sdp_status"] = sdp_status;
  if (!suggestion.empty()) j["suggestion"] = suggestion;
  ordered_json list = ordered_json::array();
  for (const auto& s : stages) {
    ordered_json e;
    e["stage"] = to_string(s.stage);
    e["ok"] = s.ok;
    for (const auto& [key, value] : s.info.items()) e[key] = value;
    list.push_back(std::move(e));
  }
  j["stages"] = std::move(list);
  return j;
}

ordered_json PipelineReport::timings_json() const {
  ordered_json j;
  for (const auto& s : stages) j[to_string(s.stage)] = s.seconds;
  return j;
}

namespace {

// One run's state; each stage fills what the next one reads.
class Run {
 public:
  explicit Run(const PipelineConfig& c) : c_(c), out_(c.output_dir) {}

  PipelineReport execute() {
    fs::create_directories(out_);
    save_text(out_ / "config.json", c_.to_json().dump(2) + "\n");
    for (Stage s : kStages) {
      if (!run_stage(s) || done_ || s == c_.stop_after) break;
    }
    report_.success = !report_.stages.empty() && report_.stages.back().ok &&
                      (done_ || report_.stages.back().stage == c_.stop_after);
    save_text(out_ / "report.json", report_.to_json().dump(2) + "\n");
    save_text(out_ / "timings.json", report_.timings_json().dump(2) + "\n");
    return report_;
  }

 private:
  bool run_stage(Stage s) {
    StageReport r{s, false, ordered_json::object(), 0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (s) {
        case Stage::kIdeal: r.ok = ideal(r.info); break;
        case Stage::kGroebner: r.ok = groebner(r.info); break;
        case Stage::kSdp: r.ok = sdp(r.info); break;
        case Stage::kSolve: r.ok = solve_stage(r.info); break;
        case Stage::kFactor: r.ok = factor(r.info); break;
        case Stage::kRound: r.ok = round(r.info); break;
        case Stage::kVerify: r.ok = verify(r.info); break;
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.info["error"] = e.what();
      report_.status = std::string(to_string(s)) + " failed";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.stages.push_back(std::move(r));
    return report_.stages.back().ok;
  }

  std::string file(const std::string& name) const { return (out_ / name).string(); }

  bool ideal(ordered_json& info) {
    ideal_ = build_sos_ideal(c_.params);
    fstar_ = build_fstar(ideal_.vars);
    std::ostringstream text;
    write_ideal(text, ideal_);
    save_text(file("ideal.txt"), text.str());
    info["generators"] = ideal_.size();
    info["variables"] = ideal_.vars->size();
    info["fstar"] = to_string(fstar_);
    info["file"] = "ideal.txt";
    report_.status = "ideal built";
    return true;
  }

  bool groebner(ordered_json& info) {
    GroebnerOptions options;
    options.max_steps = c_.max_steps;
    bool hit = false;
    gb_ = GroebnerCache(c_.cache_dir).load_or_compute(ideal_, options, &hit);
    std::ostringstream text;
    write_groebner(text, *gb_);
    save_text(file("groebner.gb"), text.str());
    info["elements"] = gb_->size();
    info["digest"] = gb_->source_digest();
    info["file"] = "groebner.gb";
    report_.status = "groebner basis ready";

    const RatPoly nf = normal_form(fstar_, *gb_);
    if (gb_->is_whole_ring()) {
      info["whole_ring"] = true;
      report_.status = "ideal is the whole ring (empty variety)";
      done_ = true;
      return true;
    }
    if (nf.is_zero()) {
      PolyCertificate empty{ideal_.vars, {}, c_.ell};
      const Verification v = verify_certificate(empty, *gb_, fstar_);
      std::ostringstream cert;
      write_certificate(cert, empty);
      save_text(file("certificate.poly"), cert.str());
      info["fstar_in_ideal"] = true;
      info["certificate"] = "certificate.poly";
      report_.status = v.verified ? "verified (f* lies in the ideal; trivial certificate)" : "verification failed";
      done_ = true;
      return v.verified;
    }
    return true;
  }

  bool sdp(ordered_json& info) {
    Objective objective = Objective::parse(c_.objective);
    if (objective.kind == ObjectiveKind::kOrbit) objective.span = grouped_basis(gb_->vars(), c_.ell);
    if (c_.basis == "grouped") {
      problem_ = build_sdp_from_basis(*gb_, fstar_, grouped_basis(gb_->vars(), c_.ell), objective);
    } else if (c_.mask) {
      const MonomialMask mask = read_mask(*c_.mask, *gb_->vars());
      problem_ = build_sdp(*gb_, fstar_, c_.ell, &mask, objective);
    } else {
      problem_ = build_sdp(*gb_, fstar_, c_.ell, nullptr, objective);
    }
    std::ostringstream names;
    for (const auto& n : problem_->basis_names) names << n << "\n";
    save_text(file("basis.txt"), names.str());
    export_sdpa(*problem_, file("problem.sdpa"));
    info["dimension"] = problem_->dim();
    info["constraints"] = problem_->num_constraints();
    info["basis"] = c_.basis;
    info["objective"] = objective.str();
    if (!problem_->warnings.empty()) info["warnings"] = problem_->warnings;
    info["files"] = {"basis.txt", "problem.sdpa"};
    report_.status = "sdp assembled";
    return true;
  }

  bool solve_stage(ordered_json& info) {
    SolverOptions options;
    options.tol = c_.tol.gap;
    options.max_iterations = c_.max_iterations;
    solution_ = solve(*problem_, options);
    info["status"] = to_string(solution_->status);
    info["iterations"] = solution_->iterations;
    info["primal_residual"] = solution_->primal_residual;
    info["dual_residual"] = solution_->dual_residual;
    info["gap"] = solution_->gap;
    info["message"] = solution_->message;
    report_.status = to_string(solution_->status);
    report_.sdp_status = report_.status;
    switch (solution_->status) {
      case SdpStatus::kFeasible:
        write_matrix_csv(file("X.csv"), solution_->X, problem_->basis_names);
        info["file"] = "X.csv";
        return true;
      case SdpStatus::kInfeasible: {
        info["witness_margin"] = solution_->witness_margin;
        const bool saturated = c_.basis == "monomial" && !c_.mask && saturation_check(*gb_, c_.ell);
        report_.suggestion = saturated ? "no certificate exists at any degree (standard monomials saturated)"
                                       : "increase ell to " + std::to_string(c_.ell + 1);
        done_ = c_.stop_after == Stage::kSolve;
        return done_;
      }
      case SdpStatus::kIndeterminate:
        report_.suggestion = "raise max_iterations or change the objective";
        return false;
    }
    return false;
  }

  bool factor(ordered_json& info) {
    const SpectralFactor f = spectral_factor(solution_->X, c_.tol.eig);
    export_heatmap(f, problem_->basis_names, file("heatmap"));
    info["rows"] = f.S.rows();
    info["threshold"] = f.threshold;
    info["files"] = {"heatmap.csv", "heatmap.pgm"};
    if (c_.basis == "monomial") {
      const MonomialMask suggested = suggest_mask(f, *problem_, c_.tol.col);
      write_mask(file("suggested.mask"), suggested, *gb_->vars());
      info["suggested_mask_size"] = suggested.size();
      info["files"].push_back("suggested.mask");
    }
    report_.status = "factored";
    return true;
  }

  bool round(ordered_json& info) {
    gram_ = GramCertificate{gb_->vars(), problem_->basis, round_gram(solution_->X, c_.tol.max_den), c_.ell};
    const PsdWitness w = psd_witness(gram_->Q);
    const bool consistent = satisfies_constraints(gram_->Q, *problem_);
    info["psd"] = w.psd;
    info["projected"] = false;
    if (!w.psd || !consistent) {
      if (auto projected = project_onto_constraints(gram_->Q, *problem_); projected && psd_witness(*projected).psd) {
        gram_->Q = *projected;
        info["psd"] = true;
        info["projected"] = true;
      }
    }
    std::ostringstream text;
    write_certificate(text, *gram_);
    save_text(file("certificate.gram"), text.str());
    info["file"] = "certificate.gram";
    report_.status = "rounded";
    return true;
  }

  bool verify(ordered_json& info) {
    const Verification v = verify_gram(*gram_, *gb_, fstar_);
    info["verified"] = v.verified;
    info["psd"] = v.psd;
    info["degree_ok"] = v.degree_ok;
    if (!v.verified) info["detail"] = v.summary();
    if (v.verified) {
      if (auto polys = gram_to_polys(*gram_)) {
        const Verification pv = verify_certificate(*polys, *gb_, fstar_);
        std::ostringstream text;
        write_certificate(text, *polys);
        save_text(file("certificate.poly"), text.str());
        info["summands"] = polys->summands.size();
        info["poly_verified"] = pv.verified;
        info["file"] = "certificate.poly";
      }
    }
    report_.status = v.verified ? "verified" : "verification failed";
    if (!v.verified) report_.suggestion = "inspect heatmap.csv, restrict the mask or change the objective";
    return v.verified;
  }

  const PipelineConfig& c_;
  fs::path out_;
  PipelineReport report_;
  bool done_ = false;

  IdealBasis ideal_;
  RatPoly fstar_;
  std::optional<GroebnerBasis> gb_;
  std::optional<SdpProblem> problem_;
  std::optional<SdpSolution> solution_;
  std::optional<GramCertificate> gram_;
};

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  return Run(config).execute();
}

}  // namespace vizsos
