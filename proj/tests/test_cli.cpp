#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vizsos/families.hpp"
#include "vizsos/io.hpp"
#include "vizsos/pipeline.hpp"
#include "vizsos/polynomial_io.hpp"

using namespace vizsos;
namespace fs = std::filesystem;
using vizsos::testing::sos_basis;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli-test-out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(VIZSOS_CLI) + " " + args + " > " + out.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

PipelineConfig config_for(const std::string& params, unsigned ell, const fs::path& dir) {
  PipelineConfig c;
  c.params = GraphClassParams::parse(params);
  c.ell = ell;
  c.output_dir = (dir / "out").string();
  c.cache_dir = (dir / "cache").string();
  return c;
}

const StageReport* find_stage(const PipelineReport& r, Stage s) {
  for (const auto& st : r.stages)
    if (st.stage == s) return &st;
  return nullptr;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ideal files round-trip") {
  const IdealBasis ideal = build_sos_ideal({3, 2, 3, 2});
  std::stringstream s;
  write_ideal(s, ideal);
  const IdealBasis back = read_ideal(s);
  CHECK(back.generators == ideal.generators);
  CHECK(back.provenance == ideal.provenance);
  CHECK(ideal_digest(back) == ideal_digest(ideal));
}

TEST_CASE("groebner files round-trip") {
  const GroebnerBasis& gb = sos_basis("3,2,3,2");
  std::stringstream s;
  write_groebner(s, gb);
  const std::string text = s.str();
  CHECK(text.find(GrevlexOrder::kName) != std::string::npos);
  const GroebnerBasis back = read_groebner(s);
  CHECK(back.elements() == gb.elements());
  CHECK(back.source_digest() == gb.source_digest());
}

TEST_CASE("certificate files round-trip") {
  const PolyCertificate poly = cert_thm46({3, 2, 3, 2});
  std::stringstream s;
  write_certificate(s, poly);
  CHECK(s.str().find("sqrt(2)") != std::string::npos);
  const CertificateFile file = read_certificate(s);
  REQUIRE(file.poly.has_value());
  CHECK(file.poly->summands == poly.summands);
  CHECK(file.poly->ell == 2);

  const GramCertificate gram{poly.vars, grouped_basis(poly.vars, 2), example44_gram(3), 2};
  std::stringstream g;
  write_certificate(g, gram);
  const CertificateFile gfile = read_certificate(g);
  REQUIRE(gfile.gram.has_value());
  CHECK(gfile.gram->Q == gram.Q);
  CHECK(gfile.gram->basis == gram.basis);
}

TEST_CASE("format errors name the line") {
  std::stringstream missing("x[0,0] - 1\n");
  CHECK_THROWS_AS(read_groebner(missing), FormatError);

  std::ostringstream good;
  write_ideal(good, build_sos_ideal({2, 1, 2, 1}));
  std::string text = good.str();
  // Count lines so the broken record lands after the headers.
  const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  text += "field-eq: x[0,0]^ + 1\n";
  std::stringstream bad(text);
  try {
    read_ideal(bad);
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line " + std::to_string(lines + 1)) != std::string::npos);
  }

  std::stringstream cert("# vizsos: certificate\n# params: 2,2,3,2\n# form: mystery\n");
  CHECK_THROWS_AS(read_certificate(cert), FormatError);
}

TEST_CASE("groebner cache") {
  const fs::path dir = fresh_dir("cache");
  const GroebnerCache cache(dir);
  const IdealBasis ideal = build_sos_ideal({2, 2, 3, 2});
  bool hit = true;
  const GroebnerBasis first = cache.load_or_compute(ideal, {}, &hit);
  CHECK_FALSE(hit);
  CHECK(fs::exists(cache.path_for(ideal)));
  const GroebnerBasis second = cache.load_or_compute(ideal, {}, &hit);
  CHECK(hit);
  CHECK(second.elements() == first.elements());

  save_text(cache.path_for(ideal), "# vizsos: groebner\ngarbage\n");
  const GroebnerBasis third = cache.load_or_compute(ideal, {}, &hit);
  CHECK_FALSE(hit);
  CHECK(third.elements() == first.elements());

  // A basis stored under the wrong digest is ignored.
  const IdealBasis other = build_sos_ideal({2, 1, 2, 1});
  std::ostringstream wrong;
  write_groebner(wrong, first);
  save_text(cache.path_for(other), wrong.str());
  const GroebnerBasis fourth = cache.load_or_compute(other, {}, &hit);
  CHECK_FALSE(hit);
  CHECK(fourth.source_digest() == ideal_digest(other));
}

TEST_CASE("config JSON") {
  PipelineConfig c;
  c.params = {2, 2, 3, 2};
  c.ell = 1;
  c.mask = "m.mask";
  c.objective = "trace-min";
  c.tol.max_den = 50;
  c.stop_after = Stage::kSolve;
  const PipelineConfig back = PipelineConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.stop_after == Stage::kSolve);
  CHECK(back.mask == std::optional<std::string>("m.mask"));

  const PipelineConfig defaults = PipelineConfig::from_json(nlohmann::json::object());
  CHECK(defaults.to_json() == PipelineConfig().to_json());
  CHECK(defaults.to_json()["params"] == "3,2,3,2");

  CHECK_THROWS_AS(PipelineConfig::from_json({{"elll", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"tolerances", {{"gap", -1.0}}}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"tolerances", {{"slack", 1.0}}}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"basis", "grouped"}, {"objective", "orbit"}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"basis", "grouped"}, {"mask", "m.mask"}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"objective", "maximize"}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"stop_after", "lunch"}}), std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"params", "2,3,2,1"}}), std::invalid_argument);

  const fs::path dir = fresh_dir("config");
  save_text(dir / "c.json", c.to_json().dump(2));
  CHECK(PipelineConfig::load(dir / "c.json").to_json() == c.to_json());
  save_text(dir / "broken.json", "{\"ell\": ");
  CHECK_THROWS_AS(PipelineConfig::load(dir / "broken.json"), std::invalid_argument);
}

TEST_CASE("pipeline at degree two") {
  const fs::path dir = fresh_dir("l2");
  const PipelineReport r = run_pipeline(config_for("3,2,3,2", 2, dir));
  CHECK(r.sdp_status == "Feasible");
  const StageReport* sdp = find_stage(r, Stage::kSdp);
  REQUIRE(sdp != nullptr);
  CHECK(sdp->info["dimension"] == 67);
  CHECK(sdp->info["constraints"] == 359);
  CHECK(find_stage(r, Stage::kGroebner)->info["elements"] == 95);
  for (const char* f : {"ideal.txt", "groebner.gb", "basis.txt", "problem.sdpa", "X.csv", "heatmap.csv",
                        "heatmap.pgm", "suggested.mask", "certificate.gram", "report.json", "timings.json",
                        "config.json"})
    CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
  MESSAGE("zero-objective pipeline: " << r.status);
}

TEST_CASE("pipeline with the grouped basis verifies") {
  const fs::path dir = fresh_dir("grouped");
  PipelineConfig c = config_for("3,2,3,2", 2, dir);
  c.basis = "grouped";
  const PipelineReport r = run_pipeline(c);
  CHECK(r.success);
  CHECK(r.exit_code() == 0);
  CHECK(r.status == "verified");
  const StageReport* factor = find_stage(r, Stage::kFactor);
  REQUIRE(factor != nullptr);
  CHECK(factor->info["rows"] == 4);
}

TEST_CASE("pipeline with a mask and the orbit objective verifies") {
  const fs::path dir = fresh_dir("orbit");
  const auto vars = sos_basis("3,2,3,2").vars();
  MonomialMask mask;
  mask.retained.push_back(Monomial());
  for (int g = 0; g < 3; ++g)
    for (int h = 0; h < 3; ++h) {
      mask.retained.push_back(Monomial::variable(vars->vertex(g, h)));
      for (int h2 = h + 1; h2 < 3; ++h2)
        mask.retained.push_back(Monomial::variable(vars->vertex(g, h)) * Monomial::variable(vars->vertex(g, h2)));
    }
  write_mask((dir / "m19.mask").string(), mask, *vars);
  PipelineConfig c = config_for("3,2,3,2", 2, dir);
  c.mask = (dir / "m19.mask").string();
  c.objective = "orbit";
  const PipelineReport r = run_pipeline(c);
  CHECK(r.success);
  CHECK(find_stage(r, Stage::kSdp)->info["dimension"] == 19);
  CHECK(find_stage(r, Stage::kFactor)->info["rows"] == 4);
}

TEST_CASE("pipeline at degree one is infeasible") {
  const fs::path dir = fresh_dir("l1");
  const PipelineReport r = run_pipeline(config_for("3,2,3,2", 1, dir));
  CHECK_FALSE(r.success);
  CHECK(r.exit_code() == 1);
  CHECK(r.sdp_status == "Infeasible");
  CHECK(r.suggestion == "increase ell to 2");
  CHECK_FALSE(fs::exists(dir / "out" / "X.csv"));
  PipelineConfig stop = config_for("3,2,3,2", 1, dir);
  stop.stop_after = Stage::kSolve;
  CHECK(run_pipeline(stop).success);
}

TEST_CASE("trivial pipeline") {
  const fs::path dir = fresh_dir("trivial");
  const PipelineReport r = run_pipeline(config_for("1,1,1,1", 0, dir));
  CHECK(r.success);
  CHECK(r.status.rfind("verified", 0) == 0);
}

TEST_CASE("pipeline reruns are identical apart from timings") {
  const fs::path dir = fresh_dir("rerun");
  PipelineConfig c = config_for("2,2,3,2", 1, dir);
  run_pipeline(c);
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(dir / "out")) first[e.path().filename().string()] = slurp(e.path());
  run_pipeline(c);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir / "out")) {
    const std::string name = e.path().filename().string();
    if (name == "timings.json") continue;
    REQUIRE(first.count(name) == 1);
    CHECK_MESSAGE(first[name] == slurp(e.path()), name);
    ++compared;
  }
  CHECK(compared + 1 == first.size());
}

TEST_CASE("stage outputs are readable on their own") {
  const fs::path dir = fresh_dir("stages");
  PipelineConfig c = config_for("3,2,3,2", 2, dir);
  c.basis = "grouped";
  REQUIRE(run_pipeline(c).success);
  const fs::path out = dir / "out";
  std::ifstream ideal_in(out / "ideal.txt");
  const IdealBasis ideal = read_ideal(ideal_in);
  CHECK(ideal.size() == 32);
  std::ifstream gb_in(out / "groebner.gb");
  const GroebnerBasis gb = read_groebner(gb_in);
  CHECK(gb.size() == 95);
  std::ifstream cert_in(out / "certificate.gram");
  const CertificateFile cert = read_certificate(cert_in);
  REQUIRE(cert.gram.has_value());
  CHECK(verify_gram(*cert.gram, gb, build_fstar(gb.vars())).verified);
  std::vector<std::string> header;
  const Eigen::MatrixXd X = read_matrix_csv((out / "X.csv").string(), &header);
  CHECK(X.rows() == 7);
  CHECK(header.size() == 7);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["success"] == true);
  const auto timings = nlohmann::json::parse(slurp(out / "timings.json"));
  CHECK(timings.contains("verify"));
}

TEST_CASE("command line") {
  const fs::path dir = fresh_dir("binary");
  const std::string d = dir.string();
  CHECK(run_cli("ideal --params 2,1,2,1 -o " + d + "/ideal.txt", dir).code == 0);
  CHECK(run_cli("groebner --ideal " + d + "/ideal.txt --cache " + d + "/cache -o " + d + "/gb.txt", dir).code == 0);
  std::ifstream gb_in(dir / "gb.txt");
  CHECK(read_groebner(gb_in).elements() == sos_basis("2,1,2,1").elements());

  CHECK(run_cli("family --id thm46 --params 3,2,3,2 -o " + d + "/thm46.cert", dir).code == 0);
  const RunResult v = run_cli("verify " + d + "/thm46.cert --cache " + d + "/cache", dir);
  CHECK(v.code == 0);
  CHECK(v.out.find("verified: true") != std::string::npos);

  const RunResult oracle = run_cli("oracle --params 3,2,3,2", dir);
  CHECK(oracle.code == 0);
  CHECK(oracle.out.find("min-fstar: 1") != std::string::npos);

  CHECK(run_cli("family --id thm46 --params 3,3,3,2", dir).code == 2);
  CHECK(run_cli("family --id nope --params 3,2,3,2", dir).code == 2);
  CHECK(run_cli("pipeline --params 3,2,3,2 --ell 1 --output-dir " + d + "/pipe --stop-after solve", dir).code == 0);
  CHECK(run_cli("pipeline --params 3,2,3,2 --ell 1 --output-dir " + d + "/pipe", dir).code == 1);
  const RunResult defaults = run_cli("config --defaults", dir);
  CHECK(defaults.code == 0);
  CHECK(PipelineConfig::from_json(nlohmann::json::parse(defaults.out)).to_json() == PipelineConfig().to_json());
}

}  // TEST_SUITE
