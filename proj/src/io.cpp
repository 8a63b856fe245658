#include "vizsos/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vizsos/polynomial_io.hpp"

namespace vizsos {

namespace {

struct Record {
  std::size_t line = 0;
  std::string tag;   // text before ": ", empty for untagged records
  std::string body;
};

struct ParsedFile {
  Headers headers;
  std::vector<Record> records;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// A record tag is a leading word made of [a-z-] followed by ": ".
std::pair<std::string, std::string> split_tag(const std::string& line) {
  const auto colon = line.find(": ");
  if (colon == std::string::npos || colon == 0) return {"", line};
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = line[i];
    if (!((c >= 'a' && c <= 'z') || c == '-')) return {"", line};
  }
  return {line.substr(0, colon), trim(line.substr(colon + 2))};
}

ParsedFile parse_file(std::istream& in) {
  ParsedFile out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto [key, value] = split_tag(trim(line.substr(1)));
      if (!key.empty()) out.headers[key] = value;
      continue;
    }
    auto [tag, body] = split_tag(line);
    out.records.push_back({number, std::move(tag), std::move(body)});
  }
  return out;
}

[[noreturn]] void fail(const Record& r, const std::string& what) {
  throw FormatError("line " + std::to_string(r.line) + ": " + what);
}

void expect_kind(const Headers& h, const std::string& kind) {
  const auto it = h.find("vizsos");
  if (it == h.end() || it->second != kind)
    throw FormatError("not a vizsos " + kind + " file (missing '# vizsos: " + kind + "')");
}

void write_ring(std::ostream& out, const VarTable& vars) {
  if (vars.params()) {
    out << "# params: " << vars.params()->str() << "\n";
    return;
  }
  out << "# variables:";
  for (std::size_t i = 0; i < vars.size(); ++i) out << ' ' << vars.name(i);
  out << "\n";
}

VarTablePtr read_ring(const Headers& h) {
  if (auto it = h.find("params"); it != h.end()) return VarTable::for_graph_classes(GraphClassParams::parse(it->second));
  if (auto it = h.find("variables"); it != h.end()) {
    std::istringstream names(it->second);
    std::vector<std::string> list;
    for (std::string n; names >> n;) list.push_back(n);
    return VarTable::generic(std::move(list));
  }
  throw FormatError("missing '# params:' or '# variables:' header");
}

unsigned header_uint(const Headers& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw FormatError("missing '# " + key + ":' header");
  try {
    return static_cast<unsigned>(std::stoul(it->second));
  } catch (const std::exception&) {
    throw FormatError("header '" + key + "' is not a number: " + it->second);
  }
}

template <class Fn>
auto parse_or_fail(const Record& r, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    fail(r, e.what());
  }
}

}  // namespace

void write_ideal(std::ostream& out, const IdealBasis& ideal) {
  out << "# vizsos: ideal\n";
  write_ring(out, *ideal.vars);
  out << "# generators: " << ideal.size() << "\n";
  for (std::size_t i = 0; i < ideal.size(); ++i)
    out << to_string(ideal.provenance[i]) << ": " << to_string(ideal.generators[i]) << "\n";
}

IdealBasis read_ideal(std::istream& in) {
  const ParsedFile f = parse_file(in);
  expect_kind(f.headers, "ideal");
  IdealBasis ideal{read_ring(f.headers), {}, {}};
  for (const auto& r : f.records) {
    const Provenance tag = r.tag.empty() ? Provenance::kInput : parse_or_fail(r, [&] { return parse_provenance(r.tag); });
    RatPoly p = parse_or_fail(r, [&] { return parse_rat_poly(r.body, ideal.vars); });
    if (!p.is_zero()) ideal.add(std::move(p), tag);
  }
  return ideal;
}

void write_groebner(std::ostream& out, const GroebnerBasis& gb) {
  out << "# vizsos: groebner\n";
  out << "# order: " << GroebnerBasis::order_name() << "\n";
  write_ring(out, *gb.vars());
  out << "# source-digest: " << gb.source_digest() << "\n";
  out << "# elements: " << gb.size() << "\n";
  for (const auto& e : gb.elements()) out << to_string(e) << "\n";
}

GroebnerBasis read_groebner(std::istream& in) {
  const ParsedFile f = parse_file(in);
  expect_kind(f.headers, "groebner");
  if (auto it = f.headers.find("order"); it != f.headers.end() && it->second != GroebnerBasis::order_name())
    throw FormatError("unsupported monomial order '" + it->second + "'");
  const VarTablePtr vars = read_ring(f.headers);
  std::vector<RatPoly> elements;
  for (const auto& r : f.records) {
    if (!r.tag.empty()) fail(r, "unexpected tag '" + r.tag + "'");
    elements.push_back(parse_or_fail(r, [&] { return parse_rat_poly(r.body, vars); }));
  }
  if (auto it = f.headers.find("elements"); it != f.headers.end() && std::stoul(it->second) != elements.size())
    throw FormatError("header says " + it->second + " elements, found " + std::to_string(elements.size()));
  const auto digest = f.headers.find("source-digest");
  try {
    return GroebnerBasis(vars, std::move(elements), digest == f.headers.end() ? "" : digest->second);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("not a reduced basis: ") + e.what());
  }
}

void write_certificate(std::ostream& out, const PolyCertificate& cert) {
  out << "# vizsos: certificate\n# form: poly\n";
  write_ring(out, *cert.vars);
  out << "# ell: " << cert.ell << "\n";
  std::int64_t d = 1;
  for (const auto& s : cert.summands)
    for (const auto& t : s.terms())
      if (!t.coeff.is_rational()) d = t.coeff.discriminant();
  out << "# d: " << d << "\n";
  out << "# summands: " << cert.summands.size() << "\n";
  for (const auto& s : cert.summands) out << "s: " << to_string(s) << "\n";
}

void write_certificate(std::ostream& out, const GramCertificate& cert) {
  out << "# vizsos: certificate\n# form: gram\n";
  write_ring(out, *cert.vars);
  out << "# ell: " << cert.ell << "\n";
  out << "# basis: " << cert.basis.size() << "\n";
  for (const auto& b : cert.basis) out << "b: " << to_string(b) << "\n";
  for (Eigen::Index i = 0; i < cert.Q.rows(); ++i)
    for (Eigen::Index j = i; j < cert.Q.cols(); ++j)
      if (!cert.Q(i, j).is_zero()) out << "q: " << i << ' ' << j << ' ' << cert.Q(i, j).str() << "\n";
}

CertificateFile read_certificate(std::istream& in) {
  ParsedFile f = parse_file(in);
  expect_kind(f.headers, "certificate");
  CertificateFile out;
  out.headers = f.headers;
  const VarTablePtr vars = read_ring(f.headers);
  const unsigned ell = header_uint(f.headers, "ell");
  const auto form = f.headers.find("form");
  if (form == f.headers.end()) throw FormatError("missing '# form:' header");

  if (form->second == "poly") {
    PolyCertificate cert{vars, {}, ell};
    for (const auto& r : f.records) {
      if (r.tag != "s") fail(r, "expected 's: poly'");
      cert.summands.push_back(parse_or_fail(r, [&] { return parse_quad_poly(r.body, vars); }));
    }
    out.poly = std::move(cert);
    return out;
  }
  if (form->second != "gram") throw FormatError("unknown certificate form '" + form->second + "'");

  GramCertificate cert{vars, {}, RatMatrix(), ell};
  std::vector<std::tuple<std::size_t, std::size_t, Rat, const Record*>> entries;
  for (const auto& r : f.records) {
    if (r.tag == "b") {
      cert.basis.push_back(parse_or_fail(r, [&] { return parse_rat_poly(r.body, vars); }));
    } else if (r.tag == "q") {
      std::istringstream fields(r.body);
      std::size_t i = 0, j = 0;
      std::string value, extra;
      if (!(fields >> i >> j >> value) || (fields >> extra)) fail(r, "expected 'q: i j value'");
      std::optional<Rat> q = Rat::parse(value);
      if (!q) fail(r, "bad rational '" + value + "'");
      entries.emplace_back(i, j, std::move(*q), &r);
    } else {
      fail(r, "expected 'b: poly' or 'q: i j value'");
    }
  }
  const auto n = static_cast<Eigen::Index>(cert.basis.size());
  if (auto it = f.headers.find("basis"); it != f.headers.end() && std::stoul(it->second) != cert.basis.size())
    throw FormatError("header says " + it->second + " basis entries, found " + std::to_string(n));
  cert.Q = RatMatrix::Constant(n, n, Rat(0));
  for (auto& [i, j, v, r] : entries) {
    if (i > j || static_cast<Eigen::Index>(j) >= n) fail(*r, "entry outside the upper triangle");
    cert.Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    cert.Q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }
  out.gram = std::move(cert);
  return out;
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string load_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path GroebnerCache::path_for(const IdealBasis& ideal) const {
  return dir_ / (ideal_digest(ideal) + ".gb");
}

GroebnerBasis GroebnerCache::load_or_compute(const IdealBasis& ideal, const GroebnerOptions& options, bool* hit) const {
  const auto path = path_for(ideal);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    try {
      GroebnerBasis gb = read_groebner(in);
      if (gb.source_digest() == ideal_digest(ideal) && same_ring(gb.vars(), ideal.vars)) {
        if (hit) *hit = true;
        return gb;
      }
    } catch (const FormatError&) {
      // A damaged cache entry is recomputed and overwritten.
    }
  }
  GroebnerBasis gb = buchberger(ideal, options);
  std::ostringstream text;
  write_groebner(text, gb);
  save_text(path, text.str());
  if (hit) *hit = false;
  return gb;
}

}  // namespace vizsos
