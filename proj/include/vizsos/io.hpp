#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "vizsos/certify.hpp"
#include "vizsos/groebner.hpp"
#include "vizsos/model.hpp"

namespace vizsos {

// Text files share one layout: `# key: value` header lines, then one record
// per line. Blank lines and other `#` lines are ignored.
//
//   ideal        records `tag: poly` with tag a provenance name
//   groebner     records `poly`; headers order, params, source-digest
//   certificate  form poly: records `s: poly` (coefficients may use sqrt(d))
//                form gram: records `b: poly` (basis) and `q: i j value`
//                (upper triangle, zero entries omitted)
//
// Rings are rebuilt from the `params` header, or from `variables` (space
// separated names) for generic tables.

using Headers = std::map<std::string, std::string>;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_ideal(std::ostream& out, const IdealBasis& ideal);
IdealBasis read_ideal(std::istream& in);

void write_groebner(std::ostream& out, const GroebnerBasis& gb);
GroebnerBasis read_groebner(std::istream& in);

void write_certificate(std::ostream& out, const PolyCertificate& cert);
void write_certificate(std::ostream& out, const GramCertificate& cert);

/// Either form, as stored.
struct CertificateFile {
  Headers headers;
  std::optional<PolyCertificate> poly;
  std::optional<GramCertificate> gram;
};
CertificateFile read_certificate(std::istream& in);

/// Path-based wrappers; throw std::runtime_error on I/O failure.
void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

/// Gröbner bases stored as DIR/<ideal digest>.gb.
class GroebnerCache {
 public:
  explicit GroebnerCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const IdealBasis& ideal) const;
  /// Reads the cached basis if present and its digest matches, otherwise
  /// computes and stores it. `hit` reports which happened.
  GroebnerBasis load_or_compute(const IdealBasis& ideal, const GroebnerOptions& options = {}, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace vizsos
