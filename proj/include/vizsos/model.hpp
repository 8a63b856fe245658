#pragma once

#include <string>
#include <vector>

#include "vizsos/polynomial.hpp"

namespace vizsos {

/// Which defining equation a generator instantiates.
enum class Provenance {
  kFieldEq,           // e² − e for an edge variable
  kDominating,        // D dominates every vertex outside D
  kMinimality,        // no (k−1)-subset dominates
  kProductFieldEq,    // x² − x for a product vertex
  kProductDominated,  // every product vertex is dominated
  kInput,             // read from a file or built by hand
};

const char* to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

enum class Side { kG, kH };

/// Generator list of an ideal over a shared variable table.
struct IdealBasis {
  VarTablePtr vars;
  std::vector<RatPoly> generators;
  std::vector<Provenance> provenance;

  void add(RatPoly p, Provenance tag);
  std::size_t size() const { return generators.size(); }
};

/// Generators of the ideal whose variety is the graph class (n, k) on one side:
/// field equations, domination by D = {0..k−1}, and minimality. Zero
/// generators (k = 1) are dropped. `vars` must be a graph-class table.
IdealBasis build_class_ideal(const VarTablePtr& vars, Side side);
IdealBasis build_class_ideal(const GraphClassParams& params, Side side);

/// Product-vertex generators: x² − x and the domination product, 2·n_G·n_H in total.
IdealBasis build_product_ideal(const VarTablePtr& vars);
IdealBasis build_product_ideal(const GraphClassParams& params);

/// I_G, then I_H, then the product generators over one table.
IdealBasis build_sos_ideal(const GraphClassParams& params);

/// Σ x[g,h] − k_G·k_H.
RatPoly build_fstar(const VarTablePtr& vars);
RatPoly build_fstar(const GraphClassParams& params);

}  // namespace vizsos
