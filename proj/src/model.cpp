#include "vizsos/model.hpp"

#include <stdexcept>

namespace vizsos {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kFieldEq: return "field-eq";
    case Provenance::kDominating: return "dominating";
    case Provenance::kMinimality: return "minimality";
    case Provenance::kProductFieldEq: return "product-field-eq";
    case Provenance::kProductDominated: return "product-dominated";
    case Provenance::kInput: return "input";
  }
  return "input";
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::kFieldEq, Provenance::kDominating, Provenance::kMinimality,
                 Provenance::kProductFieldEq, Provenance::kProductDominated, Provenance::kInput}) {
    if (text == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown provenance tag '" + std::string(text) + "'");
}

void IdealBasis::add(RatPoly p, Provenance tag) {
  if (p.is_zero()) return;
  if (!vars) vars = p.vars();
  if (!same_ring(vars, p.vars())) throw std::invalid_argument("IdealBasis: mismatched variable tables");
  generators.push_back(std::move(p));
  provenance.push_back(tag);
}

namespace {

const GraphClassParams& graph_params(const VarTablePtr& vars) {
  if (!vars || !vars->params()) throw std::invalid_argument("expected a graph-class variable table");
  return *vars->params();
}

// Calls fn(subset) for each size-`size` subset of {0..n-1} as a bitmask, in
// lexicographic order of the sorted element lists.
template <class Fn>
void for_each_subset(int n, int size, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    unsigned mask = 0;
    for (int i : idx) mask |= 1u << i;
    fn(mask);
    int i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - size + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

IdealBasis build_class_ideal(const VarTablePtr& vars, Side side) {
  const GraphClassParams& params = graph_params(vars);
  const int n = side == Side::kG ? params.n_g : params.n_h;
  const int k = side == Side::kG ? params.k_g : params.k_h;
  const auto edge = [&](int a, int b) {
    return RatPoly::variable(vars, side == Side::kG ? vars->edge_g(a, b) : vars->edge_h(a, b));
  };
  const RatPoly one(vars, Rat(1));

  IdealBasis basis;
  basis.vars = vars;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const RatPoly e = edge(a, b);
      basis.add(e * e - e, Provenance::kFieldEq);
    }
  for (int v = k; v < n; ++v) {
    RatPoly prod = one;
    for (int d = 0; d < k; ++d) prod *= one - edge(v, d);
    basis.add(prod, Provenance::kDominating);
  }
  for_each_subset(n, k - 1, [&](unsigned subset) {
    RatPoly prod = one;
    for (int outside = 0; outside < n; ++outside) {
      if (subset & (1u << outside)) continue;
      RatPoly sum(vars);
      for (int inside = 0; inside < n; ++inside)
        if (subset & (1u << inside)) sum += edge(inside, outside);
      prod *= sum;
    }
    basis.add(prod, Provenance::kMinimality);
  });
  return basis;
}

IdealBasis build_class_ideal(const GraphClassParams& params, Side side) {
  return build_class_ideal(VarTable::for_graph_classes(params), side);
}

IdealBasis build_product_ideal(const VarTablePtr& vars) {
  const GraphClassParams& params = graph_params(vars);
  const RatPoly one(vars, Rat(1));
  IdealBasis basis;
  basis.vars = vars;
  for (int g = 0; g < params.n_g; ++g) {
    for (int h = 0; h < params.n_h; ++h) {
      const RatPoly x = RatPoly::variable(vars, vars->vertex(g, h));
      basis.add(x * x - x, Provenance::kProductFieldEq);
      RatPoly prod = one - x;
      for (int g2 = 0; g2 < params.n_g; ++g2) {
        if (g2 == g) continue;
        prod *= one - RatPoly::variable(vars, vars->edge_g(g, g2)) *
                          RatPoly::variable(vars, vars->vertex(g2, h));
      }
      for (int h2 = 0; h2 < params.n_h; ++h2) {
        if (h2 == h) continue;
        prod *= one - RatPoly::variable(vars, vars->edge_h(h, h2)) *
                          RatPoly::variable(vars, vars->vertex(g, h2));
      }
      basis.add(prod, Provenance::kProductDominated);
    }
  }
  return basis;
}

IdealBasis build_product_ideal(const GraphClassParams& params) {
  return build_product_ideal(VarTable::for_graph_classes(params));
}

IdealBasis build_sos_ideal(const GraphClassParams& params) {
  const VarTablePtr vars = VarTable::for_graph_classes(params);
  IdealBasis out;
  out.vars = vars;
  for (const IdealBasis& part :
       {build_class_ideal(vars, Side::kG), build_class_ideal(vars, Side::kH), build_product_ideal(vars)}) {
    for (std::size_t i = 0; i < part.size(); ++i) out.add(part.generators[i], part.provenance[i]);
  }
  return out;
}

RatPoly build_fstar(const VarTablePtr& vars) {
  const GraphClassParams& params = graph_params(vars);
  RatPoly f(vars, Rat(-static_cast<long>(params.k_g) * params.k_h));
  for (int g = 0; g < params.n_g; ++g)
    for (int h = 0; h < params.n_h; ++h) f += RatPoly::variable(vars, vars->vertex(g, h));
  return f;
}

RatPoly build_fstar(const GraphClassParams& params) {
  return build_fstar(VarTable::for_graph_classes(params));
}

}  // namespace vizsos
