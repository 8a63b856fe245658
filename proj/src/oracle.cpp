#include "vizsos/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <set>

namespace vizsos {

LabeledGraph::LabeledGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n), 0) {
  if (n < 0 || n > kMaxVertices) throw SizeLimitExceeded("LabeledGraph: at most 64 vertices");
}

LabeledGraph LabeledGraph::path(int n) {
  LabeledGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

LabeledGraph LabeledGraph::cycle(int n) {
  LabeledGraph g = path(n);
  if (n >= 3) g.add_edge(n - 1, 0);
  return g;
}

LabeledGraph LabeledGraph::complete(int n) {
  LabeledGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

void LabeledGraph::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("LabeledGraph: self-loop");
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("LabeledGraph: vertex out of range");
  adj_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
  adj_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
}

std::size_t LabeledGraph::edge_count() const {
  std::size_t twice = 0;
  for (auto row : adj_) twice += static_cast<std::size_t>(std::popcount(row));
  return twice / 2;
}

std::string LabeledGraph::str() const {
  std::string out = std::to_string(n_) + ":";
  bool first = true;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (has_edge(u, v)) {
        if (!first) out += ",";
        out += std::to_string(u) + "-" + std::to_string(v);
        first = false;
      }
  return out;
}

bool is_dominating(const LabeledGraph& g, std::uint64_t set) {
  std::uint64_t covered = 0;
  for (int v = 0; v < g.order(); ++v)
    if ((set >> v) & 1u) covered |= g.closed_neighborhood(v);
  return (covered & g.all_vertices()) == g.all_vertices();
}

namespace {

// Some vertex of N[u] must be chosen for the lowest undominated u.
bool dominate_within(const LabeledGraph& g, std::uint64_t dominated, int budget, int max_cover) {
  const std::uint64_t missing = g.all_vertices() & ~dominated;
  if (missing == 0) return true;
  if (budget == 0) return false;
  if (std::popcount(missing) > budget * max_cover) return false;
  const int u = std::countr_zero(missing);
  for (std::uint64_t cand = g.closed_neighborhood(u); cand; cand &= cand - 1) {
    const int v = std::countr_zero(cand);
    if (dominate_within(g, dominated | g.closed_neighborhood(v), budget - 1, max_cover)) return true;
  }
  return false;
}

void check_size(int n, int limit, const char* what) {
  if (n > limit)
    throw SizeLimitExceeded(std::string(what) + ": " + std::to_string(n) + " exceeds the limit of " +
                            std::to_string(limit));
}

}  // namespace

int domination_number(const LabeledGraph& g, int max_vertices) {
  if (g.order() < 1) throw std::invalid_argument("domination_number: empty graph");
  check_size(g.order(), std::min(max_vertices, LabeledGraph::kMaxVertices), "domination_number");
  int max_cover = 0;
  for (int v = 0; v < g.order(); ++v) max_cover = std::max(max_cover, std::popcount(g.closed_neighborhood(v)));
  for (int k = 1;; ++k)
    if (dominate_within(g, 0, k, max_cover)) return k;
}

std::uint64_t count_dominating_sets(const LabeledGraph& g, int max_vertices) {
  check_size(g.order(), std::min(max_vertices, 32), "count_dominating_sets");
  std::uint64_t count = 0;
  const std::uint64_t limit = std::uint64_t{1} << g.order();
  for (std::uint64_t s = 0; s < limit; ++s)
    if (is_dominating(g, s)) ++count;
  return count;
}

LabeledGraph cartesian_product(const LabeledGraph& g, const LabeledGraph& h) {
  const int nh = h.order();
  LabeledGraph out(g.order() * nh);
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < nh; ++b) {
      for (int b2 = b + 1; b2 < nh; ++b2)
        if (h.has_edge(b, b2)) out.add_edge(a * nh + b, a * nh + b2);
      for (int a2 = a + 1; a2 < g.order(); ++a2)
        if (g.has_edge(a, a2)) out.add_edge(a * nh + b, a2 * nh + b);
    }
  return out;
}

std::vector<LabeledGraph> enumerate_class(int n, int k, int max_vertices) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("enumerate_class: need 1 <= k <= n");
  check_size(n, max_vertices, "enumerate_class");
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  const std::uint64_t d = (std::uint64_t{1} << k) - 1;
  std::vector<LabeledGraph> out;
  for (std::uint64_t edges = 0; edges < (std::uint64_t{1} << pairs.size()); ++edges) {
    LabeledGraph g(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((edges >> i) & 1u) g.add_edge(pairs[i].first, pairs[i].second);
    if (!is_dominating(g, d)) continue;
    if (k > 1 && domination_number(g, n) < k) continue;
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

struct CompiledTerm {
  long coeff;
  std::uint64_t mask;
};

struct CompiledGenerator {
  std::vector<CompiledTerm> terms;
};

long small_integer(const Rat& r) {
  if (!r.is_integer() || !r.numerator().fits_slong_p())
    throw std::invalid_argument("enumerate_variety: generator coefficients must be machine integers");
  return r.numerator().get_si();
}

class VarietyWalker {
 public:
  VarietyWalker(const IdealBasis& basis, std::size_t max_variables) {
    std::uint64_t used = 0;
    for (const auto& g : basis.generators) {
      CompiledGenerator c;
      std::uint64_t support = 0;
      for (const auto& t : g.terms()) {
        c.terms.push_back({small_integer(t.coeff), t.monomial.support()});
        support |= t.monomial.support();
      }
      if (support == 0) {
        inconsistent_ = true;
        continue;
      }
      used |= support;
      checks_[static_cast<std::size_t>(std::countr_zero(support))].push_back(std::move(c));
    }
    for (int v = 63; v >= 0; --v)
      if ((used >> v) & 1u) order_.push_back(v);
    if (order_.size() > max_variables)
      throw SizeLimitExceeded("enumerate_variety: " + std::to_string(order_.size()) +
                              " variables exceed the limit of " + std::to_string(max_variables));
  }

  std::vector<std::uint64_t> run() {
    std::vector<std::uint64_t> out;
    if (!inconsistent_) descend(0, 0, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static long evaluate(const CompiledGenerator& g, std::uint64_t point) {
    long acc = 0;
    for (const auto& t : g.terms)
      if ((t.mask & ~point) == 0) acc += t.coeff;
    return acc;
  }

  void descend(std::size_t depth, std::uint64_t point, std::vector<std::uint64_t>& out) const {
    if (depth == order_.size()) {
      out.push_back(point);
      return;
    }
    const int v = order_[depth];
    for (std::uint64_t bit : {std::uint64_t{0}, std::uint64_t{1} << v}) {
      const std::uint64_t next = point | bit;
      bool ok = true;
      for (const auto& g : checks_[static_cast<std::size_t>(v)])
        if (evaluate(g, next) != 0) {
          ok = false;
          break;
        }
      if (ok) descend(depth + 1, next, out);
    }
  }

  std::vector<CompiledGenerator> checks_[64];
  std::vector<int> order_;
  bool inconsistent_ = false;
};

}  // namespace

std::vector<std::uint64_t> enumerate_variety(const IdealBasis& basis, std::size_t max_variables) {
  return VarietyWalker(basis, max_variables).run();
}

LabeledGraph decode_graph(const VarTable& vars, std::uint64_t point, Side side) {
  const GraphClassParams& p = *vars.params();
  const int n = side == Side::kG ? p.n_g : p.n_h;
  LabeledGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const std::size_t idx = side == Side::kG ? vars.edge_g(a, b) : vars.edge_h(a, b);
      if ((point >> idx) & 1u) g.add_edge(a, b);
    }
  return g;
}

std::uint64_t decode_dominating_set(const VarTable& vars, std::uint64_t point) {
  const GraphClassParams& p = *vars.params();
  std::uint64_t set = 0;
  for (int g = 0; g < p.n_g; ++g)
    for (int h = 0; h < p.n_h; ++h)
      if ((point >> vars.vertex(g, h)) & 1u) set |= std::uint64_t{1} << (g * p.n_h + h);
  return set;
}

std::uint64_t encode_point(const VarTable& vars, const LabeledGraph& g, const LabeledGraph& h,
                           std::uint64_t dominating_set) {
  const GraphClassParams& p = *vars.params();
  std::uint64_t point = 0;
  for (int a = 0; a < p.n_g; ++a)
    for (int b = a + 1; b < p.n_g; ++b)
      if (g.has_edge(a, b)) point |= std::uint64_t{1} << vars.edge_g(a, b);
  for (int a = 0; a < p.n_h; ++a)
    for (int b = a + 1; b < p.n_h; ++b)
      if (h.has_edge(a, b)) point |= std::uint64_t{1} << vars.edge_h(a, b);
  for (int a = 0; a < p.n_g; ++a)
    for (int b = 0; b < p.n_h; ++b)
      if ((dominating_set >> (a * p.n_h + b)) & 1u) point |= std::uint64_t{1} << vars.vertex(a, b);
  return point;
}

ConjectureCheck check_conjecture_class(const GraphClassParams& params, std::size_t max_variables) {
  const IdealBasis basis = build_sos_ideal(params);
  const auto points = enumerate_variety(basis, max_variables);
  if (points.empty()) throw std::runtime_error("check_conjecture_class: empty variety");
  ConjectureCheck out;
  out.points = points.size();
  out.min_fstar = std::numeric_limits<long>::max();
  const long target = static_cast<long>(params.k_g) * params.k_h;
  for (std::uint64_t pt : points) {
    const long value = std::popcount(decode_dominating_set(*basis.vars, pt)) - target;
    if (value < out.min_fstar) {
      out.min_fstar = value;
      out.witness = pt;
    }
  }
  return out;
}

bool check_bijection(const GraphClassParams& params, std::size_t max_variables) {
  params.validate();
  const VarTablePtr vars = VarTable::for_graph_classes(params);
  const auto classes_match = [&](Side side, int n, int k) {
    const auto points = enumerate_variety(build_class_ideal(vars, side), max_variables);
    std::vector<std::string> from_variety, from_class;
    for (auto pt : points) from_variety.push_back(decode_graph(*vars, pt, side).str());
    for (const auto& g : enumerate_class(n, k)) from_class.push_back(g.str());
    std::sort(from_variety.begin(), from_variety.end());
    std::sort(from_class.begin(), from_class.end());
    return from_variety == from_class;
  };
  if (!classes_match(Side::kG, params.n_g, params.k_g)) return false;
  if (!classes_match(Side::kH, params.n_h, params.k_h)) return false;

  const IdealBasis sos = build_sos_ideal(params);
  const auto points = enumerate_variety(sos, max_variables);
  const std::set<std::uint64_t> variety(points.begin(), points.end());

  std::size_t triples = 0;
  for (const auto& g : enumerate_class(params.n_g, params.k_g))
    for (const auto& h : enumerate_class(params.n_h, params.k_h)) {
      const LabeledGraph prod = cartesian_product(g, h);
      check_size(prod.order(), 24, "check_bijection");
      for (std::uint64_t d = 0; d < (std::uint64_t{1} << prod.order()); ++d) {
        if (!is_dominating(prod, d)) continue;
        if (!variety.count(encode_point(*vars, g, h, d))) return false;
        ++triples;
      }
    }
  return triples == variety.size();
}

}  // namespace vizsos
