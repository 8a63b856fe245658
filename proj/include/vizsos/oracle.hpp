#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vizsos/model.hpp"

namespace vizsos {

class SizeLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph on at most 64 vertices, adjacency as bit rows.
class LabeledGraph {
 public:
  static constexpr int kMaxVertices = 64;

  LabeledGraph() = default;
  explicit LabeledGraph(int n);

  static LabeledGraph path(int n);
  static LabeledGraph cycle(int n);
  static LabeledGraph complete(int n);

  int order() const { return n_; }
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const { return (adj_[static_cast<std::size_t>(u)] >> v) & 1u; }
  std::uint64_t neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  std::uint64_t closed_neighborhood(int v) const { return adj_[static_cast<std::size_t>(v)] | (std::uint64_t{1} << v); }
  std::size_t edge_count() const;
  std::uint64_t all_vertices() const { return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1; }

  /// "n:u-v,u-v,..." with edges sorted.
  std::string str() const;
  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> adj_;
};

bool is_dominating(const LabeledGraph& g, std::uint64_t set);

/// Exact domination number. Throws SizeLimitExceeded when the graph has more
/// than `max_vertices` vertices.
int domination_number(const LabeledGraph& g, int max_vertices = 16);

/// Number of dominating sets of g (all sizes), by subset scan.
std::uint64_t count_dominating_sets(const LabeledGraph& g, int max_vertices = 24);

/// Vertex (g, h) of the product is numbered g·|H| + h.
LabeledGraph cartesian_product(const LabeledGraph& g, const LabeledGraph& h);

/// All graphs on n labelled vertices in which {0..k−1} dominates and no set of
/// k−1 vertices does, in increasing order of the edge bitmask.
std::vector<LabeledGraph> enumerate_class(int n, int k, int max_vertices = 6);

/// 0/1 points of the variety: bit i of a point is the value of variable i.
/// Variables that occur in no generator are fixed to 0, so I_G alone yields
/// one point per class member. Points are returned in increasing order.
std::vector<std::uint64_t> enumerate_variety(const IdealBasis& basis, std::size_t max_variables = 24);

LabeledGraph decode_graph(const VarTable& vars, std::uint64_t point, Side side);
/// Product-vertex set of a point, with vertex (g, h) at bit g·n_H + h.
std::uint64_t decode_dominating_set(const VarTable& vars, std::uint64_t point);
std::uint64_t encode_point(const VarTable& vars, const LabeledGraph& g, const LabeledGraph& h,
                           std::uint64_t dominating_set);

struct ConjectureCheck {
  long min_fstar = 0;
  std::uint64_t witness = 0;
  std::size_t points = 0;
};

/// Exact minimum of f* over V(I_sos). Throws SizeLimitExceeded beyond the
/// variety cap or if the variety is empty.
ConjectureCheck check_conjecture_class(const GraphClassParams& params, std::size_t max_variables = 24);

/// Both class varieties match enumerate_class, and the product variety is in
/// bijection with triples (G, H, dominating set of G□H).
bool check_bijection(const GraphClassParams& params, std::size_t max_variables = 24);

}  // namespace vizsos
