#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vizsos {

/// The partition (n_G, k_G, n_H, k_H) that fixes the ideal and f*.
/// Dominating sets are fixed to the first k labels of each side.
struct GraphClassParams {
  int n_g = 1;
  int k_g = 1;
  int n_h = 1;
  int k_h = 1;

  /// Throws std::invalid_argument unless 1 ≤ k ≤ n on both sides.
  void validate() const;
  /// `n_G,k_G,n_H,k_H`
  std::string str() const;
  static GraphClassParams parse(std::string_view text);
  friend bool operator==(const GraphClassParams&, const GraphClassParams&) = default;
};

enum class VarKind { kVertex, kEdgeG, kEdgeH, kGeneric };

struct Variable {
  VarKind kind = VarKind::kGeneric;
  int first = 0;   // g for vertex / smaller label for edges
  int second = 0;  // h for vertex / larger label for edges
  std::string name;
};

/// Variable numbering shared by every polynomial of one ring.
///
/// For graph classes the order is x[g,h] (lexicographic), then eG[g,g'],
/// then eH[h,h'] with g<g', h<h'; index 0 is the largest variable in grevlex.
class VarTable {
 public:
  static std::shared_ptr<const VarTable> for_graph_classes(const GraphClassParams& params);
  static std::shared_ptr<const VarTable> generic(std::vector<std::string> names);

  std::size_t size() const { return vars_.size(); }
  const Variable& variable(std::size_t index) const { return vars_.at(index); }
  const std::string& name(std::size_t index) const { return vars_.at(index).name; }
  std::optional<std::size_t> find(std::string_view name) const;
  const std::optional<GraphClassParams>& params() const { return params_; }

  std::size_t vertex(int g, int h) const;
  /// Pair keys are normalized: edge_g(2,0) == edge_g(0,2).
  std::size_t edge_g(int g, int g2) const;
  std::size_t edge_h(int h, int h2) const;

  friend bool operator==(const VarTable& a, const VarTable& b);

 private:
  VarTable() = default;
  static std::size_t pair_index(int a, int b, int n);

  std::vector<Variable> vars_;
  std::optional<GraphClassParams> params_;
  std::size_t edge_g_offset_ = 0;
  std::size_t edge_h_offset_ = 0;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

/// Same object or same variable names in the same order.
bool same_ring(const VarTablePtr& a, const VarTablePtr& b);

}  // namespace vizsos
