#include "vizsos/var_table.hpp"

#include <charconv>
#include <stdexcept>

#include "vizsos/monomial.hpp"

namespace vizsos {

void GraphClassParams::validate() const {
  if (n_g < 1 || n_h < 1 || k_g < 1 || k_h < 1 || k_g > n_g || k_h > n_h) {
    throw std::invalid_argument("invalid graph class parameters " + str() +
                                " (need 1 <= k <= n on both sides)");
  }
}

std::string GraphClassParams::str() const {
  return std::to_string(n_g) + "," + std::to_string(k_g) + "," + std::to_string(n_h) + "," +
         std::to_string(k_h);
}

GraphClassParams GraphClassParams::parse(std::string_view text) {
  int values[4];
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), values[i]);
    if (ec != std::errc{}) throw std::invalid_argument("cannot parse params '" + std::string(text) + "'");
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (i < 3) {
      if (pos >= text.size() || text[pos] != ',')
        throw std::invalid_argument("params need four comma-separated integers: '" +
                                    std::string(text) + "'");
      ++pos;
    }
  }
  if (pos != text.size()) throw std::invalid_argument("trailing text in params '" + std::string(text) + "'");
  GraphClassParams p{values[0], values[1], values[2], values[3]};
  p.validate();
  return p;
}

std::shared_ptr<const VarTable> VarTable::for_graph_classes(const GraphClassParams& params) {
  params.validate();
  auto table = std::shared_ptr<VarTable>(new VarTable());
  table->params_ = params;
  for (int g = 0; g < params.n_g; ++g)
    for (int h = 0; h < params.n_h; ++h)
      table->vars_.push_back(
          {VarKind::kVertex, g, h, "x[" + std::to_string(g) + "," + std::to_string(h) + "]"});
  table->edge_g_offset_ = table->vars_.size();
  for (int a = 0; a < params.n_g; ++a)
    for (int b = a + 1; b < params.n_g; ++b)
      table->vars_.push_back(
          {VarKind::kEdgeG, a, b, "eG[" + std::to_string(a) + "," + std::to_string(b) + "]"});
  table->edge_h_offset_ = table->vars_.size();
  for (int a = 0; a < params.n_h; ++a)
    for (int b = a + 1; b < params.n_h; ++b)
      table->vars_.push_back(
          {VarKind::kEdgeH, a, b, "eH[" + std::to_string(a) + "," + std::to_string(b) + "]"});
  if (table->vars_.size() > Monomial::kMaxVariables) {
    throw std::invalid_argument("parameters " + params.str() + " need " +
                                std::to_string(table->vars_.size()) +
                                " variables; at most 64 are supported");
  }
  return table;
}

std::shared_ptr<const VarTable> VarTable::generic(std::vector<std::string> names) {
  if (names.size() > Monomial::kMaxVariables)
    throw std::invalid_argument("at most 64 variables are supported");
  auto table = std::shared_ptr<VarTable>(new VarTable());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& n = names[i];
    if (n.empty()) throw std::invalid_argument("empty variable name");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == n) throw std::invalid_argument("duplicate variable name " + n);
    table->vars_.push_back({VarKind::kGeneric, static_cast<int>(i), 0, n});
  }
  return table;
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t VarTable::pair_index(int a, int b, int n) {
  if (a == b || a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("edge variable index out of range");
  if (a > b) std::swap(a, b);
  // rows a' < a contribute (n-1-a') pairs each
  return static_cast<std::size_t>(a * (2 * n - a - 1) / 2 + (b - a - 1));
}

std::size_t VarTable::vertex(int g, int h) const {
  if (!params_ || g < 0 || h < 0 || g >= params_->n_g || h >= params_->n_h)
    throw std::out_of_range("vertex variable index out of range");
  return static_cast<std::size_t>(g * params_->n_h + h);
}

std::size_t VarTable::edge_g(int g, int g2) const {
  if (!params_) throw std::logic_error("edge_g on a generic variable table");
  return edge_g_offset_ + pair_index(g, g2, params_->n_g);
}

std::size_t VarTable::edge_h(int h, int h2) const {
  if (!params_) throw std::logic_error("edge_h on a generic variable table");
  return edge_h_offset_ + pair_index(h, h2, params_->n_h);
}

bool operator==(const VarTable& a, const VarTable& b) {
  if (a.vars_.size() != b.vars_.size()) return false;
  for (std::size_t i = 0; i < a.vars_.size(); ++i)
    if (a.vars_[i].name != b.vars_[i].name) return false;
  return true;
}

bool same_ring(const VarTablePtr& a, const VarTablePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace vizsos
