#include "treelike/constraints.hpp"

#include <algorithm>

#include "treelike/errors.hpp"

namespace treelike {

EventAlphabet::EventAlphabet(std::vector<std::string> vertex_labels, std::vector<std::string> edge_labels,
                             std::vector<LabelId> m_empty,
                             std::vector<std::pair<LabelId, std::size_t>> q_forbidden)
    : vertex_labels_(std::move(vertex_labels)),
      edge_labels_(std::move(edge_labels)),
      m_empty_(std::move(m_empty)),
      q_forbidden_(std::move(q_forbidden)),
      m_empty_mask_(vertex_labels_.size(), 0),
      forbidden_(vertex_labels_.size(), 0) {
  if (edge_labels_.size() > kMaxEdgeLabels) throw DomainError("at most 64 edge labels are supported");
  std::sort(m_empty_.begin(), m_empty_.end());
  m_empty_.erase(std::unique(m_empty_.begin(), m_empty_.end()), m_empty_.end());
  for (auto q : m_empty_) {
    if (q >= vertex_labels_.size()) throw DomainError("M_empty references an undeclared vertex label");
    m_empty_mask_[q] = 1;
  }
  std::sort(q_forbidden_.begin(), q_forbidden_.end());
  q_forbidden_.erase(std::unique(q_forbidden_.begin(), q_forbidden_.end()), q_forbidden_.end());
  for (auto [q, m] : q_forbidden_) {
    if (q >= vertex_labels_.size() || m >= edge_labels_.size()) {
      throw DomainError("forbidden pair references an undeclared label");
    }
    forbidden_[q] |= LabelMask{1} << m;
  }
}

namespace {

std::size_t position_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError(std::string("unknown ") + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

EventAlphabet EventAlphabet::from_names(std::vector<std::string> vertex_labels,
                                        std::vector<std::string> edge_labels,
                                        const std::vector<std::string>& m_empty,
                                        const std::vector<std::pair<std::string, std::string>>& q_forbidden) {
  std::vector<LabelId> empty_ids;
  for (const auto& q : m_empty) {
    empty_ids.push_back(static_cast<LabelId>(position_of(vertex_labels, q, "vertex label")));
  }
  std::vector<std::pair<LabelId, std::size_t>> pairs;
  for (const auto& [q, m] : q_forbidden) {
    pairs.emplace_back(static_cast<LabelId>(position_of(vertex_labels, q, "vertex label")),
                       position_of(edge_labels, m, "edge label"));
  }
  return EventAlphabet(std::move(vertex_labels), std::move(edge_labels), std::move(empty_ids), std::move(pairs));
}

bool EventAlphabet::in_m_empty(LabelId q) const { return q < m_empty_mask_.size() && m_empty_mask_[q] != 0; }

LabelMask EventAlphabet::forbidden_below(LabelId q) const {
  return q < forbidden_.size() ? forbidden_[q] : 0;
}

std::optional<VertexId> find_C_violation(const RootedTree& tree, const EdgeLabeling& lambda) {
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto& kids = tree.children(v);
    if (std::none_of(kids.begin(), kids.end(), [&](VertexId c) { return lambda[c] == 0; })) return v;
  }
  return std::nullopt;
}

std::optional<VertexId> find_C1_violation(const RootedTree& tree, const VertexLabeling& t,
                                          const EdgeLabeling& lambda, const EventAlphabet& alpha) {
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v) || !alpha.in_m_empty(t[v])) continue;
    const auto& kids = tree.children(v);
    if (std::any_of(kids.begin(), kids.end(), [&](VertexId c) { return lambda[c] != 0; })) return v;
  }
  return std::nullopt;
}

std::optional<VertexId> find_C2_violation(const RootedTree& tree, const EdgeLabeling& lambda) {
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    const auto& kids = tree.children(v);
    if (std::count_if(kids.begin(), kids.end(), [&](VertexId c) { return lambda[c] != 0; }) > 1) return v;
  }
  return std::nullopt;
}

std::optional<VertexId> find_Q_violation(const RootedTree& tree, const VertexLabeling& t,
                                         const EdgeLabeling& lambda, const EventAlphabet& alpha) {
  for (VertexId c = 1; c < tree.vertex_count(); ++c) {
    if ((lambda[c] & alpha.forbidden_below(t[tree.parent(c)])) != 0) return c;
  }
  return std::nullopt;
}

bool check_C(const RootedTree& tree, const EdgeLabeling& lambda) { return !find_C_violation(tree, lambda); }

bool check_C1(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
              const EventAlphabet& alpha) {
  return !find_C1_violation(tree, t, lambda, alpha);
}

bool check_C2(const RootedTree& tree, const EdgeLabeling& lambda) { return !find_C2_violation(tree, lambda); }

bool check_Q(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
             const EventAlphabet& alpha) {
  return !find_Q_violation(tree, t, lambda, alpha);
}

bool is_M0_tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha, ConstraintFlags flags) {
  if (flags.c2) throw DomainError("(C2) is check-only; no least-resolved tree is tested for it");
  auto analysis = analyze(d, e);
  if (!analysis.combined) return false;
  const auto& c = *analysis.combined;
  if (flags.c && !check_C(c.tree, c.edge_labels)) return false;
  if (flags.c1 && !check_C1(c.tree, c.vertex_labels, c.edge_labels, alpha)) return false;
  return true;
}

bool is_type_C_fitch(const EpsilonMap& e) {
  auto result = try_build_epsilon_tree(e);
  return result.tree && check_C(result.tree->tree, result.tree->labels);
}

}  // namespace treelike
