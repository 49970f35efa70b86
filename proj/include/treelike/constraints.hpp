#pragma once

// Observability constraints on vertex- and edge-labeled trees: (C), (C1),
// (C2), forbidden vertex/edge label pairs, M∅-tree-likeness and type-C
// Fitch maps.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treelike/combine.hpp"
#include "treelike/delta.hpp"
#include "treelike/epsilon.hpp"

namespace treelike {

struct ConstraintFlags {
  bool c = false;
  bool c1 = false;
  bool c2 = false;
};

// Vertex and edge alphabets together with M∅ ⊆ M and the forbidden pairs
// Q ⊆ M × N. Speciation/duplication/transfer symbols are ordinary labels.
class EventAlphabet {
 public:
  EventAlphabet() = default;
  EventAlphabet(std::vector<std::string> vertex_labels, std::vector<std::string> edge_labels,
                std::vector<LabelId> m_empty = {},
                std::vector<std::pair<LabelId, std::size_t>> q_forbidden = {});

  // Resolves names against the alphabets; DomainError on unknown names.
  static EventAlphabet from_names(std::vector<std::string> vertex_labels,
                                  std::vector<std::string> edge_labels,
                                  const std::vector<std::string>& m_empty,
                                  const std::vector<std::pair<std::string, std::string>>& q_forbidden = {});

  const std::vector<std::string>& vertex_labels() const { return vertex_labels_; }
  const std::vector<std::string>& edge_labels() const { return edge_labels_; }
  const std::vector<LabelId>& m_empty() const { return m_empty_; }
  const std::vector<std::pair<LabelId, std::size_t>>& q_forbidden() const { return q_forbidden_; }

  bool in_m_empty(LabelId q) const;
  // Edge labels that may not sit below a vertex labeled q.
  LabelMask forbidden_below(LabelId q) const;

 private:
  std::vector<std::string> vertex_labels_;
  std::vector<std::string> edge_labels_;
  std::vector<LabelId> m_empty_;
  std::vector<std::pair<LabelId, std::size_t>> q_forbidden_;
  std::vector<char> m_empty_mask_;
  std::vector<LabelMask> forbidden_;
};

// Each finder returns the first offending vertex in canonical order: for
// (C), (C1) and (C2) the inner vertex, for Q the child end of the edge.
std::optional<VertexId> find_C_violation(const RootedTree& tree, const EdgeLabeling& lambda);
std::optional<VertexId> find_C1_violation(const RootedTree& tree, const VertexLabeling& t,
                                          const EdgeLabeling& lambda, const EventAlphabet& alpha);
std::optional<VertexId> find_C2_violation(const RootedTree& tree, const EdgeLabeling& lambda);
std::optional<VertexId> find_Q_violation(const RootedTree& tree, const VertexLabeling& t,
                                         const EdgeLabeling& lambda, const EventAlphabet& alpha);

bool check_C(const RootedTree& tree, const EdgeLabeling& lambda);
bool check_C1(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
              const EventAlphabet& alpha);
bool check_C2(const RootedTree& tree, const EdgeLabeling& lambda);
bool check_Q(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
             const EventAlphabet& alpha);

// Tree-like and (T*, t*, λ*) satisfies the requested subset of (C) and (C1).
// Defaults to both. DomainError if flags.c2 is set: (C2) has no unique
// least-resolved tree to test.
bool is_M0_tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha,
                     ConstraintFlags flags = {true, true, false});

// Fitch map whose least-resolved tree satisfies (C).
bool is_type_C_fitch(const EpsilonMap& e);

}  // namespace treelike
