#pragma once

// Tree-likeness of a pair (δ, ε) and the unique least-resolved tree
// (T*, t*, λ*) explaining both maps at once.

#include <optional>
#include <string>
#include <variant>

#include "treelike/delta.hpp"
#include "treelike/epsilon.hpp"
#include "treelike/tree.hpp"

namespace treelike {

struct CombinedTree {
  RootedTree tree;
  VertexLabeling vertex_labels;
  EdgeLabeling edge_labels;
};

class TreeLikeVerdict {
 public:
  enum class Failure { None, NotUltrametric, NotFitch, UnionNotHierarchy };

  TreeLikeVerdict() = default;
  static TreeLikeVerdict not_ultrametric(UltrametricViolation v) { return TreeLikeVerdict(std::move(v)); }
  static TreeLikeVerdict not_fitch(FitchViolation v) { return TreeLikeVerdict(std::move(v)); }
  static TreeLikeVerdict union_not_hierarchy(ClusterOverlap v) { return TreeLikeVerdict(std::move(v)); }

  bool is_tree_like() const { return std::holds_alternative<std::monostate>(witness_); }
  Failure failure() const { return static_cast<Failure>(witness_.index()); }
  const UltrametricViolation& ultrametric_violation() const { return std::get<UltrametricViolation>(witness_); }
  const FitchViolation& fitch_violation() const { return std::get<FitchViolation>(witness_); }
  const ClusterOverlap& overlap() const { return std::get<ClusterOverlap>(witness_); }

  // "tree-like", "not-ultrametric condition(iii) (u,v,x)", ...
  std::string describe(const DeltaMap& d, const EpsilonMap& e) const;

 private:
  using Witness = std::variant<std::monostate, UltrametricViolation, FitchViolation, ClusterOverlap>;
  explicit TreeLikeVerdict(Witness w) : witness_(std::move(w)) {}
  Witness witness_;
};

// Everything computed while deciding: the two least-resolved trees (when they
// exist) and the combined tree (when the pair is tree-like).
struct CombineAnalysis {
  TreeLikeVerdict verdict;
  std::optional<DiscriminatingTree> delta_tree;
  std::optional<EpsilonTree> epsilon_tree;
  std::optional<CombinedTree> combined;
};

// h1 ∪ h2. Throws IncompatibilityError naming an overlapping pair.
Hierarchy union_hierarchy(const Hierarchy& h1, const Hierarchy& h2);

// Checks the three conditions in order (δ, then ε, then the union) and stops
// at the first failure. Throws DomainError on mismatched leaf sets.
TreeLikeVerdict decide_tree_like(const DeltaMap& d, const EpsilonMap& e);
CombineAnalysis analyze(const DeltaMap& d, const EpsilonMap& e);

// Throws IncompatibilityError when the pair is not tree-like.
CombinedTree least_resolved_combined(const DeltaMap& d, const EpsilonMap& e);

// True iff c explains (d, e) and contracting any inner edge of c.tree yields
// a tree that refines T_δ or T_ε no longer.
bool minimality_certificate(const CombinedTree& c, const DeltaMap& d, const EpsilonMap& e);

}  // namespace treelike
