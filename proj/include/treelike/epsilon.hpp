#pragma once

// Fitch maps ε: L^(2) → 2^N, the neighborhoods U_¬m[y], recognition, the
// least-resolved ε-tree (T_ε, λ_ε) and the minimal labeling of refinements.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treelike/tree.hpp"

namespace treelike {

// Set of edge labels as a bitmask over the alphabet.
using LabelMask = std::uint64_t;
inline constexpr std::size_t kMaxEdgeLabels = 64;

// Per-vertex label of the edge from the parent; the root entry is empty.
using EdgeLabeling = std::vector<LabelMask>;

class EpsilonMap {
 public:
  // `values` is |L|×|L| row-major; diagonal entries are ignored. At most
  // kMaxEdgeLabels labels.
  EpsilonMap(LeafSet leaves, std::vector<std::string> labels, std::vector<LabelMask> values);
  static EpsilonMap empty(LeafSet leaves, std::vector<std::string> labels);

  const LeafSet& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  LabelMask at(std::size_t x, std::size_t y) const { return values_[x * size() + y]; }
  const std::vector<LabelMask>& values() const { return values_; }

  friend bool operator==(const EpsilonMap& a, const EpsilonMap& b);

 private:
  LeafSet leaves_;
  std::vector<std::string> labels_;
  std::vector<LabelMask> values_;
};

// "{m1,m2}" in alphabet order.
std::string format_labels(LabelMask mask, const std::vector<std::string>& labels);

// Σ_e |λ(e)|
std::size_t label_weight(const EdgeLabeling& labeling);

// U_¬m[y] = {x ≠ y : m ∉ ε(x,y)} ∪ {y} for every label m and leaf y.
class NeighborhoodSystem {
 public:
  NeighborhoodSystem(std::size_t leaf_count, std::size_t label_count, std::vector<Cluster> sets)
      : leaf_count_(leaf_count), label_count_(label_count), sets_(std::move(sets)) {}

  std::size_t leaf_count() const { return leaf_count_; }
  std::size_t label_count() const { return label_count_; }
  const Cluster& at(std::size_t label, std::size_t leaf) const { return sets_[label * leaf_count_ + leaf]; }
  const std::vector<Cluster>& sets() const { return sets_; }

 private:
  std::size_t leaf_count_;
  std::size_t label_count_;
  std::vector<Cluster> sets_;
};

NeighborhoodSystem neighborhoods(const EpsilonMap& e);

struct FitchViolation {
  enum class Kind {
    NotHierarchyLike,  // (i): `first` and `second` overlap
    SizeCondition,     // (ii): y' ∈ U_¬m[y] but |U_¬m[y']| > |U_¬m[y]|
  };
  Kind kind;
  Cluster first;
  Cluster second;
  std::size_t y = 0;
  std::size_t label = 0;
  std::size_t y_prime = 0;

  std::string describe(const LeafSet& leaves, const std::vector<std::string>& labels) const;
};

std::optional<FitchViolation> find_fitch_violation(const EpsilonMap& e);
bool check_fitch_map(const EpsilonMap& e);

struct EpsilonTree {
  RootedTree tree;
  EdgeLabeling labels;
};

struct EpsilonResult {
  std::optional<EpsilonTree> tree;
  std::optional<FitchViolation> violation;
};

EpsilonResult try_build_epsilon_tree(const EpsilonMap& e);
// Throws RecognitionError naming the violated condition.
EpsilonTree build_epsilon_tree(const EpsilonMap& e);

// Copies λ_ε onto cluster-matched edges of `tree` and leaves the rest empty.
// Throws RefinementError if tree does not refine base.tree.
EdgeLabeling lift_edge_labeling(const RootedTree& tree, const EpsilonTree& base);

}  // namespace treelike
