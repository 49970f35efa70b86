#pragma once

// Symbolic ultrametrics δ: L^(2) → M, their discriminating representation
// (T_δ, t_δ), and vertex labelings lifted to refinements of T_δ.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "treelike/tree.hpp"

namespace treelike {

using LabelId = std::uint32_t;
inline constexpr LabelId kNoLabel = std::numeric_limits<LabelId>::max();

// Per-vertex label index into an alphabet; kNoLabel on leaves.
using VertexLabeling = std::vector<LabelId>;

// Total map on ordered pairs of distinct leaves. Symmetry is not enforced
// here; recognition reports asymmetric maps.
class DeltaMap {
 public:
  // `values` is |L|×|L| row-major; diagonal entries are ignored.
  DeltaMap(LeafSet leaves, std::vector<std::string> labels, std::vector<LabelId> values);
  static DeltaMap constant(LeafSet leaves, std::vector<std::string> labels, LabelId label);

  const LeafSet& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  LabelId at(std::size_t x, std::size_t y) const { return values_[x * size() + y]; }
  const std::string& label_name(std::size_t x, std::size_t y) const { return labels_[at(x, y)]; }
  const std::vector<LabelId>& values() const { return values_; }

  friend bool operator==(const DeltaMap& a, const DeltaMap& b);

 private:
  LeafSet leaves_;
  std::vector<std::string> labels_;
  std::vector<LabelId> values_;
};

struct UltrametricViolation {
  enum class Kind {
    Asymmetric,       // (i): leaves = (x, y) with δ(x,y) ≠ δ(y,x)
    Cograph,          // (ii): leaves = (u, v, x, y) forming the forbidden path
    RainbowTriangle,  // (iii): leaves = (u, v, x) with three distinct labels
    NoSplit,          // construction found no label splitting `leaves`
  };
  Kind kind;
  std::vector<std::size_t> leaves;

  // "condition(iii) (u,v,x)" etc.
  std::string describe(const LeafSet& names) const;
};

// Direct O(|L|⁴) check of (i), (iii), (ii) in that order.
std::optional<UltrametricViolation> find_ultrametric_violation(const DeltaMap& d);
bool check_symbolic_ultrametric(const DeltaMap& d);

struct DiscriminatingTree {
  RootedTree tree;
  VertexLabeling labels;
};

struct DiscriminatingResult {
  std::optional<DiscriminatingTree> representation;
  std::optional<UltrametricViolation> violation;
};

// Top-down construction: on each leaf subset, the unique label q whose
// complement graph {x,y : δ(x,y) ≠ q} is disconnected labels the vertex, and
// the components become its children. Never throws on non-ultrametric input;
// the violation is reported instead.
DiscriminatingResult try_build_discriminating(const DeltaMap& d);

// Throws RecognitionError carrying the violation.
DiscriminatingTree build_discriminating(const DeltaMap& d);

// The unique t with (tree, t) explaining d. Throws RecognitionError if d is
// not a symbolic ultrametric and RefinementError if tree does not refine T_δ.
VertexLabeling lift_vertex_labeling(const RootedTree& tree, const DeltaMap& d);
VertexLabeling lift_vertex_labeling(const RootedTree& tree, const DiscriminatingTree& base);

// t(x) ≠ t(y) on every inner edge.
bool is_discriminating(const RootedTree& tree, const VertexLabeling& labels);

}  // namespace treelike
