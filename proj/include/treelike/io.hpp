#pragma once

// File formats: the line-based instance file holding δ and ε, the JSON tree
// document, and an annotated Newick rendering for display.
//
// Instance file (tokens separated by tabs or spaces, '#' starts a comment):
//
//   leaves         a  b  c
//   vertex_labels  q0 q1
//   edge_labels    m
//   delta
//   a  b  q1
//   ...            one line per ordered pair
//   epsilon
//   a  b  -        '-' is the empty set, otherwise comma-separated labels
//   ...

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treelike/combine.hpp"
#include "treelike/delta.hpp"
#include "treelike/epsilon.hpp"
#include "treelike/errors.hpp"
#include "treelike/tree.hpp"

namespace treelike {

// Malformed or inconsistent input. line/column are 1-based; 0 when the
// problem is not tied to a position (e.g. a missing pair).
class InputError : public Error {
 public:
  InputError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Instance {
  LeafSet leaves;
  std::vector<std::string> vertex_labels;
  std::vector<std::string> edge_labels;
  std::optional<DeltaMap> delta;
  std::optional<EpsilonMap> epsilon;
};

// Rejects unknown names, self pairs, duplicate and missing ordered pairs, and
// asymmetric δ with InputError.
Instance parse_instance(std::istream& in);
Instance parse_instance(std::string_view text);
// Canonical text: leaves sorted, pairs in leaf order, label sets in alphabet order.
std::string format_instance(const Instance& instance);
std::string instance_to_json(const Instance& instance);

// A tree with optional (possibly partial) labelings, as read from a tree file.
struct TreeDocument {
  RootedTree tree;
  std::vector<std::string> vertex_labels;
  std::vector<std::string> edge_labels;
  // kNoLabel where a vertex label is absent.
  VertexLabeling vertex_labeling;
  EdgeLabeling edge_labeling;
  // Vertices lacking "edge_label_to_parent" (the root never needs one).
  std::vector<VertexId> missing_edge_labels;

  bool has_total_labelings() const;
};

TreeDocument parse_tree_document(std::string_view json_text);
std::string format_tree_document(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
                                 const std::vector<std::string>& vertex_labels,
                                 const std::vector<std::string>& edge_labels);
std::string format_tree_document(const CombinedTree& c, const DeltaMap& d, const EpsilonMap& e);

// "((a,b)q1#{m},c)q0;": vertex labels after the closing parenthesis, edge
// labels as #{...} after the subtree they lead into. Empty edge labels are
// omitted. Display only; never parsed.
std::string to_newick(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
                      const std::vector<std::string>& vertex_labels, const std::vector<std::string>& edge_labels);
std::string to_newick(const RootedTree& tree);

// Lines "q m" naming forbidden vertex/edge label pairs.
std::vector<std::pair<std::string, std::string>> parse_q_pairs(std::istream& in);

}  // namespace treelike
