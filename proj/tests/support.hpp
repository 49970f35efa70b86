#pragma once

// Fixture helpers shared by the test binaries.

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelike/combine.hpp"
#include "treelike/constraints.hpp"
#include "treelike/delta.hpp"
#include "treelike/epsilon.hpp"
#include "treelike/oracle.hpp"
#include "treelike/tree.hpp"

namespace fixture {

using namespace treelike;

struct Labeled {
  RootedTree tree;
  VertexLabeling t;
  EdgeLabeling lambda;
};

// Reads the annotated Newick written by to_newick: "((a,b)q1#{m},c)q0;".
// Vertex labels must come from `vlabels`, edge labels from `elabels`; missing
// vertex labels stay kNoLabel. The trailing ';' is optional.
class NewickReader {
 public:
  NewickReader(std::string text, std::vector<std::string> vlabels, std::vector<std::string> elabels)
      : s_(std::move(text)), vlabels_(std::move(vlabels)), elabels_(std::move(elabels)) {}

  Labeled read() {
    node(kNoVertex);
    if (pos_ < s_.size() && s_[pos_] == ';') ++pos_;
    if (pos_ != s_.size()) fail("trailing input");
    LeafSet leaves(names_);
    std::vector<std::optional<std::size_t>> leaf_of(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (!leaf_name_[i].empty()) leaf_of[i] = leaves.index_of(leaf_name_[i]);
    }
    auto canon = RootedTree::canonical(leaves, parent_, leaf_of);
    Labeled out{canon.tree, VertexLabeling(canon.tree.vertex_count(), kNoLabel),
                EdgeLabeling(canon.tree.vertex_count(), 0)};
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      out.t[canon.new_id[i]] = t_[i];
      out.lambda[canon.new_id[i]] = lambda_[i];
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("newick: " + what + " at " + std::to_string(pos_) + " in " + s_);
  }

  std::string word() {
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '\'')) {
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  void node(VertexId parent) {
    const auto me = parent_.size();
    parent_.push_back(parent);
    leaf_name_.emplace_back();
    t_.push_back(kNoLabel);
    lambda_.push_back(0);
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      while (true) {
        node(me);
        if (pos_ >= s_.size()) fail("unterminated subtree");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] != ')') fail("expected ')'");
        ++pos_;
        break;
      }
      const auto label = word();
      if (!label.empty()) {
        auto it = std::find(vlabels_.begin(), vlabels_.end(), label);
        if (it == vlabels_.end()) fail("unknown vertex label " + label);
        t_[me] = static_cast<LabelId>(it - vlabels_.begin());
      }
    } else {
      const auto name = word();
      if (name.empty()) fail("expected leaf name");
      leaf_name_[me] = name;
      names_.push_back(name);
    }
    if (pos_ < s_.size() && s_[pos_] == '#') {
      ++pos_;
      if (pos_ >= s_.size() || s_[pos_] != '{') fail("expected '{'");
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '}') {
        const auto m = word();
        auto it = std::find(elabels_.begin(), elabels_.end(), m);
        if (it == elabels_.end()) fail("unknown edge label " + m);
        lambda_[me] |= LabelMask{1} << (it - elabels_.begin());
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
      }
      if (pos_ >= s_.size()) fail("unterminated label set");
      ++pos_;
    }
  }

  std::string s_;
  std::vector<std::string> vlabels_, elabels_;
  std::size_t pos_ = 0;
  std::vector<VertexId> parent_;
  std::vector<std::string> leaf_name_;
  std::vector<std::string> names_;
  VertexLabeling t_;
  EdgeLabeling lambda_;
};

inline Labeled newick(const std::string& text, std::vector<std::string> vlabels = {},
                      std::vector<std::string> elabels = {}) {
  return NewickReader(text, std::move(vlabels), std::move(elabels)).read();
}

inline RootedTree tree(const std::string& text) { return newick(text).tree; }

inline Cluster cluster(const LeafSet& leaves, std::initializer_list<const char*> names) {
  Cluster c(leaves.size());
  for (const char* n : names) c.insert(leaves.index_of(n));
  return c;
}

inline std::set<std::vector<std::size_t>> cluster_set(const RootedTree& t) {
  std::set<std::vector<std::size_t>> out;
  for (VertexId v = 0; v < t.vertex_count(); ++v) out.insert(t.cluster(v).members());
  return out;
}

// Symmetric δ from a label per unordered pair, listed as {x, y, label}.
struct PairLabel {
  const char* x;
  const char* y;
  const char* label;
};

inline DeltaMap delta_from(const LeafSet& leaves, std::vector<std::string> labels, const char* fill,
                           std::initializer_list<PairLabel> entries) {
  const auto n = leaves.size();
  auto id = [&](const char* l) {
    return static_cast<LabelId>(std::find(labels.begin(), labels.end(), l) - labels.begin());
  };
  std::vector<LabelId> v(n * n, id(fill));
  for (const auto& p : entries) {
    const auto x = leaves.index_of(p.x), y = leaves.index_of(p.y);
    v[x * n + y] = v[y * n + x] = id(p.label);
  }
  return DeltaMap(leaves, std::move(labels), std::move(v));
}

// All rooted phylogenetic trees, labeled with every vertex labeling over
// `labels`, restricted to discriminating ones when asked.
inline std::vector<VertexLabeling> all_vertex_labelings(const RootedTree& tree, std::size_t label_count) {
  const auto inner = tree.inner_vertices();
  std::vector<VertexLabeling> out;
  std::vector<LabelId> digits(inner.size(), 0);
  while (true) {
    VertexLabeling t(tree.vertex_count(), kNoLabel);
    for (std::size_t i = 0; i < inner.size(); ++i) t[inner[i]] = digits[i];
    out.push_back(std::move(t));
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == label_count) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

// Every edge labeling of `tree` over `label_count` labels.
inline std::vector<EdgeLabeling> all_edge_labelings(const RootedTree& tree, std::size_t label_count) {
  const auto edges = tree.edge_count();
  const std::size_t bits = edges * label_count;
  std::vector<EdgeLabeling> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    EdgeLabeling lambda(tree.vertex_count(), 0);
    for (std::size_t v = 1; v < tree.vertex_count(); ++v) {
      const auto shift = (v - 1) * label_count;
      lambda[v] = (code >> shift) & ((LabelMask{1} << label_count) - 1);
    }
    out.push_back(std::move(lambda));
  }
  return out;
}

inline LeafSet abc(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return LeafSet(names);
}

}  // namespace fixture
