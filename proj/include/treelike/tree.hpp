#pragma once

// Rooted phylogenetic trees over a fixed leaf set, their cluster
// hierarchies, last common ancestors, refinement and edge contraction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace treelike {

using VertexId = std::size_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

// Ordered set of distinct leaf names. Positions follow lexicographic order of
// the names; every cluster and map in the library is indexed by position.
// Copies share the underlying storage.
class LeafSet {
 public:
  LeafSet();
  // Sorts the names. Throws DomainError on an empty list or duplicates.
  explicit LeafSet(std::vector<std::string> names);

  std::size_t size() const { return data_->names.size(); }
  const std::string& name(std::size_t position) const { return data_->names[position]; }
  const std::vector<std::string>& names() const { return data_->names; }
  std::optional<std::size_t> find(std::string_view name) const;
  // Throws DomainError for unknown names.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const LeafSet& a, const LeafSet& b);

 private:
  struct Data {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

// Subset of leaf positions, stored as a bitset over a fixed universe size.
class Cluster {
 public:
  Cluster() = default;
  explicit Cluster(std::size_t universe);

  static Cluster full(std::size_t universe);
  static Cluster singleton(std::size_t universe, std::size_t member);
  static Cluster of(std::size_t universe, std::span<const std::size_t> members);
  // Raw 64-bit words, member i at bit i%64 of word i/64. DomainError on a
  // wrong word count or bits beyond the universe.
  static Cluster from_words(std::size_t universe, std::vector<std::uint64_t> words);

  std::size_t universe() const { return universe_; }
  void insert(std::size_t member);
  bool contains(std::size_t member) const;
  std::size_t count() const;
  bool empty() const;
  std::size_t min_member() const;  // universe() when empty
  std::vector<std::size_t> members() const;

  bool is_subset_of(const Cluster& other) const;
  bool intersects(const Cluster& other) const;
  // A∩B ∈ {A, B, ∅}
  bool compatible_with(const Cluster& other) const;

  Cluster& operator|=(const Cluster& other);

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  std::size_t hash() const;
  friend bool operator==(const Cluster& a, const Cluster& b) = default;
  // Canonical order: larger clusters first, then by sorted member list.
  friend bool canonical_less(const Cluster& a, const Cluster& b);

  std::string to_string(const LeafSet& leaves) const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ClusterHash {
  std::size_t operator()(const Cluster& c) const { return c.hash(); }
};

// Two members of a family violating A∩B ∈ {A, B, ∅}.
struct ClusterOverlap {
  Cluster first;
  Cluster second;
};

// Laminar family on a leaf set containing L and every singleton. Clusters are
// deduplicated and kept in canonical order.
class Hierarchy {
 public:
  // Adds L and the singletons, validates laminarity. Throws HierarchyError
  // naming an overlapping pair, DomainError on clusters over another universe
  // or empty clusters.
  Hierarchy(LeafSet leaves, std::vector<Cluster> family);

  const LeafSet& leaves() const { return leaves_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }
  bool contains(const Cluster& c) const;

  friend bool operator==(const Hierarchy& a, const Hierarchy& b);

 private:
  LeafSet leaves_;
  std::vector<Cluster> clusters_;
};

// Returns an overlapping pair of family ∪ {L} ∪ singletons, if any. Runs in
// O(k log k + Σ|A|) by sweeping clusters from large to small.
std::optional<ClusterOverlap> find_overlap(std::span<const Cluster> family,
                                           std::size_t leaf_count);

// True iff family ∪ {L} ∪ singletons is a hierarchy on leaves. Throws
// DomainError if a cluster is not over the universe of leaves or is empty.
bool check_hierarchy(std::span<const Cluster> family, const LeafSet& leaves);

class RootedTree;

// Result of RootedTree::canonical: the tree and, for each input vertex index,
// the vertex id it received.
struct CanonicalTree;

// Immutable rooted phylogenetic tree. Vertex ids are canonical: preorder,
// children ordered by their smallest leaf position. Two trees with the same
// cluster set are therefore equal member-wise.
class RootedTree {
 public:
  // Validates connectivity, single root, phylogenetic degree and the
  // leaf bijection; throws DomainError otherwise. `parent[v]` is kNoVertex
  // for the root, `leaf_of[v]` is the leaf position for leaves and nullopt
  // for inner vertices.
  static CanonicalTree canonical(LeafSet leaves, const std::vector<VertexId>& parent,
                                 const std::vector<std::optional<std::size_t>>& leaf_of);

  static RootedTree star(LeafSet leaves);

  const LeafSet& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t vertex_count() const { return parent_.size(); }
  VertexId root() const { return 0; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  bool is_leaf(VertexId v) const { return children_[v].empty(); }
  // Leaf position of a leaf vertex.
  std::size_t leaf_index(VertexId v) const { return leaf_of_[v]; }
  VertexId leaf_vertex(std::size_t leaf) const { return vertex_of_leaf_[leaf]; }
  std::size_t depth(VertexId v) const { return depth_[v]; }
  // L(T(v))
  const Cluster& cluster(VertexId v) const { return clusters_[v]; }
  std::vector<VertexId> inner_vertices() const;
  // Inner edges, each identified by its child endpoint.
  std::vector<VertexId> inner_edges() const;
  std::size_t edge_count() const { return vertex_count() - 1; }

  // Lookup from cluster to vertex.
  std::optional<VertexId> find_cluster(const Cluster& c) const;

  friend bool operator==(const RootedTree& a, const RootedTree& b);

 private:
  RootedTree() = default;

  LeafSet leaves_;
  std::vector<VertexId> parent_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::size_t> leaf_of_;
  std::vector<VertexId> vertex_of_leaf_;
  std::vector<std::size_t> depth_;
  std::vector<Cluster> clusters_;
  std::unordered_map<Cluster, VertexId, ClusterHash> by_cluster_;
};

struct CanonicalTree {
  RootedTree tree;
  std::vector<VertexId> new_id;
};

RootedTree tree_from_hierarchy(const Hierarchy& h);
Hierarchy clusters(const RootedTree& tree);

// Deepest common ancestor of a non-empty vertex set (ancestor walks).
VertexId lca(const RootedTree& tree, std::span<const VertexId> vertices);
VertexId lca(const RootedTree& tree, VertexId a, VertexId b);

// clusters(coarse) ⊆ clusters(fine). DomainError on different leaf sets.
bool is_refinement(const RootedTree& fine, const RootedTree& coarse);

// Contracts the inner edge {parent(child), child}. DomainError if `child` is
// a leaf or the root.
RootedTree contract_edge(const RootedTree& tree, VertexId child);

// Blocks L_v of ordered leaf pairs grouped by their last common ancestor.
struct LcaPartition {
  std::map<VertexId, std::vector<std::pair<std::size_t, std::size_t>>> blocks;
};

LcaPartition lca_pair_partition(const RootedTree& tree);

// Calls f(v, x, y) for every inner vertex v and every unordered pair of leaf
// positions {x, y} with lca(x, y) = v, x taken from an earlier child than y.
void for_each_lca_pair(const RootedTree& tree,
                       const std::function<void(VertexId, std::size_t, std::size_t)>& f);

// For every inner vertex, one pair of leaves whose lca it is: the smallest
// leaves of its first two children.
std::vector<std::pair<std::size_t, std::size_t>> lca_representatives(const RootedTree& tree);

}  // namespace treelike
