#include "treelike/tree.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "treelike/errors.hpp"

namespace treelike {

// ---------------------------------------------------------------- LeafSet

LeafSet::LeafSet() : data_(std::make_shared<const Data>()) {}

LeafSet::LeafSet(std::vector<std::string> names) {
  if (names.empty()) throw DomainError("leaf set must not be empty");
  std::sort(names.begin(), names.end());
  if (auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end()) {
    throw DomainError("duplicate leaf name '" + *dup + "'");
  }
  Data data;
  data.names = std::move(names);
  for (std::size_t i = 0; i < data.names.size(); ++i) data.index.emplace(data.names[i], i);
  data_ = std::make_shared<const Data>(std::move(data));
}

std::optional<std::size_t> LeafSet::find(std::string_view name) const {
  auto it = data_->index.find(std::string(name));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t LeafSet::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DomainError("unknown leaf '" + std::string(name) + "'");
}

bool operator==(const LeafSet& a, const LeafSet& b) {
  return a.data_ == b.data_ || a.data_->names == b.data_->names;
}

// ---------------------------------------------------------------- Cluster

Cluster::Cluster(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

Cluster Cluster::full(std::size_t universe) {
  Cluster c(universe);
  for (std::size_t i = 0; i < universe; ++i) c.insert(i);
  return c;
}

Cluster Cluster::singleton(std::size_t universe, std::size_t member) {
  Cluster c(universe);
  c.insert(member);
  return c;
}

Cluster Cluster::of(std::size_t universe, std::span<const std::size_t> members) {
  Cluster c(universe);
  for (auto m : members) c.insert(m);
  return c;
}

Cluster Cluster::from_words(std::size_t universe, std::vector<std::uint64_t> words) {
  Cluster c(universe);
  if (words.size() != c.words_.size()) throw DomainError("word count does not match the universe");
  if (universe % 64 != 0 && !words.empty() && (words.back() >> (universe % 64)) != 0) {
    throw DomainError("cluster member outside the leaf set");
  }
  c.words_ = std::move(words);
  return c;
}

void Cluster::insert(std::size_t member) {
  if (member >= universe_) throw DomainError("cluster member outside the leaf set");
  words_[member / 64] |= std::uint64_t{1} << (member % 64);
}

bool Cluster::contains(std::size_t member) const {
  return member < universe_ && ((words_[member / 64] >> (member % 64)) & 1U) != 0;
}

std::size_t Cluster::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Cluster::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::size_t Cluster::min_member() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return universe_;
}

std::vector<std::size_t> Cluster::members() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t m) { out.push_back(m); });
  return out;
}

bool Cluster::is_subset_of(const Cluster& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

bool Cluster::intersects(const Cluster& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & other.words_[w]) != 0) return true;
  }
  return false;
}

bool Cluster::compatible_with(const Cluster& other) const {
  return !intersects(other) || is_subset_of(other) || other.is_subset_of(*this);
}

Cluster& Cluster::operator|=(const Cluster& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

std::size_t Cluster::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ universe_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool canonical_less(const Cluster& a, const Cluster& b) {
  const auto ca = a.count();
  const auto cb = b.count();
  if (ca != cb) return ca > cb;
  // Same size: compare sorted member lists lexicographically, which equals
  // comparing the lowest differing bit.
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const auto diff = a.words_[w] ^ b.words_[w];
    if (diff != 0) {
      const auto bit = std::uint64_t{1} << std::countr_zero(diff);
      return (a.words_[w] & bit) != 0;
    }
  }
  return false;
}

std::string Cluster::to_string(const LeafSet& leaves) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](std::size_t m) {
    if (!first) os << ',';
    first = false;
    os << leaves.name(m);
  });
  os << '}';
  return os.str();
}

// -------------------------------------------------------------- Hierarchy

namespace {

void check_universe(std::span<const Cluster> family, std::size_t leaf_count) {
  for (const auto& c : family) {
    if (c.universe() != leaf_count) throw DomainError("cluster is not over the given leaf set");
    if (c.empty()) throw DomainError("clusters must be non-empty");
  }
}

// Adds L and singletons, drops duplicates, sorts canonically.
std::vector<Cluster> completed(std::span<const Cluster> family, std::size_t leaf_count) {
  std::vector<Cluster> all(family.begin(), family.end());
  all.push_back(Cluster::full(leaf_count));
  for (std::size_t x = 0; x < leaf_count; ++x) all.push_back(Cluster::singleton(leaf_count, x));
  std::sort(all.begin(), all.end(), canonical_less);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

// Sweep over a canonically sorted, duplicate-free family whose first member
// is L. For each cluster, all of its members must currently sit in the same
// innermost cluster, which then becomes its parent. Returns the parent index
// of every cluster, or an overlapping pair.
struct SweepResult {
  std::vector<std::size_t> parent;
  std::optional<std::pair<std::size_t, std::size_t>> overlap;
};

SweepResult laminar_sweep(const std::vector<Cluster>& sorted, std::size_t leaf_count) {
  SweepResult result;
  result.parent.assign(sorted.size(), kNoVertex);
  std::vector<std::size_t> owner(leaf_count, 0);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const Cluster& a = sorted[i];
    std::size_t p = kNoVertex;
    std::optional<std::size_t> other_member;
    a.for_each([&](std::size_t x) {
      if (other_member) return;
      if (p == kNoVertex) {
        p = owner[x];
      } else if (owner[x] != p) {
        other_member = x;
      }
    });
    if (other_member) {
      // Members disagree on their innermost cluster. Either the first owner
      // misses a member of a, or the second owner is nested in the first and
      // misses the first member.
      if (!sorted[p].contains(*other_member)) {
        result.overlap = std::pair{p, i};
      } else {
        result.overlap = std::pair{owner[*other_member], i};
      }
      return result;
    }
    result.parent[i] = p;
    a.for_each([&](std::size_t x) { owner[x] = i; });
  }
  return result;
}

}  // namespace

std::optional<ClusterOverlap> find_overlap(std::span<const Cluster> family,
                                           std::size_t leaf_count) {
  check_universe(family, leaf_count);
  auto sorted = completed(family, leaf_count);
  auto sweep = laminar_sweep(sorted, leaf_count);
  if (!sweep.overlap) return std::nullopt;
  return ClusterOverlap{sorted[sweep.overlap->first], sorted[sweep.overlap->second]};
}

bool check_hierarchy(std::span<const Cluster> family, const LeafSet& leaves) {
  return !find_overlap(family, leaves.size()).has_value();
}

Hierarchy::Hierarchy(LeafSet leaves, std::vector<Cluster> family) : leaves_(std::move(leaves)) {
  check_universe(family, leaves_.size());
  auto sorted = completed(family, leaves_.size());
  auto sweep = laminar_sweep(sorted, leaves_.size());
  if (sweep.overlap) {
    throw HierarchyError("clusters " + sorted[sweep.overlap->first].to_string(leaves_) + " and " +
                         sorted[sweep.overlap->second].to_string(leaves_) +
                         " overlap without nesting");
  }
  clusters_ = std::move(sorted);
}

bool Hierarchy::contains(const Cluster& c) const {
  return std::binary_search(clusters_.begin(), clusters_.end(), c, canonical_less);
}

bool operator==(const Hierarchy& a, const Hierarchy& b) {
  return a.leaves_ == b.leaves_ && a.clusters_ == b.clusters_;
}

// ------------------------------------------------------------- RootedTree

CanonicalTree RootedTree::canonical(LeafSet leaves, const std::vector<VertexId>& parent,
                                    const std::vector<std::optional<std::size_t>>& leaf_of) {
  const std::size_t n = parent.size();
  if (leaf_of.size() != n) throw DomainError("parent and leaf arrays differ in length");
  if (n == 0) throw DomainError("tree must have at least one vertex");

  std::vector<std::vector<VertexId>> kids(n);
  VertexId root = kNoVertex;
  for (VertexId v = 0; v < n; ++v) {
    if (parent[v] == kNoVertex) {
      if (root != kNoVertex) throw DomainError("tree has more than one root");
      root = v;
    } else {
      if (parent[v] >= n) throw DomainError("parent index out of range");
      kids[parent[v]].push_back(v);
    }
  }
  if (root == kNoVertex) throw DomainError("tree has no root");

  std::vector<VertexId> vertex_of_leaf(leaves.size(), kNoVertex);
  for (VertexId v = 0; v < n; ++v) {
    if (kids[v].empty()) {
      if (!leaf_of[v]) throw DomainError("leaf vertex without a leaf name");
      const auto x = *leaf_of[v];
      if (x >= leaves.size()) throw DomainError("leaf position out of range");
      if (vertex_of_leaf[x] != kNoVertex) throw DomainError("leaf '" + leaves.name(x) + "' occurs twice");
      vertex_of_leaf[x] = v;
    } else {
      if (leaf_of[v]) throw DomainError("inner vertex carries a leaf name");
      if (kids[v].size() < 2) throw DomainError("inner vertex with fewer than two children");
    }
  }
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    if (vertex_of_leaf[x] == kNoVertex) throw DomainError("leaf '" + leaves.name(x) + "' missing from tree");
  }

  // Post-order to find min leaf per vertex and detect cycles/unreachable parts.
  std::vector<std::size_t> min_leaf(n, leaves.size());
  std::vector<VertexId> order;
  order.reserve(n);
  {
    std::vector<VertexId> stack{root};
    std::vector<char> seen(n, 0);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (seen[v]) throw DomainError("tree contains a cycle");
      seen[v] = 1;
      order.push_back(v);
      for (auto c : kids[v]) stack.push_back(c);
    }
    if (order.size() != n) throw DomainError("tree is not connected");
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    if (kids[v].empty()) {
      min_leaf[v] = *leaf_of[v];
    } else {
      for (auto c : kids[v]) min_leaf[v] = std::min(min_leaf[v], min_leaf[c]);
    }
  }
  for (auto& k : kids) {
    std::sort(k.begin(), k.end(), [&](VertexId a, VertexId b) { return min_leaf[a] < min_leaf[b]; });
  }

  // Canonical preorder numbering.
  std::vector<VertexId> new_id(n, kNoVertex);
  std::vector<VertexId> old_of_new;
  old_of_new.reserve(n);
  {
    std::vector<VertexId> stack{root};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      new_id[v] = old_of_new.size();
      old_of_new.push_back(v);
      for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
    }
  }

  RootedTree t;
  t.leaves_ = std::move(leaves);
  const std::size_t leaf_count = t.leaves_.size();
  t.parent_.resize(n);
  t.children_.resize(n);
  t.leaf_of_.assign(n, leaf_count);
  t.vertex_of_leaf_.assign(leaf_count, kNoVertex);
  t.depth_.assign(n, 0);
  for (VertexId nv = 0; nv < n; ++nv) {
    const auto ov = old_of_new[nv];
    t.parent_[nv] = parent[ov] == kNoVertex ? kNoVertex : new_id[parent[ov]];
    if (nv != 0) t.depth_[nv] = t.depth_[t.parent_[nv]] + 1;
    for (auto c : kids[ov]) t.children_[nv].push_back(new_id[c]);
    if (kids[ov].empty()) {
      t.leaf_of_[nv] = *leaf_of[ov];
      t.vertex_of_leaf_[*leaf_of[ov]] = nv;
    }
  }
  t.clusters_.assign(n, Cluster(leaf_count));
  for (VertexId nv = n; nv-- > 0;) {
    if (t.children_[nv].empty()) {
      t.clusters_[nv].insert(t.leaf_of_[nv]);
    } else {
      for (auto c : t.children_[nv]) t.clusters_[nv] |= t.clusters_[c];
    }
  }
  t.by_cluster_.reserve(n);
  for (VertexId nv = 0; nv < n; ++nv) t.by_cluster_.emplace(t.clusters_[nv], nv);
  return CanonicalTree{std::move(t), std::move(new_id)};
}

RootedTree RootedTree::star(LeafSet leaves) {
  const std::size_t n = leaves.size();
  if (n == 1) return canonical(std::move(leaves), {kNoVertex}, {std::size_t{0}}).tree;
  std::vector<VertexId> parent(n + 1, 0);
  std::vector<std::optional<std::size_t>> leaf_of(n + 1);
  parent[0] = kNoVertex;
  for (std::size_t x = 0; x < n; ++x) leaf_of[x + 1] = x;
  return canonical(std::move(leaves), parent, leaf_of).tree;
}

std::vector<VertexId> RootedTree::inner_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v) {
    if (!is_leaf(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> RootedTree::inner_edges() const {
  std::vector<VertexId> out;
  for (VertexId v = 1; v < vertex_count(); ++v) {
    if (!is_leaf(v)) out.push_back(v);
  }
  return out;
}

std::optional<VertexId> RootedTree::find_cluster(const Cluster& c) const {
  auto it = by_cluster_.find(c);
  if (it == by_cluster_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const RootedTree& a, const RootedTree& b) {
  return a.leaves_ == b.leaves_ && a.parent_ == b.parent_ && a.leaf_of_ == b.leaf_of_;
}

// -------------------------------------------------------------- functions

RootedTree tree_from_hierarchy(const Hierarchy& h) {
  const auto& sorted = h.clusters();
  const std::size_t leaf_count = h.leaves().size();
  auto sweep = laminar_sweep(sorted, leaf_count);
  if (sweep.overlap) throw HierarchyError("hierarchy is not laminar");
  std::vector<std::optional<std::size_t>> leaf_of(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].count() == 1) leaf_of[i] = sorted[i].min_member();
  }
  // Single-leaf hierarchy: L is the singleton and the only vertex.
  return RootedTree::canonical(h.leaves(), sweep.parent, leaf_of).tree;
}

Hierarchy clusters(const RootedTree& tree) {
  std::vector<Cluster> family;
  family.reserve(tree.vertex_count());
  for (VertexId v = 0; v < tree.vertex_count(); ++v) family.push_back(tree.cluster(v));
  return Hierarchy(tree.leaves(), std::move(family));
}

VertexId lca(const RootedTree& tree, VertexId a, VertexId b) {
  while (tree.depth(a) > tree.depth(b)) a = tree.parent(a);
  while (tree.depth(b) > tree.depth(a)) b = tree.parent(b);
  while (a != b) {
    a = tree.parent(a);
    b = tree.parent(b);
  }
  return a;
}

VertexId lca(const RootedTree& tree, std::span<const VertexId> vertices) {
  if (vertices.empty()) throw DomainError("lca of an empty vertex set");
  VertexId acc = vertices.front();
  for (auto v : vertices) {
    if (v >= tree.vertex_count()) throw DomainError("vertex out of range");
    acc = lca(tree, acc, v);
  }
  return acc;
}

bool is_refinement(const RootedTree& fine, const RootedTree& coarse) {
  if (!(fine.leaves() == coarse.leaves())) throw DomainError("trees are over different leaf sets");
  for (VertexId v = 0; v < coarse.vertex_count(); ++v) {
    if (!fine.find_cluster(coarse.cluster(v))) return false;
  }
  return true;
}

RootedTree contract_edge(const RootedTree& tree, VertexId child) {
  if (child >= tree.vertex_count()) throw DomainError("vertex out of range");
  if (child == tree.root()) throw DomainError("the root has no incoming edge");
  if (tree.is_leaf(child)) throw DomainError("cannot contract an edge incident to a leaf");
  const auto up = tree.parent(child);
  std::vector<VertexId> parent;
  std::vector<std::optional<std::size_t>> leaf_of;
  std::vector<VertexId> index(tree.vertex_count(), kNoVertex);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (v == child) continue;
    index[v] = parent.size();
    parent.push_back(kNoVertex);
    leaf_of.push_back(tree.is_leaf(v) ? std::optional(tree.leaf_index(v)) : std::nullopt);
  }
  for (VertexId v = 1; v < tree.vertex_count(); ++v) {
    if (v == child) continue;
    auto p = tree.parent(v);
    if (p == child) p = up;
    parent[index[v]] = index[p];
  }
  return RootedTree::canonical(tree.leaves(), parent, leaf_of).tree;
}

void for_each_lca_pair(const RootedTree& tree,
                       const std::function<void(VertexId, std::size_t, std::size_t)>& f) {
  std::vector<std::vector<std::size_t>> below(tree.vertex_count());
  for (VertexId v = tree.vertex_count(); v-- > 0;) {
    if (tree.is_leaf(v)) {
      below[v].push_back(tree.leaf_index(v));
      continue;
    }
    const auto& kids = tree.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        for (auto x : below[kids[i]]) {
          for (auto y : below[kids[j]]) f(v, x, y);
        }
      }
    }
    for (auto c : kids) {
      below[v].insert(below[v].end(), below[c].begin(), below[c].end());
      std::vector<std::size_t>().swap(below[c]);
    }
  }
}

LcaPartition lca_pair_partition(const RootedTree& tree) {
  LcaPartition p;
  for (auto v : tree.inner_vertices()) p.blocks[v];
  for_each_lca_pair(tree, [&](VertexId v, std::size_t x, std::size_t y) {
    auto& block = p.blocks[v];
    block.emplace_back(x, y);
    block.emplace_back(y, x);
  });
  for (auto& [v, block] : p.blocks) std::sort(block.begin(), block.end());
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>> lca_representatives(const RootedTree& tree) {
  std::vector<std::pair<std::size_t, std::size_t>> rep(tree.vertex_count(),
                                                       {tree.leaf_count(), tree.leaf_count()});
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto& kids = tree.children(v);
    rep[v] = {tree.cluster(kids[0]).min_member(), tree.cluster(kids[1]).min_member()};
  }
  return rep;
}

}  // namespace treelike
