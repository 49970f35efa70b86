#include "treelike/oracle.hpp"

#include <algorithm>
#include <bit>

#include "treelike/errors.hpp"

namespace treelike {

DeltaMap derive_delta(const RootedTree& tree, const VertexLabeling& t, std::vector<std::string> labels) {
  const auto n = tree.leaf_count();
  if (t.size() != tree.vertex_count()) throw DomainError("vertex labeling does not match the tree");
  for (auto v : tree.inner_vertices()) {
    if (t[v] >= labels.size()) throw DomainError("inner vertex without a declared label");
  }
  std::vector<LabelId> values(n * n, 0);
  for_each_lca_pair(tree, [&](VertexId v, std::size_t x, std::size_t y) {
    values[x * n + y] = t[v];
    values[y * n + x] = t[v];
  });
  return DeltaMap(tree.leaves(), std::move(labels), std::move(values));
}

EpsilonMap derive_epsilon(const RootedTree& tree, const EdgeLabeling& lambda, std::vector<std::string> labels) {
  const auto n = tree.leaf_count();
  const auto vn = tree.vertex_count();
  if (lambda.size() != vn) throw DomainError("edge labeling does not match the tree");
  std::vector<std::size_t> size(vn, 1);
  for (VertexId v = vn; v-- > 1;) size[tree.parent(v)] += size[v];

  // Preorder ids make every subtree a contiguous id range.
  std::vector<LabelMask> values(n * n, 0);
  std::vector<LabelMask> acc(vn, 0);
  for (VertexId v = 0; v < vn; ++v) {
    if (tree.is_leaf(v)) continue;
    const Cluster& here = tree.cluster(v);
    for (auto c : tree.children(v)) {
      acc[c] = lambda[c];
      for (VertexId w = c + 1; w < c + size[c]; ++w) acc[w] = acc[tree.parent(w)] | lambda[w];
      const Cluster& below = tree.cluster(c);
      for (VertexId w = c; w < c + size[c]; ++w) {
        if (!tree.is_leaf(w)) continue;
        const auto y = tree.leaf_index(w);
        here.for_each([&](std::size_t x) {
          if (!below.contains(x)) values[x * n + y] = acc[w];
        });
      }
    }
  }
  return EpsilonMap(tree.leaves(), std::move(labels), std::move(values));
}

// ------------------------------------------------------------ enumeration

namespace {

using Family = std::vector<Cluster>;

// All families of clusters strictly inside `subset` (excluding the subset and
// singletons) that together with them form a hierarchy on `subset`.
std::vector<Family> inner_families(const std::vector<std::size_t>& subset, std::size_t universe) {
  const auto s = subset.size();
  if (s <= 2) return {Family{}};
  std::vector<Family> out;
  // Restricted growth strings enumerate set partitions.
  std::vector<std::size_t> block(s, 0);
  std::vector<std::size_t> max_prefix(s, 0);
  while (true) {
    const auto blocks = *std::max_element(block.begin(), block.end()) + 1;
    if (blocks >= 2) {
      std::vector<std::vector<std::size_t>> parts(blocks);
      for (std::size_t i = 0; i < s; ++i) parts[block[i]].push_back(subset[i]);
      std::vector<Family> partial{Family{}};
      for (const auto& part : parts) {
        if (part.size() < 2) continue;
        const auto cluster = Cluster::of(universe, part);
        const auto subs = inner_families(part, universe);
        std::vector<Family> next;
        for (const auto& left : partial) {
          for (const auto& right : subs) {
            Family f = left;
            f.push_back(cluster);
            f.insert(f.end(), right.begin(), right.end());
            next.push_back(std::move(f));
          }
        }
        partial = std::move(next);
      }
      for (auto& f : partial) out.push_back(std::move(f));
    }
    // Advance to the next restricted growth string.
    std::size_t i = s - 1;
    while (i > 0 && block[i] == max_prefix[i - 1] + 1) --i;
    if (i == 0) break;
    ++block[i];
    max_prefix[i] = std::max(max_prefix[i - 1], block[i]);
    for (std::size_t j = i + 1; j < s; ++j) {
      block[j] = 0;
      max_prefix[j] = max_prefix[i];
    }
  }
  return out;
}

// Edges (child vertex ids) on the path from lca(x, y) down to y, per ordered pair.
std::vector<std::vector<VertexId>> path_table(const RootedTree& tree) {
  const auto n = tree.leaf_count();
  std::vector<std::vector<VertexId>> paths(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const auto top = lca(tree, tree.leaf_vertex(x), tree.leaf_vertex(y));
      for (auto w = tree.leaf_vertex(y); w != top; w = tree.parent(w)) paths[x * n + y].push_back(w);
    }
  }
  return paths;
}

constexpr std::size_t kMaxLabelingBits = 20;

std::vector<EdgeLabeling> exhaustive_labelings(const RootedTree& tree, const EpsilonMap& e,
                                               const std::vector<std::vector<VertexId>>& paths) {
  const auto n = tree.leaf_count();
  const auto k = e.labels().size();
  const auto edges = tree.edge_count();
  const auto bits = edges * k;
  if (bits > kMaxLabelingBits) throw DomainError("too many labelings to enumerate");
  std::vector<EdgeLabeling> out;
  EdgeLabeling lambda(tree.vertex_count(), 0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    for (std::size_t i = 0; i < edges; ++i) {
      lambda[i + 1] = k == 0 ? 0 : (code >> (i * k)) & ((LabelMask{1} << k) - 1);
    }
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      for (std::size_t y = 0; y < n && ok; ++y) {
        if (x == y) continue;
        LabelMask m = 0;
        for (auto w : paths[x * n + y]) m |= lambda[w];
        ok = m == e.at(x, y);
      }
    }
    if (ok) out.push_back(lambda);
  }
  return out;
}

bool satisfies(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
               const EventAlphabet& alpha, ConstraintFlags flags) {
  if (flags.c && !check_C(tree, lambda)) return false;
  if (flags.c1 && !check_C1(tree, t, lambda, alpha)) return false;
  if (flags.c2 && !check_C2(tree, lambda)) return false;
  return check_Q(tree, t, lambda, alpha);
}

}  // namespace

void for_each_tree(const LeafSet& leaves, const std::function<void(const RootedTree&)>& visit) {
  const auto n = leaves.size();
  if (n < 2 || n > kMaxEnumerationLeaves) throw DomainError("tree enumeration needs 2 to 6 leaves");
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (auto& family : inner_families(all, n)) visit(tree_from_hierarchy(Hierarchy(leaves, std::move(family))));
}

std::vector<RootedTree> enumerate_trees(const LeafSet& leaves) {
  std::vector<RootedTree> out;
  for_each_tree(leaves, [&](const RootedTree& t) { out.push_back(t); });
  return out;
}

std::vector<EdgeLabeling> explaining_labelings(const RootedTree& tree, const EpsilonMap& e) {
  if (!(tree.leaves() == e.leaves())) throw DomainError("tree and map are over different leaf sets");
  return exhaustive_labelings(tree, e, path_table(tree));
}

std::optional<VertexLabeling> forced_vertex_labeling(const RootedTree& tree, const DeltaMap& d) {
  if (!(tree.leaves() == d.leaves())) throw DomainError("tree and map are over different leaf sets");
  VertexLabeling t(tree.vertex_count(), kNoLabel);
  bool ok = true;
  for_each_lca_pair(tree, [&](VertexId v, std::size_t x, std::size_t y) {
    const auto q = d.at(x, y);
    if (d.at(y, x) != q || (t[v] != kNoLabel && t[v] != q)) ok = false;
    t[v] = q;
  });
  if (!ok) return std::nullopt;
  return t;
}

// ------------------------------------------------------------ brute force

BruteForceOracle::BruteForceOracle(LeafSet leaves) : leaves_(std::move(leaves)) {
  if (leaves_.size() > kMaxBruteForceLeaves) throw DomainError("brute force is limited to 5 leaves");
  if (leaves_.size() == 1) {
    trees_.push_back(RootedTree::star(leaves_));
  } else {
    trees_ = enumerate_trees(leaves_);
  }
}

const BruteForceOracle::Candidates& BruteForceOracle::epsilon_candidates(const EpsilonMap& e) {
  auto key = std::pair{e.labels(), e.values()};
  if (auto it = epsilon_cache_.find(key); it != epsilon_cache_.end()) return it->second;

  constexpr std::size_t kExhaustiveBits = 12;
  std::optional<EpsilonResult> reduced;
  Candidates per_tree(trees_.size());
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    const auto& tree = trees_[i];
    if (tree.edge_count() * e.labels().size() <= kExhaustiveBits) {
      per_tree[i] = exhaustive_labelings(tree, e, path_table(tree));
      continue;
    }
    if (!reduced) reduced = try_build_epsilon_tree(e);
    if (reduced->tree && is_refinement(tree, reduced->tree->tree)) {
      auto lambda = lift_edge_labeling(tree, *reduced->tree);
      if (derive_epsilon(tree, lambda, e.labels()) == e) per_tree[i].push_back(std::move(lambda));
    }
  }
  return epsilon_cache_.emplace(std::move(key), std::move(per_tree)).first->second;
}

bool BruteForceOracle::tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha,
                                 ConstraintFlags flags) {
  if (!(d.leaves() == leaves_) || !(e.leaves() == leaves_)) throw DomainError("maps are over a different leaf set");
  const auto& candidates = epsilon_candidates(e);
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    if (candidates[i].empty()) continue;
    auto t = forced_vertex_labeling(trees_[i], d);
    if (!t) continue;
    for (const auto& lambda : candidates[i]) {
      if (satisfies(trees_[i], *t, lambda, alpha, flags)) return true;
    }
  }
  return false;
}

bool brute_force_tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha,
                           ConstraintFlags flags) {
  BruteForceOracle oracle(d.leaves());
  return oracle.tree_like(d, e, alpha, flags);
}

// -------------------------------------------------------------- scenarios

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const auto r = next();
    if (r >= threshold) return r % bound;
  }
}

bool SplitMix64::bernoulli(double p) {
  return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t count, bool pad) {
  const auto width = pad ? std::to_string(count > 0 ? count - 1 : 0).size() : 0;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto digits = std::to_string(i);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    out.push_back(prefix + digits);
  }
  return out;
}

}  // namespace

Scenario random_scenario(const ScenarioParams& params, std::uint64_t seed) {
  const auto n = params.leaf_count;
  if (n < 2) throw DomainError("a scenario needs at least two leaves");
  if (params.m_count == 0) throw DomainError("a scenario needs at least one vertex label");
  if (params.n_count > kMaxEdgeLabels) throw DomainError("at most 64 edge labels are supported");
  if (!(params.label_density >= 0.0 && params.label_density <= 1.0)) {
    throw DomainError("label density must lie in [0, 1]");
  }
  if (!(params.collapse_probability >= 0.0 && params.collapse_probability <= 1.0)) {
    throw DomainError("collapse probability must lie in [0, 1]");
  }
  for (auto q : params.m_empty) {
    if (q >= params.m_count) throw DomainError("M_empty references an undeclared vertex label");
  }

  SplitMix64 rng(seed);
  SplitMix64 shape_rng = rng.split();
  SplitMix64 label_rng = rng.split();

  // Random binary merges, then random contraction of inner edges.
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<std::vector<VertexId>> kids(n);
  std::vector<VertexId> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  while (active.size() > 1) {
    const auto i = shape_rng.uniform(active.size());
    auto j = shape_rng.uniform(active.size() - 1);
    if (j >= i) ++j;
    const VertexId v = parent.size();
    parent.push_back(kNoVertex);
    kids.push_back({active[i], active[j]});
    parent[active[i]] = v;
    parent[active[j]] = v;
    active[std::max(i, j)] = active.back();
    active.pop_back();
    active[std::min(i, j)] = v;
  }
  const VertexId root = active.front();
  std::vector<char> removed(parent.size(), 0);
  for (VertexId v = n; v < parent.size(); ++v) {
    if (v == root || !shape_rng.bernoulli(params.collapse_probability)) continue;
    const auto up = parent[v];
    for (auto c : kids[v]) {
      parent[c] = up;
      kids[up].push_back(c);
    }
    auto& siblings = kids[up];
    siblings.erase(std::find(siblings.begin(), siblings.end(), v));
    kids[v].clear();
    removed[v] = 1;
  }
  std::vector<VertexId> compact(parent.size(), kNoVertex);
  std::vector<VertexId> kept_parent;
  std::vector<std::optional<std::size_t>> leaf_of;
  for (VertexId v = 0; v < parent.size(); ++v) {
    if (removed[v]) continue;
    compact[v] = kept_parent.size();
    kept_parent.push_back(parent[v]);
    leaf_of.push_back(v < n ? std::optional(v) : std::nullopt);
  }
  for (auto& p : kept_parent) {
    if (p != kNoVertex) p = compact[p];
  }

  Scenario s{RootedTree::canonical(LeafSet(numbered("x", n, true)), kept_parent, leaf_of).tree,
             {},
             {},
             EventAlphabet(numbered("q", params.m_count, false), numbered("m", params.n_count, false),
                           params.m_empty),
             seed};
  const auto& tree = s.tree;
  s.t.assign(tree.vertex_count(), kNoLabel);
  s.lambda.assign(tree.vertex_count(), 0);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!tree.is_leaf(v)) s.t[v] = static_cast<LabelId>(label_rng.uniform(params.m_count));
  }
  for (VertexId v = 1; v < tree.vertex_count(); ++v) {
    for (std::size_t m = 0; m < params.n_count; ++m) {
      if (label_rng.bernoulli(params.label_density)) s.lambda[v] |= LabelMask{1} << m;
    }
  }

  // Per-vertex repair so the requested constraints hold.
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto& ch = tree.children(v);
    if (params.constraints.c1 && s.alpha.in_m_empty(s.t[v])) {
      for (auto c : ch) s.lambda[c] = 0;
    }
    if (params.constraints.c2) {
      std::vector<VertexId> labeled;
      for (auto c : ch) {
        if (s.lambda[c] != 0) labeled.push_back(c);
      }
      if (labeled.size() > 1) {
        const auto keep = labeled[label_rng.uniform(labeled.size())];
        for (auto c : labeled) {
          if (c != keep) s.lambda[c] = 0;
        }
      }
    }
    if (params.constraints.c &&
        std::all_of(ch.begin(), ch.end(), [&](VertexId c) { return s.lambda[c] != 0; })) {
      s.lambda[ch[label_rng.uniform(ch.size())]] = 0;
    }
  }
  return s;
}

}  // namespace treelike
