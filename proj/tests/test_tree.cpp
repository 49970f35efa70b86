#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"
#include "treelike/errors.hpp"

using namespace treelike;
using fixture::cluster;
using fixture::cluster_set;

namespace {

// Reference laminarity test: every pair, by definition.
bool pairwise_hierarchy(const std::vector<Cluster>& family, std::size_t n) {
  std::vector<Cluster> all = family;
  all.push_back(Cluster::full(n));
  for (std::size_t x = 0; x < n; ++x) all.push_back(Cluster::singleton(n, x));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      bool inter = false, a_in_b = true, b_in_a = true;
      for (std::size_t x = 0; x < n; ++x) {
        const bool a = all[i].contains(x), b = all[j].contains(x);
        inter |= a && b;
        if (a && !b) a_in_b = false;
        if (b && !a) b_in_a = false;
      }
      if (inter && !a_in_b && !b_in_a) return false;
    }
  }
  return true;
}

// Random laminar family: recursively split a block into random parts, each
// part a cluster.
void random_laminar(SplitMix64& rng, std::vector<std::size_t> block, std::size_t n, std::vector<Cluster>& out) {
  if (block.size() <= 1) return;
  const auto parts = 2 + rng.uniform(std::min<std::size_t>(block.size() - 1, 3));
  std::vector<std::vector<std::size_t>> split(parts);
  for (std::size_t i = block.size(); i > 1; --i) std::swap(block[i - 1], block[rng.uniform(i)]);
  for (std::size_t i = 0; i < block.size(); ++i) split[i < parts ? i : rng.uniform(parts)].push_back(block[i]);
  for (auto& s : split) {
    out.push_back(Cluster::of(n, s));
    random_laminar(rng, s, n, out);
  }
}

RootedTree random_tree(SplitMix64& rng, const LeafSet& leaves) {
  std::vector<std::size_t> all(leaves.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<Cluster> fam;
  random_laminar(rng, all, leaves.size(), fam);
  return tree_from_hierarchy(Hierarchy(leaves, fam));
}

LeafSet leaves_n(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(100 + i));
  return LeafSet(names);
}

}  // namespace

TEST_CASE("leaf sets sort names and reject duplicates") {
  LeafSet l({"c", "a", "b"});
  CHECK(l.names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(l.index_of("c") == 2);
  CHECK_FALSE(l.find("z"));
  CHECK_THROWS_AS(LeafSet({"a", "a"}), DomainError);
  CHECK_THROWS_AS(LeafSet(std::vector<std::string>{}), DomainError);
}

TEST_CASE("check_hierarchy examples") {
  const auto L = fixture::abc(4);
  SUBCASE("disjoint pair") {
    std::vector<Cluster> f{cluster(L, {"a", "b"}), cluster(L, {"c", "d"})};
    CHECK(check_hierarchy(f, L));
  }
  SUBCASE("overlap") {
    std::vector<Cluster> f{cluster(L, {"a", "b"}), cluster(L, {"b", "c"})};
    CHECK_FALSE(check_hierarchy(f, L));
    CHECK_THROWS_AS(Hierarchy(L, f), HierarchyError);
  }
  SUBCASE("nested pair") {
    std::vector<Cluster> f{cluster(L, {"a", "b"}), cluster(L, {"a", "b", "c"})};
    CHECK(check_hierarchy(f, L));
  }
  SUBCASE("foreign member") {
    Cluster big(6);
    big.insert(5);
    std::vector<Cluster> f{big};
    CHECK_THROWS_AS(check_hierarchy(f, L), DomainError);
    CHECK_THROWS_AS(Cluster(4).insert(4), DomainError);
  }
}

TEST_CASE("sweep agrees with the pairwise definition on random families") {
  SplitMix64 rng(7);
  for (int round = 0; round < 3000; ++round) {
    const std::size_t n = 2 + rng.uniform(9);
    const auto L = leaves_n(n);
    std::vector<Cluster> fam;
    const auto k = rng.uniform(6);
    for (std::size_t i = 0; i < k; ++i) {
      Cluster c(n);
      for (std::size_t x = 0; x < n; ++x) {
        if (rng.bernoulli(0.5)) c.insert(x);
      }
      if (c.empty()) c.insert(rng.uniform(n));
      fam.push_back(c);
    }
    // Mix in laminar ones so both outcomes are common.
    if (round % 2 == 0) {
      fam.clear();
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      random_laminar(rng, all, n, fam);
      if (round % 4 == 0 && n >= 3) fam.push_back(Cluster::of(n, std::vector<std::size_t>{0, n - 1}));
    }
    const bool expected = pairwise_hierarchy(fam, n);
    CHECK(check_hierarchy(fam, L) == expected);
    const auto overlap = find_overlap(fam, n);
    CHECK(overlap.has_value() == !expected);
    if (overlap) CHECK_FALSE(overlap->first.compatible_with(overlap->second));
  }
}

TEST_CASE("tree_from_hierarchy examples") {
  const auto L = fixture::abc(4);
  SUBCASE("two cherries") {
    Hierarchy h(L, {cluster(L, {"a", "b"}), cluster(L, {"c", "d"})});
    const auto t = tree_from_hierarchy(h);
    CHECK(t == fixture::tree("((a,b),(c,d))"));
    CHECK(t.vertex_count() == 7);
    CHECK(t.children(t.root()).size() == 2);
  }
  SUBCASE("star") {
    const auto L3 = fixture::abc(3);
    const auto t = tree_from_hierarchy(Hierarchy(L3, {}));
    CHECK(t.children(t.root()).size() == 3);
    CHECK(t == RootedTree::star(L3));
  }
  SUBCASE("children follow the smallest leaf") {
    const auto t = fixture::tree("((d,c),(b,a))");
    const auto& kids = t.children(t.root());
    REQUIRE(kids.size() == 2);
    CHECK(t.cluster(kids[0]).min_member() == 0);
    CHECK(t.cluster(kids[1]).min_member() == 2);
  }
}

TEST_CASE("clusters and tree_from_hierarchy are inverse on random input") {
  SplitMix64 rng(11);
  for (int round = 0; round < 500; ++round) {
    const auto L = leaves_n(1 + rng.uniform(20));
    std::vector<std::size_t> all(L.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<Cluster> fam;
    random_laminar(rng, all, L.size(), fam);
    const Hierarchy h(L, fam);
    const auto t = tree_from_hierarchy(h);
    CHECK(clusters(t) == h);
    // Round trip through the tree again gives the identical tree.
    CHECK(tree_from_hierarchy(clusters(t)) == t);
    // Phylogenetic: every inner vertex has at least two children.
    for (auto v : t.inner_vertices()) CHECK(t.children(v).size() >= 2);
  }
}

TEST_CASE("clusters examples") {
  const auto t = fixture::tree("((a,b),(c,d))");
  CHECK(clusters(t).size() == 7);
  const auto cherry = fixture::tree("(a,b)");
  const auto h = clusters(cherry);
  CHECK(h.size() == 3);
  CHECK(h.contains(Cluster::full(2)));
}

TEST_CASE("single leaf and invalid trees") {
  const LeafSet one({"a"});
  const auto t = RootedTree::star(one);
  CHECK(t.vertex_count() == 1);
  CHECK(t.is_leaf(t.root()));
  CHECK(clusters(t).size() == 1);
  CHECK(lca_pair_partition(t).blocks.empty());

  const LeafSet two({"a", "b"});
  // inner vertex with a single child
  CHECK_THROWS_AS(RootedTree::canonical(two, {kNoVertex, 0, 1, 1}, {std::nullopt, std::nullopt, 0, 1}),
                  DomainError);
  // two roots
  CHECK_THROWS_AS(RootedTree::canonical(two, {kNoVertex, kNoVertex}, {0, 1}), DomainError);
  // leaf not covered
  CHECK_THROWS_AS(RootedTree::canonical(two, {kNoVertex, 0, 0}, {std::nullopt, 0, 0}), DomainError);
}

TEST_CASE("lca examples") {
  const auto t = fixture::tree("((a,b),(c,d))");
  const auto& L = t.leaves();
  const auto a = t.leaf_vertex(L.index_of("a")), b = t.leaf_vertex(L.index_of("b")),
             c = t.leaf_vertex(L.index_of("c"));
  const auto ab = lca(t, a, b);
  CHECK(t.cluster(ab) == cluster(L, {"a", "b"}));
  std::vector<VertexId> single{a};
  CHECK(lca(t, single) == a);
  CHECK(lca(t, a, c) == t.root());
  std::vector<VertexId> none;
  CHECK_THROWS_AS(lca(t, none), DomainError);
}

TEST_CASE("is_refinement examples") {
  const auto fine = fixture::tree("((a,b),(c,d))");
  const auto star = fixture::tree("(a,b,c,d)");
  CHECK(is_refinement(fine, star));
  CHECK_FALSE(is_refinement(star, fine));
  CHECK(is_refinement(fine, fine));
  CHECK_THROWS_AS(is_refinement(fine, fixture::tree("(a,b,c)")), DomainError);
}

TEST_CASE("contract_edge examples") {
  const auto t = fixture::tree("((a,b),c)");
  const auto inner = t.inner_edges();
  REQUIRE(inner.size() == 1);
  CHECK(contract_edge(t, inner[0]) == fixture::tree("(a,b,c)"));
  CHECK_THROWS_AS(contract_edge(t, t.leaf_vertex(0)), DomainError);
  CHECK_THROWS_AS(contract_edge(t, t.root()), DomainError);

  SplitMix64 rng(5);
  for (int round = 0; round < 200; ++round) {
    auto tr = random_tree(rng, leaves_n(2 + rng.uniform(15)));
    const auto before = clusters(tr).size();
    while (!tr.inner_edges().empty()) {
      const auto edges = tr.inner_edges();
      const auto e = edges[rng.uniform(edges.size())];
      const auto removed = tr.cluster(e);
      const auto next = contract_edge(tr, e);
      CHECK(clusters(next).size() == clusters(tr).size() - 1);
      CHECK_FALSE(clusters(next).contains(removed));
      CHECK(is_refinement(tr, next));
      for (auto v : next.inner_vertices()) CHECK(next.children(v).size() >= 2);
      tr = next;
    }
    CHECK(tr == RootedTree::star(tr.leaves()));
    CHECK(before >= clusters(tr).size());
  }
}

TEST_CASE("lca_pair_partition examples") {
  SUBCASE("cherry") {
    const auto t = fixture::tree("(a,b)");
    const auto p = lca_pair_partition(t);
    REQUIRE(p.blocks.size() == 1);
    CHECK(p.blocks.at(t.root()).size() == 2);
  }
  SUBCASE("((a,b),c)") {
    const auto t = fixture::tree("((a,b),c)");
    const auto p = lca_pair_partition(t);
    REQUIRE(p.blocks.size() == 2);
    CHECK(p.blocks.at(t.root()).size() == 4);
    CHECK(p.blocks.at(t.inner_edges()[0]).size() == 2);
  }
}

TEST_CASE("lca blocks partition the ordered pairs") {
  SplitMix64 rng(3);
  for (int round = 0; round < 200; ++round) {
    const auto t = random_tree(rng, leaves_n(2 + rng.uniform(12)));
    const auto n = t.leaf_count();
    const auto p = lca_pair_partition(t);
    std::vector<int> seen(n * n, 0);
    for (auto v : t.inner_vertices()) {
      REQUIRE(p.blocks.count(v) == 1);
      CHECK_FALSE(p.blocks.at(v).empty());
    }
    for (const auto& [v, pairs] : p.blocks) {
      for (auto [x, y] : pairs) {
        ++seen[x * n + y];
        CHECK(lca(t, t.leaf_vertex(x), t.leaf_vertex(y)) == v);
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) CHECK(seen[x * n + y] == (x == y ? 0 : 1));
    }
  }
}

TEST_CASE("a refinement's lca blocks sit inside single coarse blocks") {
  SplitMix64 rng(13);
  for (int round = 0; round < 200; ++round) {
    const auto fine = random_tree(rng, leaves_n(2 + rng.uniform(12)));
    auto coarse = fine;
    for (auto e : fine.inner_edges()) {
      if (rng.bernoulli(0.5)) {
        if (auto v = coarse.find_cluster(fine.cluster(e))) coarse = contract_edge(coarse, *v);
      }
    }
    REQUIRE(is_refinement(fine, coarse));
    const auto fine_blocks = lca_pair_partition(fine);
    for (const auto& [v, pairs] : fine_blocks.blocks) {
      // every pair of the fine block shares one coarse lca
      std::set<VertexId> coarse_lcas;
      for (auto [x, y] : pairs) coarse_lcas.insert(lca(coarse, coarse.leaf_vertex(x), coarse.leaf_vertex(y)));
      CHECK(coarse_lcas.size() == 1);
    }
  }
}

TEST_CASE("lca representatives name their vertex") {
  SplitMix64 rng(17);
  for (int round = 0; round < 100; ++round) {
    const auto t = random_tree(rng, leaves_n(2 + rng.uniform(20)));
    const auto reps = lca_representatives(t);
    for (auto v : t.inner_vertices()) {
      const auto [x, y] = reps[v];
      CHECK(lca(t, t.leaf_vertex(x), t.leaf_vertex(y)) == v);
    }
  }
}

TEST_CASE("operations leave their inputs untouched") {
  const auto t = fixture::tree("((a,b),(c,d),e)");
  const auto copy = t;
  (void)contract_edge(t, t.inner_edges()[0]);
  (void)lca_pair_partition(t);
  (void)clusters(t);
  CHECK(t == copy);
}
