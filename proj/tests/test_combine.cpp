#include <doctest.h>

#include "support.hpp"
#include "treelike/errors.hpp"

using namespace treelike;
using fixture::cluster;
using fixture::delta_from;

namespace {

bool explains(const CombinedTree& c, const DeltaMap& d, const EpsilonMap& e) {
  return derive_delta(c.tree, c.vertex_labels, d.labels()) == d &&
         derive_epsilon(c.tree, c.edge_labels, e.labels()) == e;
}

// Clusters of both least-resolved trees, merged.
std::set<std::vector<std::size_t>> union_clusters(const RootedTree& a, const RootedTree& b) {
  auto out = fixture::cluster_set(a);
  for (const auto& c : fixture::cluster_set(b)) out.insert(c);
  return out;
}

}  // namespace

TEST_CASE("union_hierarchy examples") {
  const auto L = fixture::abc(4);
  const Hierarchy h1(L, {cluster(L, {"a", "b"})});
  const Hierarchy h2(L, {cluster(L, {"c", "d"})});
  const auto u = union_hierarchy(h1, h2);
  CHECK(u == Hierarchy(L, {cluster(L, {"a", "b"}), cluster(L, {"c", "d"})}));
  CHECK(union_hierarchy(h1, h1) == h1);
  const Hierarchy h3(L, {cluster(L, {"b", "c"})});
  CHECK_THROWS_AS(union_hierarchy(h1, h3), IncompatibilityError);
  try {
    (void)union_hierarchy(h1, h3);
  } catch (const IncompatibilityError& err) {
    const std::string what = err.what();
    CHECK(what.find("{a,b}") != std::string::npos);
    CHECK(what.find("{b,c}") != std::string::npos);
  }
}

TEST_CASE("decide_tree_like examples") {
  const auto L = fixture::abc(4);
  SUBCASE("constant δ and empty ε") {
    const auto d = DeltaMap::constant(L, {"q"}, 0);
    const auto e = EpsilonMap::empty(L, {"m"});
    CHECK(decide_tree_like(d, e).is_tree_like());
    const auto c = least_resolved_combined(d, e);
    CHECK(c.tree == RootedTree::star(L));
    CHECK(c.vertex_labels[0] == 0);
    CHECK(label_weight(c.edge_labels) == 0);
    CHECK(minimality_certificate(c, d, e));
  }
  SUBCASE("crossing clusters") {
    const auto d = delta_from(L, {"q0", "q1"}, "q0", {{"a", "b", "q1"}, {"c", "d", "q1"}});
    const auto s = fixture::newick("(a,(b,c)#{m},d)", {}, {"m"});
    const auto e = derive_epsilon(s.tree, s.lambda, {"m"});
    const auto v = decide_tree_like(d, e);
    CHECK(v.failure() == TreeLikeVerdict::Failure::UnionNotHierarchy);
    CHECK(v.describe(d, e).rfind("union-not-hierarchy {", 0) == 0);
    CHECK_FALSE(brute_force_tree_like(d, e, EventAlphabet(d.labels(), e.labels())));
    CHECK_THROWS_AS(least_resolved_combined(d, e), IncompatibilityError);
  }
  SUBCASE("rainbow δ") {
    const auto L3 = fixture::abc(3);
    const auto d = delta_from(L3, {"1", "2", "3"}, "1", {{"a", "c", "2"}, {"b", "c", "3"}});
    const auto v = decide_tree_like(d, EpsilonMap::empty(L3, {"m"}));
    CHECK(v.failure() == TreeLikeVerdict::Failure::NotUltrametric);
    CHECK(v.describe(d, EpsilonMap::empty(L3, {"m"})) == "not-ultrametric condition(iii) (a,b,c)");
  }
  SUBCASE("non-Fitch ε") {
    const auto L3 = fixture::abc(3);
    std::vector<LabelMask> v(9, 0);
    v[2 * 3 + 0] = v[0 * 3 + 2] = 1;
    const EpsilonMap e(L3, {"m"}, v);
    const auto verdict = decide_tree_like(DeltaMap::constant(L3, {"q"}, 0), e);
    CHECK(verdict.failure() == TreeLikeVerdict::Failure::NotFitch);
  }
  SUBCASE("mismatched leaves") {
    CHECK_THROWS_AS(decide_tree_like(DeltaMap::constant(L, {"q"}, 0), EpsilonMap::empty(fixture::abc(3), {})),
                    DomainError);
  }
}

TEST_CASE("least_resolved_combined with only a δ structure") {
  const auto L = fixture::abc(4);
  const auto d = delta_from(L, {"q0", "q1"}, "q0", {{"a", "b", "q1"}, {"c", "d", "q1"}});
  const auto e = EpsilonMap::empty(L, {"m"});
  const auto c = least_resolved_combined(d, e);
  CHECK(c.tree == fixture::tree("((a,b),(c,d))"));
  CHECK(label_weight(c.edge_labels) == 0);
  CHECK(explains(c, d, e));
  CHECK(minimality_certificate(c, d, e));
}

TEST_CASE("combined trees on random scenarios") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    ScenarioParams p;
    p.leaf_count = 2 + seed % 24;
    p.m_count = 1 + seed % 4;
    p.n_count = 1 + seed % 3;
    const auto s = random_scenario(p, seed);
    const auto d = s.delta();
    const auto e = s.epsilon();
    const auto a = analyze(d, e);
    REQUIRE(a.verdict.is_tree_like());
    const auto& c = *a.combined;
    CHECK(explains(c, d, e));
    CHECK(fixture::cluster_set(c.tree) == union_clusters(a.delta_tree->tree, a.epsilon_tree->tree));
    CHECK(is_refinement(c.tree, a.delta_tree->tree));
    CHECK(is_refinement(c.tree, a.epsilon_tree->tree));
    CHECK(is_refinement(s.tree, c.tree));
    CHECK(label_weight(c.edge_labels) == label_weight(a.epsilon_tree->labels));
    CHECK(minimality_certificate(c, d, e));

    // Lifting onto the generating tree (a refinement of T*) explains both maps.
    const auto t = lift_vertex_labeling(s.tree, *a.delta_tree);
    const auto lam = lift_edge_labeling(s.tree, *a.epsilon_tree);
    CHECK(derive_delta(s.tree, t, d.labels()) == d);
    CHECK(derive_epsilon(s.tree, lam, e.labels()) == e);
    // The generating tree is not least resolved unless it equals T*.
    const CombinedTree generating{s.tree, t, lam};
    CHECK(minimality_certificate(generating, d, e) == (s.tree == c.tree));
  }
}

TEST_CASE("a strict refinement of T* fails the certificate") {
  const auto L = fixture::abc(4);
  const auto d = DeltaMap::constant(L, {"q"}, 0);
  const auto e = EpsilonMap::empty(L, {"m"});
  const auto fine = fixture::tree("((a,b),c,d)");
  const CombinedTree c{fine, lift_vertex_labeling(fine, d), EdgeLabeling(fine.vertex_count(), 0)};
  CHECK(explains(c, d, e));
  CHECK_FALSE(minimality_certificate(c, d, e));
  // A tree that does not explain the maps has no certificate either.
  CombinedTree wrong = least_resolved_combined(d, e);
  wrong.edge_labels[1] = 1;
  CHECK_FALSE(minimality_certificate(wrong, d, e));
}

TEST_CASE("every explaining tree refines T* and T* has one minimal labeling") {
  const auto L = fixture::abc(4);
  const auto trees = enumerate_trees(L);
  SplitMix64 rng(8);
  for (int sample = 0; sample < 60; ++sample) {
    const auto& source = trees[rng.uniform(trees.size())];
    const auto vl = fixture::all_vertex_labelings(source, 2);
    const auto el = fixture::all_edge_labelings(source, 1);
    const auto d = derive_delta(source, vl[rng.uniform(vl.size())], {"q0", "q1"});
    const auto e = derive_epsilon(source, el[rng.uniform(el.size())], {"m"});
    const auto c = least_resolved_combined(d, e);
    for (const auto& t : trees) {
      const auto forced = forced_vertex_labeling(t, d);
      const auto lams = explaining_labelings(t, e);
      if (forced && !lams.empty()) CHECK(is_refinement(t, c.tree));
    }
    std::size_t best = SIZE_MAX, at_best = 0;
    for (const auto& lam : explaining_labelings(c.tree, e)) {
      const auto w = label_weight(lam);
      if (w < best) {
        best = w;
        at_best = 0;
      }
      if (w == best) {
        ++at_best;
        if (at_best == 1) CHECK(lam == c.edge_labels);
      }
    }
    CHECK(best == label_weight(c.edge_labels));
    CHECK(at_best == 1);
  }
}

TEST_CASE("verdict descriptions") {
  const auto L = fixture::abc(2);
  const auto d = DeltaMap::constant(L, {"q"}, 0);
  const auto e = EpsilonMap::empty(L, {"m"});
  CHECK(decide_tree_like(d, e).describe(d, e) == "tree-like");
}
