#include "treelike/combine.hpp"

#include <unordered_set>

#include "treelike/errors.hpp"
#include "treelike/oracle.hpp"

namespace treelike {

std::string TreeLikeVerdict::describe(const DeltaMap& d, const EpsilonMap& e) const {
  switch (failure()) {
    case Failure::None:
      return "tree-like";
    case Failure::NotUltrametric:
      return "not-ultrametric " + ultrametric_violation().describe(d.leaves());
    case Failure::NotFitch:
      return "not-fitch " + fitch_violation().describe(e.leaves(), e.labels());
    case Failure::UnionNotHierarchy:
      return "union-not-hierarchy " + overlap().first.to_string(d.leaves()) + " " +
             overlap().second.to_string(d.leaves());
  }
  return {};
}

Hierarchy union_hierarchy(const Hierarchy& h1, const Hierarchy& h2) {
  if (!(h1.leaves() == h2.leaves())) throw DomainError("hierarchies are over different leaf sets");
  std::vector<Cluster> family = h1.clusters();
  family.insert(family.end(), h2.clusters().begin(), h2.clusters().end());
  if (auto overlap = find_overlap(family, h1.leaves().size())) {
    throw IncompatibilityError("clusters " + overlap->first.to_string(h1.leaves()) + " and " +
                               overlap->second.to_string(h1.leaves()) + " are incompatible");
  }
  return Hierarchy(h1.leaves(), std::move(family));
}

CombineAnalysis analyze(const DeltaMap& d, const EpsilonMap& e) {
  if (!(d.leaves() == e.leaves())) throw DomainError("delta and epsilon are over different leaf sets");
  CombineAnalysis out;

  auto dr = try_build_discriminating(d);
  if (!dr.representation) {
    out.verdict = TreeLikeVerdict::not_ultrametric(std::move(*dr.violation));
    return out;
  }
  out.delta_tree = std::move(dr.representation);

  auto er = try_build_epsilon_tree(e);
  if (!er.tree) {
    out.verdict = TreeLikeVerdict::not_fitch(std::move(*er.violation));
    return out;
  }
  out.epsilon_tree = std::move(er.tree);

  const auto& td = out.delta_tree->tree;
  const auto& te = out.epsilon_tree->tree;
  std::vector<Cluster> family;
  family.reserve(td.vertex_count() + te.vertex_count());
  for (VertexId v = 0; v < td.vertex_count(); ++v) family.push_back(td.cluster(v));
  for (VertexId v = 0; v < te.vertex_count(); ++v) family.push_back(te.cluster(v));
  if (auto overlap = find_overlap(family, d.size())) {
    out.verdict = TreeLikeVerdict::union_not_hierarchy(std::move(*overlap));
    return out;
  }

  auto tree = tree_from_hierarchy(Hierarchy(d.leaves(), std::move(family)));
  auto t = lift_vertex_labeling(tree, *out.delta_tree);
  auto lambda = lift_edge_labeling(tree, *out.epsilon_tree);
  out.combined = CombinedTree{std::move(tree), std::move(t), std::move(lambda)};
  return out;
}

TreeLikeVerdict decide_tree_like(const DeltaMap& d, const EpsilonMap& e) { return analyze(d, e).verdict; }

CombinedTree least_resolved_combined(const DeltaMap& d, const EpsilonMap& e) {
  auto analysis = analyze(d, e);
  if (!analysis.combined) {
    throw IncompatibilityError("pair is not tree-like: " + analysis.verdict.describe(d, e));
  }
  return std::move(*analysis.combined);
}

bool minimality_certificate(const CombinedTree& c, const DeltaMap& d, const EpsilonMap& e) {
  if (!(c.tree.leaves() == d.leaves()) || !(d.leaves() == e.leaves())) {
    throw DomainError("tree and maps are over different leaf sets");
  }
  if (c.vertex_labels.size() != c.tree.vertex_count() || c.edge_labels.size() != c.tree.vertex_count()) {
    return false;
  }
  if (derive_delta(c.tree, c.vertex_labels, d.labels()) != d) return false;
  if (derive_epsilon(c.tree, c.edge_labels, e.labels()) != e) return false;

  auto analysis = analyze(d, e);
  if (!analysis.delta_tree || !analysis.epsilon_tree) return false;
  for (auto v : c.tree.inner_edges()) {
    auto contracted = contract_edge(c.tree, v);
    if (is_refinement(contracted, analysis.delta_tree->tree) &&
        is_refinement(contracted, analysis.epsilon_tree->tree)) {
      return false;
    }
  }
  return true;
}

}  // namespace treelike
