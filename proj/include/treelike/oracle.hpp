#pragma once

// Ground truth for tests: forward evaluation of labeled trees into maps,
// enumeration of all small trees and labelings, a brute-force tree-likeness
// search, and seeded random scenarios.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treelike/constraints.hpp"
#include "treelike/delta.hpp"
#include "treelike/epsilon.hpp"
#include "treelike/tree.hpp"

namespace treelike {

// δ(x,y) = t(lca(x,y)).
DeltaMap derive_delta(const RootedTree& tree, const VertexLabeling& t, std::vector<std::string> labels);

// ε(x,y) = union of λ over the edges on the path from lca(x,y) down to y.
EpsilonMap derive_epsilon(const RootedTree& tree, const EdgeLabeling& lambda, std::vector<std::string> labels);

inline constexpr std::size_t kMaxEnumerationLeaves = 6;

// Every rooted phylogenetic tree on the leaves exactly once; 2 ≤ |L| ≤ 6.
void for_each_tree(const LeafSet& leaves, const std::function<void(const RootedTree&)>& visit);
std::vector<RootedTree> enumerate_trees(const LeafSet& leaves);

// All λ on `tree` with (tree, λ) explaining e, by exhaustive enumeration of
// the 2^(|E|·|N|) labelings. DomainError above 2^20 labelings.
std::vector<EdgeLabeling> explaining_labelings(const RootedTree& tree, const EpsilonMap& e);

// The unique t with (tree, t) explaining d read off the lca blocks, or
// nullopt if some block carries two labels. Independent of T_δ.
std::optional<VertexLabeling> forced_vertex_labeling(const RootedTree& tree, const DeltaMap& d);

// Searches every tree on the leaf set for labelings explaining (d, e) that
// satisfy the requested constraints (Q is always enforced). The vertex
// labeling is the forced one; edge labelings are enumerated exhaustively when
// |E|·|N| ≤ 12 and otherwise reduced to the minimal lift from T_ε. Keeps
// per-map caches, so one instance amortizes sweeps over many pairs.
class BruteForceOracle {
 public:
  explicit BruteForceOracle(LeafSet leaves);

  bool tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha, ConstraintFlags flags);
  const std::vector<RootedTree>& trees() const { return trees_; }

 private:
  using Candidates = std::vector<std::vector<EdgeLabeling>>;  // per tree
  const Candidates& epsilon_candidates(const EpsilonMap& e);

  LeafSet leaves_;
  std::vector<RootedTree> trees_;
  std::map<std::pair<std::vector<std::string>, std::vector<LabelMask>>, Candidates> epsilon_cache_;
};

inline constexpr std::size_t kMaxBruteForceLeaves = 5;

// One-shot BruteForceOracle query; |L| ≤ 5.
bool brute_force_tree_like(const DeltaMap& d, const EpsilonMap& e, const EventAlphabet& alpha,
                           ConstraintFlags flags = {});

// SplitMix64: 64-bit state, each output also usable as a fresh seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // True with probability p, from the top 53 bits.
  bool bernoulli(double p);
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

struct ScenarioParams {
  std::size_t leaf_count = 4;
  std::size_t m_count = 2;
  std::size_t n_count = 1;
  double label_density = 0.3;
  ConstraintFlags constraints;
  std::vector<LabelId> m_empty;
  // Chance that an inner edge of the random binary tree is contracted.
  double collapse_probability = 0.3;
};

struct Scenario {
  RootedTree tree;
  VertexLabeling t;
  EdgeLabeling lambda;
  EventAlphabet alpha;
  std::uint64_t seed = 0;

  DeltaMap delta() const { return derive_delta(tree, t, alpha.vertex_labels()); }
  EpsilonMap epsilon() const { return derive_epsilon(tree, lambda, alpha.edge_labels()); }
};

// Deterministic in (params, seed). Leaves are named x0, x1, ... zero-padded
// to a common width, vertex labels q0.., edge labels m0...
Scenario random_scenario(const ScenarioParams& params, std::uint64_t seed);

}  // namespace treelike
