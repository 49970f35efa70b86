#include "treelike/delta.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "treelike/errors.hpp"

namespace treelike {

DeltaMap::DeltaMap(LeafSet leaves, std::vector<std::string> labels, std::vector<LabelId> values)
    : leaves_(std::move(leaves)), labels_(std::move(labels)), values_(std::move(values)) {
  const auto n = leaves_.size();
  if (values_.size() != n * n) throw DomainError("delta values must cover |L|x|L| entries");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw DomainError("duplicate vertex label");
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) {
        values_[x * n + y] = kNoLabel;
      } else if (values_[x * n + y] >= labels_.size()) {
        throw DomainError("delta(" + leaves_.name(x) + "," + leaves_.name(y) + ") is not a declared label");
      }
    }
  }
}

DeltaMap DeltaMap::constant(LeafSet leaves, std::vector<std::string> labels, LabelId label) {
  const auto n = leaves.size();
  return DeltaMap(std::move(leaves), std::move(labels), std::vector<LabelId>(n * n, label));
}

bool operator==(const DeltaMap& a, const DeltaMap& b) {
  return a.leaves_ == b.leaves_ && a.labels_ == b.labels_ && a.values_ == b.values_;
}

std::string UltrametricViolation::describe(const LeafSet& names) const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Asymmetric: os << "condition(i) "; break;
    case Kind::Cograph: os << "condition(ii) "; break;
    case Kind::RainbowTriangle: os << "condition(iii) "; break;
    case Kind::NoSplit: os << "no-split "; break;
  }
  os << '(';
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (i != 0) os << ',';
    os << names.name(leaves[i]);
  }
  os << ')';
  return os.str();
}

namespace {

std::optional<UltrametricViolation> find_asymmetry(const DeltaMap& d,
                                                   const std::vector<std::size_t>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (d.at(s[i], s[j]) != d.at(s[j], s[i])) {
        return UltrametricViolation{UltrametricViolation::Kind::Asymmetric, {s[i], s[j]}};
      }
    }
  }
  return std::nullopt;
}

std::optional<UltrametricViolation> find_rainbow(const DeltaMap& d, const std::vector<std::size_t>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const auto uv = d.at(s[i], s[j]);
      for (std::size_t k = j + 1; k < s.size(); ++k) {
        const auto ux = d.at(s[i], s[k]);
        const auto vx = d.at(s[j], s[k]);
        if (uv != ux && uv != vx && ux != vx) {
          return UltrametricViolation{UltrametricViolation::Kind::RainbowTriangle, {s[i], s[j], s[k]}};
        }
      }
    }
  }
  return std::nullopt;
}

// δ(x,y)=δ(y,u)=δ(u,v) ≠ δ(y,v)=δ(x,v)=δ(x,u) for pairwise distinct u,v,x,y.
std::optional<UltrametricViolation> find_cograph(const DeltaMap& d, const std::vector<std::size_t>& s) {
  for (auto u : s) {
    for (auto v : s) {
      if (v == u) continue;
      const auto a = d.at(u, v);
      for (auto x : s) {
        if (x == u || x == v) continue;
        const auto b = d.at(x, v);
        if (b == a || d.at(x, u) != b) continue;
        for (auto y : s) {
          if (y == u || y == v || y == x) continue;
          if (d.at(x, y) == a && d.at(y, u) == a && d.at(y, v) == b) {
            return UltrametricViolation{UltrametricViolation::Kind::Cograph, {u, v, x, y}};
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> all_positions(std::size_t n) {
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

// Splits `s` into the connected components of {x,y : δ(x,y) ≠ q}.
std::vector<std::vector<std::size_t>> components_avoiding(const DeltaMap& d,
                                                          const std::vector<std::size_t>& s,
                                                          LabelId q) {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> unvisited = s;
  std::vector<std::size_t> queue;
  while (!unvisited.empty()) {
    queue.assign(1, unvisited.front());
    unvisited.erase(unvisited.begin());
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto x = queue[head];
      auto keep = unvisited.begin();
      for (auto it = unvisited.begin(); it != unvisited.end(); ++it) {
        if (d.at(x, *it) != q) {
          queue.push_back(*it);
        } else {
          *keep++ = *it;
        }
      }
      unvisited.erase(keep, unvisited.end());
    }
    std::sort(queue.begin(), queue.end());
    comps.push_back(queue);
  }
  return comps;
}

// Witness search inside a subset where construction got stuck. The full
// quartic search is bounded to keep rejection of large inputs responsive.
UltrametricViolation witness_in(const DeltaMap& d, const std::vector<std::size_t>& s) {
  constexpr std::size_t kTriangleLimit = 400;
  constexpr std::size_t kQuadLimit = 64;
  if (s.size() <= kTriangleLimit) {
    if (auto v = find_rainbow(d, s)) return *v;
  }
  if (s.size() <= kQuadLimit) {
    if (auto v = find_cograph(d, s)) return *v;
  }
  return UltrametricViolation{UltrametricViolation::Kind::NoSplit, s};
}

}  // namespace

std::optional<UltrametricViolation> find_ultrametric_violation(const DeltaMap& d) {
  const auto s = all_positions(d.size());
  if (auto v = find_asymmetry(d, s)) return v;
  if (auto v = find_rainbow(d, s)) return v;
  return find_cograph(d, s);
}

bool check_symbolic_ultrametric(const DeltaMap& d) { return !find_ultrametric_violation(d); }

DiscriminatingResult try_build_discriminating(const DeltaMap& d) {
  const auto n = d.size();
  const auto all = all_positions(n);
  if (auto v = find_asymmetry(d, all)) return {std::nullopt, v};

  if (n == 1) {
    auto tree = RootedTree::star(d.leaves());
    return {DiscriminatingTree{std::move(tree), VertexLabeling(1, kNoLabel)}, std::nullopt};
  }

  // Work list of (leaf subset, parent vertex); vertices are created in an
  // arena and canonicalized at the end.
  std::vector<VertexId> parent;
  std::vector<std::optional<std::size_t>> leaf_of;
  VertexLabeling label;
  struct Task {
    std::vector<std::size_t> subset;
    VertexId parent;
  };
  std::vector<Task> work;
  work.push_back({all, kNoVertex});
  while (!work.empty()) {
    Task task = std::move(work.back());
    work.pop_back();
    const VertexId v = parent.size();
    parent.push_back(task.parent);
    if (task.subset.size() == 1) {
      leaf_of.emplace_back(task.subset.front());
      label.push_back(kNoLabel);
      continue;
    }
    leaf_of.emplace_back(std::nullopt);

    // The root label of the subset occurs in every row, so the first row
    // lists all candidates.
    std::vector<LabelId> candidates;
    const auto x0 = task.subset.front();
    for (auto y : task.subset) {
      if (y != x0) candidates.push_back(d.at(x0, y));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::optional<LabelId> root_label;
    std::vector<std::vector<std::size_t>> parts;
    for (auto q : candidates) {
      auto comps = components_avoiding(d, task.subset, q);
      if (comps.size() < 2) continue;
      if (root_label) {
        throw std::logic_error("two labels split the same leaf subset of a symmetric map");
      }
      root_label = q;
      parts = std::move(comps);
    }
    if (!root_label) return {std::nullopt, witness_in(d, task.subset)};
    label.push_back(*root_label);
    for (auto& part : parts) work.push_back({std::move(part), v});
  }

  auto canon = RootedTree::canonical(d.leaves(), parent, leaf_of);
  VertexLabeling labels(canon.tree.vertex_count(), kNoLabel);
  for (VertexId old = 0; old < label.size(); ++old) labels[canon.new_id[old]] = label[old];
  return {DiscriminatingTree{std::move(canon.tree), std::move(labels)}, std::nullopt};
}

DiscriminatingTree build_discriminating(const DeltaMap& d) {
  auto result = try_build_discriminating(d);
  if (!result.representation) {
    throw RecognitionError("not a symbolic ultrametric: " + result.violation->describe(d.leaves()));
  }
  return std::move(*result.representation);
}

VertexLabeling lift_vertex_labeling(const RootedTree& tree, const DiscriminatingTree& base) {
  if (!is_refinement(tree, base.tree)) {
    throw RefinementError("tree does not refine the discriminating representation");
  }
  VertexLabeling t(tree.vertex_count(), kNoLabel);
  const auto reps = lca_representatives(tree);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto [x, y] = reps[v];
    const auto w = lca(base.tree, base.tree.leaf_vertex(x), base.tree.leaf_vertex(y));
    t[v] = base.labels[w];
  }
  return t;
}

VertexLabeling lift_vertex_labeling(const RootedTree& tree, const DeltaMap& d) {
  if (!(tree.leaves() == d.leaves())) throw DomainError("tree and map are over different leaf sets");
  return lift_vertex_labeling(tree, build_discriminating(d));
}

bool is_discriminating(const RootedTree& tree, const VertexLabeling& labels) {
  for (auto v : tree.inner_edges()) {
    if (labels[v] == labels[tree.parent(v)]) return false;
  }
  return true;
}

}  // namespace treelike
