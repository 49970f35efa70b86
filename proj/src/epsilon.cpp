#include "treelike/epsilon.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <unordered_map>

#include "treelike/errors.hpp"

namespace treelike {

EpsilonMap::EpsilonMap(LeafSet leaves, std::vector<std::string> labels, std::vector<LabelMask> values)
    : leaves_(std::move(leaves)), labels_(std::move(labels)), values_(std::move(values)) {
  const auto n = leaves_.size();
  if (values_.size() != n * n) throw DomainError("epsilon values must cover |L|x|L| entries");
  if (labels_.size() > kMaxEdgeLabels) throw DomainError("at most 64 edge labels are supported");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw DomainError("duplicate edge label");
  }
  const LabelMask allowed = labels_.size() == 64 ? ~LabelMask{0} : (LabelMask{1} << labels_.size()) - 1;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) {
        values_[x * n + y] = 0;
      } else if ((values_[x * n + y] & ~allowed) != 0) {
        throw DomainError("epsilon(" + leaves_.name(x) + "," + leaves_.name(y) + ") uses an undeclared label");
      }
    }
  }
}

EpsilonMap EpsilonMap::empty(LeafSet leaves, std::vector<std::string> labels) {
  const auto n = leaves.size();
  return EpsilonMap(std::move(leaves), std::move(labels), std::vector<LabelMask>(n * n, 0));
}

bool operator==(const EpsilonMap& a, const EpsilonMap& b) {
  return a.leaves_ == b.leaves_ && a.labels_ == b.labels_ && a.values_ == b.values_;
}

std::string format_labels(LabelMask mask, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if ((mask >> m) & 1U) {
      if (!first) out += ',';
      first = false;
      out += labels[m];
    }
  }
  return out + "}";
}

std::size_t label_weight(const EdgeLabeling& labeling) {
  std::size_t w = 0;
  for (auto mask : labeling) w += static_cast<std::size_t>(std::popcount(mask));
  return w;
}

NeighborhoodSystem neighborhoods(const EpsilonMap& e) {
  const auto n = e.size();
  const auto k = e.labels().size();
  const auto W = (n + 63) / 64;
  // words[(m*n + y)*W + b] holds U_¬m[y] ∩ [64b, 64b+64). Rows of ε are read
  // 64 at a time so every pass over y is sequential.
  std::vector<std::uint64_t> words(k * n * W, 0);
  std::vector<std::uint64_t> acc(k);
  for (std::size_t b = 0; b < W; ++b) {
    const auto x0 = b * 64;
    const auto x1 = std::min(n, x0 + 64);
    for (std::size_t y = 0; y < n; ++y) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t x = x0; x < x1; ++x) {
        const LabelMask absent = x == y ? ~LabelMask{0} : ~e.at(x, y);
        const auto bit = std::uint64_t{1} << (x - x0);
        for (std::size_t m = 0; m < k; ++m) {
          if ((absent >> m) & 1U) acc[m] |= bit;
        }
      }
      for (std::size_t m = 0; m < k; ++m) words[(m * n + y) * W + b] = acc[m];
    }
  }
  std::vector<Cluster> sets;
  sets.reserve(n * k);
  for (std::size_t i = 0; i < n * k; ++i) {
    sets.push_back(Cluster::from_words(
        n, std::vector<std::uint64_t>(words.begin() + static_cast<std::ptrdiff_t>(i * W),
                                      words.begin() + static_cast<std::ptrdiff_t>((i + 1) * W))));
  }
  return NeighborhoodSystem(n, k, std::move(sets));
}

std::string FitchViolation::describe(const LeafSet& leaves, const std::vector<std::string>& labels) const {
  std::ostringstream os;
  if (kind == Kind::NotHierarchyLike) {
    os << "condition(i) " << first.to_string(leaves) << ' ' << second.to_string(leaves);
  } else {
    os << "condition(ii) y=" << leaves.name(y) << " m=" << labels[label] << " y'=" << leaves.name(y_prime);
  }
  return os.str();
}

namespace {

std::optional<FitchViolation> violation_of(const NeighborhoodSystem& hood) {
  if (auto overlap = find_overlap(hood.sets(), hood.leaf_count())) {
    return FitchViolation{FitchViolation::Kind::NotHierarchyLike, overlap->first, overlap->second};
  }
  const auto n = hood.leaf_count();
  std::vector<std::size_t> sizes(hood.sets().size());
  for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = hood.sets()[i].count();
  for (std::size_t m = 0; m < hood.label_count(); ++m) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto& u = hood.at(m, y);
      const auto size = sizes[m * n + y];
      std::optional<std::size_t> bad;
      u.for_each([&](std::size_t yp) {
        if (!bad && sizes[m * n + yp] > size) bad = yp;
      });
      if (bad) {
        FitchViolation v{FitchViolation::Kind::SizeCondition, u, hood.at(m, *bad)};
        v.y = y;
        v.label = m;
        v.y_prime = *bad;
        return v;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<FitchViolation> find_fitch_violation(const EpsilonMap& e) {
  return violation_of(neighborhoods(e));
}

bool check_fitch_map(const EpsilonMap& e) { return !find_fitch_violation(e); }

EpsilonResult try_build_epsilon_tree(const EpsilonMap& e) {
  auto hood = neighborhoods(e);
  if (auto v = violation_of(hood)) return {std::nullopt, std::move(v)};

  auto tree = tree_from_hierarchy(Hierarchy(e.leaves(), hood.sets()));
  EdgeLabeling labels(tree.vertex_count(), 0);
  for (std::size_t m = 0; m < hood.label_count(); ++m) {
    for (std::size_t y = 0; y < hood.leaf_count(); ++y) {
      const auto v = tree.find_cluster(hood.at(m, y));
      // U_¬m[y] = L leaves m out of every ε(·,y); the root carries no edge.
      if (*v != tree.root()) labels[*v] |= LabelMask{1} << m;
    }
  }
  return {EpsilonTree{std::move(tree), std::move(labels)}, std::nullopt};
}

EpsilonTree build_epsilon_tree(const EpsilonMap& e) {
  auto result = try_build_epsilon_tree(e);
  if (!result.tree) {
    throw RecognitionError("not a Fitch map: " + result.violation->describe(e.leaves(), e.labels()));
  }
  return std::move(*result.tree);
}

EdgeLabeling lift_edge_labeling(const RootedTree& tree, const EpsilonTree& base) {
  if (!is_refinement(tree, base.tree)) {
    throw RefinementError("tree does not refine the least-resolved epsilon tree");
  }
  EdgeLabeling labels(tree.vertex_count(), 0);
  for (VertexId v = 1; v < tree.vertex_count(); ++v) {
    if (auto match = base.tree.find_cluster(tree.cluster(v))) labels[v] = base.labels[*match];
  }
  return labels;
}

}  // namespace treelike
