#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <set>
#include <utility>

#include "treelike/combine.hpp"
#include "treelike/constraints.hpp"
#include "treelike/errors.hpp"
#include "treelike/io.hpp"
#include "treelike/oracle.hpp"

namespace py = pybind11;
using namespace treelike;

namespace {

using PairKey = std::pair<std::string, std::string>;

std::size_t label_index(const std::vector<std::string>& labels, const std::string& name) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return i;
  }
  throw DomainError("unknown label '" + name + "'");
}

// Every ordered pair of distinct leaves must be present.
DeltaMap make_delta(const std::vector<std::string>& leaves, const std::vector<std::string>& labels,
                    const std::map<PairKey, std::string>& values) {
  LeafSet L(leaves);
  const auto n = L.size();
  std::vector<LabelId> v(n * n, 0);
  std::size_t seen = 0;
  for (const auto& [key, label] : values) {
    const auto x = L.index_of(key.first);
    const auto y = L.index_of(key.second);
    if (x == y) throw DomainError("pair of identical leaves '" + key.first + "'");
    v[x * n + y] = static_cast<LabelId>(label_index(labels, label));
    ++seen;
  }
  if (seen != n * (n - 1)) throw DomainError("delta must give a label for every ordered pair");
  return DeltaMap(std::move(L), labels, std::move(v));
}

// Absent pairs are empty.
EpsilonMap make_epsilon(const std::vector<std::string>& leaves, const std::vector<std::string>& labels,
                        const std::map<PairKey, std::set<std::string>>& values) {
  LeafSet L(leaves);
  const auto n = L.size();
  std::vector<LabelMask> v(n * n, 0);
  for (const auto& [key, set] : values) {
    const auto x = L.index_of(key.first);
    const auto y = L.index_of(key.second);
    if (x == y) throw DomainError("pair of identical leaves '" + key.first + "'");
    for (const auto& m : set) v[x * n + y] |= LabelMask{1} << label_index(labels, m);
  }
  return EpsilonMap(std::move(L), labels, std::move(v));
}

std::set<std::string> label_set(LabelMask mask, const std::vector<std::string>& labels) {
  std::set<std::string> out;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if ((mask >> m) & 1U) out.insert(labels[m]);
  }
  return out;
}

struct PyCombined {
  CombinedTree tree;
  DeltaMap delta;
  EpsilonMap epsilon;
};

}  // namespace

PYBIND11_MODULE(_treelike, m) {
  m.doc() = "Trees explaining vertex- and edge-label maps on leaf pairs";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  static py::exception<InputError> input_error(m, "InputError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      input_error(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<DeltaMap>(m, "Delta")
      .def(py::init(&make_delta), py::arg("leaves"), py::arg("labels"), py::arg("values"))
      .def_property_readonly("leaves", [](const DeltaMap& d) { return d.leaves().names(); })
      .def_property_readonly("labels", &DeltaMap::labels)
      .def("__call__",
           [](const DeltaMap& d, const std::string& x, const std::string& y) {
             return d.label_name(d.leaves().index_of(x), d.leaves().index_of(y));
           })
      .def("__eq__", [](const DeltaMap& a, const DeltaMap& b) { return a == b; });

  py::class_<EpsilonMap>(m, "Epsilon")
      .def(py::init(&make_epsilon), py::arg("leaves"), py::arg("labels"),
           py::arg("values") = std::map<PairKey, std::set<std::string>>{})
      .def_property_readonly("leaves", [](const EpsilonMap& e) { return e.leaves().names(); })
      .def_property_readonly("labels", &EpsilonMap::labels)
      .def("__call__",
           [](const EpsilonMap& e, const std::string& x, const std::string& y) {
             return label_set(e.at(e.leaves().index_of(x), e.leaves().index_of(y)), e.labels());
           })
      .def("__eq__", [](const EpsilonMap& a, const EpsilonMap& b) { return a == b; });

  m.def(
      "ultrametric_violation",
      [](const DeltaMap& d) -> std::optional<std::string> {
        auto r = try_build_discriminating(d);
        if (r.violation) return r.violation->describe(d.leaves());
        return std::nullopt;
      },
      "None when delta is a symbolic ultrametric, otherwise the violated condition and leaves.");
  m.def(
      "fitch_violation",
      [](const EpsilonMap& e) -> std::optional<std::string> {
        auto v = find_fitch_violation(e);
        if (v) return v->describe(e.leaves(), e.labels());
        return std::nullopt;
      },
      "None when epsilon is a Fitch map, otherwise the violated condition.");
  m.def("is_symbolic_ultrametric", &check_symbolic_ultrametric);
  m.def("is_fitch_map", &check_fitch_map);
  m.def("is_type_C_fitch", &is_type_C_fitch);
  m.def(
      "decide",
      [](const DeltaMap& d, const EpsilonMap& e) {
        const auto v = decide_tree_like(d, e);
        return std::make_pair(v.is_tree_like(), v.describe(d, e));
      },
      "(is_tree_like, description)");

  py::class_<PyCombined>(m, "CombinedTree")
      .def_property_readonly("vertex_count", [](const PyCombined& c) { return c.tree.tree.vertex_count(); })
      .def_property_readonly("l_min", [](const PyCombined& c) { return label_weight(c.tree.edge_labels); })
      .def_property_readonly("clusters",
                             [](const PyCombined& c) {
                               std::vector<std::vector<std::string>> out;
                               const auto& t = c.tree.tree;
                               for (VertexId v = 0; v < t.vertex_count(); ++v) {
                                 std::vector<std::string> names;
                                 for (auto i : t.cluster(v).members()) names.push_back(t.leaves().name(i));
                                 out.push_back(std::move(names));
                               }
                               return out;
                             })
      .def("newick",
           [](const PyCombined& c) {
             return to_newick(c.tree.tree, c.tree.vertex_labels, c.tree.edge_labels, c.delta.labels(),
                              c.epsilon.labels());
           })
      .def("document", [](const PyCombined& c) { return format_tree_document(c.tree, c.delta, c.epsilon); })
      .def("is_minimal", [](const PyCombined& c) { return minimality_certificate(c.tree, c.delta, c.epsilon); })
      .def("satisfies_C", [](const PyCombined& c) { return check_C(c.tree.tree, c.tree.edge_labels); });

  m.def(
      "least_resolved",
      [](const DeltaMap& d, const EpsilonMap& e) { return PyCombined{least_resolved_combined(d, e), d, e}; },
      "The unique least-resolved labeled tree explaining both maps. Raises Error when none exists.");
  m.def(
      "is_m_empty_tree_like",
      [](const DeltaMap& d, const EpsilonMap& e, const std::vector<std::string>& m_empty, bool c, bool c1) {
        const auto alpha = EventAlphabet::from_names(d.labels(), e.labels(), m_empty);
        return is_M0_tree_like(d, e, alpha, {c, c1, false});
      },
      py::arg("delta"), py::arg("epsilon"), py::arg("m_empty") = std::vector<std::string>{}, py::arg("c") = true,
      py::arg("c1") = true);

  m.def(
      "parse_instance",
      [](const std::string& text) {
        auto inst = parse_instance(std::string_view(text));
        return std::make_pair(inst.delta, inst.epsilon);
      },
      "(delta or None, epsilon or None) from the line-based instance format.");
  m.def(
      "format_instance",
      [](const DeltaMap& d, const EpsilonMap& e) {
        return format_instance(Instance{d.leaves(), d.labels(), e.labels(), d, e});
      });
  m.def(
      "explain",
      [](const std::string& tree_json) {
        const auto doc = parse_tree_document(tree_json);
        if (!doc.has_total_labelings()) throw InputError("tree labelings are partial");
        return std::make_pair(derive_delta(doc.tree, doc.vertex_labeling, doc.vertex_labels),
                              derive_epsilon(doc.tree, doc.edge_labeling, doc.edge_labels));
      },
      "(delta, epsilon) explained by a labeled tree document.");

  m.def(
      "random_scenario",
      [](std::size_t leaves, std::size_t m_count, std::size_t n_count, double density, std::uint64_t seed,
         bool c, bool c1) {
        ScenarioParams p;
        p.leaf_count = leaves;
        p.m_count = m_count;
        p.n_count = n_count;
        p.label_density = density;
        p.constraints = {c, c1, false};
        if (c1) p.m_empty = {0};
        const auto s = random_scenario(p, seed);
        return py::make_tuple(s.delta(), s.epsilon(),
                              format_tree_document(s.tree, s.t, s.lambda, s.alpha.vertex_labels(),
                                                   s.alpha.edge_labels()));
      },
      py::arg("leaves"), py::arg("m_count") = 2, py::arg("n_count") = 1, py::arg("density") = 0.3,
      py::arg("seed") = 0, py::arg("c") = false, py::arg("c1") = false,
      "(delta, epsilon, tree document) of a random labeled tree. With c1, M∅ = {q0}.");

  py::class_<SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next", &SplitMix64::next)
      .def("uniform", &SplitMix64::uniform, py::arg("bound"));
}
