// treelike: check, combine, explain, generate and certify (δ, ε) instances.
//
// Exit codes: 0 accept, 1 reject, 2 bad input, 3 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "treelike/combine.hpp"
#include "treelike/constraints.hpp"
#include "treelike/errors.hpp"
#include "treelike/io.hpp"
#include "treelike/oracle.hpp"

using namespace treelike;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kAccept = 0, kReject = 1, kBadInput = 2, kIoFailure = 3 };

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoFailure("cannot read '" + path + "'");
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoFailure("cannot write '" + path + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream s(text);
  while (std::getline(s, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> cluster_names(const Cluster& c, const LeafSet& leaves) {
  std::vector<std::string> out;
  for (auto i : c.members()) out.push_back(leaves.name(i));
  return out;
}

// ---- check

struct CheckOptions {
  std::string input;
  std::string which = "both";
  bool json = false;
};

int run_check(const CheckOptions& o) {
  const auto inst = parse_instance(std::string_view(read_file(o.input)));
  const bool want_delta = o.which != "epsilon";
  const bool want_epsilon = o.which != "delta";
  if (o.which != "both") {
    if (want_delta && !inst.delta) throw InputError("no delta section");
    if (want_epsilon && !inst.epsilon) throw InputError("no epsilon section");
  } else if (!inst.delta && !inst.epsilon) {
    throw InputError("neither a delta nor an epsilon section");
  }

  Json report = Json::object();
  bool accepted = true;
  std::ostringstream text;
  if (want_delta && inst.delta) {
    const auto r = try_build_discriminating(*inst.delta);
    Json j{{"verdict", r.representation ? "ACCEPT" : "REJECT"}};
    text << "delta: " << (r.representation ? "ACCEPT" : "REJECT");
    if (r.violation) {
      const auto w = r.violation->describe(inst.leaves);
      text << ' ' << w;
      j["witness"] = w;
      accepted = false;
    }
    text << '\n';
    report["delta"] = j;
  }
  if (want_epsilon && inst.epsilon) {
    const auto r = try_build_epsilon_tree(*inst.epsilon);
    Json j{{"verdict", r.tree ? "ACCEPT" : "REJECT"}};
    text << "epsilon: " << (r.tree ? "ACCEPT" : "REJECT");
    if (r.violation) {
      const auto w = r.violation->describe(inst.leaves, inst.edge_labels);
      text << ' ' << w;
      j["witness"] = w;
      accepted = false;
    }
    text << '\n';
    report["epsilon"] = j;
  }
  if (o.json) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return accepted ? kAccept : kReject;
}

// ---- combine

struct CombineOptions {
  std::string input;
  std::string output;
  std::string m_empty;
  std::string q_pairs;
  bool require_c = false;
  bool json = false;
  bool newick = false;
};

int run_combine(const CombineOptions& o) {
  const auto inst = parse_instance(std::string_view(read_file(o.input)));
  if (!inst.delta) throw InputError("combine needs a delta section");
  const auto& d = *inst.delta;
  const auto e = inst.epsilon ? *inst.epsilon : EpsilonMap::empty(inst.leaves, inst.edge_labels);

  std::vector<std::pair<std::string, std::string>> q;
  if (!o.q_pairs.empty()) {
    std::istringstream s(read_file(o.q_pairs));
    q = parse_q_pairs(s);
  }
  const bool check_m_empty = !o.m_empty.empty();
  EventAlphabet alpha;
  try {
    alpha = EventAlphabet::from_names(inst.vertex_labels, inst.edge_labels, split_list(o.m_empty), q);
  } catch (const DomainError& err) {
    throw InputError(err.what());
  }

  const auto analysis = analyze(d, e);
  Json report = Json::object();
  std::ostringstream text;
  bool accepted = analysis.verdict.is_tree_like();
  report["tree_like"] = accepted;
  if (!accepted) {
    const auto w = analysis.verdict.describe(d, e);
    report["witness"] = w;
    text << "not tree-like: " << w << '\n';
    if (analysis.verdict.failure() == TreeLikeVerdict::Failure::UnionNotHierarchy) {
      const auto& ov = analysis.verdict.overlap();
      report["overlapping_clusters"] = {cluster_names(ov.first, d.leaves()), cluster_names(ov.second, d.leaves())};
    }
  }

  if (analysis.combined) {
    const auto& c = *analysis.combined;
    const auto l_min = label_weight(c.edge_labels);
    const auto n_delta = analysis.delta_tree->tree.vertex_count();
    const auto n_epsilon = analysis.epsilon_tree->tree.vertex_count();
    const auto n_star = c.tree.vertex_count();
    text << "tree-like\n";
    text << "l_min: " << l_min << '\n';
    text << "clusters: T_delta " << n_delta << ", T_epsilon " << n_epsilon << ", T* " << n_star << '\n';
    report["l_min"] = l_min;
    report["clusters"] = {{"T_delta", n_delta}, {"T_epsilon", n_epsilon}, {"T*", n_star}};

    Json constraints = Json::object();
    auto verdict = [&](const char* name, std::optional<VertexId> at, const char* where) {
      if (at) {
        text << name << " violated at " << where << ' ' << *at << '\n';
        constraints[name] = {{"ok", false}, {"vertex", *at}};
        accepted = false;
      } else {
        text << name << " holds\n";
        constraints[name] = {{"ok", true}};
      }
    };
    if (o.require_c) verdict("(C)", find_C_violation(c.tree, c.edge_labels), "vertex");
    if (check_m_empty) verdict("(C1)", find_C1_violation(c.tree, c.vertex_labels, c.edge_labels, alpha), "vertex");
    if (!q.empty()) verdict("Q", find_Q_violation(c.tree, c.vertex_labels, c.edge_labels, alpha), "edge above vertex");
    if (!constraints.empty()) report["constraints"] = constraints;

    const auto doc = format_tree_document(c, d, e);
    const auto nwk = to_newick(c.tree, c.vertex_labels, c.edge_labels, d.labels(), e.labels());
    if (o.newick) {
      text << nwk << '\n';
      report["newick"] = nwk;
    }
    if (!o.output.empty()) write_file(o.output, doc);
    if (o.json) report["tree"] = Json::parse(doc);
  }

  if (o.json) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text.str();
  }
  return accepted ? kAccept : kReject;
}

// ---- explain

struct ExplainOptions {
  std::string input;
  std::string output = "-";
  bool json = false;
};

Instance explain(const TreeDocument& doc) {
  if (!doc.has_total_labelings()) throw InputError("tree labelings are partial; explain needs every label");
  Instance inst{doc.tree.leaves(), doc.vertex_labels, doc.edge_labels, std::nullopt, std::nullopt};
  inst.delta = derive_delta(doc.tree, doc.vertex_labeling, doc.vertex_labels);
  inst.epsilon = derive_epsilon(doc.tree, doc.edge_labeling, doc.edge_labels);
  return inst;
}

int run_explain(const ExplainOptions& o) {
  const auto inst = explain(parse_tree_document(read_file(o.input)));
  write_file(o.output, o.json ? instance_to_json(inst) + "\n" : format_instance(inst));
  return kAccept;
}

// ---- gen

struct GenOptions {
  ScenarioParams params;
  std::uint64_t seed = 1;
  std::string m_empty;
  bool require_c = false;
  bool require_c1 = false;
  bool require_c2 = false;
  std::string prefix;
};

int run_gen(GenOptions o) {
  if (o.params.m_count == 0) throw InputError("--vertex-labels must be at least 1");
  for (const auto& name : split_list(o.m_empty)) {
    bool found = false;
    for (std::size_t q = 0; q < o.params.m_count; ++q) {
      if (name == "q" + std::to_string(q)) {
        o.params.m_empty.push_back(static_cast<LabelId>(q));
        found = true;
      }
    }
    if (!found) throw InputError("unknown vertex label '" + name + "' in --m-empty");
  }
  o.params.constraints = {o.require_c, o.require_c1, o.require_c2};
  const auto s = [&] {
    try {
      return random_scenario(o.params, o.seed);
    } catch (const DomainError& err) {
      throw InputError(err.what());
    }
  }();
  const Instance inst{s.tree.leaves(), s.alpha.vertex_labels(), s.alpha.edge_labels(), s.delta(), s.epsilon()};
  const auto doc = format_tree_document(s.tree, s.t, s.lambda, s.alpha.vertex_labels(), s.alpha.edge_labels());
  if (o.prefix.empty()) {
    std::cout << format_instance(inst);
  } else {
    write_file(o.prefix + ".tree.json", doc);
    write_file(o.prefix + ".tsv", format_instance(inst));
  }
  return kAccept;
}

// ---- certify

struct CertifyOptions {
  std::string tree;
  std::string instance;
};

int run_certify(const CertifyOptions& o) {
  const auto doc = parse_tree_document(read_file(o.tree));
  if (!doc.has_total_labelings()) throw InputError("tree labelings are partial");
  const auto inst = parse_instance(std::string_view(read_file(o.instance)));
  if (!inst.delta) throw InputError("certify needs a delta section");
  const auto e = inst.epsilon ? *inst.epsilon : EpsilonMap::empty(inst.leaves, inst.edge_labels);
  if (!(doc.tree.leaves() == inst.leaves)) throw InputError("tree and instance have different leaves");

  // Labels are matched by name; the tree may use its own alphabet order.
  VertexLabeling t(doc.tree.vertex_count(), kNoLabel);
  EdgeLabeling lambda(doc.tree.vertex_count(), 0);
  for (VertexId v = 0; v < doc.tree.vertex_count(); ++v) {
    if (doc.vertex_labeling[v] != kNoLabel) {
      const auto& name = doc.vertex_labels[doc.vertex_labeling[v]];
      const auto it = std::find(inst.vertex_labels.begin(), inst.vertex_labels.end(), name);
      if (it == inst.vertex_labels.end()) throw InputError("vertex label '" + name + "' not in the instance");
      t[v] = static_cast<LabelId>(it - inst.vertex_labels.begin());
    }
    for (std::size_t m = 0; m < doc.edge_labels.size(); ++m) {
      if (!((doc.edge_labeling[v] >> m) & 1U)) continue;
      const auto it = std::find(inst.edge_labels.begin(), inst.edge_labels.end(), doc.edge_labels[m]);
      if (it == inst.edge_labels.end()) {
        throw InputError("edge label '" + doc.edge_labels[m] + "' not in the instance");
      }
      lambda[v] |= LabelMask{1} << (it - inst.edge_labels.begin());
    }
  }
  const CombinedTree c{doc.tree, t, lambda};
  if (derive_delta(c.tree, t, inst.vertex_labels) != *inst.delta) {
    std::cout << "certificate: INVALID tree does not explain delta\n";
    return kReject;
  }
  if (derive_epsilon(c.tree, lambda, inst.edge_labels) != e) {
    std::cout << "certificate: INVALID tree does not explain epsilon\n";
    return kReject;
  }
  if (!minimality_certificate(c, *inst.delta, e)) {
    std::cout << "certificate: INVALID tree is not least resolved\n";
    return kReject;
  }
  std::cout << "certificate: VALID\n";
  return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide and build trees explaining vertex- and edge-label maps on leaf pairs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "treelike 0.1.0");

  CheckOptions check;
  auto* c_check = app.add_subcommand("check", "Recognize delta and/or epsilon");
  c_check->add_option("input", check.input, "Instance file ('-' for stdin)")->required();
  c_check->add_option("--which", check.which, "delta, epsilon or both")
      ->check(CLI::IsMember({"delta", "epsilon", "both"}));
  c_check->add_flag("--json", check.json, "Machine-readable report");

  CombineOptions combine;
  auto* c_combine = app.add_subcommand("combine", "Build the least-resolved tree explaining both maps");
  c_combine->add_option("input", combine.input, "Instance file ('-' for stdin)")->required();
  c_combine->add_option("-o,--output", combine.output, "Write the tree document here");
  c_combine->add_option("--m-empty", combine.m_empty, "Comma-separated vertex labels whose child edges stay unlabeled");
  c_combine->add_flag("--require-c", combine.require_c, "Require an unlabeled child edge at every inner vertex");
  c_combine->add_option("--q-pairs", combine.q_pairs, "File of forbidden 'vertex_label edge_label' pairs");
  c_combine->add_flag("--json", combine.json, "Machine-readable report including the tree");
  c_combine->add_flag("--newick", combine.newick, "Also print an annotated Newick rendering");

  ExplainOptions explain_opts;
  auto* c_explain = app.add_subcommand("explain", "Derive the instance a labeled tree explains");
  c_explain->add_option("tree", explain_opts.input, "Tree document ('-' for stdin)")->required();
  c_explain->add_option("-o,--output", explain_opts.output, "Output path (default stdout)");
  c_explain->add_flag("--json", explain_opts.json, "Write JSON instead of the line format");

  GenOptions gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a random labeled tree and its instance");
  c_gen->add_option("--leaves", gen.params.leaf_count, "Number of leaves")->capture_default_str();
  c_gen->add_option("--vertex-labels", gen.params.m_count, "Size of the vertex alphabet")->capture_default_str();
  c_gen->add_option("--edge-labels", gen.params.n_count, "Size of the edge alphabet")->capture_default_str();
  c_gen->add_option("--density", gen.params.label_density, "Chance of each edge label per edge")
      ->capture_default_str();
  c_gen->add_option("--collapse", gen.params.collapse_probability, "Chance of contracting each inner edge")
      ->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  c_gen->add_option("--m-empty", gen.m_empty, "Comma-separated vertex labels (q0, q1, ...) kept silent below");
  c_gen->add_flag("--require-c", gen.require_c, "Repair the labeling to satisfy (C)");
  c_gen->add_flag("--require-c1", gen.require_c1, "Repair the labeling to satisfy (C1)");
  c_gen->add_flag("--require-c2", gen.require_c2, "Repair the labeling to satisfy (C2)");
  c_gen->add_option("--prefix", gen.prefix, "Write PREFIX.tree.json and PREFIX.tsv instead of printing");

  CertifyOptions certify;
  auto* c_certify = app.add_subcommand("certify", "Check that a tree is the least-resolved explanation");
  c_certify->add_option("tree", certify.tree, "Tree document")->required();
  c_certify->add_option("instance", certify.instance, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kAccept : kBadInput;
  }

  try {
    if (*c_check) return run_check(check);
    if (*c_combine) return run_combine(combine);
    if (*c_explain) return run_explain(explain_opts);
    if (*c_gen) return run_gen(gen);
    if (*c_certify) return run_certify(certify);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
