#include "treelike/io.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace treelike {

using json = nlohmann::ordered_json;

InputError::InputError(const std::string& message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t label_index(const std::vector<std::string>& labels, const Token& tok, std::size_t line,
                        const char* what) {
  auto it = std::find(labels.begin(), labels.end(), tok.text);
  if (it == labels.end()) throw InputError(std::string("undeclared ") + what + " '" + tok.text + "'", line, tok.column);
  return static_cast<std::size_t>(it - labels.begin());
}

void require_distinct(const std::vector<std::string>& names, const char* what, std::size_t line) {
  std::set<std::string> seen;
  for (const auto& s : names) {
    if (!seen.insert(s).second) throw InputError(std::string("duplicate ") + what + " '" + s + "'", line, 1);
  }
}

}  // namespace

Instance parse_instance(std::istream& in) {
  enum class Section { Header, Delta, Epsilon };
  Section section = Section::Header;
  std::optional<std::vector<std::string>> leaf_names, vertex_labels, edge_labels;
  std::optional<LeafSet> leaves;
  std::vector<LabelId> delta;
  std::vector<LabelMask> epsilon;
  std::vector<char> delta_seen, epsilon_seen;
  bool has_delta = false;
  bool has_epsilon = false;

  auto pair_of = [&](const std::vector<Token>& toks, std::size_t line) {
    const auto x = leaves->find(toks[0].text);
    if (!x) throw InputError("unknown leaf '" + toks[0].text + "'", line, toks[0].column);
    const auto y = leaves->find(toks[1].text);
    if (!y) throw InputError("unknown leaf '" + toks[1].text + "'", line, toks[1].column);
    if (*x == *y) throw InputError("pair of identical leaves", line, toks[1].column);
    return std::pair{*x, *y};
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const auto& head = toks[0].text;

    if (toks.size() == 1 && (head == "delta" || head == "epsilon")) {
      if (!leaves) throw InputError("section before the leaves line", line_no, 1);
      const auto n = leaves->size();
      if (head == "delta") {
        if (has_delta) throw InputError("second delta section", line_no, 1);
        if (!vertex_labels) throw InputError("delta section without a vertex_labels line", line_no, 1);
        has_delta = true;
        delta.assign(n * n, 0);
        delta_seen.assign(n * n, 0);
        section = Section::Delta;
      } else {
        if (has_epsilon) throw InputError("second epsilon section", line_no, 1);
        if (!edge_labels) throw InputError("epsilon section without an edge_labels line", line_no, 1);
        has_epsilon = true;
        epsilon.assign(n * n, 0);
        epsilon_seen.assign(n * n, 0);
        section = Section::Epsilon;
      }
      continue;
    }

    if (section == Section::Header) {
      std::vector<std::string> rest;
      for (std::size_t i = 1; i < toks.size(); ++i) rest.push_back(toks[i].text);
      if (head == "leaves") {
        if (leaf_names) throw InputError("second leaves line", line_no, 1);
        if (rest.empty()) throw InputError("empty leaf list", line_no, 1);
        require_distinct(rest, "leaf", line_no);
        leaf_names = rest;
        leaves = LeafSet(rest);
      } else if (head == "vertex_labels") {
        if (vertex_labels) throw InputError("second vertex_labels line", line_no, 1);
        require_distinct(rest, "vertex label", line_no);
        vertex_labels = rest;
      } else if (head == "edge_labels") {
        if (edge_labels) throw InputError("second edge_labels line", line_no, 1);
        require_distinct(rest, "edge label", line_no);
        if (rest.size() > kMaxEdgeLabels) throw InputError("at most 64 edge labels are supported", line_no, 1);
        edge_labels = rest;
      } else {
        throw InputError("unknown header '" + head + "'", line_no, toks[0].column);
      }
      continue;
    }

    if (toks.size() != 3) {
      throw InputError("expected three fields", line_no, toks.size() > 3 ? toks[3].column : toks.back().column);
    }
    const auto [x, y] = pair_of(toks, line_no);
    const auto n = leaves->size();
    if (section == Section::Delta) {
      if (delta_seen[x * n + y]) throw InputError("duplicate ordered pair", line_no, toks[0].column);
      delta_seen[x * n + y] = 1;
      delta[x * n + y] = static_cast<LabelId>(label_index(*vertex_labels, toks[2], line_no, "vertex label"));
    } else {
      if (epsilon_seen[x * n + y]) throw InputError("duplicate ordered pair", line_no, toks[0].column);
      epsilon_seen[x * n + y] = 1;
      LabelMask mask = 0;
      if (toks[2].text != "-") {
        for (const auto& name : split_commas(toks[2].text)) {
          const auto m = label_index(*edge_labels, Token{name, toks[2].column}, line_no, "edge label");
          mask |= LabelMask{1} << m;
        }
      }
      epsilon[x * n + y] = mask;
    }
  }

  if (!leaves) throw InputError("missing leaves line");
  const auto n = leaves->size();
  auto check_total = [&](const std::vector<char>& seen, const char* what) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y && !seen[x * n + y]) {
          throw InputError(std::string(what) + ": missing ordered pair (" + leaves->name(x) + "," +
                           leaves->name(y) + ")");
        }
      }
    }
  };

  Instance inst{*leaves, vertex_labels.value_or(std::vector<std::string>{}),
                edge_labels.value_or(std::vector<std::string>{}), std::nullopt, std::nullopt};
  if (has_delta) {
    check_total(delta_seen, "delta");
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        if (delta[x * n + y] != delta[y * n + x]) {
          throw InputError("delta: asymmetric pair (" + leaves->name(x) + "," + leaves->name(y) + ")");
        }
      }
    }
    inst.delta = DeltaMap(*leaves, inst.vertex_labels, std::move(delta));
  }
  if (has_epsilon) {
    check_total(epsilon_seen, "epsilon");
    inst.epsilon = EpsilonMap(*leaves, inst.edge_labels, std::move(epsilon));
  }
  return inst;
}

Instance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

std::string format_instance(const Instance& instance) {
  std::ostringstream os;
  const auto& leaves = instance.leaves;
  const auto n = leaves.size();
  auto line = [&](const char* head, const std::vector<std::string>& items) {
    os << head;
    for (const auto& s : items) os << '\t' << s;
    os << '\n';
  };
  line("leaves", leaves.names());
  if (instance.delta) line("vertex_labels", instance.delta->labels());
  else if (!instance.vertex_labels.empty()) line("vertex_labels", instance.vertex_labels);
  if (instance.epsilon) line("edge_labels", instance.epsilon->labels());
  else if (!instance.edge_labels.empty()) line("edge_labels", instance.edge_labels);
  if (instance.delta) {
    os << "delta\n";
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y) os << leaves.name(x) << '\t' << leaves.name(y) << '\t' << instance.delta->label_name(x, y) << '\n';
      }
    }
  }
  if (instance.epsilon) {
    const auto& labels = instance.epsilon->labels();
    os << "epsilon\n";
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        const auto mask = instance.epsilon->at(x, y);
        os << leaves.name(x) << '\t' << leaves.name(y) << '\t';
        if (mask == 0) {
          os << '-';
        } else {
          bool first = true;
          for (std::size_t m = 0; m < labels.size(); ++m) {
            if ((mask >> m) & 1U) {
              if (!first) os << ',';
              first = false;
              os << labels[m];
            }
          }
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

std::string instance_to_json(const Instance& instance) {
  const auto& leaves = instance.leaves;
  const auto n = leaves.size();
  json doc;
  doc["leaves"] = leaves.names();
  doc["vertex_labels"] = instance.delta ? instance.delta->labels() : instance.vertex_labels;
  doc["edge_labels"] = instance.epsilon ? instance.epsilon->labels() : instance.edge_labels;
  if (instance.delta) {
    json rows = json::array();
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y) rows.push_back({leaves.name(x), leaves.name(y), instance.delta->label_name(x, y)});
      }
    }
    doc["delta"] = std::move(rows);
  }
  if (instance.epsilon) {
    const auto& labels = instance.epsilon->labels();
    json rows = json::array();
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        json set = json::array();
        for (std::size_t m = 0; m < labels.size(); ++m) {
          if ((instance.epsilon->at(x, y) >> m) & 1U) set.push_back(labels[m]);
        }
        rows.push_back({leaves.name(x), leaves.name(y), std::move(set)});
      }
    }
    doc["epsilon"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

// ------------------------------------------------------------- tree files

bool TreeDocument::has_total_labelings() const {
  if (!missing_edge_labels.empty()) return false;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!tree.is_leaf(v) && vertex_labeling[v] == kNoLabel) return false;
  }
  return true;
}

namespace {

std::vector<std::string> string_list(const json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("'") + key + "' must be an array");
  for (const auto& item : arr) {
    if (!item.is_string()) throw InputError(std::string("'") + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

TreeDocument parse_tree_document(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& err) {
    // nlohmann reports a byte offset; convert it to line/column.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError("invalid JSON", line, column);
  }
  if (!doc.is_object()) throw InputError("tree document must be a JSON object");

  try {
    auto leaf_names = string_list(doc, "leaves");
    if (leaf_names.empty()) throw InputError("tree document lists no leaves");
    require_distinct(leaf_names, "leaf", 0);
    LeafSet leaves(leaf_names);
    auto vertex_labels = string_list(doc, "vertex_labels");
    auto edge_labels = string_list(doc, "edge_labels");
    require_distinct(vertex_labels, "vertex label", 0);
    require_distinct(edge_labels, "edge label", 0);
    if (!doc.contains("nodes") || !doc.at("nodes").is_array()) throw InputError("'nodes' must be an array");
    const auto& nodes = doc.at("nodes");

    // Alphabets default to the labels in use, sorted.
    const bool infer_vertex = !doc.contains("vertex_labels");
    const bool infer_edge = !doc.contains("edge_labels");
    if (infer_vertex || infer_edge) {
      std::set<std::string> used_v, used_e;
      for (const auto& node : nodes) {
        if (node.contains("vertex_label") && node.at("vertex_label").is_string()) {
          used_v.insert(node.at("vertex_label").get<std::string>());
        }
        if (node.contains("edge_label_to_parent") && node.at("edge_label_to_parent").is_array()) {
          for (const auto& m : node.at("edge_label_to_parent")) {
            if (m.is_string()) used_e.insert(m.get<std::string>());
          }
        }
      }
      if (infer_vertex) vertex_labels.assign(used_v.begin(), used_v.end());
      if (infer_edge) edge_labels.assign(used_e.begin(), used_e.end());
    }
    if (edge_labels.size() > kMaxEdgeLabels) throw InputError("at most 64 edge labels are supported");

    std::map<std::int64_t, std::size_t> slot_of_id;
    for (const auto& node : nodes) {
      if (!node.is_object() || !node.contains("id") || !node.at("id").is_number_integer()) {
        throw InputError("every node needs an integer 'id'");
      }
      const auto id = node.at("id").get<std::int64_t>();
      if (!slot_of_id.emplace(id, slot_of_id.size()).second) {
        throw InputError("duplicate node id " + std::to_string(id));
      }
    }
    const auto count = nodes.size();
    std::vector<VertexId> parent(count, kNoVertex);
    std::vector<std::optional<std::size_t>> leaf_of(count);
    VertexLabeling t(count, kNoLabel);
    EdgeLabeling lambda(count, 0);
    std::vector<char> has_edge_label(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& node = nodes[i];
      const auto id = node.at("id").get<std::int64_t>();
      const auto where = "node " + std::to_string(id) + ": ";
      if (node.contains("parent") && !node.at("parent").is_null()) {
        if (!node.at("parent").is_number_integer()) throw InputError(where + "'parent' must be an id or null");
        auto it = slot_of_id.find(node.at("parent").get<std::int64_t>());
        if (it == slot_of_id.end()) throw InputError(where + "unknown parent id");
        parent[i] = it->second;
      }
      if (node.contains("leaf")) {
        if (!node.at("leaf").is_string()) throw InputError(where + "'leaf' must be a string");
        const auto name = node.at("leaf").get<std::string>();
        const auto x = leaves.find(name);
        if (!x) throw InputError(where + "leaf '" + name + "' is not listed in 'leaves'");
        leaf_of[i] = *x;
      }
      if (node.contains("vertex_label") && !node.at("vertex_label").is_null()) {
        if (!node.at("vertex_label").is_string()) throw InputError(where + "'vertex_label' must be a string");
        const auto name = node.at("vertex_label").get<std::string>();
        auto it = std::find(vertex_labels.begin(), vertex_labels.end(), name);
        if (it == vertex_labels.end()) throw InputError(where + "undeclared vertex label '" + name + "'");
        t[i] = static_cast<LabelId>(it - vertex_labels.begin());
      }
      if (node.contains("edge_label_to_parent")) {
        const auto& arr = node.at("edge_label_to_parent");
        if (!arr.is_array()) throw InputError(where + "'edge_label_to_parent' must be an array");
        has_edge_label[i] = 1;
        for (const auto& m : arr) {
          if (!m.is_string()) throw InputError(where + "edge labels must be strings");
          auto it = std::find(edge_labels.begin(), edge_labels.end(), m.get<std::string>());
          if (it == edge_labels.end()) throw InputError(where + "undeclared edge label '" + m.get<std::string>() + "'");
          lambda[i] |= LabelMask{1} << (it - edge_labels.begin());
        }
      }
    }

    auto canon = RootedTree::canonical(leaves, parent, leaf_of);
    TreeDocument out{std::move(canon.tree), std::move(vertex_labels), std::move(edge_labels), {}, {}, {}};
    const auto vn = out.tree.vertex_count();
    out.vertex_labeling.assign(vn, kNoLabel);
    out.edge_labeling.assign(vn, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = canon.new_id[i];
      if (!out.tree.is_leaf(v)) out.vertex_labeling[v] = t[i];
      if (v == out.tree.root()) {
        if (lambda[i] != 0) throw InputError("the root has no incoming edge to label");
        continue;
      }
      out.edge_labeling[v] = lambda[i];
      if (!has_edge_label[i]) out.missing_edge_labels.push_back(v);
    }
    std::sort(out.missing_edge_labels.begin(), out.missing_edge_labels.end());
    return out;
  } catch (const json::exception& err) {
    throw InputError(std::string("malformed tree document: ") + err.what());
  } catch (const DomainError& err) {
    throw InputError(std::string("invalid tree: ") + err.what());
  }
}

std::string format_tree_document(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
                                 const std::vector<std::string>& vertex_labels,
                                 const std::vector<std::string>& edge_labels) {
  json doc;
  doc["leaves"] = tree.leaves().names();
  doc["vertex_labels"] = vertex_labels;
  doc["edge_labels"] = edge_labels;
  json nodes = json::array();
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    json node;
    node["id"] = v;
    node["parent"] = v == tree.root() ? json(nullptr) : json(tree.parent(v));
    if (tree.is_leaf(v)) {
      node["leaf"] = tree.leaves().name(tree.leaf_index(v));
    } else if (v < t.size() && t[v] != kNoLabel) {
      node["vertex_label"] = vertex_labels.at(t[v]);
    }
    json edge = json::array();
    if (v != tree.root() && v < lambda.size()) {
      for (std::size_t m = 0; m < edge_labels.size(); ++m) {
        if ((lambda[v] >> m) & 1U) edge.push_back(edge_labels[m]);
      }
    }
    node["edge_label_to_parent"] = std::move(edge);
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

std::string format_tree_document(const CombinedTree& c, const DeltaMap& d, const EpsilonMap& e) {
  return format_tree_document(c.tree, c.vertex_labels, c.edge_labels, d.labels(), e.labels());
}

std::string to_newick(const RootedTree& tree, const VertexLabeling& t, const EdgeLabeling& lambda,
                      const std::vector<std::string>& vertex_labels, const std::vector<std::string>& edge_labels) {
  std::string out;
  // Iterative DFS: (vertex, next child index).
  std::vector<std::pair<VertexId, std::size_t>> stack{{tree.root(), 0}};
  auto close = [&](VertexId v) {
    if (!tree.is_leaf(v) && v < t.size() && t[v] != kNoLabel) out += vertex_labels.at(t[v]);
    if (v != tree.root() && v < lambda.size() && lambda[v] != 0) out += "#" + format_labels(lambda[v], edge_labels);
  };
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (tree.is_leaf(v)) {
      out += tree.leaves().name(tree.leaf_index(v));
      const auto done = v;
      stack.pop_back();
      close(done);
      continue;
    }
    const auto& kids = tree.children(v);
    if (next == 0) out += '(';
    if (next < kids.size()) {
      if (next > 0) out += ',';
      const auto child = kids[next++];
      stack.emplace_back(child, 0);
      continue;
    }
    out += ')';
    const auto done = v;
    stack.pop_back();
    close(done);
  }
  return out + ";";
}

std::string to_newick(const RootedTree& tree) { return to_newick(tree, {}, {}, {}, {}); }

std::vector<std::pair<std::string, std::string>> parse_q_pairs(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw InputError("expected 'vertex_label edge_label'", line_no, toks.front().column);
    out.emplace_back(toks[0].text, toks[1].text);
  }
  return out;
}

}  // namespace treelike
