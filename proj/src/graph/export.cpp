// Copyright 2026 The VeriPG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include <nlohmann/json.hpp>

#include "veripg/errors.h"
#include "veripg/graph.h"

namespace veripg {

namespace {

using nlohmann::ordered_json;

ordered_json optional_string(const std::optional<std::string>& s) {
  return s ? ordered_json(*s) : ordered_json(nullptr);
}

std::string to_json(const VeriPG& g) {
  ordered_json doc;
  doc["module"] = g.module_name();
  ordered_json nodes = ordered_json::array();
  for (const auto& [id, n] : g.nodes()) {
    nodes.push_back({{"id", id},
                     {"type", node_type_name(n.type)},
                     {"name", optional_string(n.name)},
                     {"lineno", n.lineno},
                     {"value", optional_string(n.value)}});
  }
  ordered_json edges = ordered_json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"kind", edge_kind_name(e.kind)},
                     {"condition", optional_string(e.condition)},
                     {"dep_signal", optional_string(e.dep_signal)}});
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["common_nodes"] = g.common_nodes();
  return doc.dump(1) + "\n";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string to_dot(const VeriPG& g) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(g.module_name()) << "\" {\n";
  out << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& [id, n] : g.nodes()) {
    std::string label = std::to_string(id) + ": " + std::string(node_type_name(n.type));
    if (n.name) {
      label += " " + *n.name;
    }
    if (n.value) {
      label += " [" + *n.value + "]";
    }
    label += "\\nline " + std::to_string(n.lineno);
    out << "  n" << id << " [label=\"" << dot_escape(label) << "\"";
    if (g.is_common(id)) {
      out << ", style=bold";
    }
    out << "];\n";
  }
  for (const Edge& e : g.edges()) {
    out << "  n" << e.src << " -> n" << e.dst << " [";
    switch (e.kind) {
      case EdgeKind::AST:
        out << "color=black";
        break;
      case EdgeKind::CFG:
        out << "color=blue, label=\"" << dot_escape(e.condition.value_or("")) << "\"";
        break;
      case EdgeKind::DDG:
        out << "color=red, style=dashed, label=\"" << dot_escape(e.dep_signal.value_or(""))
            << "\"";
        break;
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::optional<std::string> read_optional(const ordered_json& j, const char* key) {
  const ordered_json& v = j.at(key);
  if (v.is_null()) {
    return std::nullopt;
  }
  return v.get<std::string>();
}

}  // namespace

std::string export_graph(const VeriPG& graph, GraphFormat format) {
  return format == GraphFormat::json ? to_json(graph) : to_dot(graph);
}

VeriPG import_graph(std::string_view json) {
  try {
    ordered_json doc = ordered_json::parse(json);
    std::vector<GraphNode> nodes;
    for (const ordered_json& jn : doc.at("nodes")) {
      GraphNode n;
      n.id = jn.at("id").get<NodeId>();
      std::string type = jn.at("type").get<std::string>();
      auto parsed = node_type_from_name(type);
      if (!parsed) {
        throw GraphFormatError("unknown node type '" + type + "'");
      }
      n.type = *parsed;
      n.name = read_optional(jn, "name");
      n.lineno = jn.at("lineno").get<int>();
      n.value = read_optional(jn, "value");
      nodes.push_back(std::move(n));
    }
    std::set<NodeId> ids;
    for (const GraphNode& n : nodes) {
      ids.insert(n.id);
    }
    std::vector<Edge> edges;
    for (const ordered_json& je : doc.at("edges")) {
      Edge e;
      e.src = je.at("src").get<NodeId>();
      e.dst = je.at("dst").get<NodeId>();
      std::string kind = je.at("kind").get<std::string>();
      auto parsed = edge_kind_from_name(kind);
      if (!parsed) {
        throw GraphFormatError("unknown edge kind '" + kind + "'");
      }
      e.kind = *parsed;
      e.condition = read_optional(je, "condition");
      e.dep_signal = read_optional(je, "dep_signal");
      if (ids.count(e.src) == 0 || ids.count(e.dst) == 0) {
        throw GraphFormatError("edge endpoint missing from nodes");
      }
      edges.push_back(std::move(e));
    }
    std::set<NodeId> common = doc.at("common_nodes").get<std::set<NodeId>>();
    return VeriPG(doc.at("module").get<std::string>(), std::move(nodes), std::move(edges),
                  std::move(common));
  } catch (const nlohmann::json::exception& e) {
    throw GraphFormatError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace veripg
