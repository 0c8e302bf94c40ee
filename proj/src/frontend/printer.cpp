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

#include "veripg/parser.h"

namespace veripg {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += parts[i];
  }
  return out;
}

// Splits a declaration value such as "signed [7:0] array[0:15]" into the
// packed part and the unpacked dimensions.
std::pair<std::string, std::string> split_decl_value(const std::optional<std::string>& value) {
  if (!value) {
    return {"", ""};
  }
  const std::string& v = *value;
  size_t pos = v.find("array[");
  if (pos == std::string::npos) {
    return {v, ""};
  }
  std::string packed = v.substr(0, pos);
  while (!packed.empty() && packed.back() == ' ') {
    packed.pop_back();
  }
  return {packed, v.substr(pos + 5)};
}

class Printer {
 public:
  explicit Printer(const std::vector<AstNode>& nodes) : nodes_(nodes) {}

  std::string expr(NodeId id) const {
    const AstNode& n = nodes_[id];
    switch (n.type) {
      case NodeType::Identifier:
        return *n.name;
      case NodeType::Constant:
        return n.value.value_or("0");
      case NodeType::PartSelect: {
        std::string kind = n.value.value_or("[]");
        std::string target = expr(n.children[0]);
        if (kind == "[]") {
          return target + "[" + expr(n.children[1]) + "]";
        }
        std::string sep = kind == "[:]" ? ":" : kind == "[+:]" ? "+:" : "-:";
        return target + "[" + expr(n.children[1]) + sep + expr(n.children[2]) + "]";
      }
      case NodeType::Operator: {
        const std::string& op = *n.value;
        if (op == "?:") {
          return "(" + expr(n.children[0]) + " ? " + expr(n.children[1]) + " : " +
                 expr(n.children[2]) + ")";
        }
        if (op == "{}") {
          return "{" + list(n.children, 0) + "}";
        }
        if (op == "{{}}") {
          return "{" + expr(n.children[0]) + "{" + list(n.children, 1) + "}}";
        }
        if (n.children.size() == 1) {
          return "(" + op + expr(n.children[0]) + ")";
        }
        return "(" + expr(n.children[0]) + " " + op + " " + expr(n.children[1]) + ")";
      }
      case NodeType::Opaque:
        return "/* " + n.value.value_or("opaque") + " */ 0";
      default:
        return "/* " + std::string(node_type_name(n.type)) + " */";
    }
  }

  std::string list(const std::vector<NodeId>& ids, size_t from) const {
    std::vector<std::string> parts;
    for (size_t i = from; i < ids.size(); ++i) {
      parts.push_back(expr(ids[i]));
    }
    return join(parts, ", ");
  }

  void module(NodeId id, std::ostringstream& out) const {
    const AstNode& m = nodes_[id];
    std::vector<std::string> ports;
    for (NodeId c : m.children) {
      if (nodes_[c].type == NodeType::Port) {
        ports.push_back(*nodes_[c].name);
      }
    }
    out << "module " << *m.name;
    if (!ports.empty()) {
      out << "(" << join(ports, ", ") << ")";
    }
    out << ";\n";
    for (NodeId c : m.children) {
      if (nodes_[c].type != NodeType::Port) {
        item(c, out);
      }
    }
    out << "endmodule\n";
  }

  void item(NodeId id, std::ostringstream& out) const {
    const AstNode& n = nodes_[id];
    switch (n.type) {
      case NodeType::InputDecl:
      case NodeType::OutputDecl:
      case NodeType::InoutDecl:
      case NodeType::WireDecl:
      case NodeType::RegDecl: {
        out << "  " << decl_keyword(n);
        auto [packed, dims] = split_decl_value(n.value);
        if (!packed.empty() && packed != "integer") {
          out << " " << packed;
        }
        out << " " << *n.name << dims;
        if (!n.children.empty()) {
          out << " = " << expr(n.children[0]);
        }
        out << ";\n";
        return;
      }
      case NodeType::Parameter:
        out << "  " << *n.value << " " << *n.name << " = " << expr(n.children[0]) << ";\n";
        return;
      case NodeType::Assign:
        out << "  assign " << expr(n.children[0]) << " = " << expr(n.children[1]) << ";\n";
        return;
      case NodeType::Always: {
        out << "  always ";
        std::vector<std::string> events;
        bool star = false;
        for (size_t i = 0; i + 1 < n.children.size(); ++i) {
          const AstNode& s = nodes_[n.children[i]];
          if (s.value == "*") {
            star = true;
          } else if (s.value == "level") {
            events.push_back(expr(s.children[0]));
          } else {
            events.push_back(*s.value + " " + expr(s.children[0]));
          }
        }
        out << (star ? std::string("@*") : "@(" + join(events, " or ") + ")") << "\n";
        statement(n.children.back(), 2, out);
        return;
      }
      case NodeType::Instance:
        out << "  " << *n.value << " " << *n.name << " (" << list(n.children, 0) << ");\n";
        return;
      default:
        out << "  // " << node_type_name(n.type) << " " << n.value.value_or("") << "\n";
        return;
    }
  }

  static std::string decl_keyword(const AstNode& n) {
    switch (n.type) {
      case NodeType::InputDecl: return "input";
      case NodeType::OutputDecl: return "output";
      case NodeType::InoutDecl: return "inout";
      case NodeType::WireDecl: return "wire";
      default: return n.value && n.value->rfind("integer", 0) == 0 ? "integer" : "reg";
    }
  }

  void statement(NodeId id, int depth, std::ostringstream& out) const {
    const AstNode& n = nodes_[id];
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    switch (n.type) {
      case NodeType::Block:
        out << pad << "begin";
        if (n.name) {
          out << " : " << *n.name;
        }
        out << "\n";
        for (NodeId c : n.children) {
          statement(c, depth + 1, out);
        }
        out << pad << "end\n";
        return;
      case NodeType::IfStatement:
        out << pad << "if (" << expr(n.children[0]) << ")\n";
        nested(n.children[1], depth, out);
        if (n.children.size() > 2) {
          out << pad << "else\n";
          nested(n.children[2], depth, out);
        }
        return;
      case NodeType::CaseStatement:
        out << pad << *n.value << " (" << expr(n.children[0]) << ")\n";
        for (size_t i = 1; i < n.children.size(); ++i) {
          const AstNode& item = nodes_[n.children[i]];
          if (item.value == "default") {
            out << pad << "  default:\n";
          } else {
            std::vector<std::string> labels;
            for (size_t j = 0; j + 1 < item.children.size(); ++j) {
              labels.push_back(expr(item.children[j]));
            }
            out << pad << "  " << join(labels, ", ") << ":\n";
          }
          statement(item.children.back(), depth + 2, out);
        }
        out << pad << "endcase\n";
        return;
      case NodeType::ForStatement:
        out << pad << "for (" << assignment(n.children[0], "=") << "; "
            << expr(n.children[1]) << "; " << assignment(n.children[2], "=") << ")\n";
        nested(n.children[3], depth, out);
        return;
      case NodeType::BlockingSubstitution:
        out << pad << assignment(id, "=") << ";\n";
        return;
      case NodeType::NonblockingSubstitution:
        out << pad << assignment(id, "<=") << ";\n";
        return;
      default:
        out << pad << "; // " << n.value.value_or("opaque") << "\n";
        return;
    }
  }

  // A nested statement; a bare `;` body would print as a null statement.
  void nested(NodeId id, int depth, std::ostringstream& out) const {
    statement(id, depth + 1, out);
  }

  std::string assignment(NodeId id, std::string_view op) const {
    const AstNode& n = nodes_[id];
    return expr(n.children[0]) + " " + std::string(op) + " " + expr(n.children[1]);
  }

 private:
  const std::vector<AstNode>& nodes_;
};

}  // namespace

std::string print_expr(const std::vector<AstNode>& nodes, NodeId id) {
  return Printer(nodes).expr(id);
}

std::string print_verilog(const Ast& ast) {
  std::ostringstream out;
  Printer printer(ast.nodes);
  bool first = true;
  for (NodeId id : ast.modules()) {
    if (!first) {
      out << "\n";
    }
    first = false;
    printer.module(id, out);
  }
  return out.str();
}

std::string ast_to_json(const Ast& ast) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json diags = ordered_json::array();
  for (const ParseDiagnostic& d : ast.diagnostics) {
    diags.push_back({{"severity", d.severity == Severity::error ? "error" : "warning"},
                     {"lineno", d.lineno},
                     {"message", d.message}});
  }
  ordered_json nodes = ordered_json::array();
  for (const AstNode& n : ast.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["type"] = node_type_name(n.type);
    j["name"] = n.name ? ordered_json(*n.name) : ordered_json(nullptr);
    j["lineno"] = n.lineno;
    j["value"] = n.value ? ordered_json(*n.value) : ordered_json(nullptr);
    j["children"] = n.children;
    nodes.push_back(std::move(j));
  }
  doc["diagnostics"] = std::move(diags);
  doc["nodes"] = std::move(nodes);
  return doc.dump(1) + "\n";
}

}  // namespace veripg
