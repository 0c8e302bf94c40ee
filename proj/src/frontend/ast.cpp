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

#include "veripg/ast.h"

#include <algorithm>

namespace veripg {

std::string_view node_type_name(NodeType type) {
  switch (type) {
    case NodeType::Source: return "Source";
    case NodeType::ModuleDef: return "ModuleDef";
    case NodeType::Port: return "Port";
    case NodeType::InputDecl: return "InputDecl";
    case NodeType::OutputDecl: return "OutputDecl";
    case NodeType::InoutDecl: return "InoutDecl";
    case NodeType::WireDecl: return "WireDecl";
    case NodeType::RegDecl: return "RegDecl";
    case NodeType::Parameter: return "Parameter";
    case NodeType::Assign: return "Assign";
    case NodeType::Always: return "Always";
    case NodeType::SensList: return "SensList";
    case NodeType::Block: return "Block";
    case NodeType::IfStatement: return "IfStatement";
    case NodeType::CaseStatement: return "CaseStatement";
    case NodeType::CaseItem: return "CaseItem";
    case NodeType::ForStatement: return "ForStatement";
    case NodeType::BlockingSubstitution: return "BlockingSubstitution";
    case NodeType::NonblockingSubstitution: return "NonblockingSubstitution";
    case NodeType::Operator: return "Operator";
    case NodeType::Identifier: return "Identifier";
    case NodeType::Constant: return "Constant";
    case NodeType::PartSelect: return "PartSelect";
    case NodeType::Instance: return "Instance";
    case NodeType::Opaque: return "Opaque";
  }
  return "Opaque";
}

std::optional<NodeType> node_type_from_name(std::string_view name) {
  for (NodeType type : kAllNodeTypes) {
    if (node_type_name(type) == name) {
      return type;
    }
  }
  return std::nullopt;
}

bool is_signal_decl(NodeType type) {
  switch (type) {
    case NodeType::InputDecl:
    case NodeType::OutputDecl:
    case NodeType::InoutDecl:
    case NodeType::WireDecl:
    case NodeType::RegDecl:
      return true;
    default:
      return false;
  }
}

bool requires_name(NodeType type) {
  switch (type) {
    case NodeType::Identifier:
    case NodeType::ModuleDef:
    case NodeType::Port:
    case NodeType::RegDecl:
    case NodeType::WireDecl:
    case NodeType::InputDecl:
    case NodeType::OutputDecl:
    case NodeType::Parameter:
      return true;
    default:
      return false;
  }
}

bool Ast::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.severity == Severity::error; });
}

std::vector<NodeId> Ast::modules() const {
  std::vector<NodeId> out;
  if (nodes.empty()) {
    return out;
  }
  for (NodeId child : root().children) {
    if (node(child).type == NodeType::ModuleDef) {
      out.push_back(child);
    }
  }
  return out;
}

}  // namespace veripg
