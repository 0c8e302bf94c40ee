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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace veripg {

using NodeId = std::uint32_t;

/// Closed set of syntax node kinds. Each kind is also a validator state and a
/// legal argument of the Node primitive.
enum class NodeType : std::uint8_t {
  Source,
  ModuleDef,
  Port,
  InputDecl,
  OutputDecl,
  InoutDecl,
  WireDecl,
  RegDecl,
  Parameter,
  Assign,
  Always,
  SensList,
  Block,
  IfStatement,
  CaseStatement,
  CaseItem,
  ForStatement,
  BlockingSubstitution,
  NonblockingSubstitution,
  Operator,
  Identifier,
  Constant,
  PartSelect,
  Instance,
  Opaque,
};

inline constexpr size_t kNodeTypeCount = 25;

inline constexpr std::array<NodeType, kNodeTypeCount> kAllNodeTypes = {
    NodeType::Source,        NodeType::ModuleDef,
    NodeType::Port,          NodeType::InputDecl,
    NodeType::OutputDecl,    NodeType::InoutDecl,
    NodeType::WireDecl,      NodeType::RegDecl,
    NodeType::Parameter,     NodeType::Assign,
    NodeType::Always,        NodeType::SensList,
    NodeType::Block,         NodeType::IfStatement,
    NodeType::CaseStatement, NodeType::CaseItem,
    NodeType::ForStatement,  NodeType::BlockingSubstitution,
    NodeType::NonblockingSubstitution, NodeType::Operator,
    NodeType::Identifier,    NodeType::Constant,
    NodeType::PartSelect,    NodeType::Instance,
    NodeType::Opaque,
};

std::string_view node_type_name(NodeType type);
std::optional<NodeType> node_type_from_name(std::string_view name);

/// Declarations of signals (ports and nets/variables).
bool is_signal_decl(NodeType type);

/// Types whose nodes must carry a non-empty name.
bool requires_name(NodeType type);

struct AstNode {
  NodeId id = 0;
  NodeType type = NodeType::Opaque;
  std::optional<std::string> name;
  int lineno = 0;
  std::optional<std::string> value;
  std::vector<NodeId> children;

  // Source byte span [begin_offset, end_offset). Not part of the exported
  // AST; used by source-to-source rewriting.
  size_t begin_offset = 0;
  size_t end_offset = 0;
};

enum class Severity { error, warning };

struct ParseDiagnostic {
  Severity severity = Severity::warning;
  int lineno = 0;
  std::string message;
};

/// A parsed file. Node ids are dense and assigned in pre-order, so a node's
/// children always carry larger ids than the node and appear in source order.
struct Ast {
  std::vector<AstNode> nodes;
  std::vector<ParseDiagnostic> diagnostics;

  const AstNode& root() const { return nodes.front(); }
  const AstNode& node(NodeId id) const { return nodes.at(id); }
  bool has_errors() const;

  /// ModuleDef nodes in source order.
  std::vector<NodeId> modules() const;
};

}  // namespace veripg
