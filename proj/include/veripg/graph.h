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
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veripg/ast.h"

namespace veripg {

enum class EdgeKind : std::uint8_t { AST, CFG, DDG };

inline constexpr std::array<EdgeKind, 3> kAllEdgeKinds = {EdgeKind::AST, EdgeKind::CFG,
                                                          EdgeKind::DDG};

std::string_view edge_kind_name(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from_name(std::string_view name);

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  EdgeKind kind = EdgeKind::AST;
  std::optional<std::string> condition;   // CFG only
  std::optional<std::string> dep_signal;  // DDG only

  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

enum class AssignKind : std::uint8_t { blocking, nonblocking, continuous };

std::string_view assign_kind_name(AssignKind kind);

struct CfgFragment {
  NodeId owner = 0;
  NodeId entry = 0;
  std::vector<NodeId> exits;
  std::vector<Edge> edges;
};

struct DefUseRecord {
  std::string signal;
  std::vector<std::pair<NodeId, AssignKind>> defs;
  std::vector<NodeId> uses;
};

struct DdgResult {
  std::vector<DefUseRecord> records;  // sorted by signal
  std::vector<Edge> edges;            // sorted, unique
};

/// The exported attributes of a graph node.
struct GraphNode {
  NodeId id = 0;
  NodeType type = NodeType::Opaque;
  std::optional<std::string> name;
  int lineno = 0;
  std::optional<std::string> value;

  bool operator==(const GraphNode&) const = default;
};

/// Per-signal def/use facts derived from a finished graph. Statements are
/// common nodes; signals are whole identifiers.
struct SignalIndex {
  std::map<std::string, std::vector<std::pair<NodeId, AssignKind>>> defs;
  std::map<std::string, std::vector<NodeId>> uses;
  std::map<NodeId, std::set<std::string>> defined_by;
  std::map<NodeId, std::set<std::string>> used_by;
  // Statement inside an always block -> that Always node.
  std::map<NodeId, NodeId> owner;

  bool operator==(const SignalIndex&) const = default;
};

/// The fused property graph of one module. Immutable once built.
class VeriPG {
 public:
  VeriPG() = default;
  VeriPG(std::string module_name, std::vector<GraphNode> nodes, std::vector<Edge> edges,
         std::set<NodeId> common_nodes);
  VeriPG(const VeriPG& other);
  VeriPG& operator=(const VeriPG& other);
  VeriPG(VeriPG&&) noexcept = default;
  VeriPG& operator=(VeriPG&&) noexcept = default;

  const std::string& module_name() const { return module_name_; }
  const std::map<NodeId, GraphNode>& nodes() const { return nodes_; }
  const GraphNode& node(NodeId id) const;
  bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::set<NodeId>& common_nodes() const { return common_; }
  bool is_common(NodeId id) const { return common_.count(id) != 0; }

  const std::vector<NodeId>& nodes_of_type(NodeType type) const;
  const std::vector<NodeId>& nodes_named(const std::string& name) const;
  const std::map<NodeType, std::vector<NodeId>>& type_index() const { return type_index_; }
  const std::map<std::string, std::vector<NodeId>>& name_index() const { return name_index_; }

  /// Edge lists incident to a node, in sorted edge order.
  const std::vector<const Edge*>& out_edges(NodeId id, EdgeKind kind) const;
  const std::vector<const Edge*>& in_edges(NodeId id, EdgeKind kind) const;

  /// Syntax children that survived fusion, in id order.
  std::vector<NodeId> ast_children(NodeId id) const;

  const SignalIndex& signals() const { return signals_; }

  /// Compares the exported content only; indexes are derived from it.
  bool operator==(const VeriPG& other) const;

 private:
  void build_indexes();

  std::string module_name_;
  std::map<NodeId, GraphNode> nodes_;
  std::vector<Edge> edges_;
  std::set<NodeId> common_;

  std::map<NodeType, std::vector<NodeId>> type_index_;
  std::map<std::string, std::vector<NodeId>> name_index_;
  std::array<std::map<NodeId, std::vector<const Edge*>>, 3> out_;
  std::array<std::map<NodeId, std::vector<const Edge*>>, 3> in_;
  SignalIndex signals_;
};

/// Statement-level node types shared by syntax, control and data views.
bool is_common_type(NodeType type);

/// Types that make up expression subtrees.
bool is_expression_type(NodeType type);

std::set<NodeId> extract_common_nodes(const Ast& ast, NodeId module);

/// One fragment per always block (entered at the Always node) and one
/// single-node fragment per continuous assignment. Empty blocks after opaque
/// elision add a MalformedBlock message to `warnings`.
std::vector<CfgFragment> build_cfg(const Ast& ast, NodeId module, const std::set<NodeId>& common,
                                   std::vector<std::string>* warnings = nullptr);

DdgResult build_ddg(const Ast& ast, NodeId module, const std::set<NodeId>& common);

/// Throws InconsistentInput when a CFG or DDG edge touches a non-common node.
VeriPG fuse(const Ast& ast, NodeId module, const std::set<NodeId>& common,
            const std::vector<CfgFragment>& fragments, const std::vector<Edge>& ddg_edges);

/// extract_common_nodes + build_cfg + build_ddg + fuse.
VeriPG build_veripg(const Ast& ast, NodeId module,
                    std::vector<std::string>* warnings = nullptr);

/// One graph per module of a parsed file.
std::vector<VeriPG> build_all(const Ast& ast, std::vector<std::string>* warnings = nullptr);

enum class GraphFormat { json, dot };

std::string export_graph(const VeriPG& graph, GraphFormat format);

/// Inverse of the JSON export. Throws GraphFormatError.
VeriPG import_graph(std::string_view json);

}  // namespace veripg
