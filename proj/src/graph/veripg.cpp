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

#include <algorithm>
#include <deque>

#include "defuse.h"
#include "veripg/errors.h"
#include "veripg/graph.h"

namespace veripg {

namespace {

const std::vector<NodeId> kNoNodes;
const std::vector<const Edge*> kNoEdges;

struct GraphTree {
  const VeriPG& g;
  NodeType type(NodeId id) const { return g.node(id).type; }
  const std::optional<std::string>& name(NodeId id) const { return g.node(id).name; }
  const std::optional<std::string>& value(NodeId id) const { return g.node(id).value; }
  std::vector<NodeId> children(NodeId id) const { return g.ast_children(id); }
};

size_t kind_slot(EdgeKind kind) { return static_cast<size_t>(kind); }

}  // namespace

std::string_view edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::AST: return "AST";
    case EdgeKind::CFG: return "CFG";
    case EdgeKind::DDG: return "DDG";
  }
  return "AST";
}

std::optional<EdgeKind> edge_kind_from_name(std::string_view name) {
  for (EdgeKind kind : kAllEdgeKinds) {
    if (edge_kind_name(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

std::string_view assign_kind_name(AssignKind kind) {
  switch (kind) {
    case AssignKind::blocking: return "blocking";
    case AssignKind::nonblocking: return "nonblocking";
    case AssignKind::continuous: return "continuous";
  }
  return "continuous";
}

VeriPG::VeriPG(std::string module_name, std::vector<GraphNode> nodes, std::vector<Edge> edges,
               std::set<NodeId> common_nodes)
    : module_name_(std::move(module_name)), edges_(std::move(edges)), common_(std::move(common_nodes)) {
  for (GraphNode& n : nodes) {
    NodeId id = n.id;
    nodes_.emplace(id, std::move(n));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  build_indexes();
}

VeriPG::VeriPG(const VeriPG& other)
    : module_name_(other.module_name_),
      nodes_(other.nodes_),
      edges_(other.edges_),
      common_(other.common_) {
  build_indexes();
}

VeriPG& VeriPG::operator=(const VeriPG& other) {
  if (this != &other) {
    module_name_ = other.module_name_;
    nodes_ = other.nodes_;
    edges_ = other.edges_;
    common_ = other.common_;
    build_indexes();
  }
  return *this;
}

const GraphNode& VeriPG::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error("graph has no node " + std::to_string(id));
  }
  return it->second;
}

const std::vector<NodeId>& VeriPG::nodes_of_type(NodeType type) const {
  auto it = type_index_.find(type);
  return it == type_index_.end() ? kNoNodes : it->second;
}

const std::vector<NodeId>& VeriPG::nodes_named(const std::string& name) const {
  auto it = name_index_.find(name);
  return it == name_index_.end() ? kNoNodes : it->second;
}

const std::vector<const Edge*>& VeriPG::out_edges(NodeId id, EdgeKind kind) const {
  const auto& m = out_[kind_slot(kind)];
  auto it = m.find(id);
  return it == m.end() ? kNoEdges : it->second;
}

const std::vector<const Edge*>& VeriPG::in_edges(NodeId id, EdgeKind kind) const {
  const auto& m = in_[kind_slot(kind)];
  auto it = m.find(id);
  return it == m.end() ? kNoEdges : it->second;
}

std::vector<NodeId> VeriPG::ast_children(NodeId id) const {
  std::vector<NodeId> out;
  for (const Edge* e : out_edges(id, EdgeKind::AST)) {
    out.push_back(e->dst);
  }
  return out;
}

bool VeriPG::operator==(const VeriPG& other) const {
  return module_name_ == other.module_name_ && nodes_ == other.nodes_ && edges_ == other.edges_ &&
         common_ == other.common_;
}

void VeriPG::build_indexes() {
  type_index_.clear();
  name_index_.clear();
  for (auto& m : out_) {
    m.clear();
  }
  for (auto& m : in_) {
    m.clear();
  }
  for (const auto& [id, n] : nodes_) {
    type_index_[n.type].push_back(id);
    if (n.name) {
      name_index_[*n.name].push_back(id);
    }
  }
  for (const Edge& e : edges_) {
    out_[kind_slot(e.kind)][e.src].push_back(&e);
    in_[kind_slot(e.kind)][e.dst].push_back(&e);
  }

  signals_ = SignalIndex{};
  GraphTree tree{*this};
  for (NodeId id : common_) {
    detail::StatementFacts facts = detail::statement_facts(tree, id);
    for (const std::string& s : facts.defs) {
      signals_.defs[s].push_back({id, *facts.kind});
      signals_.defined_by[id].insert(s);
    }
    for (const std::string& s : facts.uses) {
      signals_.uses[s].push_back(id);
      signals_.used_by[id].insert(s);
    }
  }
  for (NodeId always : nodes_of_type(NodeType::Always)) {
    std::deque<NodeId> queue = {always};
    std::set<NodeId> seen = {always};
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      signals_.owner[cur] = always;
      for (const Edge* e : out_edges(cur, EdgeKind::CFG)) {
        if (seen.insert(e->dst).second) {
          queue.push_back(e->dst);
        }
      }
    }
  }
}

VeriPG fuse(const Ast& ast, NodeId module, const std::set<NodeId>& common,
            const std::vector<CfgFragment>& fragments, const std::vector<Edge>& ddg_edges) {
  std::vector<GraphNode> nodes;
  std::vector<Edge> edges;
  const AstNode& root = ast.root();
  nodes.push_back({root.id, root.type, root.name, root.lineno, root.value});
  edges.push_back({root.id, module, EdgeKind::AST, std::nullopt, std::nullopt});

  std::vector<NodeId> stack = {module};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const AstNode& n = ast.node(id);
    nodes.push_back({n.id, n.type, n.name, n.lineno, n.value});
    for (NodeId child : n.children) {
      if (common.count(id) == 0 || common.count(child) == 0) {
        edges.push_back({id, child, EdgeKind::AST, std::nullopt, std::nullopt});
      }
      stack.push_back(child);
    }
  }

  auto check = [&common](const Edge& e) {
    if (common.count(e.src) == 0 || common.count(e.dst) == 0) {
      throw InconsistentInput(std::string(edge_kind_name(e.kind)) + " edge " +
                              std::to_string(e.src) + "->" + std::to_string(e.dst) +
                              " touches a node that is not a common node");
    }
  };
  for (const CfgFragment& frag : fragments) {
    for (const Edge& e : frag.edges) {
      check(e);
      edges.push_back(e);
    }
  }
  for (const Edge& e : ddg_edges) {
    check(e);
    edges.push_back(e);
  }
  return VeriPG(ast.node(module).name.value_or(""), std::move(nodes), std::move(edges), common);
}

VeriPG build_veripg(const Ast& ast, NodeId module, std::vector<std::string>* warnings) {
  std::set<NodeId> common = extract_common_nodes(ast, module);
  std::vector<CfgFragment> cfg = build_cfg(ast, module, common, warnings);
  DdgResult ddg = build_ddg(ast, module, common);
  return fuse(ast, module, common, cfg, ddg.edges);
}

std::vector<VeriPG> build_all(const Ast& ast, std::vector<std::string>* warnings) {
  std::vector<VeriPG> out;
  for (NodeId module : ast.modules()) {
    out.push_back(build_veripg(ast, module, warnings));
  }
  return out;
}

}  // namespace veripg
