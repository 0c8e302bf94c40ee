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
#include <map>
#include <set>

#include "defuse.h"
#include "veripg/graph.h"

namespace veripg {

namespace {

struct AstTree {
  const Ast& ast;
  NodeType type(NodeId id) const { return ast.node(id).type; }
  const std::optional<std::string>& name(NodeId id) const { return ast.node(id).name; }
  const std::optional<std::string>& value(NodeId id) const { return ast.node(id).value; }
  const std::vector<NodeId>& children(NodeId id) const { return ast.node(id).children; }
};

// Pre-order ids make a subtree a contiguous id range.
NodeId subtree_end(const Ast& ast, NodeId id) {
  NodeId last = id;
  while (!ast.node(last).children.empty()) {
    last = ast.node(last).children.back();
  }
  return last + 1;
}

using Pending = std::vector<std::pair<NodeId, std::string>>;

class CfgBuilder {
 public:
  CfgBuilder(const Ast& ast, std::vector<std::string>* warnings)
      : ast_(ast), warnings_(warnings) {}

  CfgFragment build(NodeId always) {
    edges_.clear();
    CfgFragment frag;
    frag.owner = always;
    frag.entry = always;
    Pending pending = {{always, "fallthrough"}};
    const AstNode& node = ast_.node(always);
    if (!node.children.empty() && ast_.node(node.children.back()).type != NodeType::SensList) {
      pending = statement(node.children.back(), pending);
    }
    std::set<NodeId> exits;
    for (const auto& p : pending) {
      exits.insert(p.first);
    }
    frag.exits.assign(exits.begin(), exits.end());
    frag.edges.assign(edges_.begin(), edges_.end());
    return frag;
  }

 private:
  void connect(const Pending& from, NodeId to) {
    for (const auto& [src, label] : from) {
      edges_.insert(Edge{src, to, EdgeKind::CFG, label, std::nullopt});
    }
  }

  Pending statement(NodeId id, const Pending& pending) {
    const AstNode& n = ast_.node(id);
    switch (n.type) {
      case NodeType::Block: {
        Pending cur = pending;
        bool any = false;
        for (NodeId child : n.children) {
          if (ast_.node(child).type != NodeType::Opaque) {
            any = true;
          }
          cur = statement(child, cur);
        }
        if (!any && warnings_ != nullptr) {
          warnings_->push_back("MalformedBlock: empty block at line " + std::to_string(n.lineno));
        }
        return cur;
      }
      case NodeType::BlockingSubstitution:
      case NodeType::NonblockingSubstitution:
        connect(pending, id);
        return {{id, "fallthrough"}};
      case NodeType::IfStatement: {
        connect(pending, id);
        Pending out = statement(n.children.at(1), {{id, "true"}});
        if (n.children.size() > 2) {
          Pending other = statement(n.children[2], {{id, "false"}});
          out.insert(out.end(), other.begin(), other.end());
        } else {
          out.push_back({id, "false"});
        }
        return out;
      }
      case NodeType::CaseStatement: {
        connect(pending, id);
        Pending out;
        bool has_default = false;
        for (size_t i = 1; i < n.children.size(); ++i) {
          NodeId item = n.children[i];
          const AstNode& it = ast_.node(item);
          has_default = has_default || it.value == "default";
          connect({{id, "case:" + it.value.value_or("")}}, item);
          Pending tail = statement(it.children.back(), {{item, "fallthrough"}});
          out.insert(out.end(), tail.begin(), tail.end());
        }
        if (!has_default) {
          out.push_back({id, "case:default"});
        }
        return out;
      }
      case NodeType::ForStatement: {
        NodeId init = n.children.at(0);
        NodeId step = n.children.at(2);
        connect(pending, init);
        connect({{init, "fallthrough"}}, id);
        Pending body = statement(n.children.at(3), {{id, "true"}});
        connect(body, step);
        connect({{step, "loop"}}, id);
        return {{id, "false"}};
      }
      default:
        // Opaque statements are elided.
        return pending;
    }
  }

  const Ast& ast_;
  std::vector<std::string>* warnings_;
  std::set<Edge> edges_;
};

}  // namespace

bool is_common_type(NodeType type) {
  switch (type) {
    case NodeType::Always:
    case NodeType::Assign:
    case NodeType::IfStatement:
    case NodeType::CaseStatement:
    case NodeType::CaseItem:
    case NodeType::ForStatement:
    case NodeType::BlockingSubstitution:
    case NodeType::NonblockingSubstitution:
      return true;
    default:
      return is_signal_decl(type);
  }
}

bool is_expression_type(NodeType type) {
  switch (type) {
    case NodeType::Operator:
    case NodeType::Identifier:
    case NodeType::Constant:
    case NodeType::PartSelect:
    case NodeType::Opaque:
      return true;
    default:
      return false;
  }
}

std::set<NodeId> extract_common_nodes(const Ast& ast, NodeId module) {
  std::set<NodeId> out;
  for (NodeId id = module; id < subtree_end(ast, module); ++id) {
    if (is_common_type(ast.node(id).type)) {
      out.insert(id);
    }
  }
  return out;
}

std::vector<CfgFragment> build_cfg(const Ast& ast, NodeId module, const std::set<NodeId>& common,
                                   std::vector<std::string>* warnings) {
  std::vector<CfgFragment> out;
  CfgBuilder builder(ast, warnings);
  for (NodeId id : ast.node(module).children) {
    if (common.count(id) == 0) {
      continue;
    }
    NodeType type = ast.node(id).type;
    if (type == NodeType::Always) {
      out.push_back(builder.build(id));
    } else if (type == NodeType::Assign) {
      out.push_back(CfgFragment{id, id, {id}, {}});
    }
  }
  return out;
}

DdgResult build_ddg(const Ast& ast, NodeId module, const std::set<NodeId>& common) {
  AstTree tree{ast};
  NodeId end = subtree_end(ast, module);

  // Owning always block of every node in the module.
  std::map<NodeId, NodeId> owner;
  for (NodeId id = module; id < end; ++id) {
    if (ast.node(id).type == NodeType::Always) {
      for (NodeId j = id; j < subtree_end(ast, id); ++j) {
        owner[j] = id;
      }
    }
  }

  std::map<std::string, DefUseRecord> records;
  for (NodeId id = module; id < end; ++id) {
    NodeType type = ast.node(id).type;
    if (common.count(id) == 0 && type != NodeType::Instance) {
      continue;
    }
    detail::StatementFacts facts = detail::statement_facts(tree, id);
    for (const std::string& s : facts.defs) {
      DefUseRecord& r = records[s];
      r.signal = s;
      r.defs.push_back({id, *facts.kind});
    }
    for (const std::string& s : facts.uses) {
      DefUseRecord& r = records[s];
      r.signal = s;
      r.uses.push_back(id);
    }
  }

  std::set<Edge> edges;
  for (const auto& [signal, rec] : records) {
    for (const auto& [d, kind] : rec.defs) {
      for (NodeId u : rec.uses) {
        if (common.count(u) == 0) {
          continue;  // instance connections are recorded but not linked
        }
        if (kind == AssignKind::blocking) {
          auto od = owner.find(d);
          auto ou = owner.find(u);
          bool same_block = od != owner.end() && ou != owner.end() && od->second == ou->second;
          // A loop condition is re-evaluated after the init, body and step
          // assignments, so it sits after the whole loop in program order.
          NodeId position = u;
          if (ast.node(u).type == NodeType::ForStatement) {
            while (!ast.node(position).children.empty()) {
              position = ast.node(position).children.back();
            }
          }
          if (same_block && position <= d) {
            continue;
          }
        }
        edges.insert(Edge{d, u, EdgeKind::DDG, std::nullopt, signal});
      }
    }
  }

  DdgResult result;
  for (auto& [signal, rec] : records) {
    result.records.push_back(std::move(rec));
  }
  result.edges.assign(edges.begin(), edges.end());
  return result;
}

}  // namespace veripg
