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

// Statement-level def/use extraction shared by DDG construction (over the
// parsed tree) and the signal index (over a finished graph).

#pragma once

#include <set>
#include <string>
#include <vector>

#include "veripg/ast.h"
#include "veripg/graph.h"

namespace veripg::detail {

struct StatementFacts {
  std::optional<AssignKind> kind;  // set when the statement defines signals
  std::vector<std::string> defs;
  std::vector<std::string> uses;
};

inline void push_unique(std::vector<std::string>& out, const std::string& name) {
  for (const std::string& s : out) {
    if (s == name) {
      return;
    }
  }
  out.push_back(name);
}

// Tree must provide type(id), name(id), value(id) and children(id).
template <typename Tree>
void collect_reads(const Tree& tree, NodeId id, std::vector<std::string>& out) {
  switch (tree.type(id)) {
    case NodeType::Identifier:
      push_unique(out, *tree.name(id));
      return;
    case NodeType::Opaque:
    case NodeType::Constant:
      return;
    default:
      for (NodeId child : tree.children(id)) {
        collect_reads(tree, child, out);
      }
  }
}

// Base identifiers written by an assignment target. Index expressions of
// selects are reads.
template <typename Tree>
void collect_writes(const Tree& tree, NodeId id, std::vector<std::string>& defs,
                    std::vector<std::string>& uses) {
  switch (tree.type(id)) {
    case NodeType::Identifier:
      push_unique(defs, *tree.name(id));
      return;
    case NodeType::PartSelect: {
      std::vector<NodeId> kids = tree.children(id);
      collect_writes(tree, kids.at(0), defs, uses);
      for (size_t i = 1; i < kids.size(); ++i) {
        collect_reads(tree, kids[i], uses);
      }
      return;
    }
    case NodeType::Operator:
      if (tree.value(id) == std::optional<std::string>("{}")) {
        for (NodeId child : tree.children(id)) {
          collect_writes(tree, child, defs, uses);
        }
        return;
      }
      collect_reads(tree, id, uses);
      return;
    default:
      return;
  }
}

template <typename Tree>
std::vector<NodeId> expression_children(const Tree& tree, NodeId id) {
  std::vector<NodeId> out;
  for (NodeId child : tree.children(id)) {
    if (is_expression_type(tree.type(child))) {
      out.push_back(child);
    }
  }
  return out;
}

template <typename Tree>
StatementFacts statement_facts(const Tree& tree, NodeId id) {
  StatementFacts facts;
  NodeType type = tree.type(id);
  switch (type) {
    case NodeType::Assign:
    case NodeType::BlockingSubstitution:
    case NodeType::NonblockingSubstitution: {
      std::vector<NodeId> exprs = expression_children(tree, id);
      facts.kind = type == NodeType::Assign                 ? AssignKind::continuous
                   : type == NodeType::BlockingSubstitution ? AssignKind::blocking
                                                            : AssignKind::nonblocking;
      if (!exprs.empty()) {
        collect_writes(tree, exprs[0], facts.defs, facts.uses);
      }
      for (size_t i = 1; i < exprs.size(); ++i) {
        collect_reads(tree, exprs[i], facts.uses);
      }
      break;
    }
    case NodeType::Always:
      for (NodeId child : tree.children(id)) {
        if (tree.type(child) == NodeType::SensList) {
          for (NodeId e : tree.children(child)) {
            collect_reads(tree, e, facts.uses);
          }
        }
      }
      break;
    default:
      if (is_signal_decl(type)) {
        std::vector<NodeId> exprs = expression_children(tree, id);
        if (!exprs.empty()) {
          facts.kind = AssignKind::continuous;
          push_unique(facts.defs, *tree.name(id));
          for (NodeId e : exprs) {
            collect_reads(tree, e, facts.uses);
          }
        }
        break;
      }
      for (NodeId e : expression_children(tree, id)) {
        collect_reads(tree, e, facts.uses);
      }
      break;
  }
  return facts;
}

}  // namespace veripg::detail
