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

#include "oracle.h"

#include <sstream>
#include <tuple>

#include "testutil.h"

namespace veripg::testing {

const SchemaFsm& fsm() {
  static const SchemaFsm machine = build_fsm(catalog());
  return machine;
}

VeriPG graph_of(const std::string& text) {
  Ast ast = parse_text(text);
  if (ast.has_errors()) {
    throw std::runtime_error("test design does not parse");
  }
  return build_veripg(ast, ast.modules().at(0));
}

bool is_decl(NodeType t) {
  return t == NodeType::InputDecl || t == NodeType::OutputDecl || t == NodeType::InoutDecl ||
         t == NodeType::WireDecl || t == NodeType::RegDecl;
}

bool is_expr(NodeType t) {
  return t == NodeType::Operator || t == NodeType::Identifier || t == NodeType::Constant ||
         t == NodeType::PartSelect || t == NodeType::Opaque;
}

// Every concrete call the catalog allows, with a spread of Count arguments.
std::vector<PrimitiveCall> all_calls() {
  std::vector<PrimitiveCall> out;
  for (const PrimitiveSpec& spec : catalog()) {
    if (spec.params.empty()) {
      out.push_back({spec.name, {}, nullptr});
    } else if (spec.params[0].kind == ParamKind::node_type) {
      for (NodeType t : kAllNodeTypes) {
        out.push_back({spec.name, {std::string(node_type_name(t))}, nullptr});
      }
    } else if (spec.name == "Count") {
      for (const std::string& cmp : spec.params[0].choices) {
        for (std::int64_t n : {0, 1, 2, 5}) {
          out.push_back({spec.name, {cmp, n}, nullptr});
        }
      }
    } else {
      for (const std::string& choice : spec.params[0].choices) {
        out.push_back({spec.name, {choice}, nullptr});
      }
    }
  }
  return out;
}

// Small designs for primitives whose corpus users are all too large.
const char* kSmallFsm =
    "module fsm(input clk, input go, output reg busy);\n"
    "  reg [1:0] st;\n"
    "  always @(posedge clk)\n"
    "    case (st)\n"
    "      2'd0: if (go) st <= 2'd1;\n"
    "      2'd1: st <= 2'd0;\n"
    "      default: st <= 2'd0;\n"
    "    endcase\n"
    "  always @* case (go) 1'b1: busy = 1'b1; endcase\n"
    "endmodule\n";

const char* kSmallLoop =
    "module loop(input [3:0] v, output reg [2:0] n);\n"
    "  integer i;\n"
    "  always @* begin\n"
    "    n = 3'd0;\n"
    "    for (i = 0; i < 4; i = i + 1) if (v[i]) n = n + 1;\n"
    "  end\n"
    "endmodule\n";

std::vector<VeriPG> small_graphs() {
  std::vector<VeriPG> out = {graph_of(kSmallFsm), graph_of(kSmallLoop)};
  for (const std::string& path : testing::corpus_designs()) {
    Ast ast = testing::parse_path(path);
    for (VeriPG& g : build_all(ast)) {
      if (g.nodes().size() <= 50) {
        out.push_back(std::move(g));
      }
    }
  }
  return out;
}

namespace {

// Node -> enclosing Always, taken from the parsed tree rather than the graph.
std::map<NodeId, NodeId> always_owner(const Ast& ast) {
  std::map<NodeId, NodeId> owner;
  for (const AstNode& n : ast.nodes) {
    if (n.type != NodeType::Always) {
      continue;
    }
    std::vector<NodeId> stack = {n.id};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      owner[id] = n.id;
      for (NodeId c : ast.node(id).children) {
        stack.push_back(c);
      }
    }
  }
  return owner;
}

// Program-order position of a use. Loop conditions are evaluated after
// every part of the loop, so they sit at the last node of the loop.
NodeId use_position(const Ast& ast, NodeId id) {
  if (ast.node(id).type != NodeType::ForStatement) {
    return id;
  }
  NodeId last = id;
  while (!ast.node(last).children.empty()) {
    last = ast.node(last).children.back();
  }
  return last;
}

std::string edge_text(const Edge& e) {
  return std::to_string(e.src) + "->" + std::to_string(e.dst);
}

}  // namespace

std::vector<std::string> graph_invariant_violations(const Ast& ast, NodeId module) {
  std::vector<std::string> bad;
  VeriPG g = build_veripg(ast, module);
  std::map<NodeId, NodeId> owner = always_owner(ast);

  // Syntax edges keep every parse-tree link except those joining two common
  // nodes, which control flow carries instead.
  std::set<std::pair<NodeId, NodeId>> syntax;
  for (const Edge& e : g.edges()) {
    if (e.kind == EdgeKind::AST) {
      syntax.insert({e.src, e.dst});
    }
  }
  for (const auto& [id, node] : g.nodes()) {
    if (node.type != ast.node(id).type) {
      bad.push_back("node " + std::to_string(id) + " has the wrong type");
    }
    if (id == 0) {
      continue;
    }
    for (NodeId c : ast.node(id).children) {
      bool both = g.is_common(id) && g.is_common(c);
      if (syntax.count({id, c}) != (both ? 0u : 1u)) {
        bad.push_back("syntax edge " + std::to_string(id) + "->" + std::to_string(c));
      }
    }
  }
  if (g.nodes().size() != 1 + subtree_size(ast, module)) {
    bad.push_back("node count differs from the module subtree");
  }

  std::set<std::tuple<NodeId, NodeId, std::string>> actual;
  for (const Edge& e : g.edges()) {
    if (e.kind == EdgeKind::CFG) {
      if (!g.is_common(e.src) || !g.is_common(e.dst)) {
        bad.push_back("control edge on a non-common node " + edge_text(e));
      }
      if (!owner.count(e.src) || !owner.count(e.dst) || owner[e.src] != owner[e.dst]) {
        bad.push_back("control edge crosses always blocks " + edge_text(e));
      }
      if (!e.condition) {
        bad.push_back("control edge without a label " + edge_text(e));
      }
    } else if (e.kind == EdgeKind::DDG) {
      if (!g.is_common(e.src) || !g.is_common(e.dst)) {
        bad.push_back("data edge on a non-common node " + edge_text(e));
      }
      if (!e.dep_signal) {
        bad.push_back("data edge without a signal " + edge_text(e));
        continue;
      }
      actual.insert({e.src, e.dst, *e.dep_signal});
      // A blocking def never reaches an earlier use in its own always block.
      bool blocking = g.node(e.src).type == NodeType::BlockingSubstitution;
      if (blocking && owner.count(e.src) && owner.count(e.dst) &&
          owner[e.src] == owner[e.dst] && use_position(ast, e.dst) <= e.src) {
        bad.push_back("blocking def reaches an earlier use " + edge_text(e));
      }
    }
  }

  // Every def/use pair that the ordering rule allows must be linked.
  DdgResult ddg = build_ddg(ast, module, extract_common_nodes(ast, module));
  std::set<std::tuple<NodeId, NodeId, std::string>> expected;
  for (const DefUseRecord& r : ddg.records) {
    for (const auto& [d, kind] : r.defs) {
      for (NodeId u : r.uses) {
        if (!g.is_common(u)) {
          continue;
        }
        bool same = owner.count(d) && owner.count(u) && owner[d] == owner[u];
        if (kind == AssignKind::blocking && same && use_position(ast, u) <= d) {
          continue;
        }
        expected.insert({d, u, r.signal});
      }
    }
  }
  if (actual != expected) {
    bad.push_back("data edges differ from the def/use records");
  }

  std::string json = export_graph(g, GraphFormat::json);
  VeriPG back = import_graph(json);
  if (!(back == g) || export_graph(back, GraphFormat::json) != json ||
      back.signals() != g.signals()) {
    bad.push_back("JSON round trip changed the graph");
  }
  return bad;
}

}  // namespace veripg::testing
