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

#include "veripg/rule.h"

namespace veripg {

std::string state_name(State s) {
  if (s == kEntryState) {
    return "entry";
  }
  if (s == kBooleanState) {
    return "boolean";
  }
  return std::string(node_type_name(static_cast<NodeType>(s)));
}

std::vector<std::string> state_names(const StateSet& set) {
  std::vector<std::string> out;
  for (size_t i = 0; i < kStateCount; ++i) {
    if (set.test(i)) {
      out.push_back(state_name(static_cast<State>(i)));
    }
  }
  return out;
}

StateSet states_of(std::initializer_list<NodeType> types) {
  StateSet out;
  for (NodeType t : types) {
    out.set(state_of(t));
  }
  return out;
}

StateSet all_node_states() {
  StateSet out;
  for (NodeType t : kAllNodeTypes) {
    out.set(state_of(t));
  }
  return out;
}

std::string_view param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::node_type: return "node_type";
    case ParamKind::edge_kind: return "edge_kind";
    case ParamKind::string: return "string";
    case ParamKind::integer: return "integer";
    case ParamKind::node_set_ref: return "node_set_ref";
  }
  return "string";
}

namespace {

StateSet single(State s) {
  StateSet out;
  out.set(s);
  return out;
}

std::vector<PrimitiveSpec> make_catalog() {
  const StateSet any = all_node_states();
  const StateSet decls = states_of({NodeType::InputDecl, NodeType::OutputDecl,
                                    NodeType::InoutDecl, NodeType::WireDecl, NodeType::RegDecl});
  const StateSet statements =
      states_of({NodeType::Always, NodeType::Assign, NodeType::IfStatement,
                 NodeType::CaseStatement, NodeType::CaseItem, NodeType::ForStatement,
                 NodeType::BlockingSubstitution, NodeType::NonblockingSubstitution}) |
      decls;
  const StateSet signals = decls | states_of({NodeType::Identifier});
  const StateSet branching = states_of({NodeType::IfStatement, NodeType::CaseStatement});
  const StateSet branch_targets =
      states_of({NodeType::IfStatement, NodeType::CaseStatement, NodeType::CaseItem,
                 NodeType::BlockingSubstitution, NodeType::NonblockingSubstitution});
  const StateSet assignments =
      states_of({NodeType::Assign, NodeType::BlockingSubstitution,
                 NodeType::NonblockingSubstitution, NodeType::WireDecl, NodeType::RegDecl});
  const StateSet boolean = single(kBooleanState);
  const StateSet entry = single(kEntryState);

  const ParamSpec edge{"edge_kind", ParamKind::edge_kind, {"AST", "CFG", "DDG"}};
  using C = PrimitiveCategory;
  return {
      {"Node", C::generic, {{"node_type", ParamKind::node_type, {}}}, entry, any},
      {"Children", C::generic, {edge}, any, any},
      {"Descendants", C::generic, {edge}, any, any},
      {"Parents", C::generic, {edge}, any, any},
      {"Branch", C::verilog_specific, {}, branching, branch_targets},
      {"CondVars", C::verilog_specific, {}, branching, states_of({NodeType::Identifier})},
      {"Variable", C::verilog_specific, {}, entry, decls},
      {"LoadStatement", C::verilog_specific, {}, signals | statements, statements},
      {"AssignStatement",
       C::verilog_specific,
       {{"kind", ParamKind::string, {"blocking", "nonblocking", "continuous", "any"}}},
       signals | statements,
       assignments},
      {"SensList", C::verilog_specific, {}, states_of({NodeType::Always}),
       states_of({NodeType::SensList})},
      {"FsmStates", C::verilog_specific, {}, states_of({NodeType::CaseStatement}),
       states_of({NodeType::CaseItem})},
      {"Exist", C::boolean, {}, any, boolean},
      {"Absent", C::boolean, {}, any, boolean},
      {"Count",
       C::boolean,
       {{"cmp", ParamKind::string, {"eq", "ne", "lt", "le", "gt", "ge"}},
        {"n", ParamKind::integer, {}}},
       any,
       boolean},
  };
}

}  // namespace

const std::vector<PrimitiveSpec>& catalog() {
  static const std::vector<PrimitiveSpec> specs = make_catalog();
  return specs;
}

const PrimitiveSpec* find_primitive(std::string_view name) {
  for (const PrimitiveSpec& spec : catalog()) {
    if (spec.name == name) {
      return &spec;
    }
  }
  return nullptr;
}

}  // namespace veripg
