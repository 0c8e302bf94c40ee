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

#include <map>

#include "veripg/validator.h"

namespace veripg {

namespace {

using T = NodeType;

StateSet expressions() {
  return states_of({T::Operator, T::Identifier, T::Constant, T::PartSelect, T::Opaque});
}

// Statement kinds that can head a CFG chain.
StateSet statement_heads() {
  return states_of({T::IfStatement, T::CaseStatement, T::BlockingSubstitution,
                    T::NonblockingSubstitution});
}

StateSet ddg_sources() {
  return states_of({T::BlockingSubstitution, T::NonblockingSubstitution, T::Assign, T::WireDecl,
                    T::RegDecl});
}

StateSet ddg_targets() {
  return states_of({T::Always, T::Assign, T::IfStatement, T::CaseStatement, T::CaseItem,
                    T::ForStatement, T::BlockingSubstitution, T::NonblockingSubstitution,
                    T::WireDecl, T::RegDecl});
}

StateSet ast_successors(NodeType from) {
  const StateSet e = expressions();
  switch (from) {
    case T::Source:
      return states_of({T::ModuleDef});
    case T::ModuleDef:
      return states_of({T::Port, T::Parameter, T::InputDecl, T::OutputDecl, T::InoutDecl,
                        T::WireDecl, T::RegDecl, T::Assign, T::Always, T::Instance, T::Opaque});
    case T::InputDecl:
    case T::OutputDecl:
    case T::InoutDecl:
    case T::WireDecl:
    case T::RegDecl:
    case T::Parameter:
    case T::Assign:
    case T::SensList:
    case T::CaseStatement:
    case T::BlockingSubstitution:
    case T::NonblockingSubstitution:
    case T::Operator:
    case T::PartSelect:
    case T::Instance:
      return e;
    case T::Always:
      return states_of({T::SensList, T::Block, T::Opaque});
    case T::Block:
      return states_of({T::Block, T::IfStatement, T::CaseStatement, T::ForStatement,
                        T::BlockingSubstitution, T::NonblockingSubstitution, T::Opaque});
    case T::IfStatement:
    case T::CaseItem:
    case T::ForStatement:
      return e | states_of({T::Block, T::Opaque});
    default:
      return {};
  }
}

StateSet cfg_successors(NodeType from) {
  const StateSet heads = statement_heads();
  switch (from) {
    case T::Always:
    case T::IfStatement:
    case T::CaseItem:
    case T::ForStatement:
    case T::NonblockingSubstitution:
      return heads;
    case T::CaseStatement:
      return heads | states_of({T::CaseItem});
    case T::BlockingSubstitution:
      return heads | states_of({T::ForStatement});
    default:
      return {};
  }
}

StateSet ddg_successors(NodeType from) {
  return ddg_sources().test(state_of(from)) ? ddg_targets() : StateSet{};
}

}  // namespace

StateSet schema_successors(NodeType from, EdgeKind kind) {
  switch (kind) {
    case EdgeKind::AST: return ast_successors(from);
    case EdgeKind::CFG: return cfg_successors(from);
    case EdgeKind::DDG: return ddg_successors(from);
  }
  return {};
}

StateSet schema_predecessors(NodeType to, EdgeKind kind) {
  StateSet out;
  for (NodeType from : kAllNodeTypes) {
    if (schema_successors(from, kind).test(state_of(to))) {
      out.set(state_of(from));
    }
  }
  return out;
}

StateSet schema_descendants(NodeType from, EdgeKind kind) {
  StateSet seen;
  StateSet frontier = schema_successors(from, kind);
  while ((frontier & ~seen).any()) {
    StateSet next;
    for (NodeType t : kAllNodeTypes) {
      if (frontier.test(state_of(t)) && !seen.test(state_of(t))) {
        seen.set(state_of(t));
        next |= schema_successors(t, kind);
      }
    }
    frontier = next;
  }
  return seen;
}

}  // namespace veripg
