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

#include <string>

#include "veripg/ast.h"
#include "veripg/source.h"

namespace veripg {

/// Parses the RTL subset into an AST rooted at a Source node.
///
/// A syntax error outside procedural statements drops the enclosing module
/// and is reported as an error diagnostic; parsing resumes after its
/// `endmodule`. Errors inside a statement are recovered at the next `;` or
/// `end` and leave an Opaque node plus a warning. Constructs outside the
/// subset become Opaque nodes with a warning. Lexical errors propagate as
/// LexError.
Ast parse(const SourceFile& src);

/// Verilog text for a subset AST. Expressions are fully parenthesised, so
/// parsing the output yields a structurally identical tree.
std::string print_verilog(const Ast& ast);

/// Canonical text of one expression subtree.
std::string print_expr(const std::vector<AstNode>& nodes, NodeId id);

/// AST debug dump: {"diagnostics": [...], "nodes": [{id, type, name, lineno,
/// value, children}]}, nodes sorted by id.
std::string ast_to_json(const Ast& ast);

}  // namespace veripg
