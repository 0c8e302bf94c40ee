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

#include <gtest/gtest.h>

#include <filesystem>

#include "testutil.h"
#include "veripg/errors.h"
#include "veripg/lexer.h"
#include "veripg/parser.h"

namespace veripg {
namespace {

using testing::parse_text;
using testing::read_file;
using testing::source_path;

std::vector<Token> lex(const std::string& text) {
  SourceFile src("<test>", text);
  std::vector<Token> tokens = tokenize(src).tokens;
  EXPECT_EQ(tokens.back().kind, TokenKind::end_of_file);
  tokens.pop_back();
  return tokens;
}

TEST(Lexer, ContinuousAssignmentHasSevenTokens) {
  std::vector<Token> t = lex("assign y = a & b;");
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0].kind, TokenKind::kw_assign);
  EXPECT_EQ(t[4].kind, TokenKind::amp);
  EXPECT_EQ(t[6].kind, TokenKind::semi);
}

TEST(Lexer, CommentsAreDropped) {
  std::vector<Token> t = lex("/* x */ wire w;");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].kind, TokenKind::kw_wire);
  EXPECT_EQ(t[1].text, "w");
}

TEST(Lexer, SizedLiteralIsOneToken) {
  std::vector<Token> t = lex("4'b1010");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].kind, TokenKind::sized_literal);
  EXPECT_EQ(t[0].text, "4'b1010");
}

TEST(Lexer, LineNumbersAndOffsets) {
  std::vector<Token> t = lex("wire a;\n// note\nreg b;");
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t[0].lineno, 1);
  EXPECT_EQ(t[3].lineno, 3);
  EXPECT_EQ(t[4].offset, 20u);
  EXPECT_EQ(t[4].end, 21u);
}

LexErrorKind lex_error_kind(const std::string& text, int* lineno = nullptr) {
  try {
    lex(text);
  } catch (const LexError& e) {
    if (lineno != nullptr) {
      *lineno = e.lineno();
    }
    return e.kind();
  }
  ADD_FAILURE() << "no LexError for: " << text;
  return LexErrorKind::IllegalCharacter;
}

TEST(Lexer, Errors) {
  int line = 0;
  EXPECT_EQ(lex_error_kind("wire a;\n/* open", &line), LexErrorKind::UnterminatedComment);
  EXPECT_EQ(line, 2);
  EXPECT_EQ(lex_error_kind("$display(\"abc"), LexErrorKind::UnterminatedString);
  EXPECT_EQ(lex_error_kind("wire a;\n\n  \x01", &line), LexErrorKind::IllegalCharacter);
  EXPECT_EQ(line, 3);
}

TEST(Parser, EmptyModule) {
  Ast ast = parse_text("module m; endmodule");
  EXPECT_TRUE(ast.diagnostics.empty());
  ASSERT_EQ(ast.nodes.size(), 2u);
  EXPECT_EQ(ast.nodes[0].type, NodeType::Source);
  EXPECT_EQ(ast.nodes[1].type, NodeType::ModuleDef);
  EXPECT_EQ(ast.nodes[1].name, "m");
}

TEST(Parser, SyntaxErrorDropsOnlyThatModule) {
  Ast ast = parse_text(
      "module bad(input a);\n  assign = a;\nendmodule\n"
      "module good(input a, output y);\n  assign y = a;\nendmodule\n");
  ASSERT_TRUE(ast.has_errors());
  EXPECT_EQ(ast.diagnostics.front().lineno, 2);
  std::vector<NodeId> modules = ast.modules();
  ASSERT_EQ(modules.size(), 1u);
  EXPECT_EQ(ast.node(modules[0]).name, "good");
}

TEST(Parser, UnsupportedConstructsBecomeOpaque) {
  Ast ast = parse_text(
      "module m(input clk, output reg q);\n"
      "  initial q = 0;\n"
      "  always @(posedge clk) begin\n"
      "    $display(\"tick\");\n"
      "    q <= ~q;\n"
      "  end\n"
      "endmodule\n");
  EXPECT_FALSE(ast.has_errors());
  size_t opaque = 0;
  for (const AstNode& n : ast.nodes) {
    opaque += n.type == NodeType::Opaque ? 1 : 0;
  }
  EXPECT_EQ(opaque, 2u);
  ASSERT_EQ(ast.diagnostics.size(), 2u);
  EXPECT_EQ(ast.diagnostics[0].severity, Severity::warning);
  EXPECT_EQ(ast.diagnostics[0].lineno, 2);
  EXPECT_EQ(ast.diagnostics[1].lineno, 4);
}

TEST(Parser, AnsiOutputRegDeclaresPortAndVariable) {
  Ast ast = parse_text("module m(output reg [3:0] q); endmodule");
  std::vector<NodeType> kinds;
  for (NodeId c : ast.node(1).children) {
    kinds.push_back(ast.node(c).type);
  }
  EXPECT_EQ(kinds, (std::vector<NodeType>{NodeType::Port, NodeType::OutputDecl,
                                          NodeType::RegDecl}));
}

TEST(Parser, BinaryPrecedence) {
  Ast ast = parse_text("module m; assign y = a + b * c == d; endmodule");
  NodeId assign = 0;
  for (const AstNode& n : ast.nodes) {
    if (n.type == NodeType::Assign) {
      assign = n.id;
    }
  }
  ASSERT_NE(assign, 0u);
  EXPECT_EQ(print_expr(ast.nodes, ast.node(assign).children[1]), "((a + (b * c)) == d)");
}

// Ids are handed out in pre-order: a node's subtree is the id range that
// starts at the node and ends at its last descendant.
void expect_preorder(const Ast& ast) {
  for (const AstNode& n : ast.nodes) {
    NodeId expected = n.id + 1;
    for (NodeId c : n.children) {
      ASSERT_EQ(c, expected) << "node " << n.id;
      NodeId last = c;
      while (!ast.node(last).children.empty()) {
        last = ast.node(last).children.back();
      }
      expected = last + 1;
    }
  }
}

// Structure without line numbers, for comparing a tree with its reprint.
std::string shape(const Ast& ast) {
  std::string out;
  for (const AstNode& n : ast.nodes) {
    out += std::to_string(n.id) + " " + std::string(node_type_name(n.type)) + " " +
           n.name.value_or("-") + " " + n.value.value_or("-") + " [";
    for (NodeId c : n.children) {
      out += std::to_string(c) + ",";
    }
    out += "]\n";
  }
  return out;
}

TEST(Parser, CorpusReprintsToTheSameTree) {
  for (const std::string& path : testing::corpus_designs()) {
    Ast first = testing::parse_path(path);
    ASSERT_FALSE(first.has_errors()) << path;
    expect_preorder(first);
    Ast second = parse_text(print_verilog(first));
    EXPECT_FALSE(second.has_errors()) << path;
    EXPECT_EQ(shape(first), shape(second)) << path;
  }
}

TEST(Parser, CoverageCorpusMatchesGoldenAst) {
  std::vector<std::string> designs =
      testing::list_files(source_path("data/corpus/coverage"), ".v");
  ASSERT_GE(designs.size(), 12u);
  std::set<NodeType> seen;
  for (const std::string& path : designs) {
    Ast ast = testing::parse_path(path);
    EXPECT_TRUE(ast.diagnostics.empty()) << path;
    for (const AstNode& n : ast.nodes) {
      EXPECT_NE(n.type, NodeType::Opaque) << path << " node " << n.id;
      seen.insert(n.type);
    }
    std::string stem = std::filesystem::path(path).stem().string();
    EXPECT_EQ(ast_to_json(ast), read_file(source_path("data/golden/ast/" + stem + ".json")))
        << path;
  }
  // Every node kind except Opaque shows up somewhere in the coverage set.
  EXPECT_EQ(seen.size(), kNodeTypeCount - 1);
}

TEST(Parser, NodeSpansCoverTheirText) {
  std::string text =
      "module m(input clk, input a, output reg q, output y);\n"
      "  assign y = ~a;\n"
      "  always @(posedge clk) begin\n"
      "    if (a) q <= 1'b0;\n"
      "  end\n"
      "endmodule\n";
  Ast ast = parse_text(text);
  auto span = [&](NodeType type) {
    for (const AstNode& n : ast.nodes) {
      if (n.type == type) {
        return text.substr(n.begin_offset, n.end_offset - n.begin_offset);
      }
    }
    return std::string("<missing>");
  };
  // A continuous assignment may share its semicolon with siblings.
  EXPECT_EQ(span(NodeType::Assign), "assign y = ~a");
  EXPECT_EQ(span(NodeType::NonblockingSubstitution), "q <= 1'b0;");
  EXPECT_EQ(span(NodeType::IfStatement), "if (a) q <= 1'b0;");
  EXPECT_EQ(span(NodeType::Block), "begin\n    if (a) q <= 1'b0;\n  end");
}

}  // namespace
}  // namespace veripg
