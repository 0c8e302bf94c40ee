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

#include "veripg/parser.h"

#include <algorithm>
#include <utility>

#include "veripg/errors.h"
#include "veripg/lexer.h"

namespace veripg {

namespace {

int binary_precedence(TokenKind kind) {
  switch (kind) {
    case TokenKind::pipepipe: return 1;
    case TokenKind::ampamp: return 2;
    case TokenKind::pipe: return 3;
    case TokenKind::caret:
    case TokenKind::xnor: return 4;
    case TokenKind::amp: return 5;
    case TokenKind::eqeq:
    case TokenKind::neq:
    case TokenKind::case_eq:
    case TokenKind::case_neq: return 6;
    case TokenKind::lt:
    case TokenKind::le:
    case TokenKind::gt:
    case TokenKind::ge: return 7;
    case TokenKind::shl:
    case TokenKind::shr:
    case TokenKind::ashl:
    case TokenKind::ashr: return 8;
    case TokenKind::plus:
    case TokenKind::minus: return 9;
    case TokenKind::star:
    case TokenKind::slash:
    case TokenKind::percent: return 10;
    case TokenKind::power: return 11;
    default: return 0;
  }
}

bool is_unary_operator(TokenKind kind) {
  switch (kind) {
    case TokenKind::plus:
    case TokenKind::minus:
    case TokenKind::bang:
    case TokenKind::tilde:
    case TokenKind::amp:
    case TokenKind::nand:
    case TokenKind::pipe:
    case TokenKind::nor:
    case TokenKind::caret:
    case TokenKind::xnor:
      return true;
    default:
      return false;
  }
}

bool is_direction(TokenKind kind) {
  return kind == TokenKind::kw_input || kind == TokenKind::kw_output ||
         kind == TokenKind::kw_inout;
}

std::string operator_spelling(const Token& tok) {
  return tok.kind == TokenKind::xnor ? "~^" : tok.text;
}

class Parser {
 public:
  explicit Parser(const SourceFile& src) : src_(src) {
    TokenStream stream = tokenize(src);
    toks_ = std::move(stream.tokens);
    for (const LexWarning& w : stream.warnings) {
      diags_.push_back({Severity::warning, w.lineno, w.message});
    }
  }

  Ast run() {
    NodeId root = add(NodeType::Source, toks_.front());
    nodes_[root].lineno = 1;
    nodes_[root].begin_offset = 0;
    while (!at(TokenKind::end_of_file)) {
      if (at(TokenKind::kw_module)) {
        size_t mark = nodes_.size();
        try {
          NodeId module = parse_module();
          nodes_[root].children.push_back(module);
        } catch (const SyntaxError& e) {
          nodes_.resize(mark);
          diags_.push_back({Severity::error, e.lineno(),
                            std::string("module dropped: ") + e.what()});
          skip_past(TokenKind::kw_endmodule);
        }
      } else {
        diags_.push_back({Severity::error, peek().lineno,
                          "expected 'module', found '" + found() + "'"});
        while (!at(TokenKind::end_of_file) && !at(TokenKind::kw_module)) {
          ++pos_;
        }
      }
    }
    nodes_[root].end_offset = src_.text().size();
    return finish();
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool accept(TokenKind kind) {
    if (at(kind)) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string found() const {
    return at(TokenKind::end_of_file) ? std::string("end of file") : peek().text;
  }
  const Token& expect(TokenKind kind, std::string_view what) {
    if (!at(kind)) {
      throw SyntaxError(peek().lineno, std::string(what), found());
    }
    return toks_[pos_++];
  }
  size_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].end; }
  int prev_line() const { return pos_ == 0 ? 1 : toks_[pos_ - 1].lineno; }

  void warn(int lineno, std::string message) {
    diags_.push_back({Severity::warning, lineno, std::move(message)});
  }

  void skip_past(TokenKind kind) {
    while (!at(TokenKind::end_of_file) && !at(kind)) {
      ++pos_;
    }
    accept(kind);
  }

  // Skips a balanced (...) / [...] / {...} group starting at the opener.
  void skip_group() {
    int depth = 0;
    do {
      TokenKind k = peek().kind;
      if (k == TokenKind::lparen || k == TokenKind::lbracket || k == TokenKind::lbrace) {
        ++depth;
      } else if (k == TokenKind::rparen || k == TokenKind::rbracket ||
                 k == TokenKind::rbrace) {
        --depth;
      } else if (k == TokenKind::end_of_file) {
        throw SyntaxError(peek().lineno, "closing bracket", found());
      }
      ++pos_;
    } while (depth > 0);
  }

  // Skips to just past the next ';' at bracket depth zero.
  void skip_to_semi() {
    while (!at(TokenKind::semi)) {
      if (at(TokenKind::end_of_file) || at(TokenKind::kw_endmodule)) {
        throw SyntaxError(peek().lineno, "';'", found());
      }
      if (at(TokenKind::lparen) || at(TokenKind::lbracket) || at(TokenKind::lbrace)) {
        skip_group();
      } else {
        ++pos_;
      }
    }
    ++pos_;
  }

  // Skips from an opening keyword to its matching closing keyword.
  void skip_keyword_block(std::string_view open, std::string_view close) {
    int depth = 0;
    while (!at(TokenKind::end_of_file)) {
      const std::string& text = peek().text;
      if (text == open) {
        ++depth;
      } else if (text == close) {
        --depth;
        if (depth == 0) {
          ++pos_;
          return;
        }
      }
      ++pos_;
    }
    throw SyntaxError(peek().lineno, "'" + std::string(close) + "'", found());
  }

  // ---- node helpers --------------------------------------------------------

  NodeId add(NodeType type, const Token& first, std::optional<std::string> name = {},
             std::optional<std::string> value = {}) {
    AstNode node;
    node.id = static_cast<NodeId>(nodes_.size());
    node.type = type;
    node.name = std::move(name);
    node.value = std::move(value);
    node.lineno = first.lineno;
    node.begin_offset = first.offset;
    node.end_offset = first.end;
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
  }

  void close(NodeId id) { nodes_[id].end_offset = std::max(nodes_[id].end_offset, prev_end()); }

  void attach(NodeId parent, NodeId child) { nodes_[parent].children.push_back(child); }

  NodeId add_opaque(const Token& first, std::string_view what) {
    int last = prev_line();
    std::string value = std::string(what) + ":" + std::to_string(first.lineno) + "-" +
                        std::to_string(std::max(last, first.lineno));
    NodeId id = add(NodeType::Opaque, first, std::nullopt, value);
    close(id);
    warn(first.lineno, "unsupported construct '" + std::string(what) + "' kept as opaque");
    return id;
  }

  // ---- module level --------------------------------------------------------

  NodeId parse_module() {
    const Token& kw = expect(TokenKind::kw_module, "'module'");
    const Token& name = expect(TokenKind::ident, "module name");
    NodeId module = add(NodeType::ModuleDef, kw, name.text);

    std::vector<NodeId> ports;
    std::vector<NodeId> header_items;
    if (accept(TokenKind::hash)) {
      expect(TokenKind::lparen, "'('");
      while (!at(TokenKind::rparen)) {
        parse_parameter(/*in_header=*/true, header_items);
        if (!at(TokenKind::rparen)) {
          expect(TokenKind::comma, "','");
        }
      }
      expect(TokenKind::rparen, "')'");
    }
    if (accept(TokenKind::lparen)) {
      if (is_direction(peek().kind)) {
        while (!at(TokenKind::rparen)) {
          parse_port_decl(/*ansi=*/true, ports, header_items);
        }
      } else {
        while (!at(TokenKind::rparen)) {
          const Token& port = expect(TokenKind::ident, "port name");
          NodeId id = add(NodeType::Port, port, port.text);
          close(id);
          ports.push_back(id);
          if (!at(TokenKind::rparen)) {
            expect(TokenKind::comma, "','");
          }
        }
      }
      expect(TokenKind::rparen, "')'");
    }
    expect(TokenKind::semi, "';'");

    for (NodeId id : ports) {
      attach(module, id);
    }
    for (NodeId id : header_items) {
      attach(module, id);
    }
    while (!at(TokenKind::kw_endmodule)) {
      if (at(TokenKind::end_of_file)) {
        throw SyntaxError(peek().lineno, "'endmodule'", found());
      }
      std::vector<NodeId> items;
      parse_module_item(items);
      for (NodeId id : items) {
        attach(module, id);
      }
    }
    expect(TokenKind::kw_endmodule, "'endmodule'");
    close(module);
    return module;
  }

  void parse_module_item(std::vector<NodeId>& out) {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::kw_input:
      case TokenKind::kw_output:
      case TokenKind::kw_inout: {
        std::vector<NodeId> unused_ports;
        parse_port_decl(/*ansi=*/false, unused_ports, out);
        return;
      }
      case TokenKind::kw_wire:
      case TokenKind::kw_reg:
      case TokenKind::kw_integer:
        parse_net_decl(out);
        return;
      case TokenKind::kw_parameter:
      case TokenKind::kw_localparam:
        parse_parameter(/*in_header=*/false, out);
        expect(TokenKind::semi, "';'");
        return;
      case TokenKind::kw_assign:
        parse_assign(out);
        return;
      case TokenKind::kw_always:
        out.push_back(parse_always());
        return;
      case TokenKind::ident:
        if (peek(1).kind == TokenKind::ident || peek(1).kind == TokenKind::hash) {
          parse_instances(out);
          return;
        }
        throw SyntaxError(tok.lineno, "module item", tok.text);
      case TokenKind::semi:
        ++pos_;
        return;
      case TokenKind::kw_other:
        out.push_back(parse_opaque_item());
        return;
      default:
        throw SyntaxError(tok.lineno, "module item", found());
    }
  }

  NodeId parse_opaque_item() {
    Token first = peek();
    const std::string& kw = first.text;
    if (kw == "initial") {
      ++pos_;
      discard_statement();
    } else if (kw == "function") {
      skip_keyword_block("function", "endfunction");
    } else if (kw == "task") {
      skip_keyword_block("task", "endtask");
    } else if (kw == "generate") {
      skip_keyword_block("generate", "endgenerate");
    } else if (kw == "specify") {
      skip_keyword_block("specify", "endspecify");
    } else {
      skip_to_semi();
    }
    return add_opaque(first, kw);
  }

  // Optional `signed`, range and drive/delay noise in front of declared names.
  std::string parse_decl_modifiers() {
    std::string mods;
    auto append = [&mods](const std::string& part) {
      if (!mods.empty()) {
        mods += ' ';
      }
      mods += part;
    };
    if (accept(TokenKind::kw_signed)) {
      append("signed");
    }
    if (at(TokenKind::lbracket)) {
      append(range_text());
    }
    return mods;
  }

  // Canonical text of a bracketed group: token texts without blanks.
  std::string range_text() {
    size_t start = pos_;
    skip_group();
    std::string text;
    for (size_t i = start; i < pos_; ++i) {
      text += toks_[i].text;
    }
    return text;
  }

  std::string unpacked_dims() {
    std::string dims;
    while (at(TokenKind::lbracket)) {
      dims += range_text();
    }
    return dims;
  }

  static std::optional<std::string> decl_value(const std::string& mods,
                                               const std::string& dims) {
    std::string value = mods;
    if (!dims.empty()) {
      if (!value.empty()) {
        value += ' ';
      }
      value += "array" + dims;
    }
    if (value.empty()) {
      return std::nullopt;
    }
    return value;
  }

  void parse_port_decl(bool ansi, std::vector<NodeId>& ports, std::vector<NodeId>& out) {
    const Token& dir = toks_[pos_++];
    NodeType type = dir.kind == TokenKind::kw_input    ? NodeType::InputDecl
                    : dir.kind == TokenKind::kw_output ? NodeType::OutputDecl
                                                       : NodeType::InoutDecl;
    bool is_reg = false;
    if (accept(TokenKind::kw_reg)) {
      is_reg = true;
    } else {
      accept(TokenKind::kw_wire);
    }
    std::string mods = parse_decl_modifiers();
    while (true) {
      const Token& name = expect(TokenKind::ident, "port name");
      std::string dims = unpacked_dims();
      if (ansi) {
        NodeId port = add(NodeType::Port, name, name.text);
        close(port);
        ports.push_back(port);
      }
      NodeId decl = add(type, name, name.text, decl_value(mods, dims));
      nodes_[decl].begin_offset = dir.offset;
      close(decl);
      out.push_back(decl);
      if (is_reg) {
        NodeId reg = add(NodeType::RegDecl, name, name.text, decl_value(mods, dims));
        nodes_[reg].begin_offset = dir.offset;
        close(reg);
        out.push_back(reg);
      }
      if (ansi) {
        if (at(TokenKind::rparen)) {
          return;
        }
        expect(TokenKind::comma, "','");
        if (is_direction(peek().kind)) {
          return;
        }
      } else {
        if (accept(TokenKind::semi)) {
          return;
        }
        expect(TokenKind::comma, "','");
      }
    }
  }

  void parse_net_decl(std::vector<NodeId>& out) {
    const Token& kw = toks_[pos_++];
    NodeType type = kw.kind == TokenKind::kw_wire ? NodeType::WireDecl : NodeType::RegDecl;
    std::string mods = kw.kind == TokenKind::kw_integer ? "integer" : parse_decl_modifiers();
    if (at(TokenKind::hash)) {
      warn(peek().lineno, "net delay ignored");
      ++pos_;
      if (at(TokenKind::lparen)) {
        skip_group();
      } else {
        ++pos_;
      }
    }
    while (true) {
      const Token& name = expect(TokenKind::ident, "signal name");
      std::string dims = unpacked_dims();
      NodeId decl = add(type, name, name.text, decl_value(mods, dims));
      nodes_[decl].begin_offset = kw.offset;
      if (accept(TokenKind::eq)) {
        attach(decl, parse_expr());
      }
      close(decl);
      out.push_back(decl);
      if (accept(TokenKind::semi)) {
        return;
      }
      expect(TokenKind::comma, "','");
    }
  }

  void parse_parameter(bool in_header, std::vector<NodeId>& out) {
    std::string kind = "parameter";
    size_t begin = peek().offset;
    if (at(TokenKind::kw_parameter) || at(TokenKind::kw_localparam)) {
      kind = toks_[pos_++].text;
    } else if (!in_header) {
      throw SyntaxError(peek().lineno, "'parameter'", found());
    }
    accept(TokenKind::kw_integer);
    std::string mods = parse_decl_modifiers();
    std::string value = mods.empty() ? kind : kind + " " + mods;
    while (true) {
      const Token& name = expect(TokenKind::ident, "parameter name");
      NodeId param = add(NodeType::Parameter, name, name.text, value);
      nodes_[param].begin_offset = begin;
      expect(TokenKind::eq, "'='");
      attach(param, parse_expr());
      close(param);
      out.push_back(param);
      if (in_header) {
        if (at(TokenKind::rparen)) {
          return;
        }
        if (peek().kind == TokenKind::comma &&
            (peek(1).kind == TokenKind::kw_parameter || peek(1).kind == TokenKind::kw_localparam)) {
          return;
        }
        expect(TokenKind::comma, "','");
      } else {
        if (at(TokenKind::semi)) {
          return;
        }
        expect(TokenKind::comma, "','");
      }
    }
  }

  void skip_delay() {
    warn(peek().lineno, "delay control ignored");
    ++pos_;  // '#'
    if (at(TokenKind::lparen)) {
      skip_group();
    } else {
      ++pos_;
    }
  }

  void parse_assign(std::vector<NodeId>& out) {
    const Token& kw = expect(TokenKind::kw_assign, "'assign'");
    if (at(TokenKind::hash)) {
      skip_delay();
    }
    bool first = true;
    while (true) {
      NodeId assign = add(NodeType::Assign, first ? kw : peek());
      first = false;
      attach(assign, parse_lvalue());
      expect(TokenKind::eq, "'='");
      attach(assign, parse_expr());
      close(assign);
      out.push_back(assign);
      if (accept(TokenKind::semi)) {
        return;
      }
      expect(TokenKind::comma, "','");
    }
  }

  NodeId parse_always() {
    Token kw = expect(TokenKind::kw_always, "'always'");
    if (!at(TokenKind::at)) {
      discard_statement();
      return add_opaque(kw, "always");
    }
    NodeId always = add(NodeType::Always, kw);
    ++pos_;  // '@'
    if (at(TokenKind::star)) {
      NodeId sens = add(NodeType::SensList, toks_[pos_++], std::nullopt, "*");
      attach(always, sens);
    } else {
      expect(TokenKind::lparen, "'('");
      if (at(TokenKind::star)) {
        NodeId sens = add(NodeType::SensList, toks_[pos_++], std::nullopt, "*");
        attach(always, sens);
      } else {
        while (true) {
          const Token& first = peek();
          std::string edge = "level";
          if (accept(TokenKind::kw_posedge)) {
            edge = "posedge";
          } else if (accept(TokenKind::kw_negedge)) {
            edge = "negedge";
          }
          NodeId sens = add(NodeType::SensList, first, std::nullopt, edge);
          attach(sens, parse_expr());
          close(sens);
          attach(always, sens);
          if (!accept(TokenKind::kw_or) && !accept(TokenKind::comma)) {
            break;
          }
        }
      }
      expect(TokenKind::rparen, "')'");
    }
    attach(always, parse_statement_recovering());
    close(always);
    return always;
  }

  void parse_instances(std::vector<NodeId>& out) {
    const Token& module_type = expect(TokenKind::ident, "module name");
    if (at(TokenKind::hash)) {
      ++pos_;
      skip_group();  // parameter overrides are not modelled
    }
    while (true) {
      const Token& name = expect(TokenKind::ident, "instance name");
      NodeId inst = add(NodeType::Instance, name, name.text, module_type.text);
      nodes_[inst].begin_offset = module_type.offset;
      unpacked_dims();
      expect(TokenKind::lparen, "'('");
      while (!at(TokenKind::rparen)) {
        if (accept(TokenKind::dot)) {
          expect(TokenKind::ident, "port name");
          expect(TokenKind::lparen, "'('");
          if (!at(TokenKind::rparen)) {
            attach(inst, parse_expr());
          }
          expect(TokenKind::rparen, "')'");
        } else {
          attach(inst, parse_expr());
        }
        if (!at(TokenKind::rparen)) {
          expect(TokenKind::comma, "','");
        }
      }
      expect(TokenKind::rparen, "')'");
      close(inst);
      out.push_back(inst);
      if (accept(TokenKind::semi)) {
        return;
      }
      expect(TokenKind::comma, "','");
    }
  }

  // ---- statements ----------------------------------------------------------

  void discard_statement() {
    size_t mark = nodes_.size();
    size_t diag_mark = diags_.size();
    parse_statement_recovering();
    nodes_.resize(mark);
    diags_.resize(diag_mark);
  }

  NodeId parse_statement_recovering() {
    size_t mark = nodes_.size();
    size_t start = pos_;
    try {
      return parse_statement();
    } catch (const SyntaxError& e) {
      nodes_.resize(mark);
      Token first = toks_[start];
      int depth = 0;
      if (pos_ < start) {
        pos_ = start;
      }
      while (!at(TokenKind::end_of_file)) {
        TokenKind k = peek().kind;
        if (depth == 0 && (k == TokenKind::kw_end || k == TokenKind::kw_endcase ||
                           k == TokenKind::kw_endmodule)) {
          break;
        }
        if (k == TokenKind::lparen || k == TokenKind::lbracket || k == TokenKind::lbrace) {
          ++depth;
        } else if ((k == TokenKind::rparen || k == TokenKind::rbracket ||
                    k == TokenKind::rbrace) && depth > 0) {
          --depth;
        }
        ++pos_;
        if (k == TokenKind::semi && depth == 0) {
          break;
        }
      }
      warn(e.lineno(), std::string("statement skipped: ") + e.what());
      int last = std::max(prev_line(), first.lineno);
      NodeId id = add(NodeType::Opaque, first, std::nullopt,
                      "recovered:" + std::to_string(first.lineno) + "-" + std::to_string(last));
      close(id);
      return id;
    }
  }

  NodeId parse_statement() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::kw_begin: return parse_block();
      case TokenKind::kw_if: return parse_if();
      case TokenKind::kw_case:
      case TokenKind::kw_casex:
      case TokenKind::kw_casez: return parse_case();
      case TokenKind::kw_for: return parse_for();
      case TokenKind::semi: {
        NodeId block = add(NodeType::Block, tok);
        ++pos_;
        close(block);
        return block;
      }
      case TokenKind::ident:
        if (peek(1).kind == TokenKind::lparen || peek(1).kind == TokenKind::semi) {
          Token first = tok;
          skip_to_semi();
          return add_opaque(first, "task-call");
        }
        return parse_assignment_statement();
      case TokenKind::lbrace:
        return parse_assignment_statement();
      case TokenKind::kw_other:
        return parse_opaque_statement();
      case TokenKind::hash: {
        Token first = tok;
        skip_delay();
        diags_.pop_back();
        discard_statement();
        return add_opaque(first, "delay");
      }
      case TokenKind::at: {
        Token first = tok;
        ++pos_;
        if (at(TokenKind::lparen)) {
          skip_group();
        } else {
          ++pos_;
        }
        discard_statement();
        return add_opaque(first, "event-control");
      }
      case TokenKind::system_ident:
      case TokenKind::arrow: {
        Token first = tok;
        skip_to_semi();
        return add_opaque(first, tok.kind == TokenKind::arrow ? "event-trigger" : first.text);
      }
      default:
        throw SyntaxError(tok.lineno, "statement", found());
    }
  }

  NodeId parse_opaque_statement() {
    Token first = peek();
    const std::string& kw = first.text;
    ++pos_;
    if (kw == "while" || kw == "repeat" || kw == "wait") {
      if (at(TokenKind::lparen)) {
        skip_group();
      }
      discard_statement();
    } else if (kw == "forever") {
      discard_statement();
    } else if (kw == "fork") {
      --pos_;
      skip_keyword_block("fork", "join");
    } else {
      skip_to_semi();
    }
    return add_opaque(first, kw);
  }

  NodeId parse_block() {
    const Token& kw = expect(TokenKind::kw_begin, "'begin'");
    NodeId block = add(NodeType::Block, kw);
    if (accept(TokenKind::colon)) {
      nodes_[block].name = expect(TokenKind::ident, "block label").text;
    }
    while (!at(TokenKind::kw_end)) {
      if (at(TokenKind::end_of_file) || at(TokenKind::kw_endmodule)) {
        throw SyntaxError(peek().lineno, "'end'", found());
      }
      attach(block, parse_statement_recovering());
    }
    ++pos_;
    close(block);
    return block;
  }

  NodeId parse_if() {
    const Token& kw = expect(TokenKind::kw_if, "'if'");
    NodeId stmt = add(NodeType::IfStatement, kw);
    expect(TokenKind::lparen, "'('");
    attach(stmt, parse_expr());
    expect(TokenKind::rparen, "')'");
    attach(stmt, parse_statement_recovering());
    if (accept(TokenKind::kw_else)) {
      attach(stmt, parse_statement_recovering());
    }
    close(stmt);
    return stmt;
  }

  NodeId parse_case() {
    const Token& kw = toks_[pos_++];
    NodeId stmt = add(NodeType::CaseStatement, kw, std::nullopt, kw.text);
    expect(TokenKind::lparen, "'('");
    attach(stmt, parse_expr());
    expect(TokenKind::rparen, "')'");
    while (!accept(TokenKind::kw_endcase)) {
      if (at(TokenKind::end_of_file) || at(TokenKind::kw_endmodule)) {
        throw SyntaxError(peek().lineno, "'endcase'", found());
      }
      const Token& first = peek();
      NodeId item = add(NodeType::CaseItem, first);
      if (accept(TokenKind::kw_default)) {
        accept(TokenKind::colon);
        nodes_[item].value = "default";
      } else {
        std::string labels;
        while (true) {
          NodeId label = parse_expr();
          attach(item, label);
          if (!labels.empty()) {
            labels += ",";
          }
          labels += print_expr(nodes_, label);
          if (!accept(TokenKind::comma)) {
            break;
          }
        }
        expect(TokenKind::colon, "':'");
        nodes_[item].value = labels;
      }
      attach(item, parse_statement_recovering());
      close(item);
      attach(stmt, item);
    }
    close(stmt);
    return stmt;
  }

  NodeId parse_loop_assignment() {
    NodeId lhs = parse_lvalue();
    NodeId assign = add(NodeType::BlockingSubstitution, toks_[pos_]);
    nodes_[assign].lineno = nodes_[lhs].lineno;
    nodes_[assign].begin_offset = nodes_[lhs].begin_offset;
    expect(TokenKind::eq, "'='");
    attach(assign, lhs);
    attach(assign, parse_expr());
    close(assign);
    return assign;
  }

  NodeId parse_for() {
    const Token& kw = expect(TokenKind::kw_for, "'for'");
    NodeId stmt = add(NodeType::ForStatement, kw);
    expect(TokenKind::lparen, "'('");
    attach(stmt, parse_loop_assignment());
    expect(TokenKind::semi, "';'");
    attach(stmt, parse_expr());
    expect(TokenKind::semi, "';'");
    attach(stmt, parse_loop_assignment());
    expect(TokenKind::rparen, "')'");
    attach(stmt, parse_statement_recovering());
    close(stmt);
    return stmt;
  }

  NodeId parse_assignment_statement() {
    NodeId lhs = parse_lvalue();
    NodeType type;
    if (at(TokenKind::eq)) {
      type = NodeType::BlockingSubstitution;
    } else if (at(TokenKind::le)) {
      type = NodeType::NonblockingSubstitution;
    } else {
      throw SyntaxError(peek().lineno, "'=' or '<='", found());
    }
    ++pos_;
    NodeId stmt = add(type, toks_[pos_ - 1]);
    nodes_[stmt].lineno = nodes_[lhs].lineno;
    nodes_[stmt].begin_offset = nodes_[lhs].begin_offset;
    if (at(TokenKind::hash)) {
      skip_delay();
    }
    attach(stmt, lhs);
    attach(stmt, parse_expr());
    expect(TokenKind::semi, "';'");
    close(stmt);
    return stmt;
  }

  // ---- expressions ---------------------------------------------------------

  NodeId parse_lvalue() {
    if (at(TokenKind::lbrace)) {
      return parse_concat();
    }
    if (!at(TokenKind::ident)) {
      throw SyntaxError(peek().lineno, "assignment target", found());
    }
    return parse_selects(identifier());
  }

  NodeId identifier() {
    const Token& tok = toks_[pos_++];
    NodeId id = add(NodeType::Identifier, tok, tok.text);
    return id;
  }

  NodeId operator_node(std::string spelling, std::vector<NodeId> operands,
                       const Token* op_token = nullptr) {
    const Token& first = op_token != nullptr ? *op_token : toks_[pos_ - 1];
    NodeId op = add(NodeType::Operator, first, std::nullopt, std::move(spelling));
    if (op_token == nullptr && !operands.empty()) {
      nodes_[op].lineno = nodes_[operands.front()].lineno;
      nodes_[op].begin_offset = nodes_[operands.front()].begin_offset;
    }
    nodes_[op].children = std::move(operands);
    close(op);
    return op;
  }

  NodeId parse_expr() {
    NodeId cond = parse_binary(1);
    if (accept(TokenKind::question)) {
      NodeId if_true = parse_expr();
      expect(TokenKind::colon, "':'");
      NodeId if_false = parse_expr();
      return operator_node("?:", {cond, if_true, if_false});
    }
    return cond;
  }

  NodeId parse_binary(int min_prec) {
    NodeId lhs = parse_unary();
    while (true) {
      int prec = binary_precedence(peek().kind);
      if (prec == 0 || prec < min_prec) {
        return lhs;
      }
      Token op = toks_[pos_++];
      NodeId rhs = parse_binary(op.kind == TokenKind::power ? prec : prec + 1);
      lhs = operator_node(operator_spelling(op), {lhs, rhs});
    }
  }

  NodeId parse_unary() {
    if (is_unary_operator(peek().kind)) {
      Token op = toks_[pos_++];
      NodeId operand = parse_unary();
      return operator_node(operator_spelling(op), {operand}, &op);
    }
    return parse_primary();
  }

  NodeId parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::number:
      case TokenKind::sized_literal:
      case TokenKind::string_literal: {
        ++pos_;
        NodeId id = add(NodeType::Constant, tok, std::nullopt, tok.text);
        return id;
      }
      case TokenKind::ident: {
        if (peek(1).kind == TokenKind::lparen) {
          Token first = tok;
          ++pos_;
          skip_group();
          return add_opaque(first, "call " + first.text);
        }
        if (peek(1).kind == TokenKind::dot) {
          Token first = tok;
          while (at(TokenKind::ident) && peek(1).kind == TokenKind::dot) {
            pos_ += 2;
          }
          expect(TokenKind::ident, "identifier");
          return add_opaque(first, "hierarchical " + first.text);
        }
        return parse_selects(identifier());
      }
      case TokenKind::system_ident:
      case TokenKind::directive: {
        Token first = tok;
        ++pos_;
        if (at(TokenKind::lparen)) {
          skip_group();
        }
        return add_opaque(first, first.text);
      }
      case TokenKind::lparen: {
        ++pos_;
        NodeId inner = parse_expr();
        expect(TokenKind::rparen, "')'");
        return inner;
      }
      case TokenKind::lbrace:
        return parse_concat();
      default:
        throw SyntaxError(tok.lineno, "expression", found());
    }
  }

  NodeId parse_selects(NodeId target) {
    while (at(TokenKind::lbracket)) {
      ++pos_;
      NodeId first = parse_expr();
      std::vector<NodeId> operands = {target, first};
      std::string kind = "[]";
      if (accept(TokenKind::colon)) {
        kind = "[:]";
        operands.push_back(parse_expr());
      } else if (accept(TokenKind::plus_colon)) {
        kind = "[+:]";
        operands.push_back(parse_expr());
      } else if (accept(TokenKind::minus_colon)) {
        kind = "[-:]";
        operands.push_back(parse_expr());
      }
      expect(TokenKind::rbracket, "']'");
      NodeId select = add(NodeType::PartSelect, toks_[pos_ - 1], std::nullopt, kind);
      nodes_[select].lineno = nodes_[target].lineno;
      nodes_[select].begin_offset = nodes_[target].begin_offset;
      nodes_[select].children = std::move(operands);
      close(select);
      target = select;
    }
    return target;
  }

  NodeId parse_concat() {
    Token open = expect(TokenKind::lbrace, "'{'");
    NodeId first = parse_expr();
    if (at(TokenKind::lbrace)) {
      ++pos_;
      std::vector<NodeId> operands = {first};
      while (true) {
        operands.push_back(parse_expr());
        if (!accept(TokenKind::comma)) {
          break;
        }
      }
      expect(TokenKind::rbrace, "'}'");
      expect(TokenKind::rbrace, "'}'");
      return operator_node("{{}}", std::move(operands), &open);
    }
    std::vector<NodeId> operands = {first};
    while (accept(TokenKind::comma)) {
      operands.push_back(parse_expr());
    }
    expect(TokenKind::rbrace, "'}'");
    return operator_node("{}", std::move(operands), &open);
  }

  // ---- finish --------------------------------------------------------------

  // Renumbers nodes in pre-order so ids are dense and children follow their
  // parent in source order.
  Ast finish() {
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    std::vector<NodeId> stack = {0};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      order.push_back(id);
      const auto& children = nodes_[id].children;
      for (auto it = children.rbegin(); it != children.rend(); ++it) {
        stack.push_back(*it);
      }
    }
    std::vector<NodeId> renamed(nodes_.size(), 0);
    for (size_t i = 0; i < order.size(); ++i) {
      renamed[order[i]] = static_cast<NodeId>(i);
    }
    Ast ast;
    ast.nodes.reserve(order.size());
    for (NodeId old_id : order) {
      AstNode node = std::move(nodes_[old_id]);
      node.id = renamed[old_id];
      for (NodeId& child : node.children) {
        child = renamed[child];
      }
      ast.nodes.push_back(std::move(node));
    }
    std::stable_sort(diags_.begin(), diags_.end(),
                     [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                       return a.lineno < b.lineno;
                     });
    ast.diagnostics = std::move(diags_);
    return ast;
  }

  const SourceFile& src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<AstNode> nodes_;
  std::vector<ParseDiagnostic> diags_;
};

}  // namespace

Ast parse(const SourceFile& src) { return Parser(src).run(); }

}  // namespace veripg
