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

#include "veripg/lexer.h"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <utility>

#include "veripg/errors.h"

namespace veripg {

namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"module", TokenKind::kw_module},
      {"endmodule", TokenKind::kw_endmodule},
      {"input", TokenKind::kw_input},
      {"output", TokenKind::kw_output},
      {"inout", TokenKind::kw_inout},
      {"wire", TokenKind::kw_wire},
      {"reg", TokenKind::kw_reg},
      {"integer", TokenKind::kw_integer},
      {"signed", TokenKind::kw_signed},
      {"parameter", TokenKind::kw_parameter},
      {"localparam", TokenKind::kw_localparam},
      {"assign", TokenKind::kw_assign},
      {"always", TokenKind::kw_always},
      {"begin", TokenKind::kw_begin},
      {"end", TokenKind::kw_end},
      {"if", TokenKind::kw_if},
      {"else", TokenKind::kw_else},
      {"case", TokenKind::kw_case},
      {"casex", TokenKind::kw_casex},
      {"casez", TokenKind::kw_casez},
      {"endcase", TokenKind::kw_endcase},
      {"default", TokenKind::kw_default},
      {"for", TokenKind::kw_for},
      {"posedge", TokenKind::kw_posedge},
      {"negedge", TokenKind::kw_negedge},
      {"or", TokenKind::kw_or},
      // Reserved but outside the supported subset.
      {"initial", TokenKind::kw_other},
      {"function", TokenKind::kw_other},
      {"endfunction", TokenKind::kw_other},
      {"task", TokenKind::kw_other},
      {"endtask", TokenKind::kw_other},
      {"generate", TokenKind::kw_other},
      {"endgenerate", TokenKind::kw_other},
      {"genvar", TokenKind::kw_other},
      {"while", TokenKind::kw_other},
      {"repeat", TokenKind::kw_other},
      {"forever", TokenKind::kw_other},
      {"fork", TokenKind::kw_other},
      {"join", TokenKind::kw_other},
      {"wait", TokenKind::kw_other},
      {"disable", TokenKind::kw_other},
      {"supply0", TokenKind::kw_other},
      {"supply1", TokenKind::kw_other},
      {"tri", TokenKind::kw_other},
      {"wand", TokenKind::kw_other},
      {"wor", TokenKind::kw_other},
      {"real", TokenKind::kw_other},
      {"realtime", TokenKind::kw_other},
      {"time", TokenKind::kw_other},
      {"event", TokenKind::kw_other},
      {"specify", TokenKind::kw_other},
      {"endspecify", TokenKind::kw_other},
      {"primitive", TokenKind::kw_other},
      {"endprimitive", TokenKind::kw_other},
      {"defparam", TokenKind::kw_other},
      {"deassign", TokenKind::kw_other},
      {"force", TokenKind::kw_other},
      {"release", TokenKind::kw_other},
      {"automatic", TokenKind::kw_other},
  };
  return table;
}

// Longest match first.
constexpr std::pair<std::string_view, TokenKind> kOperators[] = {
    {"<<<", TokenKind::ashl},     {">>>", TokenKind::ashr},
    {"===", TokenKind::case_eq},  {"!==", TokenKind::case_neq},
    {"**", TokenKind::power},     {"==", TokenKind::eqeq},
    {"!=", TokenKind::neq},       {"<=", TokenKind::le},
    {">=", TokenKind::ge},        {"&&", TokenKind::ampamp},
    {"||", TokenKind::pipepipe},  {"<<", TokenKind::shl},
    {">>", TokenKind::shr},       {"~&", TokenKind::nand},
    {"~|", TokenKind::nor},       {"~^", TokenKind::xnor},
    {"^~", TokenKind::xnor},      {"+:", TokenKind::plus_colon},
    {"-:", TokenKind::minus_colon}, {"->", TokenKind::arrow},
    {";", TokenKind::semi},       {",", TokenKind::comma},
    {":", TokenKind::colon},      {".", TokenKind::dot},
    {"#", TokenKind::hash},       {"@", TokenKind::at},
    {"?", TokenKind::question},   {"(", TokenKind::lparen},
    {")", TokenKind::rparen},     {"[", TokenKind::lbracket},
    {"]", TokenKind::rbracket},   {"{", TokenKind::lbrace},
    {"}", TokenKind::rbrace},     {"=", TokenKind::eq},
    {"<", TokenKind::lt},         {">", TokenKind::gt},
    {"+", TokenKind::plus},       {"-", TokenKind::minus},
    {"*", TokenKind::star},       {"/", TokenKind::slash},
    {"%", TokenKind::percent},    {"&", TokenKind::amp},
    {"|", TokenKind::pipe},       {"^", TokenKind::caret},
    {"~", TokenKind::tilde},      {"!", TokenKind::bang},
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_base_char(char c) {
  switch (c) {
    case 'b': case 'B': case 'o': case 'O': case 'd': case 'D': case 'h': case 'H':
      return true;
    default:
      return false;
  }
}

bool is_based_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c)) || c == '_' || c == 'x' ||
         c == 'X' || c == 'z' || c == 'Z' || c == '?';
}

class Lexer {
 public:
  explicit Lexer(const SourceFile& src) : src_(src), text_(src.text()) {}

  TokenStream run() {
    TokenStream out;
    while (true) {
      skip_trivia(out);
      if (pos_ >= text_.size()) {
        break;
      }
      out.tokens.push_back(next());
    }
    out.tokens.push_back(Token{TokenKind::end_of_file, "", src_.line_count(),
                               text_.size(), text_.size()});
    return out;
  }

 private:
  int line() const { return src_.line_of(pos_); }

  bool at_line_start() const {
    size_t i = pos_;
    while (i > 0) {
      char c = text_[i - 1];
      if (c == '\n') {
        return true;
      }
      if (c != ' ' && c != '\t' && c != '\r') {
        return false;
      }
      --i;
    }
    return true;
  }

  void skip_trivia(TokenStream& out) {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else if (c == '/' && peek(1) == '*') {
        int start_line = line();
        size_t close = text_.find("*/", pos_ + 2);
        if (close == std::string::npos) {
          throw LexError(LexErrorKind::UnterminatedComment, start_line,
                         "unterminated block comment");
        }
        pos_ = close + 2;
      } else if (c == '`' && at_line_start()) {
        out.warnings.push_back(
            {line(), "compiler directive skipped (preprocessing unsupported)"});
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  char peek(size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token make(TokenKind kind, size_t start) const {
    return Token{kind, text_.substr(start, pos_ - start), src_.line_of(start),
                 start, pos_};
  }

  // Consumes `'[s]<base><digits>` starting at pos_ (which is on the tick).
  bool consume_based_suffix() {
    size_t i = pos_ + 1;
    if (i < text_.size() && (text_[i] == 's' || text_[i] == 'S')) {
      ++i;
    }
    if (i >= text_.size() || !is_base_char(text_[i])) {
      return false;
    }
    ++i;
    while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t')) {
      ++i;
    }
    size_t digits = i;
    while (i < text_.size() && is_based_digit(text_[i])) {
      ++i;
    }
    if (i == digits) {
      return false;
    }
    pos_ = i;
    return true;
  }

  Token next() {
    size_t start = pos_;
    char c = text_[pos_];

    if (is_ident_start(c)) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        ++pos_;
      }
      Token tok = make(TokenKind::ident, start);
      auto it = keyword_table().find(tok.text);
      if (it != keyword_table().end()) {
        tok.kind = it->second;
      }
      return tok;
    }

    if (c == '$' && is_ident_start(peek(1))) {
      ++pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        ++pos_;
      }
      return make(TokenKind::system_ident, start);
    }

    if (c == '`') {
      ++pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        ++pos_;
      }
      return make(TokenKind::directive, start);
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ < text_.size() && text_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(peek(1)))) {
        ++pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
        return make(TokenKind::number, start);
      }
      // A size may be separated from its base by blanks: 8 'hFF.
      size_t size_end = pos_;
      size_t look = pos_;
      while (look < text_.size() && (text_[look] == ' ' || text_[look] == '\t')) {
        ++look;
      }
      if (look < text_.size() && text_[look] == '\'') {
        size_t saved = pos_;
        pos_ = look;
        if (consume_based_suffix()) {
          Token tok{TokenKind::sized_literal,
                    text_.substr(start, size_end - start) +
                        text_.substr(look, pos_ - look),
                    src_.line_of(start), start, pos_};
          tok.text.erase(std::remove_if(tok.text.begin(), tok.text.end(),
                                        [](char ch) { return ch == ' ' || ch == '\t'; }),
                         tok.text.end());
          return tok;
        }
        pos_ = saved;
      }
      return make(TokenKind::number, start);
    }

    if (c == '\'') {
      if (consume_based_suffix()) {
        Token tok = make(TokenKind::sized_literal, start);
        tok.text.erase(std::remove_if(tok.text.begin(), tok.text.end(),
                                      [](char ch) { return ch == ' ' || ch == '\t'; }),
                       tok.text.end());
        return tok;
      }
      throw LexError(LexErrorKind::IllegalCharacter, line(),
                     "illegal character '''");
    }

    if (c == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
        if (text_[pos_] == '\\') {
          ++pos_;
        }
        ++pos_;
      }
      if (pos_ >= text_.size() || text_[pos_] != '"') {
        throw LexError(LexErrorKind::UnterminatedString, src_.line_of(start),
                       "unterminated string literal");
      }
      ++pos_;
      return make(TokenKind::string_literal, start);
    }

    std::string_view rest(text_.data() + pos_, text_.size() - pos_);
    for (const auto& [spelling, kind] : kOperators) {
      if (rest.substr(0, spelling.size()) == spelling) {
        pos_ += spelling.size();
        return make(kind, start);
      }
    }

    std::string shown = (static_cast<unsigned char>(c) < 0x20 ||
                         static_cast<unsigned char>(c) >= 0x7f)
                            ? "\\x" + std::to_string(static_cast<unsigned char>(c))
                            : std::string(1, c);
    throw LexError(LexErrorKind::IllegalCharacter, line(),
                   "illegal character '" + shown + "'");
  }

  const SourceFile& src_;
  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

TokenStream tokenize(const SourceFile& src) { return Lexer(src).run(); }

bool is_reserved_word(std::string_view word) {
  return keyword_table().contains(word);
}

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kw_module: return "kw_module";
    case TokenKind::kw_endmodule: return "kw_endmodule";
    case TokenKind::kw_input: return "kw_input";
    case TokenKind::kw_output: return "kw_output";
    case TokenKind::kw_inout: return "kw_inout";
    case TokenKind::kw_wire: return "kw_wire";
    case TokenKind::kw_reg: return "kw_reg";
    case TokenKind::kw_integer: return "kw_integer";
    case TokenKind::kw_signed: return "kw_signed";
    case TokenKind::kw_parameter: return "kw_parameter";
    case TokenKind::kw_localparam: return "kw_localparam";
    case TokenKind::kw_assign: return "kw_assign";
    case TokenKind::kw_always: return "kw_always";
    case TokenKind::kw_begin: return "kw_begin";
    case TokenKind::kw_end: return "kw_end";
    case TokenKind::kw_if: return "kw_if";
    case TokenKind::kw_else: return "kw_else";
    case TokenKind::kw_case: return "kw_case";
    case TokenKind::kw_casex: return "kw_casex";
    case TokenKind::kw_casez: return "kw_casez";
    case TokenKind::kw_endcase: return "kw_endcase";
    case TokenKind::kw_default: return "kw_default";
    case TokenKind::kw_for: return "kw_for";
    case TokenKind::kw_posedge: return "kw_posedge";
    case TokenKind::kw_negedge: return "kw_negedge";
    case TokenKind::kw_or: return "kw_or";
    case TokenKind::kw_other: return "kw_other";
    case TokenKind::ident: return "ident";
    case TokenKind::system_ident: return "system_ident";
    case TokenKind::number: return "number";
    case TokenKind::sized_literal: return "sized_literal";
    case TokenKind::string_literal: return "string_literal";
    case TokenKind::semi: return "semi";
    case TokenKind::comma: return "comma";
    case TokenKind::colon: return "colon";
    case TokenKind::dot: return "dot";
    case TokenKind::hash: return "hash";
    case TokenKind::at: return "at";
    case TokenKind::question: return "question";
    case TokenKind::lparen: return "lparen";
    case TokenKind::rparen: return "rparen";
    case TokenKind::lbracket: return "lbracket";
    case TokenKind::rbracket: return "rbracket";
    case TokenKind::lbrace: return "lbrace";
    case TokenKind::rbrace: return "rbrace";
    case TokenKind::eq: return "eq";
    case TokenKind::le: return "le";
    case TokenKind::lt: return "lt";
    case TokenKind::ge: return "ge";
    case TokenKind::gt: return "gt";
    case TokenKind::eqeq: return "eqeq";
    case TokenKind::neq: return "neq";
    case TokenKind::case_eq: return "case_eq";
    case TokenKind::case_neq: return "case_neq";
    case TokenKind::plus: return "plus";
    case TokenKind::minus: return "minus";
    case TokenKind::star: return "star";
    case TokenKind::power: return "power";
    case TokenKind::slash: return "slash";
    case TokenKind::percent: return "percent";
    case TokenKind::amp: return "amp";
    case TokenKind::ampamp: return "ampamp";
    case TokenKind::pipe: return "pipe";
    case TokenKind::pipepipe: return "pipepipe";
    case TokenKind::caret: return "caret";
    case TokenKind::xnor: return "xnor";
    case TokenKind::tilde: return "tilde";
    case TokenKind::nand: return "nand";
    case TokenKind::nor: return "nor";
    case TokenKind::bang: return "bang";
    case TokenKind::shl: return "shl";
    case TokenKind::shr: return "shr";
    case TokenKind::ashl: return "ashl";
    case TokenKind::ashr: return "ashr";
    case TokenKind::plus_colon: return "plus_colon";
    case TokenKind::minus_colon: return "minus_colon";
    case TokenKind::arrow: return "arrow";
    case TokenKind::directive: return "directive";
    case TokenKind::end_of_file: return "end_of_file";
  }
  return "unknown";
}

}  // namespace veripg
