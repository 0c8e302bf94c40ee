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
#include <string_view>
#include <vector>

#include "veripg/source.h"

namespace veripg {

enum class TokenKind {
  // Keywords.
  kw_module,
  kw_endmodule,
  kw_input,
  kw_output,
  kw_inout,
  kw_wire,
  kw_reg,
  kw_integer,
  kw_signed,
  kw_parameter,
  kw_localparam,
  kw_assign,
  kw_always,
  kw_begin,
  kw_end,
  kw_if,
  kw_else,
  kw_case,
  kw_casex,
  kw_casez,
  kw_endcase,
  kw_default,
  kw_for,
  kw_posedge,
  kw_negedge,
  kw_or,
  kw_other,  // recognised keyword outside the supported subset
  // Values.
  ident,
  system_ident,
  number,
  sized_literal,
  string_literal,
  // Punctuation and operators.
  semi,
  comma,
  colon,
  dot,
  hash,
  at,
  question,
  lparen,
  rparen,
  lbracket,
  rbracket,
  lbrace,
  rbrace,
  eq,            // =
  le,            // <= (also non-blocking assignment)
  lt,
  ge,
  gt,
  eqeq,
  neq,
  case_eq,       // ===
  case_neq,      // !==
  plus,
  minus,
  star,
  power,         // **
  slash,
  percent,
  amp,
  ampamp,
  pipe,
  pipepipe,
  caret,
  xnor,          // ~^ or ^~
  tilde,
  nand,          // ~&
  nor,           // ~|
  bang,
  shl,
  shr,
  ashl,
  ashr,
  plus_colon,
  minus_colon,
  arrow,         // ->
  directive,     // `macro usage in the middle of a line
  end_of_file,
};

struct Token {
  TokenKind kind;
  std::string text;
  int lineno = 0;
  size_t offset = 0;  // byte offset of the first character
  size_t end = 0;     // byte offset one past the last character
};

struct LexWarning {
  int lineno;
  std::string message;
};

struct TokenStream {
  std::vector<Token> tokens;  // always terminated by end_of_file
  std::vector<LexWarning> warnings;
};

/// Splits `src` into tokens. Comments and whitespace are dropped; lines that
/// start with a backtick directive are skipped with a warning. Throws
/// LexError on unterminated comments/strings and illegal characters.
TokenStream tokenize(const SourceFile& src);

/// Stable lower-case name of a token kind, e.g. "kw_assign" or "semi".
std::string_view token_kind_name(TokenKind kind);

bool is_reserved_word(std::string_view word);

}  // namespace veripg
