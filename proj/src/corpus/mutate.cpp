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
#include <random>
#include <set>

#include "veripg/corpus.h"
#include "veripg/errors.h"
#include "veripg/lexer.h"
#include "veripg/parser.h"

namespace veripg {

namespace {

constexpr int kStructuralAttempts = 8;

// mt19937_64 output is fixed by the standard; distributions are not, so
// draws are reduced with a plain modulo.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  size_t below(size_t n) { return static_cast<size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

struct Parsed {
  SourceFile file;
  Ast ast;
  std::set<std::string> identifiers;
};

Parsed parse_text(std::string_view src) {
  SourceFile file("<mutant>", std::string(src));
  Ast ast = parse(file);
  std::set<std::string> identifiers;
  for (const Token& t : tokenize(file).tokens) {
    if (t.kind == TokenKind::ident) {
      identifiers.insert(t.text);
    }
  }
  return {std::move(file), std::move(ast), std::move(identifiers)};
}

// A prefix no existing identifier starts with.
std::string fresh_prefix(const std::set<std::string>& taken, const std::string& stem, Rng& rng) {
  while (true) {
    std::string prefix = stem + std::to_string(rng.below(10000)) + "_";
    bool clash = std::any_of(taken.begin(), taken.end(), [&](const std::string& id) {
      return id.rfind(prefix, 0) == 0;
    });
    if (!clash) {
      return prefix;
    }
  }
}

std::string hex_byte(size_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out = "8'h";
  out += digits[(v >> 4) & 0xf];
  out += digits[v & 0xf];
  return out;
}

// Column of `offset` within its line, used to indent inserted code.
size_t column_of(const SourceFile& file, size_t offset) {
  int line = file.line_of(offset);
  return offset - file.line_index()[static_cast<size_t>(line - 1)];
}

struct Edit {
  size_t begin;
  size_t end;
  std::string text;
};

std::string apply_edits(std::string_view src, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.begin > b.begin; });
  std::string out(src);
  for (const Edit& e : edits) {
    out.replace(e.begin, e.end - e.begin, e.text);
  }
  return out;
}

std::string block_template(size_t kind, const std::string& p, size_t j) {
  std::string q = p + "q" + std::to_string(j);
  std::string clk = p + "clk";
  switch (kind) {
    case 0:
      return "  reg [7:0] " + q + ";\n"
             "  always @(posedge " + clk + ") begin\n"
             "    if (" + q + " == 8'hff)\n"
             "      " + q + " <= 8'h00;\n"
             "    else\n"
             "      " + q + " <= " + q + " + 8'h01;\n"
             "  end\n";
    case 1:
      return "  reg [7:0] " + q + ";\n"
             "  always @(posedge " + clk + ")\n"
             "    " + q + " <= {" + q + "[6:0], " + q + "[7]};\n";
    case 2:
      return "  reg [7:0] " + q + ";\n"
             "  always @* begin\n"
             "    " + q + " = {8{" + clk + "}} ^ 8'h5a;\n"
             "  end\n";
    default:
      return "  reg [1:0] " + q + ";\n"
             "  always @(posedge " + clk + ")\n"
             "    case (" + q + ")\n"
             "      2'd0: " + q + " <= 2'd1;\n"
             "      2'd1: " + q + " <= 2'd2;\n"
             "      default: " + q + " <= 2'd0;\n"
             "    endcase\n";
  }
}

bool is_statement(NodeType t) {
  switch (t) {
    case NodeType::Block:
    case NodeType::IfStatement:
    case NodeType::CaseStatement:
    case NodeType::ForStatement:
    case NodeType::BlockingSubstitution:
    case NodeType::NonblockingSubstitution:
      return true;
    default:
      return false;
  }
}

// Procedural statements that can be replaced by a block: everything in
// statement position except the init/step assignments of a for loop.
std::vector<NodeId> wrappable_statements(const Ast& ast, NodeId module) {
  std::vector<NodeId> out;
  NodeId last = module;
  // The module's subtree is the contiguous id range starting at `module`.
  while (last + 1 < ast.nodes.size() && ast.nodes[last + 1].type != NodeType::ModuleDef) {
    ++last;
  }
  for (NodeId p = module; p <= last; ++p) {
    const AstNode& parent = ast.node(p);
    for (size_t i = 0; i < parent.children.size(); ++i) {
      NodeId c = parent.children[i];
      if (!is_statement(ast.node(c).type)) {
        continue;
      }
      bool ok = false;
      switch (parent.type) {
        case NodeType::Always:
        case NodeType::Block:
          ok = true;
          break;
        case NodeType::IfStatement:
          ok = i >= 1;
          break;
        case NodeType::CaseItem:
          ok = i + 1 == parent.children.size();
          break;
        case NodeType::ForStatement:
          ok = i == 3;
          break;
        default:
          break;
      }
      if (ok) {
        out.push_back(c);
      }
    }
  }
  return out;
}

std::optional<std::string> try_structural(std::string_view src, std::uint64_t seed,
                                          const std::set<DdgTriple>& before) {
  Parsed in = parse_text(src);
  std::vector<NodeId> modules = in.ast.modules();
  if (modules.empty()) {
    return std::string(src);
  }
  NodeId module = modules.front();
  std::vector<NodeId> candidates = wrappable_statements(in.ast, module);
  if (candidates.empty()) {
    return std::string(src);
  }
  Rng rng(seed);
  std::string p = fresh_prefix(in.identifiers, "nt", rng);

  size_t want = 1 + rng.below(3);
  std::vector<NodeId> chosen;
  for (size_t tries = 0; tries < 4 * want && chosen.size() < want; ++tries) {
    NodeId c = candidates[rng.below(candidates.size())];
    const AstNode& n = in.ast.node(c);
    bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](NodeId o) {
      const AstNode& m = in.ast.node(o);
      return n.begin_offset < m.end_offset && m.begin_offset < n.end_offset;
    });
    if (!overlaps) {
      chosen.push_back(c);
    }
  }

  std::vector<Edit> edits;
  std::string decls;
  bool need_wire = false;
  bool need_index = false;
  for (size_t e = 0; e < chosen.size(); ++e) {
    const AstNode& s = in.ast.node(chosen[e]);
    std::string q = p + "q" + std::to_string(e);
    decls += "reg [7:0] " + q + ";\n  ";
    std::string pad(column_of(in.file, s.begin_offset), ' ');
    std::string inner = pad + "  ";
    std::string before_text;
    std::string after_text;
    switch (rng.below(3)) {
      case 0: {
        // Interleave plain assignments before and after the statement.
        size_t count = 1 + rng.below(10);
        size_t split = rng.below(count + 1);
        for (size_t k = 0; k < count; ++k) {
          std::string line = inner + q + " <= " + hex_byte(rng.below(256)) + ";\n";
          (k < split ? before_text : after_text) += line;
        }
        break;
      }
      case 1:
        need_wire = true;
        before_text = inner + "if (" + p + "w)\n" + inner + "  " + q + " <= 8'h01;\n" + inner +
                      "else\n" + inner + "  " + q + " <= 8'h02;\n";
        break;
      default:
        need_index = true;
        after_text = inner + "for (" + p + "i = 0; " + p + "i < 4; " + p + "i = " + p +
                     "i + 1)\n" + inner + "  " + q + " <= " + q + " ^ 8'h01;\n";
        break;
    }
    std::string body(src.substr(s.begin_offset, s.end_offset - s.begin_offset));
    edits.push_back({s.begin_offset, s.end_offset,
                     "begin\n" + before_text + inner + body + "\n" + after_text + pad + "end"});
  }
  if (need_wire) {
    decls += "wire " + p + "w = 1'b0;\n  ";
  }
  if (need_index) {
    decls += "integer " + p + "i;\n  ";
  }
  // Declarations go in front of the first always block, which exists because
  // every candidate sits inside one.
  for (NodeId c : in.ast.node(module).children) {
    if (in.ast.node(c).type == NodeType::Always) {
      size_t at = in.ast.node(c).begin_offset;
      edits.push_back({at, at, decls});
      break;
    }
  }

  std::string out = apply_edits(src, edits);
  Parsed check = parse_text(out);
  if (check.ast.has_errors()) {
    return std::nullopt;
  }
  std::set<DdgTriple> after = ddg_triples(build_all(check.ast));
  if (!std::includes(after.begin(), after.end(), before.begin(), before.end())) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

std::string_view mutation_kind_name(MutationKind kind) {
  switch (kind) {
    case MutationKind::name_substitution: return "name_substitution";
    case MutationKind::block_extension: return "block_extension";
    case MutationKind::structural: return "structural";
    default: return "none";
  }
}

MutationKind mutation_kind_from_name(std::string_view name) {
  for (MutationKind k : {MutationKind::name_substitution, MutationKind::block_extension,
                         MutationKind::structural}) {
    if (mutation_kind_name(k) == name) {
      return k;
    }
  }
  if (name != "none") {
    throw Error("unknown mutation kind '" + std::string(name) + "'");
  }
  return MutationKind::none;
}

std::set<DdgTriple> ddg_triples(const std::vector<VeriPG>& graphs) {
  std::set<DdgTriple> out;
  for (const VeriPG& g : graphs) {
    for (const Edge& e : g.edges()) {
      if (e.kind == EdgeKind::DDG) {
        out.emplace(g.node(e.src).type, g.node(e.dst).type, e.dep_signal.value_or(""));
      }
    }
  }
  return out;
}

std::string mutate_name_substitution(std::string_view src, std::uint64_t seed) {
  Parsed in = parse_text(src);
  std::set<std::string> declared;
  for (const AstNode& n : in.ast.nodes) {
    if ((is_signal_decl(n.type) || n.type == NodeType::Parameter) && n.name) {
      declared.insert(*n.name);
    }
  }
  Rng rng(seed);
  std::map<std::string, std::string> renames;
  std::set<std::string> used = in.identifiers;
  for (const std::string& name : declared) {
    std::string fresh;
    do {
      fresh = "s_" + std::to_string(rng.below(100000));
    } while (used.count(fresh) != 0 || is_reserved_word(fresh));
    used.insert(fresh);
    renames[name] = fresh;
  }
  std::vector<Edit> edits;
  for (const Token& t : tokenize(in.file).tokens) {
    if (t.kind != TokenKind::ident) {
      continue;
    }
    auto it = renames.find(t.text);
    if (it != renames.end()) {
      edits.push_back({t.offset, t.end, it->second});
    }
  }
  return apply_edits(src, std::move(edits));
}

std::string mutate_block_extension(std::string_view src, std::uint64_t seed) {
  Parsed in = parse_text(src);
  std::vector<NodeId> modules = in.ast.modules();
  if (modules.empty()) {
    return std::string(src);
  }
  const AstNode& m = in.ast.node(modules.front());
  Rng rng(seed);
  std::string p = fresh_prefix(in.identifiers, "ext", rng);
  size_t k = 1 + rng.below(5);
  std::string text = "  wire " + p + "clk = 1'b0;\n";
  for (size_t j = 0; j < k; ++j) {
    text += block_template(rng.below(4), p, j);
  }
  // The module span ends with the `endmodule` keyword.
  static constexpr std::string_view kEnd = "endmodule";
  size_t at = m.end_offset - kEnd.size();
  if (src.substr(at, kEnd.size()) != kEnd) {
    throw Error("module span does not end at endmodule");
  }
  return apply_edits(src, {{at, at, text}});
}

std::string mutate_structural(std::string_view src, std::uint64_t seed) {
  Parsed in = parse_text(src);
  std::set<DdgTriple> before = ddg_triples(build_all(in.ast));
  std::uint64_t s = seed;
  for (int attempt = 0; attempt < kStructuralAttempts; ++attempt) {
    if (std::optional<std::string> out = try_structural(src, s, before)) {
      return *out;
    }
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  }
  throw MutationBroke("structural mutation kept breaking data dependencies after " +
                      std::to_string(kStructuralAttempts) + " attempts");
}

std::string apply_mutation(MutationKind kind, std::string_view src, std::uint64_t seed) {
  switch (kind) {
    case MutationKind::name_substitution: return mutate_name_substitution(src, seed);
    case MutationKind::block_extension: return mutate_block_extension(src, seed);
    case MutationKind::structural: return mutate_structural(src, seed);
    default: return std::string(src);
  }
}

}  // namespace veripg
