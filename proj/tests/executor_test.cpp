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

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "oracle.h"
#include "testutil.h"
#include "veripg/errors.h"
#include "veripg/executor.h"
#include "veripg/graph.h"
#include "veripg/rule.h"
#include "veripg/validator.h"

namespace veripg {
namespace {

using testing::parse_text;
using testing::read_file;
using testing::source_path;
using testing::all_calls;
using testing::fsm;
using testing::graph_of;
using testing::is_decl;
using testing::Naive;
using testing::NodeSet;
using testing::RuleGen;
using testing::small_graphs;

TEST(Oracle, EveryPrimitiveMatchesBruteForce) {
  std::vector<VeriPG> graphs = small_graphs();
  ASSERT_GE(graphs.size(), 40u);
  std::vector<PrimitiveCall> calls = all_calls();
  std::mt19937_64 rng(1234);
  std::set<std::string> exercised;
  size_t comparisons = 0;
  for (const VeriPG& g : graphs) {
    Naive naive(g);
    std::vector<NodeId> ids;
    std::set<std::string> signals;
    for (const auto& [id, n] : g.nodes()) {
      ids.push_back(id);
      if (is_decl(n.type)) {
        signals.insert(*n.name);
      }
    }
    std::vector<std::vector<NodeId>> inputs = {{}, ids};
    for (NodeId id : ids) {
      inputs.push_back({id});
    }
    for (int i = 0; i < 10; ++i) {
      std::vector<NodeId> subset;
      for (NodeId id : ids) {
        if (rng() % 3 == 0) {
          subset.push_back(id);
        }
      }
      inputs.push_back(subset);
    }
    std::vector<std::optional<std::string>> focuses = {std::nullopt};
    focuses.insert(focuses.end(), signals.begin(), signals.end());

    for (const PrimitiveCall& call : calls) {
      const PrimitiveSpec& spec = *find_primitive(call.primitive);
      bool uses_focus = call.primitive == "LoadStatement" || call.primitive == "AssignStatement";
      for (const std::vector<NodeId>& input : inputs) {
        for (const auto& focus : focuses) {
          if (!uses_focus && focus) {
            break;
          }
          EvalContext ctx;
          ctx.graph = &g;
          ctx.current = input;
          ctx.focus_signal = focus;
          EvalContext got = exec_primitive(ctx, call);
          ++comparisons;
          if (spec.category == PrimitiveCategory::boolean) {
            ASSERT_TRUE(got.boolean.has_value());
            ASSERT_EQ(*got.boolean, naive.fold(call, input))
                << g.module_name() << " " << call.primitive;
          } else {
            NodeSet want = naive.apply(call, input, focus);
            if (call.primitive == "Node" || call.primitive == "Variable") {
              // Entry primitives ignore the incoming set.
              ASSERT_EQ(NodeSet(got.current.begin(), got.current.end()), want);
            } else {
              ASSERT_EQ(NodeSet(got.current.begin(), got.current.end()), want)
                  << g.module_name() << " " << call.primitive << " "
                  << (call.params.empty() ? "" : std::get<std::string>(call.params[0]))
                  << " input size " << input.size() << " focus " << focus.value_or("-");
            }
            if (!want.empty()) {
              exercised.insert(call.primitive);
            }
          }
        }
      }
    }
  }
  // Each node-producing primitive returned something on at least one graph.
  for (const PrimitiveSpec& spec : catalog()) {
    if (spec.category != PrimitiveCategory::boolean) {
      EXPECT_TRUE(exercised.count(spec.name)) << spec.name;
    }
  }
  EXPECT_GT(comparisons, 100000u);
}

// ---------------------------------------------------------------------------

Rule rule_from_path(const std::string& path_json) {
  return parse_rule(R"({"schema_version":1,"rule_id":"t","cwe":"CWE-0","description":"t","path":)" +
                    path_json + R"(,"verdict":"exists"})");
}

std::vector<NodeId> run_nodes(const VeriPG& g, const std::string& path_json,
                              std::vector<TraceEntry>* trace = nullptr) {
  return exec_path(g, rule_from_path(path_json).path, trace).current;
}

const char* kDecls =
    "module m(input clk, output reg ctrl);\n"
    "  reg other;\n"
    "  wire ctrl_n;\n"
    "  assign ctrl_n = ~ctrl;\n"
    "  always @(posedge clk) begin\n"
    "    if (ctrl_n) ctrl <= 1'b1; else ctrl <= 1'b0;\n"
    "    if (other) other <= 1'b0;\n"
    "  end\n"
    "endmodule\n";

TEST(Filter, AndOfNameAndType) {
  VeriPG g = graph_of(kDecls);
  std::vector<NodeId> got = run_nodes(g, R"([{"primitive":"Variable","params":[],"filter":
      {"op":"AND","operands":[{"attribute":"name","relation":"eq","literal":"ctrl"},
                              {"attribute":"type","relation":"eq","literal":"RegDecl"}]}}])");
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(g.node(got[0]).type, NodeType::RegDecl);
  EXPECT_EQ(g.node(got[0]).name, "ctrl");
}

TEST(Filter, NotOverEmptyIsEmpty) {
  VeriPG g = graph_of("module m; endmodule");
  EvalContext ctx;
  ctx.graph = &g;
  Filter f;
  f.op = FilterOp::NOT;
  f.operands.push_back(FilterOperand{nullptr, nullptr, nullptr,
                                     Predicate{"type", "eq", {"Always"}, false}});
  EXPECT_TRUE(exec_filter(ctx, f).current.empty());
}

TEST(Filter, NotIsComplementWithinCurrent) {
  VeriPG g = graph_of(kDecls);
  std::vector<NodeId> got = run_nodes(g, R"([{"primitive":"Variable","params":[],"filter":
      {"op":"NOT","operands":[{"attribute":"name","relation":"contains","literal":"ctrl"}]}}])");
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(g.node(got[0]).name, "clk");
  EXPECT_EQ(g.node(got[1]).name, "other");
}

TEST(Filter, ConditionLabelsOfIncomingControlEdges) {
  VeriPG g = graph_of(kDecls);
  std::vector<NodeId> got = run_nodes(g, R"([{"primitive":"Node","params":["IfStatement"]},
      {"primitive":"Branch","params":[],"filter":
      {"op":"CMP","operands":[{"attribute":"condition","relation":"eq","literal":"false"}]}}])");
  // Only the first if has an else arm; the second one's false edge goes on
  // to the end of the block.
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(g.node(got[0]).lineno, 6);
}

TEST(Filter, PathOperandIsEvaluatedPerNode) {
  VeriPG g = graph_of(kDecls);
  std::vector<TraceEntry> trace;
  std::vector<NodeId> got = run_nodes(g, R"([{"primitive":"Node","params":["IfStatement"],"filter":
      {"op":"AND","operands":[{"attribute":"type","relation":"eq","literal":"IfStatement"},
                              {"path":[{"primitive":"Branch","params":[]},
                                       {"primitive":"Count","params":["ge",2]}]}]}}])",
                                      &trace);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(g.node(got[0]).lineno, 6);
  // One entry for Node plus Branch and Count for each of the two ifs.
  EXPECT_EQ(trace.size(), 5u);
}

TEST(Filter, OrEqualsInOnEveryCorpusGraph) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"IfStatement", "CaseStatement"}, {"RegDecl", "WireDecl"},
      {"BlockingSubstitution", "NonblockingSubstitution"}, {"Identifier", "Constant"}};
  for (const std::string& path : testing::corpus_designs()) {
    Ast ast = testing::parse_path(path);
    for (const VeriPG& g : build_all(ast)) {
      EvalContext ctx;
      ctx.graph = &g;
      for (const auto& [id, n] : g.nodes()) {
        ctx.current.push_back(id);
      }
      for (const auto& [a, b] : pairs) {
        Filter any;
        any.op = FilterOp::OR;
        any.operands.push_back({nullptr, nullptr, nullptr, Predicate{"type", "eq", {a}, false}});
        any.operands.push_back({nullptr, nullptr, nullptr, Predicate{"type", "eq", {b}, false}});
        Filter in;
        in.op = FilterOp::CMP;
        in.operands.push_back({nullptr, nullptr, nullptr, Predicate{"type", "in", {a, b}, true}});
        EXPECT_EQ(exec_filter(ctx, any).current, exec_filter(ctx, in).current) << path;
      }
    }
  }
}

TEST(Path, BasicFolds) {
  VeriPG g = graph_of(kDecls);
  EXPECT_EQ(run_nodes(g, R"([{"primitive":"Node","params":["Always"]}])").size(), 1u);
  EXPECT_EQ(run_nodes(g, R"([{"primitive":"Node","params":["IfStatement"]}])").size(), 2u);
  EvalContext empty;
  empty.graph = &g;
  EXPECT_TRUE(exec_primitive(empty, PrimitiveCall{"Branch", {}, nullptr}).current.empty());
}

TEST(Path, EmptySetSkipsToTheClosingBoolean) {
  VeriPG g = graph_of("module m; endmodule");
  std::vector<TraceEntry> trace;
  EvalContext out = exec_path(g, rule_from_path(R"([{"primitive":"Node","params":["IfStatement"]},
      {"primitive":"Branch","params":[]},{"primitive":"Absent","params":[]}])").path, &trace);
  ASSERT_TRUE(out.boolean.has_value());
  EXPECT_TRUE(*out.boolean);
  EXPECT_EQ(trace.size(), 2u);
}

TEST(Path, BooleanResultCannotBeTraversed) {
  VeriPG g = graph_of(kDecls);
  EvalContext ctx;
  ctx.graph = &g;
  ctx = exec_primitive(ctx, PrimitiveCall{"Exist", {}, nullptr});
  EXPECT_THROW(exec_primitive(ctx, PrimitiveCall{"Branch", {}, nullptr}), ExecutorTypeFault);
}

Rule canned(const std::string& name) {
  return parse_rule(read_file(source_path("data/rules/" + name + ".json")));
}

TEST(RunRule, UseBeforeGrantSeed) {
  Ast ast = testing::parse_path(source_path("data/corpus/seeds/cwe1280_vuln.v"));
  VeriPG g = build_veripg(ast, ast.modules().at(0));
  Finding f = run_rule(g, canned("cwe1280"));
  ASSERT_TRUE(f.vulnerable.has_value());
  EXPECT_TRUE(*f.vulnerable);
  EXPECT_EQ(f.witness_signal, "grant");
  ASSERT_EQ(f.matched.size(), 1u);
  EXPECT_EQ(f.matched[0].lineno, 9);
  EXPECT_EQ(g.node(f.matched[0].id).type, NodeType::IfStatement);
  EXPECT_GT(f.primitives, 4u);

  Ast fixed = testing::parse_path(source_path("data/corpus/seeds/cwe1280_patched.v"));
  Finding clean = run_rule(build_veripg(fixed, fixed.modules().at(0)), canned("cwe1280"));
  ASSERT_TRUE(clean.vulnerable.has_value());
  EXPECT_FALSE(*clean.vulnerable);
  EXPECT_TRUE(clean.matched.empty());
  EXPECT_FALSE(clean.witness_signal.has_value());
}

TEST(RunRule, InvalidRuleIsReportedNotRun) {
  VeriPG g = graph_of(kDecls);
  Rule bad = rule_from_path(R"([{"primitive":"Node","params":["ModuleDef"]},
                                {"primitive":"Branch","params":[]}])");
  Finding f = run_rule(g, bad);
  EXPECT_FALSE(f.vulnerable.has_value());
  EXPECT_FALSE(f.diagnostic.empty());
  EXPECT_EQ(f.primitives, 0u);
}

TEST(RunRule, FindingsAreOrderedAndMergedAcrossModules) {
  Ast ast = parse_text(
      "module a(input s, output reg q);\n  always @* if (s) q = 1'b1; else q = 1'b0;\nendmodule\n"
      "module b(input s, output y);\n  assign y = s;\nendmodule\n");
  std::vector<VeriPG> graphs = build_all(ast);
  Rule ifs = rule_from_path(R"([{"primitive":"Node","params":["IfStatement"]},
                                {"primitive":"Exist","params":[]}])");
  ifs.rule_id = "z-ifs";
  Rule assigns = rule_from_path(R"([{"primitive":"Node","params":["Assign"]},
                                    {"primitive":"Exist","params":[]}])");
  assigns.rule_id = "a-assigns";
  std::vector<Finding> out = run_rules(graphs, {ifs, assigns});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].rule_id, "a-assigns");
  EXPECT_EQ(out[0].matched, (std::vector<MatchedNode>{{graphs[1].nodes_of_type(NodeType::Assign)[0], 5}}));
  EXPECT_EQ(out[1].rule_id, "z-ifs");
  EXPECT_TRUE(*out[0].vulnerable && *out[1].vulnerable);
  EXPECT_EQ(out[1].matched.size(), 1u);
}

TEST(RunRule, ForallAbsentVerdict) {
  VeriPG g = graph_of(kDecls);
  Rule r = rule_from_path(R"([{"primitive":"Variable","params":[]},
      {"primitive":"AssignStatement","params":["continuous"]},{"primitive":"Exist","params":[]}])");
  r.verdict = Verdict::forall_absent;
  r.report_at = 0;
  Finding f = run_rule(g, r);
  ASSERT_TRUE(f.vulnerable.has_value());
  EXPECT_TRUE(*f.vulnerable);
  // Every signal except ctrl_n lacks a continuous driver.
  std::set<std::string> names;
  for (const MatchedNode& m : f.matched) {
    names.insert(*g.node(m.id).name);
  }
  EXPECT_EQ(names, (std::set<std::string>{"clk", "ctrl", "other"}));
}

TEST(FindingsJson, Shape) {
  VeriPG g = graph_of(kDecls);
  Rule ifs = rule_from_path(R"([{"primitive":"Node","params":["IfStatement"]},
                                {"primitive":"Exist","params":[]}])");
  Rule bad = rule_from_path(R"([{"primitive":"Node","params":["ModuleDef"]},
                                {"primitive":"Branch","params":[]}])");
  bad.rule_id = "u";
  std::vector<Finding> found = run_rules(g, {ifs, bad});
  nlohmann::json doc = nlohmann::json::parse(findings_to_json("d.v", found));
  EXPECT_EQ(doc["design"], "d.v");
  ASSERT_EQ(doc["findings"].size(), 2u);
  const nlohmann::json& hit = doc["findings"][0];
  EXPECT_EQ(hit["vulnerable"], true);
  EXPECT_EQ(hit["matched"].size(), 2u);
  EXPECT_EQ(hit["matched"][0]["lineno"], 6);
  EXPECT_TRUE(hit["witness_signal"].is_null());
  EXPECT_TRUE(hit["stats"].contains("primitives"));
  EXPECT_TRUE(hit["stats"].contains("micros"));
  EXPECT_FALSE(hit.contains("diagnostic"));
  EXPECT_TRUE(doc["findings"][1]["vulnerable"].is_null());
  EXPECT_TRUE(doc["findings"][1]["diagnostic"].is_string());

  nlohmann::json quiet = nlohmann::json::parse(findings_to_json("d.v", found, false));
  EXPECT_FALSE(quiet["findings"][0]["stats"].contains("micros"));
}


TEST(Fuzz, RandomValidRulesNeverFault) {
  std::vector<VeriPG> graphs;
  for (const std::string& path : testing::corpus_designs()) {
    Ast ast = testing::parse_path(path);
    for (VeriPG& g : build_all(ast)) {
      graphs.push_back(std::move(g));
    }
  }
  RuleGen gen(20261016);
  size_t rules = 0;
  size_t fired = 0;
  size_t with_filters = 0;
  for (int n = 0; rules < 600; ++n) {
    Rule r = gen.rule(n);
    ASSERT_FALSE(r.path.steps.empty());
    ValidationReport report = validate(r, fsm());
    ASSERT_TRUE(report.valid) << serialize_rule(r) << report_to_json(report);
    Rule reparsed = parse_rule(serialize_rule(r));
    ASSERT_EQ(serialize_rule(reparsed), serialize_rule(r));
    ++rules;
    with_filters += count_primitive_calls(r) > r.path.steps.size() ? 1 : 0;
    for (size_t i = 0; i < graphs.size(); ++i) {
      Finding f = run_rule(graphs[i], reparsed, &report);
      ASSERT_TRUE(f.vulnerable.has_value())
          << f.diagnostic << "\n" << graphs[i].module_name() << "\n" << serialize_rule(r);
      fired += *f.vulnerable ? 1 : 0;
      if (i % 16 == 0) {
        Finding again = run_rule(graphs[i], reparsed, &report);
        EXPECT_EQ(again.matched, f.matched);
        EXPECT_EQ(again.primitives, f.primitives);
      }
    }
  }
  EXPECT_GE(rules, 500u);
  EXPECT_GT(fired, 0u);
  EXPECT_GT(with_filters, 100u);
}

}  // namespace
}  // namespace veripg
