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
#include <filesystem>
#include <nlohmann/json.hpp>

#include "testutil.h"
#include "veripg/errors.h"
#include "veripg/graph.h"
#include "veripg/rule.h"
#include "veripg/validator.h"

namespace veripg {
namespace {

using testing::read_file;
using testing::source_path;

const SchemaFsm& fsm() {
  static const SchemaFsm machine = build_fsm(catalog());
  return machine;
}

std::string rule_text(const std::string& path_json) {
  return R"({"schema_version":1,"rule_id":"t","cwe":"CWE-0","description":"test","path":)" +
         path_json + R"(,"verdict":"exists"})";
}

std::string schema_error_path(const std::string& text) {
  try {
    parse_rule(text);
  } catch (const SchemaError& e) {
    return e.json_path();
  }
  return "<accepted>";
}

TEST(RuleParse, EmptyObjectFailsAtRoot) {
  EXPECT_EQ(schema_error_path("{}"), "$");
  EXPECT_EQ(schema_error_path("[]"), "$");
  EXPECT_EQ(schema_error_path("{oops"), "$");
}

TEST(RuleParse, ErrorsPointAtTheOffendingField) {
  EXPECT_EQ(schema_error_path(rule_text(R"([{"primitive":"Node","params":"If"}])")),
            "$.path[0].params");
  EXPECT_EQ(schema_error_path(rule_text(
                R"([{"primitive":"Node","params":["If"],"filter":{"op":"XOR","operands":[]}}])")),
            "$.path[0].filter.op");
  std::string bad_verdict = rule_text(R"([{"primitive":"Exist","params":[]}])");
  bad_verdict.replace(bad_verdict.find("exists"), 6, "maybe");
  EXPECT_EQ(schema_error_path(bad_verdict), "$.verdict");
}

TEST(RuleParse, CatalogChecks) {
  std::string unknown = rule_text(R"([{"primitive":"Nod","params":[]}])");
  try {
    parse_rule(unknown);
    FAIL() << "accepted an unknown primitive";
  } catch (const UnknownPrimitive& e) {
    EXPECT_EQ(e.name(), "Nod");
    EXPECT_EQ(e.json_path(), "$.path[0].primitive");
  }
  try {
    parse_rule(rule_text(R"([{"primitive":"Node","params":["If","x"]}])"));
    FAIL() << "accepted a wrong arity";
  } catch (const ArityMismatch& e) {
    EXPECT_EQ(e.expected(), 1u);
    EXPECT_EQ(e.got(), 2u);
  }
  // The structural parse leaves both problems for the validator.
  EXPECT_NO_THROW(parse_rule_structure(unknown));
}

std::vector<std::string> canned_rule_files() {
  return testing::list_files(source_path("data/rules"), ".json");
}

TEST(RuleParse, CannedRulesRoundTripByteForByte) {
  std::vector<std::string> files = canned_rule_files();
  ASSERT_EQ(files.size(), 12u);
  for (const std::string& f : files) {
    std::string text = read_file(f);
    Rule rule = parse_rule(text);
    EXPECT_EQ(serialize_rule(rule), text) << f;
    EXPECT_EQ(serialize_rule(parse_rule(serialize_rule(rule))), text) << f;
  }
}

TEST(RuleParse, CountsNestedCalls) {
  Rule rule = parse_rule(read_file(source_path("data/rules/cwe1245.json")));
  EXPECT_EQ(rule.path.steps.size(), 2u);
  EXPECT_EQ(count_primitive_calls(rule), 4u);
}

TEST(Validate, BranchAfterModuleIsIllegal) {
  Rule rule = parse_rule(rule_text(
      R"([{"primitive":"Node","params":["ModuleDef"]},{"primitive":"Branch","params":[]}])"));
  ValidationReport report = validate(rule, fsm());
  ASSERT_FALSE(report.valid);
  ASSERT_EQ(report.violations.size(), 1u);
  const Violation& v = report.violations[0];
  EXPECT_EQ(v.step, 2);
  EXPECT_EQ(v.kind, ViolationKind::IllegalRule);
  auto has = [&](const std::string& name) {
    return std::find(v.allowed_next.begin(), v.allowed_next.end(), name) != v.allowed_next.end();
  };
  EXPECT_TRUE(has("Children"));
  EXPECT_TRUE(has("Descendants"));
  EXPECT_FALSE(has("Branch"));
}

TEST(Validate, NodeWithoutTypeIsIllegalParameter) {
  Rule rule = parse_rule_structure(rule_text(R"([{"primitive":"Node","params":[]}])"));
  ValidationReport report = validate(rule, fsm());
  ASSERT_FALSE(report.valid);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].step, 1);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::IllegalParameter);
  ViolationCounts counts = count_violations(report);
  EXPECT_EQ(counts.illegal_rule, 0u);
  EXPECT_EQ(counts.illegal_parameter, 1u);
}

TEST(Validate, ReportJsonShape) {
  Rule rule = parse_rule(rule_text(
      R"([{"primitive":"Node","params":["ModuleDef"]},{"primitive":"Branch","params":[]}])"));
  nlohmann::json doc = nlohmann::json::parse(report_to_json(validate(rule, fsm())));
  EXPECT_EQ(doc["valid"], false);
  ASSERT_EQ(doc["violations"].size(), 1u);
  EXPECT_EQ(doc["violations"][0]["step"], 2);
  EXPECT_EQ(doc["violations"][0]["kind"], "IllegalRule");
  EXPECT_TRUE(doc["violations"][0]["message"].is_string());
  EXPECT_TRUE(doc["violations"][0]["allowed_next"].is_array());
}

TEST(Validate, CannedRulesAreAccepted) {
  for (const std::string& f : canned_rule_files()) {
    Rule rule = parse_rule(read_file(f));
    ValidationReport report = validate(rule, fsm());
    EXPECT_TRUE(report.valid) << f << "\n" << report_to_json(report);
    EXPECT_EQ(report.surviving_states.size(), rule.path.steps.size()) << f;
    EXPECT_TRUE(report.surviving_states.back().test(kBooleanState)) << f;
  }
}

TEST(Validate, MisuseSuiteIsRejectedWithTheRightKind) {
  nlohmann::json expected =
      nlohmann::json::parse(read_file(source_path("data/misuse/expected.json")));
  size_t rules = 0;
  size_t params = 0;
  for (const char* kind : {"illegal_rule", "illegal_parameter"}) {
    for (const std::string& f :
         testing::list_files(source_path(std::string("data/misuse/") + kind), ".json")) {
      std::string key = std::string(kind) + "/" + std::filesystem::path(f).filename().string();
      ASSERT_TRUE(expected.contains(key)) << key;
      ValidationReport report = validate(parse_rule_structure(read_file(f)), fsm());
      ASSERT_FALSE(report.valid) << key;
      const Violation& v = report.violations.front();
      EXPECT_EQ(violation_kind_name(v.kind), expected[key]["kind"].get<std::string>()) << key;
      EXPECT_EQ(v.step, expected[key]["step"].get<int>()) << key;
      (v.kind == ViolationKind::IllegalRule ? rules : params) += 1;
    }
  }
  EXPECT_EQ(rules + params, expected.size());
  EXPECT_GE(rules, 10u);
  EXPECT_GE(params, 10u);
}

TEST(Fsm, MissingTransitionsAreEmpty) {
  EXPECT_TRUE(fsm().step(kEntryState, "Branch", "").none());
  EXPECT_TRUE(fsm().step(kBooleanState, "Exist", "").none());
  StateSet ifs = fsm().step(kEntryState, "Node", "IfStatement");
  EXPECT_EQ(ifs, states_of({NodeType::IfStatement}));
  EXPECT_FALSE(fsm().step(state_of(NodeType::IfStatement), "Branch", "").none());
}

// Every edge the graph builder actually produces must be one the schema
// tables allow, or the validator would reject rules that can match.
TEST(Schema, CoversEveryCorpusEdge) {
  for (const std::string& path : testing::corpus_designs()) {
    Ast ast = testing::parse_path(path);
    for (const VeriPG& g : build_all(ast)) {
      for (const Edge& e : g.edges()) {
        NodeType from = g.node(e.src).type;
        NodeType to = g.node(e.dst).type;
        EXPECT_TRUE(schema_successors(from, e.kind).test(state_of(to)))
            << path << ": " << node_type_name(from) << " -" << edge_kind_name(e.kind) << "-> "
            << node_type_name(to);
        EXPECT_TRUE(schema_predecessors(to, e.kind).test(state_of(from))) << path;
        EXPECT_TRUE(schema_descendants(from, e.kind).test(state_of(to))) << path;
      }
    }
  }
}

TEST(Schema, DescendantsAreClosed) {
  for (size_t t = 0; t < kNodeTypeCount; ++t) {
    NodeType from = static_cast<NodeType>(t);
    for (EdgeKind kind : kAllEdgeKinds) {
      StateSet closure = schema_descendants(from, kind);
      for (size_t s = 0; s < kNodeTypeCount; ++s) {
        if (closure.test(s)) {
          StateSet next = schema_successors(static_cast<NodeType>(s), kind);
          EXPECT_EQ((next & ~closure).none(), true)
              << node_type_name(from) << " " << edge_kind_name(kind);
        }
      }
    }
  }
}

}  // namespace
}  // namespace veripg
