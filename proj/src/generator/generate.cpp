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

#include <sstream>

#include <nlohmann/json.hpp>

#include "veripg/generator.h"

namespace veripg {

using nlohmann::json;

namespace {

constexpr std::string_view kConditionSystem =
    "You analyse hardware weakness descriptions for Verilog RTL. Split the description into "
    "the conditions a design must meet to be vulnerable. Each condition names the signal or "
    "structure it constrains (subject), states the constraint in one sentence, and says "
    "whether the vulnerable design must contain the pattern (must_exist) or must lack it "
    "(must_not_exist).\n"
    "Reply with exactly one ```json fenced block of the form\n"
    "{\"conditions\": [{\"subject\": \"...\", \"constraint\": \"...\", "
    "\"polarity\": \"must_exist\"}]}\n"
    "and nothing else.";

constexpr std::string_view kRuleSchema =
    "A rule is a JSON object with keys:\n"
    "  schema_version: 1\n"
    "  rule_id: short identifier\n"
    "  cwe: \"CWE-<digits>\"\n"
    "  description: one sentence\n"
    "  path: non-empty array of steps {\"primitive\": NAME, \"params\": [...], \"filter\": F?}\n"
    "  verdict: \"exists\" (vulnerable when the path ends truthy) or \"forall_absent\"\n"
    "           (vulnerable when some start node's path ends falsy)\n"
    "  report_at: optional step index whose nodes are reported\n"
    "A filter F is {\"op\": \"AND\"|\"OR\"|\"NOT\"|\"CMP\", \"operands\": [...]}. AND and OR take "
    "two or more operands, NOT takes one, CMP takes one predicate. An operand is a filter, "
    "a step, {\"path\": [steps]} (true when the path yields nodes), or a predicate "
    "{\"attribute\": type|name|value|lineno|condition, \"relation\": eq|neq|contains|in, "
    "\"literal\": value or array for in}.\n"
    "The first step must start from the whole graph (Node or Variable). A step may only be "
    "applied to node types listed as its input.";

constexpr std::string_view kExampleRule = R"({
  "cwe": "CWE-0000",
  "description": "A combinational always block uses nonblocking assignments.",
  "path": [
    {
      "filter": {
        "op": "AND",
        "operands": [
          {"attribute": "type", "literal": "Always", "relation": "eq"},
          {"path": [{"filter": {"op": "CMP", "operands": [{"attribute": "value", "literal": "*", "relation": "eq"}]}, "params": [], "primitive": "SensList"}]}
        ]
      },
      "params": ["Always"],
      "primitive": "Node"
    },
    {
      "filter": {"op": "CMP", "operands": [{"attribute": "type", "literal": "NonblockingSubstitution", "relation": "eq"}]},
      "params": ["CFG"],
      "primitive": "Descendants"
    },
    {"params": [], "primitive": "Exist"}
  ],
  "rule_id": "example-comb-nonblocking",
  "schema_version": 1,
  "verdict": "exists"
})";

std::string join_states(const StateSet& set) {
  std::string out;
  for (const std::string& s : state_names(set)) {
    out += out.empty() ? s : ", " + s;
  }
  return out;
}

std::string polarity_name(Polarity p) {
  return p == Polarity::must_exist ? "must_exist" : "must_not_exist";
}

VulnerabilityConditions parse_conditions(const std::string& cwe_id, const std::string& text) {
  VulnerabilityConditions out;
  out.cwe_id = cwe_id;
  json doc = json::parse(text);
  const json& list = doc.at("conditions");
  if (!list.is_array() || list.empty()) {
    throw FormatError("conditions must be a non-empty array");
  }
  for (const json& c : list) {
    Condition cond;
    cond.subject = c.at("subject").get<std::string>();
    cond.constraint = c.at("constraint").get<std::string>();
    std::string pol = c.at("polarity").get<std::string>();
    if (pol == "must_exist") {
      cond.polarity = Polarity::must_exist;
    } else if (pol == "must_not_exist") {
      cond.polarity = Polarity::must_not_exist;
    } else {
      throw FormatError("unknown polarity '" + pol + "'");
    }
    out.conditions.push_back(std::move(cond));
  }
  return out;
}

ValidationReport format_failure(const std::string& message) {
  ValidationReport r;
  r.valid = false;
  r.violations.push_back({0, ViolationKind::IllegalRule, "format: " + message, {}});
  return r;
}

}  // namespace

CweDescription parse_cwe_description(std::string_view text) {
  try {
    json j = json::parse(text);
    CweDescription d{j.at("cwe_id").get<std::string>(), j.value("title", std::string()),
                     j.value("body", std::string())};
    if (d.cwe_id.rfind("CWE-", 0) != 0 || d.cwe_id.size() == 4 ||
        d.cwe_id.find_first_not_of("0123456789", 4) != std::string::npos) {
      throw Error("cwe_id must look like CWE-<digits>");
    }
    return d;
  } catch (const json::exception& ex) {
    throw Error(std::string("bad CWE description: ") + ex.what());
  }
}

std::string conditions_to_json(const VulnerabilityConditions& conds) {
  nlohmann::ordered_json doc;
  doc["cwe_id"] = conds.cwe_id;
  doc["conditions"] = nlohmann::ordered_json::array();
  for (const Condition& c : conds.conditions) {
    doc["conditions"].push_back({{"subject", c.subject},
                                 {"constraint", c.constraint},
                                 {"polarity", polarity_name(c.polarity)}});
  }
  return doc.dump(2) + "\n";
}

std::optional<std::string> extract_fenced_json(std::string_view text) {
  auto block_after = [&](size_t open) -> std::optional<std::string> {
    size_t body = text.find('\n', open);
    if (body == std::string_view::npos) {
      return std::nullopt;
    }
    size_t close = text.find("```", body + 1);
    if (close == std::string_view::npos) {
      return std::nullopt;
    }
    return std::string(text.substr(body + 1, close - body - 1));
  };
  if (size_t tagged = text.find("```json"); tagged != std::string_view::npos) {
    return block_after(tagged);
  }
  if (size_t plain = text.find("```"); plain != std::string_view::npos) {
    return block_after(plain);
  }
  return std::nullopt;
}

std::string catalog_prompt() {
  std::ostringstream out;
  out << "Traversal primitives (input node types -> output node types):\n";
  for (const PrimitiveSpec& p : catalog()) {
    out << "- " << p.name << "(";
    for (size_t i = 0; i < p.params.size(); ++i) {
      const ParamSpec& ps = p.params[i];
      out << (i ? ", " : "") << ps.name << ": " << param_kind_name(ps.kind);
      if (!ps.choices.empty()) {
        out << " {";
        for (size_t k = 0; k < ps.choices.size(); ++k) {
          out << (k ? ", " : "") << ps.choices[k];
        }
        out << "}";
      }
    }
    out << "): " << join_states(p.input_state) << " -> " << join_states(p.output_state) << "\n";
  }
  return out.str();
}

std::vector<ChatMessage> condition_prompt(const CweDescription& desc) {
  std::string user = desc.cwe_id + ": " + desc.title + "\n\n" + desc.body;
  return {{"system", std::string(kConditionSystem)}, {"user", user}};
}

std::vector<ChatMessage> rule_prompt(const VulnerabilityConditions& conds) {
  std::string system =
      "You write detection rules that traverse a Verilog property graph. The graph has "
      "syntax (AST), control-flow (CFG) and data-dependency (DDG) edges over statement "
      "nodes.\n\n" +
      catalog_prompt() + "\n" + std::string(kRuleSchema) + "\n\nExample rule:\n```json\n" +
      std::string(kExampleRule) +
      "\n```\n\nReply with exactly one ```json fenced block holding the rule.";
  std::string user = "Write a rule for " + conds.cwe_id +
                     ". A design is vulnerable when these conditions hold:\n";
  for (size_t i = 0; i < conds.conditions.size(); ++i) {
    const Condition& c = conds.conditions[i];
    user += std::to_string(i + 1) + ". [" + polarity_name(c.polarity) + "] " + c.subject +
            ": " + c.constraint + "\n";
  }
  return {{"system", system}, {"user", user}};
}

VulnerabilityConditions extract_conditions(const CweDescription& desc, Provider& provider) {
  std::vector<ChatMessage> messages = condition_prompt(desc);
  std::string last_error;
  for (int attempt = 0; attempt <= kFormatRetries; ++attempt) {
    std::string reply = provider.complete(messages);
    try {
      std::optional<std::string> block = extract_fenced_json(reply);
      if (!block) {
        throw FormatError("no fenced json block");
      }
      return parse_conditions(desc.cwe_id, *block);
    } catch (const json::exception& ex) {
      last_error = ex.what();
    } catch (const FormatError& ex) {
      last_error = ex.what();
    }
    messages.push_back({"assistant", reply});
    messages.push_back({"user", "That reply could not be used (" + last_error +
                                    "). Answer again with one ```json block in the "
                                    "requested form."});
  }
  throw FormatError("no usable conditions for " + desc.cwe_id + " after " +
                    std::to_string(kFormatRetries) + " retries: " + last_error);
}

std::string_view outcome_name(GenerationOutcome outcome) {
  return outcome == GenerationOutcome::validated ? "validated" : "exhausted";
}

const Rule* GenerationSession::final_rule() const {
  if (outcome != GenerationOutcome::validated || iterations.empty()) {
    return nullptr;
  }
  return iterations.back().rule ? &*iterations.back().rule : nullptr;
}

GenerationSession generate_rule(const VulnerabilityConditions& conds, const SchemaFsm& fsm,
                                Provider& provider, int cap) {
  if (cap < 1) {
    throw Error("iteration cap must be at least 1");
  }
  GenerationSession session;
  session.cwe_id = conds.cwe_id;
  session.iteration_cap = cap;
  std::vector<ChatMessage> messages = rule_prompt(conds);
  for (int i = 0; i < cap; ++i) {
    GenerationIteration it;
    it.response = provider.complete(messages);
    std::string feedback;
    std::optional<std::string> block = extract_fenced_json(it.response);
    if (!block) {
      it.report = format_failure("no fenced json block");
    } else {
      try {
        it.rule = parse_rule_structure(*block);
        it.report = validate(*it.rule, fsm);
      } catch (const SchemaError& ex) {
        it.report = format_failure(ex.what());
      }
    }
    bool valid = it.report.valid;
    messages.push_back({"assistant", it.response});
    messages.push_back({"user", "The rule is invalid. Validator report:\n" +
                                    report_to_json(it.report) +
                                    "Fix the reported steps using the allowed_next primitives "
                                    "and reply with the corrected rule in one ```json block."});
    session.iterations.push_back(std::move(it));
    if (valid) {
      session.outcome = GenerationOutcome::validated;
      return session;
    }
  }
  session.outcome = GenerationOutcome::exhausted;
  return session;
}

std::string session_to_json(const GenerationSession& session) {
  nlohmann::ordered_json doc;
  doc["cwe_id"] = session.cwe_id;
  doc["iteration_cap"] = session.iteration_cap;
  doc["outcome"] = outcome_name(session.outcome);
  doc["iterations"] = nlohmann::ordered_json::array();
  for (const GenerationIteration& it : session.iterations) {
    nlohmann::ordered_json j;
    j["response"] = it.response;
    j["report"] = nlohmann::ordered_json::parse(report_to_json(it.report));
    j["primitives"] = it.rule ? count_primitive_calls(*it.rule) : 0;
    doc["iterations"].push_back(std::move(j));
  }
  const Rule* rule = session.final_rule();
  doc["final_rule"] =
      rule ? nlohmann::ordered_json::parse(serialize_rule(*rule)) : nlohmann::ordered_json();
  return doc.dump(2) + "\n";
}

MisuseRates misuse_metrics(const std::vector<GenerationSession>& sessions) {
  if (sessions.empty()) {
    throw Error("misuse metrics need at least one session");
  }
  size_t calls = 0;
  size_t illegal_rule = 0;
  size_t illegal_param = 0;
  for (const GenerationSession& s : sessions) {
    for (const GenerationIteration& it : s.iterations) {
      if (!it.rule) {
        continue;
      }
      calls += count_primitive_calls(*it.rule);
      ViolationCounts v = count_violations(it.report);
      illegal_rule += v.illegal_rule;
      illegal_param += v.illegal_parameter;
    }
  }
  MisuseRates r;
  if (calls == 0) {
    return r;
  }
  r.illegal_rule = static_cast<double>(illegal_rule) / static_cast<double>(calls);
  r.illegal_parameter = static_cast<double>(illegal_param) / static_cast<double>(calls);
  r.total = r.illegal_rule + r.illegal_parameter;
  return r;
}

}  // namespace veripg
