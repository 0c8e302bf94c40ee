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

#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "veripg/errors.h"
#include "veripg/rule.h"

namespace veripg {

using nlohmann::json;

std::string_view filter_op_name(FilterOp op) {
  switch (op) {
    case FilterOp::AND: return "AND";
    case FilterOp::OR: return "OR";
    case FilterOp::NOT: return "NOT";
    case FilterOp::CMP: return "CMP";
  }
  return "AND";
}

std::string_view verdict_name(Verdict v) {
  return v == Verdict::exists ? "exists" : "forall_absent";
}

namespace {

const std::set<std::string> kAttributes = {"type", "name", "value", "lineno", "condition"};
const std::set<std::string> kRelations = {"eq", "neq", "contains", "in"};

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    throw SchemaError(where, "expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (allowed.count(key) == 0) {
      throw SchemaError(where + "." + key, "unknown key");
    }
  }
}

const json& required(const json& j, const std::string& where, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(where, std::string("missing '") + key + "'");
  }
  return *it;
}

std::string required_string(const json& j, const std::string& where, const char* key) {
  const json& v = required(j, where, key);
  if (!v.is_string()) {
    throw SchemaError(where + "." + key, "expected a string");
  }
  return v.get<std::string>();
}

class RuleReader {
 public:
  Rule read(std::string_view text) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    check_keys(doc, "$",
               {"schema_version", "rule_id", "cwe", "description", "path", "verdict",
                "report_at"});
    Rule rule;
    rule.rule_id = required_string(doc, "$", "rule_id");
    if (rule.rule_id.empty()) {
      throw SchemaError("$.rule_id", "must not be empty");
    }
    const json& version = required(doc, "$", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != 1) {
      throw SchemaError("$.schema_version", "unsupported schema version");
    }
    rule.cwe = required_string(doc, "$", "cwe");
    static const std::regex cwe_pattern("CWE-[0-9]+");
    if (!std::regex_match(rule.cwe, cwe_pattern)) {
      throw SchemaError("$.cwe", "expected CWE-<digits>");
    }
    if (doc.contains("description")) {
      rule.description = required_string(doc, "$", "description");
    }
    rule.path = read_path(required(doc, "$", "path"), "$.path");
    std::string verdict = required_string(doc, "$", "verdict");
    if (verdict == "exists") {
      rule.verdict = Verdict::exists;
    } else if (verdict == "forall_absent") {
      rule.verdict = Verdict::forall_absent;
    } else {
      throw SchemaError("$.verdict", "expected exists or forall_absent");
    }
    if (doc.contains("report_at")) {
      const json& at = doc["report_at"];
      if (!at.is_number_integer() || at.get<int>() < 0 ||
          at.get<size_t>() >= rule.path.steps.size()) {
        throw SchemaError("$.report_at", "expected a step index");
      }
      rule.report_at = at.get<int>();
    }
    return rule;
  }

 private:
  Path read_path(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
      throw SchemaError(where, "expected a non-empty array of primitive calls");
    }
    Path path;
    for (size_t i = 0; i < j.size(); ++i) {
      path.steps.push_back(read_call(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return path;
  }

  PrimitiveCall read_call(const json& j, const std::string& where) {
    check_keys(j, where, {"primitive", "params", "filter"});
    PrimitiveCall call;
    call.primitive = required_string(j, where, "primitive");
    if (j.contains("params")) {
      const json& params = j["params"];
      if (!params.is_array()) {
        throw SchemaError(where + ".params", "expected an array");
      }
      for (size_t i = 0; i < params.size(); ++i) {
        const json& p = params[i];
        if (p.is_string()) {
          call.params.emplace_back(p.get<std::string>());
        } else if (p.is_number_integer()) {
          call.params.emplace_back(p.get<std::int64_t>());
        } else {
          throw SchemaError(where + ".params[" + std::to_string(i) + "]",
                            "expected a string or an integer");
        }
      }
    }
    if (j.contains("filter")) {
      call.filter = std::make_shared<const Filter>(read_filter(j["filter"], where + ".filter"));
    }
    return call;
  }

  Filter read_filter(const json& j, const std::string& where) {
    check_keys(j, where, {"op", "operands"});
    Filter f;
    std::string op = required_string(j, where, "op");
    if (op == "AND") {
      f.op = FilterOp::AND;
    } else if (op == "OR") {
      f.op = FilterOp::OR;
    } else if (op == "NOT") {
      f.op = FilterOp::NOT;
    } else if (op == "CMP") {
      f.op = FilterOp::CMP;
    } else {
      throw SchemaError(where + ".op", "expected AND, OR, NOT or CMP");
    }
    const json& operands = required(j, where, "operands");
    if (!operands.is_array()) {
      throw SchemaError(where + ".operands", "expected an array");
    }
    for (size_t i = 0; i < operands.size(); ++i) {
      f.operands.push_back(read_operand(operands[i], where + ".operands[" + std::to_string(i) + "]"));
    }
    size_t n = f.operands.size();
    if ((f.op == FilterOp::AND || f.op == FilterOp::OR) && n < 2) {
      throw SchemaError(where + ".operands", op + " needs at least two operands");
    }
    if (f.op == FilterOp::NOT && n != 1) {
      throw SchemaError(where + ".operands", "NOT takes exactly one operand");
    }
    if (f.op == FilterOp::CMP && (n != 1 || !f.operands[0].predicate)) {
      throw SchemaError(where + ".operands", "CMP takes exactly one predicate");
    }
    return f;
  }

  FilterOperand read_operand(const json& j, const std::string& where) {
    if (!j.is_object()) {
      throw SchemaError(where, "expected an object");
    }
    FilterOperand operand;
    if (j.contains("op")) {
      operand.filter = std::make_shared<const Filter>(read_filter(j, where));
    } else if (j.contains("primitive")) {
      operand.call = std::make_shared<const PrimitiveCall>(read_call(j, where));
    } else if (j.contains("path")) {
      check_keys(j, where, {"path"});
      operand.path = std::make_shared<const Path>(read_path(j["path"], where + ".path"));
    } else if (j.contains("attribute")) {
      operand.predicate = read_predicate(j, where);
    } else {
      throw SchemaError(where, "expected a filter, primitive call, path or predicate");
    }
    return operand;
  }

  Predicate read_predicate(const json& j, const std::string& where) {
    check_keys(j, where, {"attribute", "relation", "literal"});
    Predicate p;
    p.attribute = required_string(j, where, "attribute");
    if (kAttributes.count(p.attribute) == 0) {
      throw SchemaError(where + ".attribute", "unknown attribute '" + p.attribute + "'");
    }
    p.relation = required_string(j, where, "relation");
    if (kRelations.count(p.relation) == 0) {
      throw SchemaError(where + ".relation", "unknown relation '" + p.relation + "'");
    }
    const json& lit = required(j, where, "literal");
    if (lit.is_string()) {
      p.literals.push_back(lit.get<std::string>());
    } else if (lit.is_array()) {
      p.list_literal = true;
      for (const json& item : lit) {
        if (!item.is_string()) {
          throw SchemaError(where + ".literal", "expected strings");
        }
        p.literals.push_back(item.get<std::string>());
      }
    } else {
      throw SchemaError(where + ".literal", "expected a string or an array of strings");
    }
    if (p.relation == "in" && !p.list_literal) {
      throw SchemaError(where + ".literal", "'in' needs an array literal");
    }
    if (p.relation != "in" && p.list_literal) {
      throw SchemaError(where + ".literal", "only 'in' takes an array literal");
    }
    return p;
  }
};

void check_call(const PrimitiveCall& call, const std::string& where);

void check_filter(const Filter& f, const std::string& where) {
  for (size_t i = 0; i < f.operands.size(); ++i) {
    const FilterOperand& op = f.operands[i];
    std::string at = where + ".operands[" + std::to_string(i) + "]";
    if (op.filter) {
      check_filter(*op.filter, at);
    } else if (op.call) {
      check_call(*op.call, at);
    } else if (op.path) {
      for (size_t s = 0; s < op.path->steps.size(); ++s) {
        check_call(op.path->steps[s], at + ".path[" + std::to_string(s) + "]");
      }
    }
  }
}

void check_call(const PrimitiveCall& call, const std::string& where) {
  const PrimitiveSpec* spec = find_primitive(call.primitive);
  if (spec == nullptr) {
    throw UnknownPrimitive(where + ".primitive", call.primitive);
  }
  if (spec->params.size() != call.params.size()) {
    throw ArityMismatch(where + ".params", call.primitive, spec->params.size(),
                        call.params.size());
  }
  if (call.filter) {
    check_filter(*call.filter, where + ".filter");
  }
}

json write_call(const PrimitiveCall& call);

json write_path(const Path& path) {
  json steps = json::array();
  for (const PrimitiveCall& c : path.steps) {
    steps.push_back(write_call(c));
  }
  return steps;
}

json write_filter(const Filter& f) {
  json operands = json::array();
  for (const FilterOperand& op : f.operands) {
    if (op.filter) {
      operands.push_back(write_filter(*op.filter));
    } else if (op.call) {
      operands.push_back(write_call(*op.call));
    } else if (op.path) {
      operands.push_back({{"path", write_path(*op.path)}});
    } else if (op.predicate) {
      const Predicate& p = *op.predicate;
      json lit = p.list_literal ? json(p.literals) : json(p.literals.at(0));
      operands.push_back({{"attribute", p.attribute}, {"relation", p.relation}, {"literal", lit}});
    }
  }
  return {{"op", filter_op_name(f.op)}, {"operands", operands}};
}

json write_call(const PrimitiveCall& call) {
  json params = json::array();
  for (const Param& p : call.params) {
    if (const auto* s = std::get_if<std::string>(&p)) {
      params.push_back(*s);
    } else {
      params.push_back(std::get<std::int64_t>(p));
    }
  }
  json j = {{"primitive", call.primitive}, {"params", params}};
  if (call.filter) {
    j["filter"] = write_filter(*call.filter);
  }
  return j;
}

size_t count_in_filter(const Filter& f);

size_t count_in_call(const PrimitiveCall& c) {
  return 1 + (c.filter ? count_in_filter(*c.filter) : 0);
}

size_t count_in_filter(const Filter& f) {
  size_t n = 0;
  for (const FilterOperand& op : f.operands) {
    if (op.filter) {
      n += count_in_filter(*op.filter);
    } else if (op.call) {
      n += count_in_call(*op.call);
    } else if (op.path) {
      for (const PrimitiveCall& c : op.path->steps) {
        n += count_in_call(c);
      }
    }
  }
  return n;
}

}  // namespace

Rule parse_rule_structure(std::string_view text) { return RuleReader().read(text); }

Rule parse_rule(std::string_view text) {
  Rule rule = parse_rule_structure(text);
  for (size_t i = 0; i < rule.path.steps.size(); ++i) {
    check_call(rule.path.steps[i], "$.path[" + std::to_string(i) + "]");
  }
  return rule;
}

std::string serialize_rule(const Rule& rule) {
  json doc = {{"schema_version", rule.schema_version},
              {"rule_id", rule.rule_id},
              {"cwe", rule.cwe},
              {"description", rule.description},
              {"path", write_path(rule.path)},
              {"verdict", verdict_name(rule.verdict)}};
  if (rule.report_at) {
    doc["report_at"] = *rule.report_at;
  }
  return doc.dump(2) + "\n";
}

size_t count_primitive_calls(const Rule& rule) {
  size_t n = 0;
  for (const PrimitiveCall& c : rule.path.steps) {
    n += count_in_call(c);
  }
  return n;
}

}  // namespace veripg
