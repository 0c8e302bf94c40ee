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

#include <nlohmann/json.hpp>

#include "veripg/validator.h"

namespace veripg {

std::string_view violation_kind_name(ViolationKind kind) {
  return kind == ViolationKind::IllegalRule ? "IllegalRule" : "IllegalParameter";
}

StateSet SchemaFsm::step(State from, const std::string& primitive,
                         const std::string& param) const {
  auto it = table.find({from, primitive, param});
  return it == table.end() ? StateSet{} : it->second;
}

namespace {

using T = NodeType;

std::string join_states(const StateSet& s) {
  std::string out = "{";
  bool first = true;
  for (const std::string& name : state_names(s)) {
    if (!first) {
      out += ", ";
    }
    first = false;
    out += name;
  }
  return out + "}";
}

// Parameter keys that select a distinct transition.
std::vector<std::string> param_keys(const PrimitiveSpec& spec) {
  if (spec.params.empty()) {
    return {""};
  }
  const ParamSpec& p = spec.params.front();
  if (p.kind == ParamKind::node_type) {
    std::vector<std::string> out;
    for (T t : kAllNodeTypes) {
      out.emplace_back(node_type_name(t));
    }
    return out;
  }
  if (spec.name == "Count") {
    return {""};
  }
  return p.choices;
}

StateSet transition(const PrimitiveSpec& spec, State from, const std::string& key) {
  if (!spec.input_state.test(from)) {
    return {};
  }
  const StateSet decls = states_of({T::InputDecl, T::OutputDecl, T::InoutDecl, T::WireDecl,
                                    T::RegDecl});
  const std::string& name = spec.name;
  if (name == "Node") {
    return states_of({*node_type_from_name(key)});
  }
  if (from == kEntryState || from == kBooleanState) {
    return name == "Variable" ? decls : StateSet{};
  }
  NodeType type = static_cast<NodeType>(from);
  if (name == "Children" || name == "Descendants" || name == "Parents") {
    EdgeKind kind = *edge_kind_from_name(key);
    if (name == "Children") {
      return schema_successors(type, kind);
    }
    if (name == "Parents") {
      return schema_predecessors(type, kind);
    }
    return schema_descendants(type, kind);
  }
  if (name == "Branch") {
    return schema_successors(type, EdgeKind::CFG);
  }
  if (name == "LoadStatement") {
    if (type == T::Identifier || is_signal_decl(type)) {
      return schema_successors(T::BlockingSubstitution, EdgeKind::DDG);
    }
    return schema_successors(type, EdgeKind::DDG);
  }
  if (name == "AssignStatement") {
    if (key == "blocking") {
      return states_of({T::BlockingSubstitution});
    }
    if (key == "nonblocking") {
      return states_of({T::NonblockingSubstitution});
    }
    if (key == "continuous") {
      return states_of({T::Assign, T::WireDecl, T::RegDecl});
    }
    return spec.output_state;
  }
  // Remaining primitives have a single fixed output.
  return spec.output_state;
}

class Validator {
 public:
  Validator(const SchemaFsm& fsm, ValidationReport& report) : fsm_(fsm), report_(report) {}

  void run(const Rule& rule) {
    StateSet states;
    states.set(kEntryState);
    for (size_t i = 0; i < rule.path.steps.size(); ++i) {
      top_step_ = static_cast<int>(i) + 1;
      states = call(rule.path.steps[i], states, "step " + std::to_string(top_step_));
      report_.surviving_states.push_back(halted_ ? StateSet{} : states);
      if (halted_) {
        break;
      }
    }
    report_.valid = report_.violations.empty() && !halted_ && states.any();
  }

 private:
  void violation(ViolationKind kind, std::string message, const StateSet& from) {
    Violation v;
    v.step = top_step_;
    v.kind = kind;
    v.message = std::move(message);
    if (kind == ViolationKind::IllegalRule) {
      v.allowed_next = allowed_next(from);
      halted_ = true;
    }
    report_.violations.push_back(std::move(v));
  }

  std::vector<std::string> allowed_next(const StateSet& from) const {
    std::vector<std::string> out;
    for (const PrimitiveSpec& spec : catalog()) {
      bool legal = false;
      for (size_t s = 0; s < kStateCount && !legal; ++s) {
        if (!from.test(s)) {
          continue;
        }
        for (const std::string& key : param_keys(spec)) {
          if (fsm_.step(static_cast<State>(s), spec.name, key).any()) {
            legal = true;
            break;
          }
        }
      }
      if (legal) {
        out.push_back(spec.name);
      }
    }
    return out;
  }

  // Returns an error message when the parameters do not fit the signature;
  // otherwise stores the transition key in `key`.
  std::optional<std::string> check_params(const PrimitiveCall& c, const PrimitiveSpec& spec,
                                          std::string& key) const {
    if (c.params.size() != spec.params.size()) {
      return spec.name + " expects " + std::to_string(spec.params.size()) +
             " parameter(s), got " + std::to_string(c.params.size());
    }
    for (size_t i = 0; i < spec.params.size(); ++i) {
      const ParamSpec& ps = spec.params[i];
      const Param& p = c.params[i];
      std::string label = spec.name + " parameter '" + ps.name + "'";
      if (ps.kind == ParamKind::integer) {
        const auto* n = std::get_if<std::int64_t>(&p);
        if (n == nullptr) {
          return label + " must be an integer";
        }
        if (*n < 0) {
          return label + " must not be negative";
        }
        continue;
      }
      const auto* s = std::get_if<std::string>(&p);
      if (s == nullptr) {
        return label + " must be a string";
      }
      if (ps.kind == ParamKind::node_type && !node_type_from_name(*s)) {
        return label + ": unknown node type '" + *s + "'";
      }
      if (!ps.choices.empty() &&
          std::find(ps.choices.begin(), ps.choices.end(), *s) == ps.choices.end()) {
        return label + ": '" + *s + "' is not one of the accepted values";
      }
      if (i == 0 && spec.name != "Count") {
        key = *s;
      }
    }
    return std::nullopt;
  }

  StateSet call(const PrimitiveCall& c, const StateSet& in, const std::string& where) {
    const PrimitiveSpec* spec = find_primitive(c.primitive);
    if (spec == nullptr) {
      violation(ViolationKind::IllegalRule, where + ": unknown primitive '" + c.primitive + "'",
                in);
      return {};
    }
    StateSet applicable = in & spec->input_state;
    if (applicable.none()) {
      violation(ViolationKind::IllegalRule,
                where + ": " + spec->name + " cannot be applied in states " + join_states(in),
                in);
      return {};
    }
    std::string key;
    std::optional<std::string> bad = check_params(c, *spec, key);
    StateSet out;
    if (bad) {
      violation(ViolationKind::IllegalParameter, where + ": " + *bad, in);
      for (size_t s = 0; s < kStateCount; ++s) {
        if (applicable.test(s)) {
          for (const std::string& k : param_keys(*spec)) {
            out |= fsm_.step(static_cast<State>(s), spec->name, k);
          }
        }
      }
    } else {
      for (size_t s = 0; s < kStateCount; ++s) {
        if (applicable.test(s)) {
          out |= fsm_.step(static_cast<State>(s), spec->name, key);
        }
      }
    }
    if (out.none()) {
      violation(ViolationKind::IllegalRule,
                where + ": " + spec->name + " leads nowhere from states " + join_states(in), in);
      return {};
    }
    if (c.filter) {
      if (out.test(kBooleanState)) {
        violation(ViolationKind::IllegalRule,
                  where + ": a filter cannot be applied to a boolean result", out);
        return {};
      }
      StateSet narrowed = filter(*c.filter, out, where + " filter");
      if (halted_) {
        return {};
      }
      if (narrowed.none()) {
        violation(ViolationKind::IllegalRule,
                  where + ": filter rejects every state in " + join_states(out), out);
        return {};
      }
      out = narrowed;
    }
    return out;
  }

  StateSet path(const Path& p, const StateSet& in, const std::string& where) {
    StateSet states = in;
    for (size_t i = 0; i < p.steps.size() && !halted_; ++i) {
      states = call(p.steps[i], states, where + " path[" + std::to_string(i) + "]");
    }
    return states;
  }

  StateSet filter(const Filter& f, const StateSet& in, const std::string& where) {
    if (f.op == FilterOp::CMP) {
      return predicate(*f.operands.at(0).predicate, in, where);
    }
    StateSet combined = f.op == FilterOp::AND ? in : StateSet{};
    for (size_t i = 0; i < f.operands.size() && !halted_; ++i) {
      const FilterOperand& op = f.operands[i];
      std::string at = where + " operand " + std::to_string(i);
      StateSet narrowed = in;
      if (op.filter) {
        narrowed = filter(*op.filter, in, at);
      } else if (op.call) {
        call(*op.call, in, at);
      } else if (op.path) {
        path(*op.path, in, at);
      } else if (op.predicate) {
        narrowed = predicate(*op.predicate, in, at);
      }
      if (f.op == FilterOp::AND) {
        combined &= narrowed;
      } else {
        combined |= narrowed;
      }
    }
    return f.op == FilterOp::NOT ? in : combined;
  }

  StateSet predicate(const Predicate& p, const StateSet& in, const std::string& where) {
    if (p.attribute != "type") {
      return in;
    }
    StateSet named;
    for (const std::string& lit : p.literals) {
      auto t = node_type_from_name(lit);
      if (!t) {
        violation(ViolationKind::IllegalParameter,
                  where + ": unknown node type '" + lit + "' in type predicate", in);
        return in;
      }
      named.set(state_of(*t));
    }
    if (p.relation == "eq" || p.relation == "in") {
      return in & named;
    }
    return in;
  }

  const SchemaFsm& fsm_;
  ValidationReport& report_;
  int top_step_ = 0;
  bool halted_ = false;
};

}  // namespace

SchemaFsm build_fsm(const std::vector<PrimitiveSpec>& specs) {
  SchemaFsm fsm;
  for (size_t s = 0; s < kStateCount; ++s) {
    fsm.states.set(s);
  }
  for (const PrimitiveSpec& spec : specs) {
    for (size_t s = 0; s < kStateCount; ++s) {
      for (const std::string& key : param_keys(spec)) {
        StateSet to = transition(spec, static_cast<State>(s), key);
        if (to.any()) {
          fsm.transitions.push_back({static_cast<State>(s), spec.name, key, to});
          fsm.table[{static_cast<State>(s), spec.name, key}] = to;
        }
      }
    }
  }
  // Nesting: a statement kind that can contain itself syntactically or
  // branch straight back into itself.
  for (T t : kAllNodeTypes) {
    if (is_expression_type(t)) {
      continue;
    }
    bool nests = schema_descendants(t, EdgeKind::AST).test(state_of(t));
    bool branches = (t == T::IfStatement || t == T::CaseStatement) &&
                    schema_successors(t, EdgeKind::CFG).test(state_of(t));
    if (nests || branches) {
      fsm.self_loops.set(state_of(t));
    }
  }
  return fsm;
}

ValidationReport validate(const Rule& rule, const SchemaFsm& fsm) {
  ValidationReport report;
  Validator(fsm, report).run(rule);
  return report;
}

std::string report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["valid"] = report.valid;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const Violation& v : report.violations) {
    doc["violations"].push_back({{"step", v.step},
                                 {"kind", violation_kind_name(v.kind)},
                                 {"message", v.message},
                                 {"allowed_next", v.allowed_next}});
  }
  return doc.dump(2) + "\n";
}

ViolationCounts count_violations(const ValidationReport& report) {
  ViolationCounts counts;
  for (const Violation& v : report.violations) {
    if (v.kind == ViolationKind::IllegalRule) {
      ++counts.illegal_rule;
    } else {
      ++counts.illegal_parameter;
    }
  }
  return counts;
}

}  // namespace veripg
