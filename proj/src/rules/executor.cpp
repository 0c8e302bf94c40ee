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

#include "veripg/executor.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "veripg/errors.h"

namespace veripg {

namespace {

using Clock = std::chrono::steady_clock;
using NodeSet = std::set<NodeId>;

const std::string& string_param(const PrimitiveCall& call, size_t i) {
  const auto* s = std::get_if<std::string>(&call.params.at(i));
  if (s == nullptr) {
    throw ExecutorTypeFault(call.primitive + ": parameter " + std::to_string(i) +
                            " is not a string");
  }
  return *s;
}

std::int64_t int_param(const PrimitiveCall& call, size_t i) {
  const auto* n = std::get_if<std::int64_t>(&call.params.at(i));
  if (n == nullptr) {
    throw ExecutorTypeFault(call.primitive + ": parameter " + std::to_string(i) +
                            " is not an integer");
  }
  return *n;
}

EdgeKind edge_param(const PrimitiveCall& call) {
  auto kind = edge_kind_from_name(string_param(call, 0));
  if (!kind) {
    throw ExecutorTypeFault(call.primitive + ": bad edge kind");
  }
  return *kind;
}

bool kind_matches(const std::string& wanted, AssignKind kind) {
  return wanted == "any" || wanted == assign_kind_name(kind);
}

bool is_signal_node(NodeType t) { return t == NodeType::Identifier || is_signal_decl(t); }

// Identifier nodes inside the condition expression of an If/Case node.
void condition_identifiers(const VeriPG& g, NodeId stmt, NodeSet& out) {
  for (NodeId child : g.ast_children(stmt)) {
    if (!is_expression_type(g.node(child).type)) {
      continue;
    }
    std::vector<NodeId> stack = {child};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (g.node(id).type == NodeType::Identifier) {
        out.insert(id);
      }
      for (NodeId c : g.ast_children(id)) {
        stack.push_back(c);
      }
    }
    return;  // only the first expression child is the condition
  }
}

std::optional<NodeId> owner_of(const VeriPG& g, NodeId id) {
  const auto& owners = g.signals().owner;
  auto it = owners.find(id);
  if (it == owners.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool reaches(const VeriPG& g, NodeId def, NodeId use, const std::string& signal) {
  for (const Edge* e : g.in_edges(use, EdgeKind::DDG)) {
    if (e->src == def && e->dep_signal == signal) {
      return true;
    }
  }
  return false;
}

NodeSet apply(const EvalContext& ctx, const PrimitiveCall& call, const PrimitiveSpec& spec,
              const std::vector<NodeId>& input) {
  const VeriPG& g = *ctx.graph;
  const SignalIndex& sig = g.signals();
  const std::string& name = spec.name;
  NodeSet out;
  if (name == "Node") {
    auto type = node_type_from_name(string_param(call, 0));
    if (!type) {
      throw ExecutorTypeFault("Node: unknown node type");
    }
    const auto& ids = g.nodes_of_type(*type);
    out.insert(ids.begin(), ids.end());
  } else if (name == "Variable") {
    for (NodeType t : {NodeType::InputDecl, NodeType::OutputDecl, NodeType::InoutDecl,
                       NodeType::WireDecl, NodeType::RegDecl}) {
      const auto& ids = g.nodes_of_type(t);
      out.insert(ids.begin(), ids.end());
    }
  } else if (name == "Children" || name == "Parents") {
    EdgeKind kind = edge_param(call);
    for (NodeId id : input) {
      if (name == "Children") {
        for (const Edge* e : g.out_edges(id, kind)) {
          out.insert(e->dst);
        }
      } else {
        for (const Edge* e : g.in_edges(id, kind)) {
          out.insert(e->src);
        }
      }
    }
  } else if (name == "Descendants") {
    EdgeKind kind = edge_param(call);
    std::vector<NodeId> stack(input.begin(), input.end());
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      for (const Edge* e : g.out_edges(id, kind)) {
        if (out.insert(e->dst).second) {
          stack.push_back(e->dst);
        }
      }
    }
  } else if (name == "Branch") {
    for (NodeId id : input) {
      for (const Edge* e : g.out_edges(id, EdgeKind::CFG)) {
        out.insert(e->dst);
      }
    }
  } else if (name == "CondVars") {
    for (NodeId id : input) {
      condition_identifiers(g, id, out);
    }
  } else if (name == "LoadStatement") {
    for (NodeId id : input) {
      const GraphNode& n = g.node(id);
      if (is_signal_node(n.type)) {
        auto it = sig.uses.find(*n.name);
        if (it != sig.uses.end()) {
          out.insert(it->second.begin(), it->second.end());
        }
        continue;
      }
      for (const Edge* e : g.out_edges(id, EdgeKind::DDG)) {
        if (!ctx.focus_signal || e->dep_signal == ctx.focus_signal) {
          out.insert(e->dst);
        }
      }
    }
  } else if (name == "AssignStatement") {
    const std::string& wanted = string_param(call, 0);
    for (NodeId id : input) {
      const GraphNode& n = g.node(id);
      if (is_signal_node(n.type)) {
        auto it = sig.defs.find(*n.name);
        if (it != sig.defs.end()) {
          for (const auto& [d, kind] : it->second) {
            if (kind_matches(wanted, kind)) {
              out.insert(d);
            }
          }
        }
        continue;
      }
      std::set<std::string> signals;
      if (ctx.focus_signal) {
        signals.insert(*ctx.focus_signal);
      } else if (auto used = sig.used_by.find(id); used != sig.used_by.end()) {
        signals = used->second;
      }
      std::optional<NodeId> owner = owner_of(g, id);
      for (const std::string& s : signals) {
        auto it = sig.defs.find(s);
        if (it == sig.defs.end()) {
          continue;
        }
        for (const auto& [d, kind] : it->second) {
          if (!kind_matches(wanted, kind)) {
            continue;
          }
          if (reaches(g, d, id, s) || (owner && owner_of(g, d) == owner)) {
            out.insert(d);
          }
        }
      }
    }
  } else if (name == "SensList") {
    for (NodeId id : input) {
      for (NodeId c : g.ast_children(id)) {
        if (g.node(c).type == NodeType::SensList) {
          out.insert(c);
        }
      }
    }
  } else if (name == "FsmStates") {
    for (NodeId id : input) {
      NodeSet vars;
      std::vector<NodeId> kids = g.ast_children(id);
      auto expr = std::find_if(kids.begin(), kids.end(), [&g](NodeId c) {
        return is_expression_type(g.node(c).type);
      });
      if (expr == kids.end() || g.node(*expr).type != NodeType::Identifier) {
        continue;
      }
      auto defs = sig.defs.find(*g.node(*expr).name);
      if (defs == sig.defs.end() ||
          std::none_of(defs->second.begin(), defs->second.end(), [](const auto& d) {
            return d.second == AssignKind::nonblocking;
          })) {
        continue;
      }
      for (const Edge* e : g.out_edges(id, EdgeKind::CFG)) {
        if (g.node(e->dst).type == NodeType::CaseItem) {
          out.insert(e->dst);
        }
      }
    }
  } else {
    throw ExecutorTypeFault("no implementation for primitive " + name);
  }
  return out;
}

bool compare(const std::string& cmp, std::int64_t a, std::int64_t b) {
  if (cmp == "eq") return a == b;
  if (cmp == "ne") return a != b;
  if (cmp == "lt") return a < b;
  if (cmp == "le") return a <= b;
  if (cmp == "gt") return a > b;
  if (cmp == "ge") return a >= b;
  throw ExecutorTypeFault("Count: bad comparison '" + cmp + "'");
}

std::vector<std::string> attribute_values(const VeriPG& g, NodeId id, const std::string& attr) {
  const GraphNode& n = g.node(id);
  if (attr == "type") {
    return {std::string(node_type_name(n.type))};
  }
  if (attr == "name") {
    return {n.name.value_or("")};
  }
  if (attr == "value") {
    return {n.value.value_or("")};
  }
  if (attr == "lineno") {
    return {std::to_string(n.lineno)};
  }
  std::vector<std::string> labels;
  for (const Edge* e : g.in_edges(id, EdgeKind::CFG)) {
    labels.push_back(e->condition.value_or(""));
  }
  return labels;
}

bool test_predicate(const VeriPG& g, NodeId id, const Predicate& p) {
  std::vector<std::string> values = attribute_values(g, id, p.attribute);
  auto any = [&values](auto&& pred) { return std::any_of(values.begin(), values.end(), pred); };
  if (p.relation == "eq") {
    return any([&p](const std::string& v) { return v == p.literals.at(0); });
  }
  if (p.relation == "neq") {
    return !any([&p](const std::string& v) { return v == p.literals.at(0); });
  }
  if (p.relation == "contains") {
    return any([&p](const std::string& v) { return v.find(p.literals.at(0)) != std::string::npos; });
  }
  return any([&p](const std::string& v) {
    return std::find(p.literals.begin(), p.literals.end(), v) != p.literals.end();
  });
}

EvalContext with_current(const EvalContext& ctx, std::vector<NodeId> current) {
  EvalContext out = ctx;
  out.current = std::move(current);
  out.boolean.reset();
  return out;
}

NodeSet filter_set(const EvalContext& ctx, const Filter& f);

NodeSet operand_set(const EvalContext& ctx, const FilterOperand& op) {
  if (op.filter) {
    return filter_set(ctx, *op.filter);
  }
  NodeSet out;
  if (op.predicate) {
    for (NodeId id : ctx.current) {
      if (test_predicate(*ctx.graph, id, *op.predicate)) {
        out.insert(id);
      }
    }
    return out;
  }
  for (NodeId id : ctx.current) {
    EvalContext single = with_current(ctx, {id});
    EvalContext result = op.call ? exec_primitive(single, *op.call) : exec_path(single, *op.path);
    if (result.truthy()) {
      out.insert(id);
    }
  }
  return out;
}

NodeSet filter_set(const EvalContext& ctx, const Filter& f) {
  switch (f.op) {
    case FilterOp::CMP:
      return operand_set(ctx, f.operands.at(0));
    case FilterOp::NOT: {
      NodeSet inner = operand_set(ctx, f.operands.at(0));
      NodeSet out;
      for (NodeId id : ctx.current) {
        if (inner.count(id) == 0) {
          out.insert(id);
        }
      }
      return out;
    }
    case FilterOp::AND: {
      NodeSet acc(ctx.current.begin(), ctx.current.end());
      for (const FilterOperand& op : f.operands) {
        if (acc.empty()) {
          break;
        }
        NodeSet next = operand_set(with_current(ctx, {acc.begin(), acc.end()}), op);
        acc = std::move(next);
      }
      return acc;
    }
    case FilterOp::OR: {
      NodeSet acc;
      for (const FilterOperand& op : f.operands) {
        NodeSet part = operand_set(ctx, op);
        acc.insert(part.begin(), part.end());
      }
      return acc;
    }
  }
  return {};
}

bool is_boolean_primitive(const std::string& name) {
  const PrimitiveSpec* spec = find_primitive(name);
  return spec != nullptr && spec->category == PrimitiveCategory::boolean;
}

}  // namespace

EvalContext exec_primitive(const EvalContext& ctx, const PrimitiveCall& call) {
  if (ctx.boolean) {
    throw ExecutorTypeFault(call.primitive + " applied after a boolean result");
  }
  const PrimitiveSpec* spec = find_primitive(call.primitive);
  if (spec == nullptr) {
    throw ExecutorTypeFault("unknown primitive " + call.primitive);
  }
  const VeriPG& g = *ctx.graph;
  Clock::time_point start = Clock::now();

  std::vector<NodeId> input;
  for (NodeId id : ctx.current) {
    if (spec->input_state.test(state_of(g.node(id).type))) {
      input.push_back(id);
    }
  }

  EvalContext out = ctx;
  if (spec->category == PrimitiveCategory::boolean) {
    std::int64_t size = static_cast<std::int64_t>(input.size());
    if (spec->name == "Exist") {
      out.boolean = size > 0;
    } else if (spec->name == "Absent") {
      out.boolean = size == 0;
    } else {
      out.boolean = compare(string_param(call, 0), size, int_param(call, 1));
    }
    out.current.clear();
  } else {
    NodeSet result = apply(ctx, call, *spec, input);
    out.current.assign(result.begin(), result.end());
  }
  if (ctx.trace != nullptr) {
    ctx.trace->push_back(TraceEntry{
        call.primitive, ctx.current.size(), out.boolean ? 1 : out.current.size(),
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count()});
  }
  if (call.filter) {
    if (out.boolean) {
      throw ExecutorTypeFault(call.primitive + ": filter on a boolean result");
    }
    out = exec_filter(out, *call.filter);
  }
  return out;
}

EvalContext exec_filter(const EvalContext& ctx, const Filter& f) {
  if (ctx.current.empty()) {
    return ctx;
  }
  NodeSet kept = filter_set(ctx, f);
  return with_current(ctx, {kept.begin(), kept.end()});
}

EvalContext exec_path(const EvalContext& ctx, const Path& path) {
  EvalContext cur = ctx;
  const auto& steps = path.steps;
  for (size_t i = 0; i < steps.size(); ++i) {
    cur = exec_primitive(cur, steps[i]);
    if (!cur.boolean && cur.current.empty() && i + 1 < steps.size()) {
      // Nothing left to traverse: only a closing boolean step can still
      // change the outcome.
      if (is_boolean_primitive(steps.back().primitive)) {
        cur = exec_primitive(cur, steps.back());
      }
      return cur;
    }
  }
  return cur;
}

EvalContext exec_path(const VeriPG& g, const Path& path, std::vector<TraceEntry>* trace) {
  EvalContext ctx;
  ctx.graph = &g;
  ctx.trace = trace;
  return exec_path(ctx, path);
}

namespace {

struct SignalTrace {
  std::optional<std::string> signal;
  std::vector<std::vector<NodeId>> step_nodes;
  bool truthy = false;
};

void check_types(const VeriPG& g, const EvalContext& ctx, const ValidationReport& report,
                 size_t step) {
  const StateSet& allowed = report.surviving_states.at(step);
  if (ctx.boolean) {
    if (!allowed.test(kBooleanState)) {
      throw ExecutorTypeFault("step " + std::to_string(step + 1) +
                              " produced a boolean the validator did not predict");
    }
    return;
  }
  for (NodeId id : ctx.current) {
    NodeType t = g.node(id).type;
    if (!allowed.test(state_of(t))) {
      throw ExecutorTypeFault("step " + std::to_string(step + 1) + " produced node " +
                              std::to_string(id) + " of type " + std::string(node_type_name(t)) +
                              " outside the validated states");
    }
  }
}

// Runs steps [from, end) on `ctx`, recording per-step nodes and checking
// result types against the validator's prediction.
void run_steps(const VeriPG& g, const Rule& rule, const ValidationReport& report, size_t from,
               EvalContext ctx, SignalTrace& out) {
  const auto& steps = rule.path.steps;
  for (size_t i = from; i < steps.size(); ++i) {
    ctx = exec_primitive(ctx, steps[i]);
    check_types(g, ctx, report, i);
    out.step_nodes[i] = ctx.current;
    if (!ctx.boolean && ctx.current.empty() && i + 1 < steps.size()) {
      if (is_boolean_primitive(steps.back().primitive)) {
        ctx = exec_primitive(ctx, steps.back());
        check_types(g, ctx, report, steps.size() - 1);
      }
      break;
    }
  }
  out.truthy = ctx.truthy();
}

const SchemaFsm& default_fsm() {
  static const SchemaFsm fsm = build_fsm(catalog());
  return fsm;
}

Finding execute(const VeriPG& g, const Rule& rule, const ValidationReport& report) {
  Finding finding;
  finding.rule_id = rule.rule_id;
  finding.cwe = rule.cwe;
  if (!report.valid) {
    finding.diagnostic = "rule failed validation";
    return finding;
  }
  std::vector<TraceEntry> trace;
  Clock::time_point start = Clock::now();
  const auto& steps = rule.path.steps;
  std::vector<SignalTrace> traces;

  EvalContext entry;
  entry.graph = &g;
  entry.trace = &trace;
  if (steps.front().primitive == "Variable") {
    PrimitiveCall bare = steps.front();
    bare.filter.reset();
    EvalContext all = exec_primitive(entry, bare);
    std::map<std::string, std::vector<NodeId>> by_signal;
    for (NodeId id : all.current) {
      by_signal[*g.node(id).name].push_back(id);
    }
    for (auto& [signal, ids] : by_signal) {
      SignalTrace t;
      t.signal = signal;
      t.step_nodes.resize(steps.size());
      EvalContext ctx = entry;
      ctx.current = ids;
      ctx.focus_signal = signal;
      if (steps.front().filter) {
        ctx = exec_filter(ctx, *steps.front().filter);
      }
      check_types(g, ctx, report, 0);
      t.step_nodes[0] = ctx.current;
      if (ctx.current.empty() || steps.size() == 1) {
        t.truthy = ctx.truthy();
        if (ctx.current.empty() && steps.size() > 1 && is_boolean_primitive(steps.back().primitive)) {
          EvalContext last = exec_primitive(ctx, steps.back());
          t.truthy = last.truthy();
        }
      } else {
        run_steps(g, rule, report, 1, ctx, t);
      }
      traces.push_back(std::move(t));
    }
  } else {
    SignalTrace t;
    t.step_nodes.resize(steps.size());
    run_steps(g, rule, report, 0, entry, t);
    traces.push_back(std::move(t));
  }

  size_t report_step = 0;
  if (rule.report_at) {
    report_step = static_cast<size_t>(*rule.report_at);
  } else {
    for (size_t i = 0; i < steps.size(); ++i) {
      if (!is_boolean_primitive(steps[i].primitive)) {
        report_step = i;
      }
    }
  }

  std::set<std::pair<int, NodeId>> matched;
  bool vulnerable = false;
  for (const SignalTrace& t : traces) {
    bool hit = rule.verdict == Verdict::exists ? t.truthy
                                               : (!t.step_nodes[0].empty() && !t.truthy);
    if (!hit) {
      continue;
    }
    vulnerable = true;
    if (!finding.witness_signal) {
      finding.witness_signal = t.signal;
    }
    const std::vector<NodeId>& nodes =
        t.step_nodes[report_step].empty() ? t.step_nodes[0] : t.step_nodes[report_step];
    for (NodeId id : nodes) {
      matched.insert({g.node(id).lineno, id});
    }
  }
  finding.vulnerable = vulnerable;
  for (const auto& [lineno, id] : matched) {
    finding.matched.push_back({id, lineno});
  }
  finding.primitives = trace.size();
  finding.micros =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
  return finding;
}

}  // namespace

Finding run_rule(const VeriPG& g, const Rule& rule, const ValidationReport* report) {
  ValidationReport local;
  if (report == nullptr) {
    local = validate(rule, default_fsm());
    report = &local;
  }
  try {
    return execute(g, rule, *report);
  } catch (const Error& e) {
    Finding f;
    f.rule_id = rule.rule_id;
    f.cwe = rule.cwe;
    f.diagnostic = e.what();
    return f;
  }
}

std::vector<Finding> run_rules(const VeriPG& g, const std::vector<Rule>& rules) {
  return run_rules(std::vector<VeriPG>{g}, rules);
}

std::vector<Finding> run_rules(const std::vector<VeriPG>& graphs, const std::vector<Rule>& rules) {
  std::vector<const Rule*> order;
  for (const Rule& r : rules) {
    order.push_back(&r);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Rule* a, const Rule* b) { return a->rule_id < b->rule_id; });
  std::vector<Finding> out;
  for (const Rule* rule : order) {
    ValidationReport report = validate(*rule, default_fsm());
    Finding merged;
    merged.rule_id = rule->rule_id;
    merged.cwe = rule->cwe;
    merged.vulnerable = false;
    std::set<std::pair<int, NodeId>> matched;
    for (const VeriPG& g : graphs) {
      Finding f = run_rule(g, *rule, &report);
      merged.primitives += f.primitives;
      merged.micros += f.micros;
      if (!f.vulnerable) {
        merged.vulnerable.reset();
        merged.diagnostic = f.diagnostic;
        break;
      }
      if (*f.vulnerable) {
        merged.vulnerable = true;
        if (!merged.witness_signal) {
          merged.witness_signal = f.witness_signal;
        }
        for (const MatchedNode& m : f.matched) {
          matched.insert({m.lineno, m.id});
        }
      }
    }
    for (const auto& [lineno, id] : matched) {
      merged.matched.push_back({id, lineno});
    }
    out.push_back(std::move(merged));
  }
  return out;
}

std::string findings_to_json(const std::string& design, const std::vector<Finding>& findings,
                             bool include_timing) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["design"] = design;
  doc["findings"] = ordered_json::array();
  for (const Finding& f : findings) {
    ordered_json j;
    j["rule_id"] = f.rule_id;
    j["cwe"] = f.cwe;
    j["vulnerable"] = f.vulnerable ? ordered_json(*f.vulnerable) : ordered_json(nullptr);
    ordered_json matched = ordered_json::array();
    for (const MatchedNode& m : f.matched) {
      matched.push_back({{"node", m.id}, {"lineno", m.lineno}});
    }
    j["matched"] = std::move(matched);
    j["witness_signal"] = f.witness_signal ? ordered_json(*f.witness_signal) : ordered_json(nullptr);
    ordered_json stats;
    stats["primitives"] = f.primitives;
    if (include_timing) {
      stats["micros"] = f.micros;
    }
    j["stats"] = std::move(stats);
    if (!f.vulnerable) {
      j["diagnostic"] = f.diagnostic;
    }
    doc["findings"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace veripg
