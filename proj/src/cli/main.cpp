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

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "veripg/corpus.h"
#include "veripg/generator.h"
#include "veripg/parser.h"

namespace fs = std::filesystem;
using namespace veripg;

namespace {

enum Exit { kClean = 0, kVulnerable = 1, kUsage = 2, kFault = 3 };

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results are stored by
// index by the caller, so completion order never shows in the output.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn fn) {
  size_t workers = std::clamp<size_t>(static_cast<size_t>(std::max(jobs, 1)), 1, std::max<size_t>(n, 1));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  for (std::thread& t : pool) {
    t.join();
  }
}

// Expands directories to the .v files below them, sorted.
std::vector<std::string> expand_paths(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const std::string& p : inputs) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (const auto& e : fs::recursive_directory_iterator(p, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".v") {
          found.push_back(e.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::string findings_table(const std::vector<ScanResult>& results) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-40s %-32s %-9s %-10s %s\n", "design", "rule", "cwe",
                "verdict", "lines");
  out << buf;
  for (const ScanResult& r : results) {
    if (!r.parsed) {
      continue;
    }
    for (const Finding& f : r.findings) {
      std::string verdict = !f.vulnerable ? "fault" : *f.vulnerable ? "VULN" : "clean";
      std::string lines;
      for (const MatchedNode& m : f.matched) {
        lines += (lines.empty() ? "" : ",") + std::to_string(m.lineno);
      }
      std::snprintf(buf, sizeof buf, "%-40s %-32s %-9s %-10s %s\n", r.path.c_str(),
                    f.rule_id.c_str(), f.cwe.c_str(), verdict.c_str(),
                    *f.vulnerable ? lines.c_str() : "");
      out << buf;
    }
  }
  return out.str();
}

int cmd_scan(const std::vector<std::string>& inputs, const std::string& rules_dir,
             const std::string& format, int jobs, bool timing) {
  std::vector<Rule> rules;
  try {
    rules = load_rule_pack(rules_dir);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
  std::vector<std::string> paths = expand_paths(inputs);
  std::vector<ScanResult> results(paths.size());
  parallel_for(paths.size(), jobs, [&](size_t i) { results[i] = scan_file(paths[i], rules); });

  size_t scanned = 0;
  bool vulnerable = false;
  bool fault = false;
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const ScanResult& r : results) {
    for (const std::string& e : r.errors) {
      std::cerr << "error: " << e << "\n";
    }
    if (!r.parsed) {
      continue;
    }
    ++scanned;
    for (const Finding& f : r.findings) {
      if (!f.vulnerable) {
        fault = true;
        std::cerr << "fault: " << r.path << ": " << f.rule_id << ": " << f.diagnostic << "\n";
      } else if (*f.vulnerable) {
        vulnerable = true;
      }
    }
    docs.push_back(nlohmann::ordered_json::parse(findings_to_json(r.path, r.findings, timing)));
  }
  if (scanned == 0) {
    std::cerr << "error: nothing scanned\n";
    return kUsage;
  }
  if (format == "table") {
    std::cout << findings_table(results);
  } else {
    std::cout << docs.dump(2) << "\n";
  }
  if (fault) {
    return kFault;
  }
  return vulnerable ? kVulnerable : kClean;
}

std::optional<Ast> load_ast(const std::string& path) {
  std::optional<std::string> text = read_text(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  try {
    Ast ast = parse(SourceFile(path, *text));
    bool failed = false;
    for (const ParseDiagnostic& d : ast.diagnostics) {
      std::cerr << path << ":" << d.lineno << ": "
                << (d.severity == Severity::error ? "error" : "warning") << ": " << d.message
                << "\n";
      failed = failed || d.severity == Severity::error;
    }
    if (failed) {
      return std::nullopt;
    }
    return ast;
  } catch (const Error& ex) {
    std::cerr << "error: " << path << ": " << ex.what() << "\n";
    return std::nullopt;
  }
}

int cmd_graph(const std::string& path, const std::string& format, const std::string& module) {
  std::optional<Ast> ast = load_ast(path);
  if (!ast) {
    return kUsage;
  }
  std::vector<VeriPG> graphs = build_all(*ast);
  if (graphs.empty()) {
    std::cerr << "error: " << path << " has no modules\n";
    return kUsage;
  }
  const VeriPG* chosen = &graphs.front();
  if (!module.empty()) {
    auto it = std::find_if(graphs.begin(), graphs.end(),
                           [&](const VeriPG& g) { return g.module_name() == module; });
    if (it == graphs.end()) {
      std::cerr << "error: no module named " << module << "\n";
      return kUsage;
    }
    chosen = &*it;
  }
  std::cout << export_graph(*chosen, format == "dot" ? GraphFormat::dot : GraphFormat::json);
  return kClean;
}

int cmd_ast(const std::string& path) {
  std::optional<std::string> text = read_text(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kUsage;
  }
  try {
    Ast ast = parse(SourceFile(path, *text));
    std::cout << ast_to_json(ast);
    return ast.has_errors() ? kUsage : kClean;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
}

int cmd_rule_validate(const std::vector<std::string>& paths) {
  SchemaFsm fsm = build_fsm(catalog());
  bool malformed = false;
  bool invalid = false;
  for (const std::string& path : paths) {
    std::optional<std::string> text = read_text(path);
    if (!text) {
      std::cerr << "error: cannot read " << path << "\n";
      malformed = true;
      continue;
    }
    try {
      Rule rule = parse_rule_structure(*text);
      ValidationReport report = validate(rule, fsm);
      if (paths.size() > 1) {
        std::cout << path << ":\n";
      }
      std::cout << report_to_json(report);
      invalid = invalid || !report.valid;
    } catch (const SchemaError& ex) {
      std::cerr << "error: " << path << ": " << ex.what() << "\n";
      malformed = true;
    }
  }
  if (malformed) {
    return kUsage;
  }
  return invalid ? kVulnerable : kClean;
}

struct GenerateOptions {
  std::string cwe;
  std::string cwe_dir = "data/cwe";
  std::string provider_config;
  std::string replay;
  std::string mode;
  std::string script;
  std::string record;
  std::string out;
  std::string log;
  int cap = kDefaultIterationCap;
};

int cmd_generate(const GenerateOptions& o) {
  std::string desc_path = o.cwe_dir + "/" + o.cwe + ".json";
  std::optional<std::string> desc_text = read_text(desc_path);
  if (!desc_text) {
    std::cerr << "error: no description at " << desc_path << "\n";
    return kUsage;
  }
  if (o.cap < 1) {
    std::cerr << "error: --cap must be at least 1\n";
    return kUsage;
  }
  std::unique_ptr<Provider> provider;
  ScriptedProvider* scripted = nullptr;
  try {
    if (!o.script.empty()) {
      std::optional<std::string> script = read_text(o.script);
      if (!script) {
        std::cerr << "error: cannot read " << o.script << "\n";
        return kUsage;
      }
      auto owned = std::make_unique<ScriptedProvider>(
          nlohmann::json::parse(*script).get<std::vector<std::string>>());
      scripted = owned.get();
      provider = std::move(owned);
    } else {
      std::optional<std::string> config_text;
      if (!o.provider_config.empty()) {
        config_text = read_text(o.provider_config);
        if (!config_text) {
          std::cerr << "error: cannot read " << o.provider_config << "\n";
          return kUsage;
        }
      }
      ProviderOverrides flags;
      if (!o.replay.empty()) {
        flags.replay_path = o.replay;
      }
      if (!o.mode.empty()) {
        flags.mode = o.mode;
      }
      auto env = [](const std::string& name) -> std::optional<std::string> {
        const char* v = std::getenv(name.c_str());
        return v ? std::optional<std::string>(v) : std::nullopt;
      };
      provider = make_provider(resolve_provider_config(config_text, flags, env));
    }
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& ex) {
    std::cerr << "error: bad script: " << ex.what() << "\n";
    return kUsage;
  }

  int code = kFault;
  try {
    CweDescription desc = parse_cwe_description(*desc_text);
    VulnerabilityConditions conds = extract_conditions(desc, *provider);
    GenerationSession session = generate_rule(conds, build_fsm(catalog()), *provider, o.cap);
    std::string log = session_to_json(session);
    if (!o.log.empty()) {
      write_text(o.log, log);
    } else {
      std::cerr << log;
    }
    if (const Rule* rule = session.final_rule()) {
      if (!o.out.empty()) {
        write_text(o.out, serialize_rule(*rule));
      } else {
        std::cout << serialize_rule(*rule);
      }
      code = kClean;
    } else {
      std::cerr << "generation exhausted after " << session.iterations.size()
                << " iteration(s)\n";
      code = kVulnerable;
    }
  } catch (const FormatError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    code = kVulnerable;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    code = kFault;
  }
  if (scripted && !o.record.empty()) {
    write_text(o.record, serialize_transcript(scripted->transcript()));
  }
  return code;
}

int cmd_bench(const std::string& manifest_path, const std::string& rules_dir,
              const std::string& format, int jobs, int repeat) {
  std::optional<std::string> text = read_text(manifest_path);
  if (!text) {
    std::cerr << "error: cannot read " << manifest_path << "\n";
    return kUsage;
  }
  std::vector<ManifestEntry> manifest;
  std::vector<Rule> rules;
  try {
    manifest = parse_manifest(*text);
    rules = load_rule_pack(rules_dir);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
  if (manifest.empty()) {
    std::cerr << "error: manifest is empty\n";
    return kUsage;
  }
  fs::path base = fs::path(manifest_path).parent_path();
  std::vector<ScanResult> scans(manifest.size());
  std::vector<std::optional<std::string>> sources(manifest.size());
  parallel_for(manifest.size(), jobs, [&](size_t i) {
    std::string p = (base / manifest[i].path).string();
    sources[i] = read_text(p);
    scans[i] = sources[i] ? scan_source(manifest[i].path, *sources[i], rules) : ScanResult{};
  });
  std::map<std::string, std::vector<Finding>> findings;
  for (size_t i = 0; i < manifest.size(); ++i) {
    if (!scans[i].parsed) {
      std::cerr << "error: cannot scan " << manifest[i].path << "\n";
      return kUsage;
    }
    findings[manifest[i].path] = scans[i].findings;
  }
  // Timing runs are sequential so designs do not compete for cores.
  std::vector<BenchRow> rows;
  for (size_t i = 0; i < manifest.size(); ++i) {
    rows.push_back(bench_design(manifest[i].path, *sources[i], rules, repeat));
  }
  ScoreReport report = score(manifest, findings);
  std::vector<double> loc, prims, micros;
  for (const BenchRow& r : rows) {
    loc.push_back(static_cast<double>(r.loc));
    prims.push_back(static_cast<double>(r.primitives));
    micros.push_back(r.micros);
  }
  double r_prims = pearson(micros, prims);
  double r_loc = pearson(micros, loc);
  if (format == "table") {
    std::cout << score_to_table(report) << "\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-48s %6s %10s %10s\n", "design", "LOC", "primitives",
                  "micros");
    std::cout << buf;
    for (const BenchRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%-48s %6zu %10zu %10.1f\n", r.path.c_str(), r.loc,
                    r.primitives, r.micros);
      std::cout << buf;
    }
    std::printf("\npearson(time, primitives) = %.4f\npearson(time, LOC)        = %.4f\n",
                r_prims, r_loc);
  } else {
    nlohmann::ordered_json doc;
    doc["score"] = nlohmann::ordered_json::parse(score_to_json(report));
    doc["designs"] = nlohmann::ordered_json::array();
    for (const BenchRow& r : rows) {
      doc["designs"].push_back(
          {{"design", r.path}, {"loc", r.loc}, {"primitives", r.primitives}, {"micros", r.micros}});
    }
    doc["pearson_time_primitives"] = r_prims;
    doc["pearson_time_loc"] = r_loc;
    std::cout << doc.dump(2) << "\n";
  }
  return kClean;
}

// Seed files are named <cwe-label>_vuln.v or <cwe-label>_patched.v, e.g.
// cwe1280_vuln.v.
std::optional<std::pair<std::string, std::string>> classify_seed(const std::string& stem) {
  auto split = stem.rfind('_');
  if (split == std::string::npos || stem.rfind("cwe", 0) != 0) {
    return std::nullopt;
  }
  std::string kind = stem.substr(split + 1);
  std::string label = "CWE-" + stem.substr(3, split - 3);
  if (kind == "vuln") {
    return std::make_pair(label, std::string("seed"));
  }
  if (kind == "patched") {
    return std::make_pair(std::string("none"), std::string("patched"));
  }
  return std::nullopt;
}

int cmd_corpus_generate(const std::string& root, std::uint64_t seed) {
  fs::path seeds_dir = fs::path(root) / "seeds";
  fs::path mutants_dir = fs::path(root) / "mutants";
  std::vector<std::string> seeds;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(seeds_dir, ec)) {
    if (e.path().extension() == ".v") {
      seeds.push_back(e.path().filename().string());
    }
  }
  if (ec || seeds.empty()) {
    std::cerr << "error: no seed designs under " << seeds_dir << "\n";
    return kUsage;
  }
  std::sort(seeds.begin(), seeds.end());
  fs::create_directories(mutants_dir);
  std::vector<ManifestEntry> manifest;
  std::uint64_t counter = 0;
  for (const std::string& file : seeds) {
    std::string stem = fs::path(file).stem().string();
    auto cls = classify_seed(stem);
    if (!cls) {
      std::cerr << "error: cannot label seed " << file << "\n";
      return kUsage;
    }
    std::optional<std::string> src = read_text((seeds_dir / file).string());
    std::string seed_path = "seeds/" + file;
    manifest.push_back({seed_path, cls->first, cls->second, MutationKind::none, 0, ""});
    for (MutationKind kind : {MutationKind::name_substitution, MutationKind::block_extension,
                              MutationKind::structural}) {
      std::uint64_t s = seed * 1000 + counter++;
      std::string out;
      try {
        out = apply_mutation(kind, *src, s);
      } catch (const Error& ex) {
        std::cerr << "error: " << file << ": " << ex.what() << "\n";
        return kFault;
      }
      std::string name = stem + "." + std::string(mutation_kind_name(kind)) + ".v";
      write_text((mutants_dir / name).string(), out);
      manifest.push_back({"mutants/" + name, cls->first, "mutated", kind, s, seed_path});
    }
  }
  write_text((fs::path(root) / "manifest.jsonl").string(), serialize_manifest(manifest));
  std::cout << "wrote " << manifest.size() << " manifest entries\n";
  return kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static vulnerability scanner for Verilog RTL built on a fused property graph"};
  app.require_subcommand(1);

  std::string rules_dir = "data/rules";
  std::string format;
  int jobs = 1;

  std::vector<std::string> scan_paths;
  bool timing = false;
  auto* scan = app.add_subcommand("scan", "Run the rule pack over Verilog files");
  scan->add_option("paths", scan_paths, "Files or directories")->required();
  scan->add_option("--rules", rules_dir, "Rule directory")->capture_default_str();
  scan->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->default_val("json");
  scan->add_option("--jobs", jobs, "Parallel files")->check(CLI::PositiveNumber);
  scan->add_flag("--timing", timing, "Include rule execution time in JSON output");

  std::string graph_path;
  std::string module;
  auto* graph = app.add_subcommand("graph", "Export the property graph of a design");
  graph->add_option("path", graph_path)->required();
  graph->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}))->default_val("json");
  graph->add_option("--module", module, "Module to export (default: first)");

  std::string ast_path;
  auto* ast = app.add_subcommand("ast", "Dump the syntax tree of a design as JSON");
  ast->add_option("path", ast_path)->required();

  std::vector<std::string> rule_paths;
  auto* rule = app.add_subcommand("rule", "Rule utilities");
  rule->require_subcommand(1);
  auto* validate_cmd = rule->add_subcommand("validate", "Check rules against the graph schema");
  validate_cmd->add_option("paths", rule_paths)->required();

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a rule from a CWE description");
  generate->add_option("cwe", gen.cwe, "CWE id, e.g. CWE-1280")->required();
  generate->add_option("--cwe-dir", gen.cwe_dir, "Directory of CWE descriptions")
      ->capture_default_str();
  generate->add_option("--provider-config", gen.provider_config, "Provider JSON config");
  generate->add_option("--replay", gen.replay, "Replay transcript");
  generate->add_option("--mode", gen.mode, "Provider mode")->check(CLI::IsMember({"live", "replay"}));
  generate->add_option("--cap", gen.cap, "Iteration cap")->capture_default_str();
  generate->add_option("--out", gen.out, "Write the validated rule here");
  generate->add_option("--log", gen.log, "Write the session log here");
  generate->add_option("--script", gen.script, "JSON array of canned replies (fixture authoring)");
  generate->add_option("--record", gen.record, "Write the scripted transcript here");

  std::string manifest;
  int repeat = 5;
  auto* bench = app.add_subcommand("bench", "Score a labelled corpus and time the rule pack");
  bench->add_option("manifest", manifest)->required();
  bench->add_option("--rules", rules_dir)->capture_default_str();
  bench->add_option("--format", format)->check(CLI::IsMember({"json", "table"}))->default_val("json");
  bench->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  bench->add_option("--repeat", repeat, "Timing repetitions per design")->capture_default_str();

  std::string corpus_root = "data/corpus";
  std::uint64_t seed = 1;
  auto* corpus = app.add_subcommand("corpus", "Corpus utilities");
  corpus->require_subcommand(1);
  auto* corpus_gen = corpus->add_subcommand("generate", "Write mutants and the manifest");
  corpus_gen->add_option("--root", corpus_root)->capture_default_str();
  corpus_gen->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kClean : kUsage;
  }

  try {
    if (*scan) {
      return cmd_scan(scan_paths, rules_dir, format, jobs, timing);
    }
    if (*graph) {
      return cmd_graph(graph_path, format, module);
    }
    if (*ast) {
      return cmd_ast(ast_path);
    }
    if (*validate_cmd) {
      return cmd_rule_validate(rule_paths);
    }
    if (*generate) {
      return cmd_generate(gen);
    }
    if (*bench) {
      return cmd_bench(manifest, rules_dir, format, jobs, repeat);
    }
    if (*corpus_gen) {
      return cmd_corpus_generate(corpus_root, seed);
    }
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kFault;
  }
  return kUsage;
}
