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
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "veripg/corpus.h"
#include "veripg/errors.h"
#include "veripg/parser.h"

namespace veripg {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<Rule> load_rule_pack(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".json") {
      files.push_back(e.path());
    }
  }
  if (ec) {
    throw Error("cannot list rules directory " + dir + ": " + ec.message());
  }
  std::sort(files.begin(), files.end());
  SchemaFsm fsm = build_fsm(catalog());
  std::vector<Rule> rules;
  for (const auto& f : files) {
    Rule r;
    try {
      r = parse_rule(read_file(f.string()));
    } catch (const SchemaError& ex) {
      throw Error(f.string() + ": " + ex.what());
    }
    ValidationReport report = validate(r, fsm);
    if (!report.valid) {
      throw Error(f.string() + ": rule does not validate: " + report.violations.front().message);
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

size_t count_loc(std::string_view text) {
  size_t loc = 0;
  bool blank = true;
  for (char c : text) {
    if (c == '\n') {
      loc += blank ? 0 : 1;
      blank = true;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
    }
  }
  return loc + (blank ? 0 : 1);
}

ScanResult scan_source(const std::string& path, const std::string& text,
                       const std::vector<Rule>& rules) {
  ScanResult result;
  result.path = path;
  result.loc = count_loc(text);
  try {
    Ast ast = parse(SourceFile(path, text));
    for (const ParseDiagnostic& d : ast.diagnostics) {
      if (d.severity == Severity::error) {
        result.errors.push_back(path + ":" + std::to_string(d.lineno) + ": " + d.message);
      }
    }
    if (!result.errors.empty()) {
      return result;
    }
    result.findings = run_rules(build_all(ast), rules);
    result.parsed = true;
  } catch (const Error& ex) {
    result.errors.push_back(path + ": " + ex.what());
  }
  return result;
}

ScanResult scan_file(const std::string& path, const std::vector<Rule>& rules) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& ex) {
    ScanResult r;
    r.path = path;
    r.errors.push_back(ex.what());
    return r;
  }
  return scan_source(path, text, rules);
}

BenchRow bench_design(const std::string& path, const std::string& text,
                      const std::vector<Rule>& rules, int repeat) {
  BenchRow row;
  row.path = path;
  row.loc = count_loc(text);
  Ast ast = parse(SourceFile(path, text));
  std::vector<VeriPG> graphs = build_all(ast);
  row.micros = INFINITY;
  for (int i = 0; i < std::max(repeat, 1); ++i) {
    auto start = std::chrono::steady_clock::now();
    std::vector<Finding> findings = run_rules(graphs, rules);
    auto stop = std::chrono::steady_clock::now();
    double micros = std::chrono::duration<double, std::micro>(stop - start).count();
    row.micros = std::min(row.micros, micros);
    row.primitives = 0;
    for (const Finding& f : findings) {
      row.primitives += f.primitives;
    }
  }
  return row;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("pearson needs two equally long samples of size >= 2");
  }
  double n = static_cast<double>(x.size());
  double mx = 0;
  double my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) {
    return 0;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace veripg
