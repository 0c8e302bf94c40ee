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

#include <stdexcept>
#include <string>

namespace veripg {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LexErrorKind { UnterminatedComment, UnterminatedString, IllegalCharacter };

class LexError : public Error {
 public:
  LexError(LexErrorKind kind, int lineno, const std::string& message)
      : Error("line " + std::to_string(lineno) + ": " + message),
        kind_(kind),
        lineno_(lineno) {}

  LexErrorKind kind() const { return kind_; }
  int lineno() const { return lineno_; }

 private:
  LexErrorKind kind_;
  int lineno_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int lineno, std::string expected, std::string found)
      : Error("line " + std::to_string(lineno) + ": expected " + expected +
              ", found '" + found + "'"),
        lineno_(lineno),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  int lineno() const { return lineno_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int lineno_;
  std::string expected_;
  std::string found_;
};

/// A CFG or DDG edge handed to fusion does not connect two common nodes.
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

/// Malformed graph JSON on import.
class GraphFormatError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string json_path, const std::string& message)
      : Error(json_path + ": " + message), json_path_(std::move(json_path)) {}

  const std::string& json_path() const { return json_path_; }

 private:
  std::string json_path_;
};

class UnknownPrimitive : public SchemaError {
 public:
  UnknownPrimitive(std::string json_path, std::string name)
      : SchemaError(std::move(json_path), "unknown primitive '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArityMismatch : public SchemaError {
 public:
  ArityMismatch(std::string json_path, std::string primitive, size_t expected,
                size_t got)
      : SchemaError(std::move(json_path),
                    primitive + " takes " + std::to_string(expected) +
                        " parameter(s), got " + std::to_string(got)),
        primitive_(std::move(primitive)),
        expected_(expected),
        got_(got) {}

  const std::string& primitive() const { return primitive_; }
  size_t expected() const { return expected_; }
  size_t got() const { return got_; }

 private:
  std::string primitive_;
  size_t expected_;
  size_t got_;
};

/// Raised when the executor meets a node whose type the validator did not
/// predict. Always a validator or schema bug.
class ExecutorTypeFault : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class MutationBroke : public Error {
 public:
  using Error::Error;
};

class MissingFindings : public Error {
 public:
  explicit MissingFindings(const std::string& design)
      : Error("no findings for design " + design), design_(design) {}

  const std::string& design() const { return design_; }

 private:
  std::string design_;
};

}  // namespace veripg
