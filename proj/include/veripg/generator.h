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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "veripg/errors.h"
#include "veripg/rule.h"
#include "veripg/validator.h"

namespace veripg {

struct CweDescription {
  std::string cwe_id;
  std::string title;
  std::string body;
};

/// Reads {"cwe_id", "title", "body"}. Throws Error.
CweDescription parse_cwe_description(std::string_view json);

enum class Polarity { must_exist, must_not_exist };

struct Condition {
  std::string subject;
  std::string constraint;
  Polarity polarity = Polarity::must_exist;

  bool operator==(const Condition&) const = default;
};

struct VulnerabilityConditions {
  std::string cwe_id;
  std::vector<Condition> conditions;

  bool operator==(const VulnerabilityConditions&) const = default;
};

std::string conditions_to_json(const VulnerabilityConditions& conds);

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

/// A chat-completion model: messages in, reply text out. Throws ProviderError.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Hex SHA-256 of the canonical JSON encoding of a request's messages.
std::string request_digest(const std::vector<ChatMessage>& messages);

struct TranscriptEntry {
  std::string request_digest;
  std::string response_text;
};

std::vector<TranscriptEntry> parse_transcript(std::string_view json);
std::string serialize_transcript(const std::vector<TranscriptEntry>& entries);

/// Answers from a recorded transcript in order. A request whose digest does
/// not match the next entry, or a request past the end, is a ProviderError.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(std::vector<TranscriptEntry> entries);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  size_t consumed() const { return next_; }

 private:
  std::vector<TranscriptEntry> entries_;
  size_t next_ = 0;
};

/// Returns canned replies in order and records the transcript. Used to author
/// replay fixtures.
class ScriptedProvider : public Provider {
 public:
  explicit ScriptedProvider(std::vector<std::string> replies);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

 private:
  std::vector<std::string> replies_;
  std::vector<TranscriptEntry> transcript_;
};

enum class ProviderMode { live, replay };

struct ProviderConfig {
  ProviderMode mode = ProviderMode::replay;
  std::string endpoint;  // full URL of the chat-completions resource
  std::string model;
  std::string api_key;
  double temperature = 0.0;
  int timeout_ms = 60000;
  std::string replay_path;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Values given on the command line; unset fields fall through.
struct ProviderOverrides {
  std::optional<std::string> mode;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<std::string> replay_path;
};

/// Merges flag overrides, the environment and an optional JSON config file
/// (flag > env > file). Only the API key is read from the environment
/// (VERIPG_API_KEY). Throws ConfigError when the result is unusable.
ProviderConfig resolve_provider_config(
    const std::optional<std::string>& config_json, const ProviderOverrides& flags,
    const std::function<std::optional<std::string>(const std::string&)>& getenv);

/// OpenAI-style chat-completions client over HTTP(S).
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);
  std::string complete(const std::vector<ChatMessage>& messages) override;

 private:
  ProviderConfig config_;
};

/// Builds the provider a resolved config asks for. Replay mode loads the
/// transcript file.
std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

/// Contents of the first ```json fenced block, or of the first ``` block when
/// none is tagged json.
std::optional<std::string> extract_fenced_json(std::string_view text);

inline constexpr int kFormatRetries = 3;

/// Asks the provider for structured conditions. Malformed replies are
/// retried kFormatRetries times before FormatError.
VulnerabilityConditions extract_conditions(const CweDescription& desc, Provider& provider);

struct GenerationIteration {
  std::string response;
  std::optional<Rule> rule;  // unset when the reply could not be parsed
  ValidationReport report;
};

enum class GenerationOutcome { validated, exhausted };

std::string_view outcome_name(GenerationOutcome outcome);

struct GenerationSession {
  std::string cwe_id;
  int iteration_cap = 50;
  std::vector<GenerationIteration> iterations;
  GenerationOutcome outcome = GenerationOutcome::exhausted;

  const Rule* final_rule() const;
};

inline constexpr int kDefaultIterationCap = 50;

/// Prompts for a rule and feeds validator reports back until a candidate
/// validates or `cap` candidates have been tried.
GenerationSession generate_rule(const VulnerabilityConditions& conds, const SchemaFsm& fsm,
                                Provider& provider, int cap = kDefaultIterationCap);

std::string session_to_json(const GenerationSession& session);

struct MisuseRates {
  double illegal_rule = 0;
  double illegal_parameter = 0;
  double total = 0;
};

/// Violating primitive calls of each kind over all primitive calls in every
/// parsed candidate of every session.
MisuseRates misuse_metrics(const std::vector<GenerationSession>& sessions);

/// The prompt texts, exposed for tests.
std::string catalog_prompt();
std::vector<ChatMessage> condition_prompt(const CweDescription& desc);
std::vector<ChatMessage> rule_prompt(const VulnerabilityConditions& conds);

}  // namespace veripg
