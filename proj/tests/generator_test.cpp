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

// Built with the same TLS switch as the provider so both see one httplib.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <thread>

#include "testutil.h"
#include "veripg/generator.h"

namespace veripg {
namespace {

using testing::read_file;
using testing::source_path;

const SchemaFsm& fsm() {
  static const SchemaFsm machine = build_fsm(catalog());
  return machine;
}

struct Replayed {
  GenerationSession session;
  std::string expected_log;
  size_t consumed = 0;
  size_t recorded = 0;
};

Replayed replay(const std::string& name, const std::string& cwe) {
  std::string base = source_path("data/transcripts/" + name);
  nlohmann::json expected = nlohmann::json::parse(read_file(base + ".expected.json"));
  ReplayProvider provider(parse_transcript(read_file(base + ".transcript.json")));
  CweDescription desc = parse_cwe_description(read_file(source_path("data/cwe/" + cwe + ".json")));
  VulnerabilityConditions conds = extract_conditions(desc, provider);
  Replayed r;
  r.session = generate_rule(conds, fsm(), provider, expected["iteration_cap"].get<int>());
  r.expected_log = read_file(base + ".expected.json");
  r.consumed = provider.consumed();
  r.recorded = parse_transcript(read_file(base + ".transcript.json")).size();
  return r;
}

TEST(Replay, FirstTry) {
  Replayed r = replay("cwe1280_first_try", "CWE-1280");
  EXPECT_EQ(r.session.outcome, GenerationOutcome::validated);
  ASSERT_EQ(r.session.iterations.size(), 1u);
  EXPECT_EQ(session_to_json(r.session), r.expected_log);
  EXPECT_EQ(r.consumed, r.recorded);
  ASSERT_NE(r.session.final_rule(), nullptr);
  EXPECT_TRUE(validate(*r.session.final_rule(), fsm()).valid);
}

TEST(Replay, CorrectedOnTheThirdIteration) {
  Replayed r = replay("cwe1245_corrected", "CWE-1245");
  EXPECT_EQ(r.session.outcome, GenerationOutcome::validated);
  ASSERT_EQ(r.session.iterations.size(), 3u);
  EXPECT_EQ(r.session.iterations[0].report.violations.at(0).kind, ViolationKind::IllegalRule);
  EXPECT_EQ(r.session.iterations[1].report.violations.at(0).kind,
            ViolationKind::IllegalParameter);
  EXPECT_TRUE(r.session.iterations[2].report.valid);
  EXPECT_EQ(session_to_json(r.session), r.expected_log);
  EXPECT_EQ(r.consumed, r.recorded);
  // The corrected rule is the shipped one.
  EXPECT_EQ(serialize_rule(*r.session.final_rule()),
            read_file(source_path("data/rules/cwe1245.json")));
}

TEST(Replay, Exhausted) {
  Replayed r = replay("cwe1300_exhausted", "CWE-1300");
  EXPECT_EQ(r.session.outcome, GenerationOutcome::exhausted);
  EXPECT_EQ(r.session.iterations.size(), 3u);
  EXPECT_EQ(r.session.final_rule(), nullptr);
  // The second reply had no parsable rule.
  EXPECT_FALSE(r.session.iterations[1].rule.has_value());
  EXPECT_EQ(session_to_json(r.session), r.expected_log);
  EXPECT_EQ(r.consumed, r.recorded);
}

double round4(double v) { return std::round(v * 10000) / 10000; }

TEST(Misuse, FixtureSessions) {
  std::vector<GenerationSession> sessions = {
      replay("cwe1280_first_try", "CWE-1280").session,
      replay("cwe1245_corrected", "CWE-1245").session,
      replay("cwe1300_exhausted", "CWE-1300").session};
  MisuseRates m = misuse_metrics(sessions);
  // 24 parsed primitive calls, 2 of each violation kind.
  EXPECT_EQ(round4(m.illegal_rule), 0.0833);
  EXPECT_EQ(round4(m.illegal_parameter), 0.0833);
  EXPECT_EQ(round4(m.total), 0.1667);
}

GenerationIteration iteration(size_t calls, size_t illegal_rule, size_t illegal_param) {
  std::string steps;
  for (size_t i = 0; i < calls; ++i) {
    steps += std::string(i ? "," : "") + R"({"primitive":"Exist","params":[]})";
  }
  GenerationIteration it;
  it.rule = parse_rule_structure(
      R"({"schema_version":1,"rule_id":"x","cwe":"CWE-0","description":"x","path":[)" + steps +
      R"(],"verdict":"exists"})");
  for (size_t i = 0; i < illegal_rule; ++i) {
    it.report.violations.push_back({1, ViolationKind::IllegalRule, "r", {}});
  }
  for (size_t i = 0; i < illegal_param; ++i) {
    it.report.violations.push_back({1, ViolationKind::IllegalParameter, "p", {}});
  }
  return it;
}

TEST(Misuse, Arithmetic) {
  GenerationSession clean;
  clean.iterations = {iteration(4, 0, 0)};
  MisuseRates zero = misuse_metrics({clean});
  EXPECT_EQ(zero.illegal_rule, 0.0);
  EXPECT_EQ(zero.illegal_parameter, 0.0);
  EXPECT_EQ(zero.total, 0.0);

  GenerationSession one;
  one.iterations = {iteration(6, 1, 0), iteration(4, 0, 0)};
  MisuseRates tenth = misuse_metrics({one});
  EXPECT_DOUBLE_EQ(tenth.illegal_rule, 0.1);
  EXPECT_DOUBLE_EQ(tenth.illegal_parameter, 0.0);
  EXPECT_DOUBLE_EQ(tenth.total, 0.1);

  // Iterations without a parsed rule do not count as calls.
  GenerationIteration unparsed;
  one.iterations.push_back(unparsed);
  EXPECT_DOUBLE_EQ(misuse_metrics({one}).illegal_rule, 0.1);
  EXPECT_THROW(misuse_metrics({}), Error);
}

TEST(Digest, MatchesReferenceSha256) {
  EXPECT_EQ(request_digest({{"user", "hi"}}),
            "4e79873118cd9be7a1f0308b9cd772950c5410c74ca3fe1ba2626cba009a9237");
  EXPECT_EQ(request_digest({{"system", "sys \"q\"\n"}, {"user", "\xc3\xa9"}}),
            "43e8b791605f273a99c5376b821a17e8290a8c03c61f743d3876a17818533545");
}

TEST(ReplayProvider, MismatchAndExhaustion) {
  std::vector<ChatMessage> req = {{"user", "hi"}};
  ReplayProvider ok({{request_digest(req), "hello"}});
  EXPECT_EQ(ok.complete(req), "hello");
  EXPECT_THROW(ok.complete(req), ProviderError);

  ReplayProvider wrong({{request_digest(req), "hello"}});
  EXPECT_THROW(wrong.complete({{"user", "bye"}}), ProviderError);

  // An edited fixture no longer replays.
  std::vector<TranscriptEntry> entries = parse_transcript(
      read_file(source_path("data/transcripts/cwe1280_first_try.transcript.json")));
  entries[0].request_digest[0] = entries[0].request_digest[0] == '0' ? '1' : '0';
  ReplayProvider edited(entries);
  CweDescription desc =
      parse_cwe_description(read_file(source_path("data/cwe/CWE-1280.json")));
  EXPECT_THROW(extract_conditions(desc, edited), ProviderError);
}

TEST(Transcript, RoundTrip) {
  std::string text = read_file(source_path("data/transcripts/cwe1245_corrected.transcript.json"));
  EXPECT_EQ(serialize_transcript(parse_transcript(text)), text);
  EXPECT_THROW(parse_transcript("{}"), Error);
}

TEST(ScriptedProvider, RecordsWhatItServes) {
  ScriptedProvider p({"a", "b"});
  std::vector<ChatMessage> first = {{"user", "1"}};
  std::vector<ChatMessage> second = {{"user", "2"}};
  EXPECT_EQ(p.complete(first), "a");
  EXPECT_EQ(p.complete(second), "b");
  EXPECT_THROW(p.complete(first), ProviderError);
  ASSERT_EQ(p.transcript().size(), 2u);
  EXPECT_EQ(p.transcript()[1].request_digest, request_digest(second));
  EXPECT_EQ(p.transcript()[1].response_text, "b");
}

TEST(Fence, Extraction) {
  EXPECT_EQ(extract_fenced_json("text\n```json\n{\"a\":1}\n```\nmore"), "{\"a\":1}\n");
  EXPECT_EQ(extract_fenced_json("```\n[1]\n```"), "[1]\n");
  EXPECT_EQ(extract_fenced_json("```\nplain\n```\n```json\n{}\n```"), "{}\n");
  EXPECT_FALSE(extract_fenced_json("no fence here").has_value());
  EXPECT_FALSE(extract_fenced_json("```json\n{\"open\": true}").has_value());
}

const char* kConditionsReply =
    "```json\n{\"conditions\":[{\"subject\":\"s\",\"constraint\":\"c\","
    "\"polarity\":\"must_not_exist\"}]}\n```";

TEST(Conditions, RetriesThenFormatError) {
  CweDescription desc{"CWE-1280", "t", "b"};
  ScriptedProvider late({"nope", "still nope", "```json\n{}\n```", kConditionsReply});
  VulnerabilityConditions c = extract_conditions(desc, late);
  EXPECT_EQ(c.cwe_id, "CWE-1280");
  ASSERT_EQ(c.conditions.size(), 1u);
  EXPECT_EQ(c.conditions[0].polarity, Polarity::must_not_exist);

  ScriptedProvider never({"a", "b", "c", "d", kConditionsReply});
  EXPECT_THROW(extract_conditions(desc, never), FormatError);
  EXPECT_EQ(never.transcript().size(), static_cast<size_t>(kFormatRetries + 1));

  ScriptedProvider empty({"", "", "", ""});
  EXPECT_THROW(extract_conditions(desc, empty), FormatError);
}

TEST(Generate, CapOfOneExhaustsOnABadRule) {
  VulnerabilityConditions conds{"CWE-1280", {{"s", "c", Polarity::must_exist}}};
  ScriptedProvider p({"```json\n{\"schema_version\":1,\"rule_id\":\"x\",\"cwe\":\"CWE-1280\","
                      "\"description\":\"d\",\"path\":[{\"primitive\":\"Node\",\"params\":"
                      "[\"ModuleDef\"]},{\"primitive\":\"Branch\",\"params\":[]}],"
                      "\"verdict\":\"exists\"}\n```"});
  GenerationSession s = generate_rule(conds, fsm(), p, 1);
  EXPECT_EQ(s.outcome, GenerationOutcome::exhausted);
  EXPECT_EQ(s.iterations.size(), 1u);
  EXPECT_EQ(outcome_name(s.outcome), "exhausted");
  ScriptedProvider unused({});
  EXPECT_THROW(generate_rule(conds, fsm(), unused, 0), Error);
}

TEST(Generate, FeedbackReachesTheModel) {
  VulnerabilityConditions conds{"CWE-1280", {{"s", "c", Polarity::must_exist}}};
  std::string bad = "```json\n{\"schema_version\":1,\"rule_id\":\"x\",\"cwe\":\"CWE-1280\","
                    "\"description\":\"d\",\"path\":[{\"primitive\":\"Node\",\"params\":"
                    "[\"ModuleDef\"]},{\"primitive\":\"Branch\",\"params\":[]}],"
                    "\"verdict\":\"exists\"}\n```";
  std::string good = "```json\n" + read_file(source_path("data/rules/cwe1280.json")) + "```";
  ScriptedProvider p({bad, good});
  GenerationSession s = generate_rule(conds, fsm(), p, 5);
  EXPECT_EQ(s.outcome, GenerationOutcome::validated);
  ASSERT_EQ(p.transcript().size(), 2u);
  // The second request is the first plus the reply and the validator report,
  // so its digest differs from a fresh prompt's.
  std::vector<ChatMessage> fresh = rule_prompt(conds);
  EXPECT_EQ(p.transcript()[0].request_digest, request_digest(fresh));
  EXPECT_NE(p.transcript()[1].request_digest, request_digest(fresh));
}

TEST(Prompts, MentionEveryPrimitive) {
  std::string text = catalog_prompt();
  for (const PrimitiveSpec& spec : catalog()) {
    EXPECT_NE(text.find(spec.name), std::string::npos) << spec.name;
  }
  std::vector<ChatMessage> msgs = condition_prompt({"CWE-1280", "title", "body text"});
  ASSERT_FALSE(msgs.empty());
  EXPECT_EQ(msgs.front().role, "system");
  EXPECT_NE(msgs.back().content.find("body text"), std::string::npos);
}

std::optional<std::string> no_env(const std::string&) { return std::nullopt; }

TEST(Config, Precedence) {
  std::string file = R"({"mode":"live","endpoint":"http://file/v1","model":"m-file",
                         "api_key":"file-key","temperature":0.5})";
  ProviderConfig c = resolve_provider_config(file, {}, no_env);
  EXPECT_EQ(c.mode, ProviderMode::live);
  EXPECT_EQ(c.endpoint, "http://file/v1");
  EXPECT_EQ(c.api_key, "file-key");
  EXPECT_EQ(c.temperature, 0.5);

  auto env = [](const std::string& name) -> std::optional<std::string> {
    return name == "VERIPG_API_KEY" ? std::optional<std::string>("env-key") : std::nullopt;
  };
  ProviderOverrides flags;
  flags.model = "m-flag";
  flags.endpoint = "http://flag/v1";
  c = resolve_provider_config(file, flags, env);
  EXPECT_EQ(c.api_key, "env-key");
  EXPECT_EQ(c.model, "m-flag");
  EXPECT_EQ(c.endpoint, "http://flag/v1");

  ProviderOverrides replay;
  replay.replay_path = "t.json";
  c = resolve_provider_config(file, replay, env);
  EXPECT_EQ(c.mode, ProviderMode::replay);
  EXPECT_EQ(c.replay_path, "t.json");
}

TEST(Config, Errors) {
  EXPECT_THROW(resolve_provider_config(std::nullopt, {}, no_env), ConfigError);
  ProviderOverrides live;
  live.mode = "live";
  live.endpoint = "http://localhost:1/v1";
  EXPECT_THROW(resolve_provider_config(std::nullopt, live, no_env), ConfigError);
  EXPECT_THROW(resolve_provider_config(std::string("{bad"), {}, no_env), ConfigError);
  ProviderOverrides odd;
  odd.mode = "psychic";
  EXPECT_THROW(resolve_provider_config(std::nullopt, odd, no_env), ConfigError);
  ProviderOverrides missing;
  missing.replay_path = "/no/such/transcript.json";
  EXPECT_THROW(make_provider(resolve_provider_config(std::nullopt, missing, no_env)),
               ConfigError);
}

class LocalServer {
 public:
  LocalServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (last_auth_ != "Bearer good") {
        res.status = 401;
        return;
      }
      nlohmann::json body = nlohmann::json::parse(req.body);
      std::string echo = body["messages"].back()["content"];
      nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"},
                                                         {"content", "echo: " + echo}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/v1/broken", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"unexpected\": true}", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  const std::string& last_auth() const { return last_auth_; }
  const std::string& last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::string last_auth_;
  std::string last_body_;
};

ProviderConfig live_config(const std::string& endpoint, const std::string& key) {
  ProviderConfig c;
  c.mode = ProviderMode::live;
  c.endpoint = endpoint;
  c.model = "test-model";
  c.api_key = key;
  c.timeout_ms = 5000;
  return c;
}

TEST(Http, ChatCompletionRoundTrip) {
  LocalServer server;
  HttpProvider p(live_config(server.url("/v1/chat/completions"), "good"));
  EXPECT_EQ(p.complete({{"system", "s"}, {"user", "ping"}}), "echo: ping");
  EXPECT_EQ(server.last_auth(), "Bearer good");
  nlohmann::json body = nlohmann::json::parse(server.last_body());
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
}

TEST(Http, Failures) {
  LocalServer server;
  HttpProvider rejected(live_config(server.url("/v1/chat/completions"), "bad"));
  EXPECT_THROW(rejected.complete({{"user", "x"}}), ProviderError);
  HttpProvider missing(live_config(server.url("/v1/none"), "good"));
  EXPECT_THROW(missing.complete({{"user", "x"}}), ProviderError);
  HttpProvider broken(live_config(server.url("/v1/broken"), "good"));
  EXPECT_THROW(broken.complete({{"user", "x"}}), ProviderError);
  ProviderConfig c = live_config("http://127.0.0.1:1/v1/chat/completions", "good");
  c.timeout_ms = 500;
  HttpProvider unreachable(c);
  EXPECT_THROW(unreachable.complete({{"user", "x"}}), ProviderError);
}

}  // namespace
}  // namespace veripg
