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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veripg/generator.h"

namespace veripg {

using nlohmann::json;

std::string request_digest(const std::vector<ChatMessage>& messages) {
  json arr = json::array();
  for (const ChatMessage& m : messages) {
    arr.push_back({{"content", m.content}, {"role", m.role}});
  }
  std::string canonical = arr.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::vector<TranscriptEntry> parse_transcript(std::string_view text) {
  std::vector<TranscriptEntry> out;
  try {
    json doc = json::parse(text);
    if (!doc.is_array()) {
      throw Error("bad transcript: expected an array of entries");
    }
    for (const json& e : doc) {
      out.push_back({e.at("request_digest").get<std::string>(),
                     e.at("response_text").get<std::string>()});
    }
  } catch (const json::exception& ex) {
    throw Error(std::string("bad transcript: ") + ex.what());
  }
  return out;
}

std::string serialize_transcript(const std::vector<TranscriptEntry>& entries) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const TranscriptEntry& e : entries) {
    doc.push_back({{"request_digest", e.request_digest}, {"response_text", e.response_text}});
  }
  return doc.dump(2) + "\n";
}

ReplayProvider::ReplayProvider(std::vector<TranscriptEntry> entries)
    : entries_(std::move(entries)) {}

std::string ReplayProvider::complete(const std::vector<ChatMessage>& messages) {
  if (next_ >= entries_.size()) {
    throw ProviderError("replay transcript exhausted after " + std::to_string(next_) +
                        " exchange(s)");
  }
  std::string digest = request_digest(messages);
  const TranscriptEntry& e = entries_[next_];
  if (digest != e.request_digest) {
    throw ProviderError("replay request " + std::to_string(next_) + " does not match: got " +
                        digest + ", transcript has " + e.request_digest);
  }
  ++next_;
  return e.response_text;
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> replies)
    : replies_(std::move(replies)) {}

std::string ScriptedProvider::complete(const std::vector<ChatMessage>& messages) {
  if (transcript_.size() >= replies_.size()) {
    throw ProviderError("script exhausted after " + std::to_string(replies_.size()) +
                        " replies");
  }
  const std::string& reply = replies_[transcript_.size()];
  transcript_.push_back({request_digest(messages), reply});
  return reply;
}

ProviderConfig resolve_provider_config(
    const std::optional<std::string>& config_json, const ProviderOverrides& flags,
    const std::function<std::optional<std::string>(const std::string&)>& getenv) {
  ProviderConfig cfg;
  std::string mode = "replay";
  if (config_json) {
    try {
      json j = json::parse(*config_json);
      mode = j.value("mode", mode);
      cfg.endpoint = j.value("endpoint", cfg.endpoint);
      cfg.model = j.value("model", cfg.model);
      cfg.api_key = j.value("api_key", cfg.api_key);
      cfg.temperature = j.value("temperature", cfg.temperature);
      cfg.timeout_ms = j.value("timeout_ms", cfg.timeout_ms);
      cfg.replay_path = j.value("replay", cfg.replay_path);
    } catch (const json::exception& ex) {
      throw ConfigError(std::string("bad provider config: ") + ex.what());
    }
  }
  if (std::optional<std::string> key = getenv("VERIPG_API_KEY"); key && !key->empty()) {
    cfg.api_key = *key;
  }
  if (flags.replay_path) {
    cfg.replay_path = *flags.replay_path;
    mode = "replay";
  }
  if (flags.mode) {
    mode = *flags.mode;
  }
  if (flags.endpoint) {
    cfg.endpoint = *flags.endpoint;
  }
  if (flags.model) {
    cfg.model = *flags.model;
  }

  if (mode == "replay") {
    cfg.mode = ProviderMode::replay;
    if (cfg.replay_path.empty()) {
      throw ConfigError("replay mode needs a transcript (--replay FILE)");
    }
  } else if (mode == "live") {
    cfg.mode = ProviderMode::live;
    if (cfg.endpoint.empty()) {
      throw ConfigError("live mode needs an endpoint");
    }
    if (cfg.api_key.empty()) {
      throw ConfigError("live mode needs an API key in VERIPG_API_KEY");
    }
  } else {
    throw ConfigError("unknown provider mode '" + mode + "'");
  }
  return cfg;
}

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {}

std::string HttpProvider::complete(const std::vector<ChatMessage>& messages) {
  // Split "scheme://host[:port]/path" into the client base and the path.
  const std::string& url = config_.endpoint;
  size_t scheme_end = url.find("://");
  size_t path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  json body;
  body["model"] = config_.model;
  body["temperature"] = config_.temperature;
  body["messages"] = json::array();
  for (const ChatMessage& m : messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }

  httplib::Client client(base);
  auto seconds = config_.timeout_ms / 1000;
  auto micros = (config_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
  httplib::Result res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderError("request to " + url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw ProviderError("provider rejected the API key (HTTP " + std::to_string(res->status) +
                        ")");
  }
  if (res->status != 200) {
    throw ProviderError("provider returned HTTP " + std::to_string(res->status));
  }
  try {
    json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& ex) {
    throw ProviderError(std::string("unexpected provider response: ") + ex.what());
  }
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
  if (config.mode == ProviderMode::live) {
    return std::make_unique<HttpProvider>(config);
  }
  std::ifstream in(config.replay_path);
  if (!in) {
    throw ConfigError("cannot read transcript " + config.replay_path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return std::make_unique<ReplayProvider>(parse_transcript(ss.str()));
}

}  // namespace veripg
