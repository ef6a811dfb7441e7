// Copyright 2026 The egoqa Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "egoqa/endpoint.hpp"

#include <fstream>
#include <regex>

#include <httplib.h>

#include "egoqa/error.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

void EndpointConfig::Validate() const {
  if (parallelism < 1) throw Error(ErrorCode::kInvalidArgument, "parallelism must be >= 1");
  if (max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

nlohmann::json EndpointConfig::ToJson() const {
  return {{"base_url", base_url},
          {"model", model},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"request_timeout_s", request_timeout_s},
          {"max_retries", max_retries},
          {"style", style == ApiStyle::kChat ? "chat" : "completion"}};
}

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

ParsedUrl SplitUrl(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw Error(ErrorCode::kInvalidArgument, "bad base url: " + url);
  }
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {m[1].str(), path};
}

}  // namespace

HttpCompletionEndpoint::HttpCompletionEndpoint(EndpointConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  SplitUrl(config_.base_url);
}

std::string HttpCompletionEndpoint::Complete(const std::string& prompt) {
  const ParsedUrl url = SplitUrl(config_.base_url);
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::duration<double>(config_.request_timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  nlohmann::json body = {{"model", config_.model},
                         {"temperature", config_.temperature},
                         {"max_tokens", config_.max_tokens}};
  std::string path = url.path;
  if (config_.style == ApiStyle::kChat) {
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    path += "/chat/completions";
  } else {
    body["prompt"] = prompt;
    path += "/completions";
  }

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kEndpointUnavailable,
                config_.base_url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kEndpointUnavailable,
                config_.base_url + ": HTTP " + std::to_string(res->status));
  }
  try {
    const auto reply = nlohmann::json::parse(res->body);
    const auto& choice = reply.at("choices").at(0);
    if (config_.style == ApiStyle::kChat) {
      return choice.at("message").at("content").get<std::string>();
    }
    return choice.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kEndpointUnavailable, std::string("unexpected reply: ") + e.what());
  }
}

std::string PromptHash(std::string_view prompt) { return Hex64(Fnv1a64(prompt)); }

MockEndpoint::MockEndpoint(const nlohmann::json& fixture) {
  if (fixture.contains("completions")) {
    for (const auto& [hash, entry] : fixture.at("completions").items()) {
      std::vector<std::string> attempts;
      if (entry.is_array()) {
        for (const auto& e : entry) attempts.push_back(e.get<std::string>());
      } else {
        attempts.push_back(entry.get<std::string>());
      }
      if (attempts.empty()) continue;
      script_[hash] = std::move(attempts);
    }
  }
  if (fixture.contains("default")) default_ = fixture.at("default").get<std::string>();
}

std::unique_ptr<MockEndpoint> MockEndpoint::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kUnreadableInput, path);
  try {
    return std::make_unique<MockEndpoint>(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, path + ": " + e.what());
  }
}

std::string MockEndpoint::Complete(const std::string& prompt) {
  ++calls_;
  const std::string hash = PromptHash(prompt);
  auto it = script_.find(hash);
  if (it == script_.end()) {
    if (default_) return *default_;
    throw Error(ErrorCode::kEndpointUnavailable, "mock has no completion for " + hash);
  }
  std::lock_guard lock(mu_);
  std::size_t& n = served_[hash];
  const std::string& out = it->second[std::min(n, it->second.size() - 1)];
  ++n;
  return out;
}

}  // namespace egoqa
