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

#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace egoqa {

enum class ApiStyle { kChat, kCompletion };

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "llama-2-13b-chat";
  std::string api_key;
  double temperature = 0.0;
  int max_tokens = 128;
  double request_timeout_s = 60.0;
  int max_retries = 2;
  int parallelism = 1;
  ApiStyle style = ApiStyle::kChat;

  /// Throws Error(kInvalidArgument) on parallelism < 1 or max_retries < 0.
  void Validate() const;
  nlohmann::json ToJson() const;  ///< excludes the api key
};

/// Text-completion port. Implementations must be safe for concurrent calls.
/// Transport failures throw Error(kEndpointUnavailable).
class CompletionEndpoint {
 public:
  virtual ~CompletionEndpoint() = default;
  virtual std::string Complete(const std::string& prompt) = 0;
};

/// OpenAI-compatible HTTP client: POST {base_url}/chat/completions with a
/// single user message, or {base_url}/completions with a raw prompt.
class HttpCompletionEndpoint : public CompletionEndpoint {
 public:
  explicit HttpCompletionEndpoint(EndpointConfig config);
  std::string Complete(const std::string& prompt) override;

 private:
  EndpointConfig config_;
};

/// Key under which scripted completions are stored.
std::string PromptHash(std::string_view prompt);

/// In-process endpoint scripted by a fixture:
///
///   {"completions": {"<prompt hash>": "text" | ["attempt 1", "attempt 2"]},
///    "default": "text"}
///
/// A list entry serves its items in call order and then repeats the last.
/// Prompts with no entry and no default raise kEndpointUnavailable.
class MockEndpoint : public CompletionEndpoint {
 public:
  explicit MockEndpoint(const nlohmann::json& fixture);
  static std::unique_ptr<MockEndpoint> FromFile(const std::string& path);

  std::string Complete(const std::string& prompt) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::string, std::vector<std::string>> script_;
  std::optional<std::string> default_;
  std::mutex mu_;
  std::map<std::string, std::size_t> served_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace egoqa
