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

#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "egoqa/endpoint.hpp"
#include "egoqa/error.hpp"
#include "egoqa/eval_metrics.hpp"
#include "test_support.hpp"

namespace egoqa {
namespace {

// OpenAI-style server on an ephemeral port for the lifetime of the test.
class FakeServer {
 public:
  FakeServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = nlohmann::json::parse(req.body);
      last_auth = req.get_header_value("Authorization");
      if (fail_next > 0) {
        --fail_next;
        res.status = 503;
        return;
      }
      const std::string content = last_body["messages"][0]["content"].get<std::string>();
      res.set_content(
          nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", "echo:" + content}}}}}}}.dump(),
          "application/json");
    });
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = nlohmann::json::parse(req.body);
      res.set_content(nlohmann::json{{"choices", {{{"text", "text:" + last_body["prompt"].get<std::string>()}}}}}.dump(),
                      "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      const std::string text = body["input"].get<std::string>();
      std::vector<double> v = {static_cast<double>(text.size()), 1.0, 0.0};
      res.set_content(nlohmann::json{{"data", {{{"embedding", v}}}}}.dump(), "application/json");
    });
    server_.Post("/bad/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"nope\": 1}", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path = "/v1") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  nlohmann::json last_body;
  std::string last_auth;
  int fail_next = 0;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpCompletionEndpointTest, ChatRequestShape) {
  FakeServer server;
  EndpointConfig cfg;
  cfg.base_url = server.url("/v1/");
  cfg.model = "test-model";
  cfg.api_key = "sekret";
  cfg.max_tokens = 64;
  HttpCompletionEndpoint ep(cfg);
  EXPECT_EQ(ep.Complete("hello"), "echo:hello");
  EXPECT_EQ(server.last_body["model"], "test-model");
  EXPECT_EQ(server.last_body["max_tokens"], 64);
  EXPECT_EQ(server.last_body["temperature"], 0.0);
  EXPECT_EQ(server.last_body["messages"][0]["role"], "user");
  EXPECT_EQ(server.last_auth, "Bearer sekret");
}

TEST(HttpCompletionEndpointTest, CompletionStyle) {
  FakeServer server;
  EndpointConfig cfg;
  cfg.base_url = server.url();
  cfg.style = ApiStyle::kCompletion;
  HttpCompletionEndpoint ep(cfg);
  EXPECT_EQ(ep.Complete("<s>[INST] hi"), "text:<s>[INST] hi");
  EXPECT_EQ(server.last_body["prompt"], "<s>[INST] hi");
}

TEST(HttpCompletionEndpointTest, FailuresAreEndpointUnavailable) {
  FakeServer server;
  EndpointConfig cfg;
  cfg.base_url = server.url();
  server.fail_next = 1;
  HttpCompletionEndpoint ep(cfg);
  try {
    ep.Complete("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnavailable);
    EXPECT_NE(std::string(e.what()).find("503"), std::string::npos);
  }
  EXPECT_EQ(ep.Complete("x"), "echo:x");

  cfg.base_url = server.url("/bad");
  EXPECT_THROW(HttpCompletionEndpoint(cfg).Complete("x"), Error);
}

TEST(HttpCompletionEndpointTest, UnreachableServer) {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.request_timeout_s = 2.0;
  try {
    HttpCompletionEndpoint(cfg).Complete("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnavailable);
  }
}

TEST(HttpCompletionEndpointTest, BadConfig) {
  EndpointConfig cfg;
  cfg.base_url = "ftp://host";
  EXPECT_THROW(HttpCompletionEndpoint{cfg}, Error);
  cfg.base_url = "http://h";
  cfg.max_retries = -1;
  EXPECT_THROW(HttpCompletionEndpoint{cfg}, Error);
}

TEST(EndpointConfigTest, JsonOmitsSecrets) {
  EndpointConfig cfg;
  cfg.api_key = "sekret";
  cfg.parallelism = 9;
  const std::string dumped = cfg.ToJson().dump();
  EXPECT_EQ(dumped.find("sekret"), std::string::npos);
  EXPECT_EQ(dumped.find("parallelism"), std::string::npos);
}

TEST(HttpEmbedderTest, RoundTrip) {
  FakeServer server;
  EndpointConfig cfg;
  cfg.base_url = server.url();
  HttpEmbedder emb(cfg);
  const auto v = emb.Embed("abcd");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_FALSE(emb.offline());
  EXPECT_NEAR(SentenceSimilarity("abcd", "abcd", emb), 1.0, 1e-12);
  cfg.base_url = server.url("/nothing");
  try {
    HttpEmbedder(cfg).Embed("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmbedderUnavailable);
  }
}

TEST(PromptHashTest, StableHex) {
  EXPECT_EQ(PromptHash(""), "cbf29ce484222325");
  EXPECT_EQ(PromptHash("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(PromptHash("hello").size(), 16u);
}

TEST(MockEndpointTest, ScriptedAttemptsThenRepeatLast) {
  MockEndpoint ep(nlohmann::json{{"completions", {{PromptHash("p"), {"one", "two"}}, {PromptHash("q"), "only"}}}});
  EXPECT_EQ(ep.Complete("p"), "one");
  EXPECT_EQ(ep.Complete("p"), "two");
  EXPECT_EQ(ep.Complete("p"), "two");
  EXPECT_EQ(ep.Complete("q"), "only");
  EXPECT_EQ(ep.calls(), 4u);
  try {
    ep.Complete("unknown");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnavailable);
  }
}

TEST(MockEndpointTest, DefaultAndFile) {
  MockEndpoint ep(nlohmann::json{{"default", "d"}});
  EXPECT_EQ(ep.Complete("anything"), "d");
  testing::TempDir dir("mock");
  testing::WriteFile(dir / "f.json", R"({"completions": {}, "default": "x"})");
  EXPECT_EQ(MockEndpoint::FromFile(dir / "f.json")->Complete("y"), "x");
  testing::WriteFile(dir / "bad.json", "{");
  EXPECT_THROW(MockEndpoint::FromFile(dir / "bad.json"), Error);
  EXPECT_THROW(MockEndpoint::FromFile(dir / "missing.json"), Error);
}

}  // namespace
}  // namespace egoqa
