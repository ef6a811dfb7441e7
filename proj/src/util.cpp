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

#include <atomic>
#include <iostream>
#include <mutex>

#include "egoqa/util.hpp"

namespace egoqa {

namespace {
std::atomic<bool> g_muted{false};
std::mutex g_log_mu;
}  // namespace

void LogInfo(std::string_view message) {
  if (g_muted.load()) return;
  std::lock_guard lock(g_log_mu);
  std::clog << "[egoqa] " << message << '\n';
}

void SetLogMuted(bool muted) { g_muted.store(muted); }

}  // namespace egoqa
