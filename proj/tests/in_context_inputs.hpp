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

#include <string>
#include <utility>
#include <vector>

namespace egoqa::testing {

// The narrations and question/answer pairs used as in-context examples by
// the prompt templates.
inline const std::vector<std::vector<std::string>> kInContextNarrations = {
    {"C pours hot water from the frying pan in his left hand into the bowl in his right hand."},
    {"C searches through the cabinet.", "C closes the cabinet.", "C picks the tin from the cabinet.",
     "C places the tin on the counter."},
    {"C turns on sink knob.", "C washes the cucumber on the sink.", "C turns off sink knob."},
};

inline const std::vector<std::pair<std::string, std::string>> kInContextPairs = {
    {"How many frying pans can i see on the shelf?", "two pieces"},
    {"What colour bowl did i carry from the plate stand?", "green"},
    {"What did i pour in the bowl?", "boiling water"},
};

}  // namespace egoqa::testing
