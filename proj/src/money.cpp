// Copyright 2026 The beliefbench Authors.
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

#include "beliefbench/money.hpp"

#include <fmt/format.h>

namespace beliefbench {

std::string Money::to_string() const {
  if (is_whole_dollars()) return std::to_string(whole_dollars());
  return fmt::format("{}.{:02d}", cents_ / 100, cents_ % 100);
}

}  // namespace beliefbench
