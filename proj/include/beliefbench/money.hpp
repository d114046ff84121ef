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

#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "beliefbench/error.hpp"

namespace beliefbench {

// Non-negative amount of money in integer cents. All engine arithmetic is
// exact; no floating point ever touches a balance.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) {
    if (cents < 0) throw GameError("negative money amount: " + std::to_string(cents) + " cents");
    Money m;
    m.cents_ = cents;
    return m;
  }
  static constexpr Money from_dollars(std::int64_t dollars) { return from_cents(dollars * 100); }

  constexpr std::int64_t cents() const { return cents_; }
  constexpr bool is_whole_dollars() const { return cents_ % 100 == 0; }
  constexpr std::int64_t whole_dollars() const { return cents_ / 100; }
  double as_dollars() const { return static_cast<double>(cents_) / 100.0; }

  constexpr Money operator+(Money other) const { return from_cents(cents_ + other.cents_); }
  // Throws when the result would be negative.
  constexpr Money operator-(Money other) const { return from_cents(cents_ - other.cents_); }
  constexpr Money operator*(std::int64_t k) const { return from_cents(cents_ * k); }

  constexpr auto operator<=>(const Money&) const = default;

  // "10" for whole dollars, "4.50" otherwise. No currency sign.
  std::string to_string() const;

 private:
  std::int64_t cents_ = 0;
};

constexpr Money min(Money a, Money b) { return a < b ? a : b; }

}  // namespace beliefbench
