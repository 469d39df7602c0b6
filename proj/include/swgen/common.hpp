// Copyright 2026 The swgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swgen {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// Wildcard symbol inside a Word: "any value" when computing name
/// probabilities, "unknown" in decoder output.
inline constexpr Symbol kAny = 0xFF;

/// Which coordinate track a partition, tower or marker rule may read.
enum class Scope { x_only, y_only, joint };

inline std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::x_only:
      return "x-only";
    case Scope::y_only:
      return "y-only";
    case Scope::joint:
      return "joint";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Scope scope_from_string(std::string_view s) {
  if (s == "x-only") return Scope::x_only;
  if (s == "y-only") return Scope::y_only;
  if (s == "joint") return Scope::joint;
  throw Error("unknown scope '" + std::string(s) + "'");
}

/// Values of a partition along an orbit: the process (P(T^i z))_i.
struct SymbolTrack {
  std::vector<Symbol> values;
  unsigned parts = 1;

  std::size_t size() const { return values.size(); }
  Symbol operator[](std::size_t i) const { return values[i]; }
  Symbol& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const SymbolTrack&, const SymbolTrack&) = default;
};

inline Word slice(std::span<const Symbol> track, std::size_t begin,
                  std::size_t length) {
  return Word(track.begin() + static_cast<std::ptrdiff_t>(begin),
              track.begin() + static_cast<std::ptrdiff_t>(begin + length));
}

}  // namespace swgen
