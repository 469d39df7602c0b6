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

// Binary orbit and track files.
//
// Orbit: 16-byte header
//   0..3   magic "SWOB"
//   4..5   version (u16 LE, = 1)
//   6      x alphabet size
//   7      y alphabet size
//   8..15  n (u64 LE)
// followed by n (x, y) byte pairs.
//
// Track: 16-byte header
//   0..3   magic "SWTK"
//   4..5   version (u16 LE, = 1)
//   6      number of parts
//   7      reserved (0)
//   8..15  n (u64 LE)
// followed by n symbol bytes.

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "swgen/common.hpp"
#include "swgen/sources.hpp"

namespace swgen {

namespace detail {

inline std::array<char, 16> make_header(const char* magic, std::uint8_t b6,
                                        std::uint8_t b7, std::uint64_t n) {
  std::array<char, 16> h{};
  std::memcpy(h.data(), magic, 4);
  h[4] = 1;
  h[5] = 0;
  h[6] = static_cast<char>(b6);
  h[7] = static_cast<char>(b7);
  for (int i = 0; i < 8; ++i) h[8 + i] = static_cast<char>((n >> (8 * i)) & 0xFF);
  return h;
}

struct Header {
  std::uint8_t b6 = 0, b7 = 0;
  std::uint64_t n = 0;
};

inline Header read_header(std::istream& in, const char* magic,
                          const std::string& path) {
  std::array<unsigned char, 16> h{};
  if (!in.read(reinterpret_cast<char*>(h.data()), 16))
    throw Error(path + ": truncated header");
  if (std::memcmp(h.data(), magic, 4) != 0) throw Error(path + ": bad magic");
  const unsigned version = h[4] | (h[5] << 8);
  if (version != 1) throw Error(path + ": unsupported version");
  Header out{h[6], h[7], 0};
  for (int i = 0; i < 8; ++i) out.n |= std::uint64_t{h[8 + i]} << (8 * i);
  return out;
}

}  // namespace detail

inline void save_orbit(const Orbit& o, const std::string& path) {
  if (o.x_alphabet > 255 || o.y_alphabet > 255)
    throw Error("save_orbit: alphabet too large for the header");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  const auto h = detail::make_header("SWOB", static_cast<std::uint8_t>(o.x_alphabet),
                                     static_cast<std::uint8_t>(o.y_alphabet),
                                     o.size());
  out.write(h.data(), h.size());
  std::string body(2 * o.size(), '\0');
  for (std::size_t i = 0; i < o.size(); ++i) {
    body[2 * i] = static_cast<char>(o.x[i]);
    body[2 * i + 1] = static_cast<char>(o.y[i]);
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw Error(path + ": write failed");
}

inline Orbit load_orbit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open");
  const auto h = detail::read_header(in, "SWOB", path);
  Orbit o;
  o.x_alphabet = h.b6;
  o.y_alphabet = h.b7;
  std::string body(2 * h.n, '\0');
  if (!in.read(body.data(), static_cast<std::streamsize>(body.size())))
    throw Error(path + ": truncated body");
  o.x.resize(h.n);
  o.y.resize(h.n);
  for (std::size_t i = 0; i < h.n; ++i) {
    o.x[i] = static_cast<Symbol>(body[2 * i]);
    o.y[i] = static_cast<Symbol>(body[2 * i + 1]);
    if (o.x[i] >= o.x_alphabet || o.y[i] >= o.y_alphabet)
      throw Error(path + ": symbol outside the alphabet");
  }
  return o;
}

inline void save_track(const SymbolTrack& t, const std::string& path) {
  if (t.parts > 255) throw Error("save_track: too many parts for the header");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  const auto h =
      detail::make_header("SWTK", static_cast<std::uint8_t>(t.parts), 0, t.size());
  out.write(h.data(), h.size());
  out.write(reinterpret_cast<const char*>(t.values.data()),
            static_cast<std::streamsize>(t.size()));
  if (!out) throw Error(path + ": write failed");
}

inline SymbolTrack load_track(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open");
  const auto h = detail::read_header(in, "SWTK", path);
  SymbolTrack t{std::vector<Symbol>(h.n), h.b6};
  if (!in.read(reinterpret_cast<char*>(t.values.data()),
               static_cast<std::streamsize>(h.n)))
    throw Error(path + ": truncated body");
  return t;
}

}  // namespace swgen
