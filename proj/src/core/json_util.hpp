// Copyright 2026 The Chronolapse Authors.
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

// Strict JSON field access shared by the file-format readers. Every reader
// rejects unknown keys and reports the dotted path of the bad field.

#ifndef CHRONOLAPSE_SRC_CORE_JSON_UTIL_HPP_
#define CHRONOLAPSE_SRC_CORE_JSON_UTIL_HPP_

#include <array>
#include <initializer_list>
#include <string>
#include <string_view>

#include "chronolapse/common.hpp"
#include "chronolapse/timeutil.hpp"
#include "json.hpp"

namespace chronolapse::jsonutil {

using Json = nlohmann::json;

inline Json ParseText(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string Join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline void RequireObject(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
}

inline void RejectUnknownKeys(const Json& j, const std::string& path,
                              std::initializer_list<std::string_view> allowed) {
  RequireObject(j, path);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(Join(path, key) + ": unknown key");
  }
}

inline const Json& Field(const Json& j, std::string_view key,
                         const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(Join(path, key) + ": missing");
  return *it;
}

inline double Number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline double NumberField(const Json& j, std::string_view key,
                          const std::string& path) {
  return Number(Field(j, key, path), Join(path, key));
}

inline long long Integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<long long>();
}

inline long long IntegerField(const Json& j, std::string_view key,
                              const std::string& path) {
  return Integer(Field(j, key, path), Join(path, key));
}

inline std::string StringField(const Json& j, std::string_view key,
                               const std::string& path) {
  const Json& v = Field(j, key, path);
  if (!v.is_string()) throw ParseError(Join(path, key) + ": expected a string");
  return v.get<std::string>();
}

inline bool BoolField(const Json& j, std::string_view key,
                      const std::string& path) {
  const Json& v = Field(j, key, path);
  if (!v.is_boolean()) throw ParseError(Join(path, key) + ": expected a bool");
  return v.get<bool>();
}

inline const Json& ArrayField(const Json& j, std::string_view key,
                              const std::string& path) {
  const Json& v = Field(j, key, path);
  if (!v.is_array()) throw ParseError(Join(path, key) + ": expected an array");
  return v;
}

inline Timestamp TimestampField(const Json& j, std::string_view key,
                                const std::string& path) {
  try {
    return ParseIso8601(StringField(j, key, path));
  } catch (const ParseError& e) {
    throw ParseError(Join(path, key) + ": " + e.what());
  }
}

// Fixed-length numeric array.
template <std::size_t N>
std::array<double, N> Numbers(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) {
    throw ParseError(path + ": expected an array of " + std::to_string(N) +
                     " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = Number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

inline Vec3 Vec3Of(const Json& j, const std::string& path) {
  auto a = Numbers<3>(j, path);
  return {a[0], a[1], a[2]};
}

inline Rgb RgbOf(const Json& j, const std::string& path) {
  auto a = Numbers<3>(j, path);
  return {a[0], a[1], a[2]};
}

inline Json ToJson(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }
inline Json ToJson(const Rgb& c) { return Json::array({c.r, c.g, c.b}); }

}  // namespace chronolapse::jsonutil

#endif  // CHRONOLAPSE_SRC_CORE_JSON_UTIL_HPP_
