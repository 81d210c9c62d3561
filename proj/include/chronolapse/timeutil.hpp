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

#ifndef CHRONOLAPSE_TIMEUTIL_HPP_
#define CHRONOLAPSE_TIMEUTIL_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace chronolapse {

// UTC instant with millisecond resolution, counted from the Unix epoch.
struct Timestamp {
  std::int64_t ms = 0;

  auto operator<=>(const Timestamp&) const = default;

  double Seconds() const { return static_cast<double>(ms) / 1000.0; }
  Timestamp PlusSeconds(double s) const;

  static Timestamp FromSeconds(double s);
};

// Seconds from a to b (may be negative).
double SecondsBetween(Timestamp a, Timestamp b);

Timestamp TimestampFromCivil(int year, unsigned month, unsigned day, int hour = 0,
                             int minute = 0, double second = 0.0);

// Accepts `YYYY-MM-DDTHH:MM:SS[.fff]Z`. Throws ParseError otherwise.
Timestamp ParseIso8601(std::string_view text);

// `YYYY-MM-DDTHH:MM:SSZ`, with a `.mmm` fraction only when nonzero.
std::string FormatIso8601(Timestamp t);

// Parses a `YYYY-MM-DD` date into its midnight UTC instant.
Timestamp ParseDate(std::string_view text);
std::string FormatDate(Timestamp t);

// 1-based day of year of the UTC date containing t.
int DayOfYear(Timestamp t);

// Hours since UTC midnight of the date containing t, in [0, 24).
double UtcHourOfDay(Timestamp t);

// Midnight UTC of the date containing t.
Timestamp StartOfUtcDay(Timestamp t);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_TIMEUTIL_HPP_
