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

#include "chronolapse/timeutil.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "chronolapse/common.hpp"

namespace chronolapse {
namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::chrono::year_month_day CivilDate(Timestamp t) {
  std::chrono::sys_days days{std::chrono::days{FloorDiv(t.ms, kMsPerDay)}};
  return std::chrono::year_month_day{days};
}

bool ReadInt(std::string_view s, std::size_t pos, std::size_t len, int* out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *out = v;
  return true;
}

[[noreturn]] void Fail(std::string_view text, const char* what) {
  throw ParseError("bad timestamp '" + std::string(text) + "': " + what);
}

}  // namespace

Timestamp Timestamp::PlusSeconds(double s) const {
  return Timestamp{ms + static_cast<std::int64_t>(std::llround(s * 1000.0))};
}

Timestamp Timestamp::FromSeconds(double s) {
  return Timestamp{static_cast<std::int64_t>(std::llround(s * 1000.0))};
}

double SecondsBetween(Timestamp a, Timestamp b) {
  return static_cast<double>(b.ms - a.ms) / 1000.0;
}

Timestamp TimestampFromCivil(int year, unsigned month, unsigned day, int hour,
                             int minute, double second) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                     std::chrono::day{day}};
  if (!ymd.ok()) throw ParseError("invalid calendar date");
  std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  std::int64_t ms = days * kMsPerDay +
                    static_cast<std::int64_t>(hour) * 3'600'000 +
                    static_cast<std::int64_t>(minute) * 60'000 +
                    static_cast<std::int64_t>(std::llround(second * 1000.0));
  return Timestamp{ms};
}

Timestamp ParseDate(std::string_view text) {
  int y, mo, d;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !ReadInt(text, 0, 4, &y) || !ReadInt(text, 5, 2, &mo) ||
      !ReadInt(text, 8, 2, &d)) {
    throw ParseError("bad date '" + std::string(text) + "', want YYYY-MM-DD");
  }
  return TimestampFromCivil(y, static_cast<unsigned>(mo),
                            static_cast<unsigned>(d));
}

Timestamp ParseIso8601(std::string_view text) {
  int y, mo, d, h, mi, s;
  if (text.size() < 20) Fail(text, "too short");
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':') {
    Fail(text, "want YYYY-MM-DDTHH:MM:SSZ");
  }
  if (!ReadInt(text, 0, 4, &y) || !ReadInt(text, 5, 2, &mo) ||
      !ReadInt(text, 8, 2, &d) || !ReadInt(text, 11, 2, &h) ||
      !ReadInt(text, 14, 2, &mi) || !ReadInt(text, 17, 2, &s)) {
    Fail(text, "non-digit field");
  }
  if (h > 23 || mi > 59 || s > 59) Fail(text, "time of day out of range");
  std::size_t pos = 19;
  int frac_ms = 0;
  if (text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) frac_ms = frac_ms * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) Fail(text, "empty fraction");
    for (int i = digits; i < 3; ++i) frac_ms *= 10;
  }
  if (pos + 1 != text.size() || text[pos] != 'Z') Fail(text, "missing 'Z'");
  Timestamp base;
  try {
    base = TimestampFromCivil(y, static_cast<unsigned>(mo),
                              static_cast<unsigned>(d), h, mi, s);
  } catch (const ParseError&) {
    Fail(text, "invalid calendar date");
  }
  base.ms += frac_ms;
  return base;
}

std::string FormatIso8601(Timestamp t) {
  auto ymd = CivilDate(t);
  std::int64_t in_day = t.ms - FloorDiv(t.ms, kMsPerDay) * kMsPerDay;
  int h = static_cast<int>(in_day / 3'600'000);
  int mi = static_cast<int>((in_day / 60'000) % 60);
  int s = static_cast<int>((in_day / 1000) % 60);
  int ms = static_cast<int>(in_day % 1000);
  char buf[40];
  if (ms == 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), h, mi, s);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), h, mi, s, ms);
  }
  return buf;
}

std::string FormatDate(Timestamp t) {
  auto ymd = CivilDate(t);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

int DayOfYear(Timestamp t) {
  using namespace std::chrono;
  auto ymd = CivilDate(t);
  sys_days jan1{ymd.year() / January / 1};
  return static_cast<int>((sys_days{ymd} - jan1).count()) + 1;
}

double UtcHourOfDay(Timestamp t) {
  std::int64_t in_day = t.ms - FloorDiv(t.ms, kMsPerDay) * kMsPerDay;
  return static_cast<double>(in_day) / 3'600'000.0;
}

Timestamp StartOfUtcDay(Timestamp t) {
  return Timestamp{FloorDiv(t.ms, kMsPerDay) * kMsPerDay};
}

}  // namespace chronolapse
