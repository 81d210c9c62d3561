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

#ifndef CHRONOLAPSE_COMMON_HPP_
#define CHRONOLAPSE_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace chronolapse {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double DegToRad(double deg) { return deg * kPi / 180.0; }
constexpr double RadToDeg(double rad) { return rad * 180.0 / kPi; }

// Maps an angle in degrees into [0, 360).
inline double Wrap360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

// Maps an angle in degrees into (-180, 180].
inline double Wrap180(double deg) {
  double w = Wrap360(deg);
  return w > 180.0 ? w - 360.0 : w;
}

inline double Clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;

  double Dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 Cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double Norm() const { return std::sqrt(Dot(*this)); }
  Vec3 Normalized() const {
    double n = Norm();
    return n > 0.0 ? *this / n : *this;
  }
};

// Linear RGB triple, each component nominally in [0, 1].
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  Rgb operator+(const Rgb& o) const { return {r + o.r, g + o.g, b + o.b}; }
  Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
  Rgb operator*(const Rgb& o) const { return {r * o.r, g * o.g, b * o.b}; }
  bool operator==(const Rgb&) const = default;
};

inline Rgb Lerp(const Rgb& a, const Rgb& b, double t) {
  return a * (1.0 - t) + b * t;
}

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON syntax, timestamps, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant. `field()` names the
// offending field so callers can report it back (e.g. HTTP 400 bodies).
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Runs fn(i) for i in [0, n) on the available hardware threads. Callers
// write results into per-index slots so any reduction stays order-independent.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_COMMON_HPP_
