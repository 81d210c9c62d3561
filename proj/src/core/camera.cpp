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

#include "chronolapse/camera.hpp"

#include <cmath>

namespace chronolapse {

CameraBasis BasisOf(const CameraPose& pose) {
  const double yaw = DegToRad(pose.yaw_deg);
  const double pitch = DegToRad(pose.pitch_deg);
  CameraBasis b;
  b.forward = {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw),
               std::sin(pitch)};
  b.right = {std::sin(yaw), -std::cos(yaw), 0.0};
  b.up = b.right.Cross(b.forward);
  return b;
}

void ValidatePose(const CameraPose& pose) {
  if (!std::isfinite(pose.position.x) || !std::isfinite(pose.position.y) ||
      !std::isfinite(pose.position.z)) {
    throw ValidationError("position", "must be finite");
  }
  if (!(pose.pitch_deg >= -89.0 && pose.pitch_deg <= 89.0)) {
    throw ValidationError("pitch_deg", "must be in [-89, 89]");
  }
  if (!(pose.vfov_deg > 10.0 && pose.vfov_deg < 120.0)) {
    throw ValidationError("vfov_deg", "must be in (10, 120)");
  }
  if (!std::isfinite(pose.yaw_deg)) throw ValidationError("yaw_deg", "must be finite");
}

std::optional<Vec2> ProjectPoint(const CameraPose& pose, const Vec3& p,
                                 double aspect) {
  const CameraBasis b = BasisOf(pose);
  const Vec3 d = p - pose.position;
  const double depth = d.Dot(b.forward);
  if (depth <= 0.0) return std::nullopt;
  const double half = std::tan(DegToRad(pose.vfov_deg) / 2.0);
  const double xn = d.Dot(b.right) / depth;
  const double yn = d.Dot(b.up) / depth;
  return Vec2{0.5 + xn / (2.0 * half * aspect), 0.5 - yn / (2.0 * half)};
}

}  // namespace chronolapse
