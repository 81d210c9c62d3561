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

#ifndef CHRONOLAPSE_CAMERA_HPP_
#define CHRONOLAPSE_CAMERA_HPP_

#include <optional>

#include "chronolapse/common.hpp"

namespace chronolapse {

// Pinhole camera. yaw 0 looks along +x, counterclockwise about +z; pitch is
// positive up.
struct CameraPose {
  Vec3 position;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double vfov_deg = 60.0;

  bool operator==(const CameraPose&) const = default;
};

struct CameraBasis {
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

CameraBasis BasisOf(const CameraPose& pose);

// Throws ValidationError for pitch outside [-89, 89], vfov outside
// (10, 120) or a non-finite position.
void ValidatePose(const CameraPose& pose);

// Normalized image coordinates of a world point: x grows right, y grows
// down, (0.5, 0.5) is the optical axis. Returns nullopt for points on or
// behind the image plane. `aspect` is width / height.
std::optional<Vec2> ProjectPoint(const CameraPose& pose, const Vec3& p,
                                 double aspect);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_CAMERA_HPP_
