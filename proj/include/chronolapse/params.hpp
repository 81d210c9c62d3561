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

// The shooting parameter vector, split into the three groups that are
// optimized separately: viewfinder (where and which way), camera path (how
// the camera moves during capture) and time-warp (when and how often).

#ifndef CHRONOLAPSE_PARAMS_HPP_
#define CHRONOLAPSE_PARAMS_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "chronolapse/camera.hpp"
#include "chronolapse/scene.hpp"
#include "chronolapse/timeutil.hpp"

namespace chronolapse {

struct ViewfinderParams {
  Vec3 location;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;

  bool operator==(const ViewfinderParams&) const = default;
};

enum class PathMode { kStatic, kPan, kTruck, kOrbit };

const char* PathModeName(PathMode mode);
PathMode ParsePathMode(std::string_view name);

// amplitude: pan = total yaw sweep (deg), truck = lateral travel (m),
// orbit = arc about the primary landmark (deg), static = 0. Motion is
// centered on `base`: progress 0.5 reproduces the viewfinder pose.
struct CameraPath {
  PathMode mode = PathMode::kStatic;
  double amplitude = 0.0;
  ViewfinderParams base;

  bool operator==(const CameraPath&) const = default;
};

struct TimeWarpParams {
  Timestamp start;
  Timestamp end;
  double interval_s = 30.0;

  bool operator==(const TimeWarpParams&) const = default;
};

struct FrameBudget {
  int min_frames = 120;
  int max_frames = 600;

  bool operator==(const FrameBudget&) const = default;
};

struct ShootingParameters {
  ViewfinderParams viewfinder;
  CameraPath path;
  TimeWarpParams timewarp;

  bool operator==(const ShootingParameters&) const = default;
};

// floor((end - start) / interval) + 1.
int FrameCount(const TimeWarpParams& tw);
Timestamp FrameTime(const TimeWarpParams& tw, int k);

// Pose at path progress in [0, 1]. Orbit paths pivot about the scene's
// primary landmark and throw ValidationError when there is none.
CameraPose EvaluatePath(const CameraPath& path, const SceneDescription& scene,
                        double progress, double vfov_deg = 60.0);

// True when every one of `samples` uniformly spaced path positions is
// inside the reachable region (and orbit has a pivot).
bool PathIsFeasible(const CameraPath& path, const SceneDescription& scene,
                    int samples = 16);

// Checks every type invariant; the budget check is skipped when absent.
// Throws ValidationError naming the field.
void ValidateParams(const ShootingParameters& params,
                    const SceneDescription& scene,
                    const std::optional<FrameBudget>& budget = std::nullopt);

std::string SerializeParams(const ShootingParameters& params);
ShootingParameters ParseParams(std::string_view text);
ShootingParameters LoadParamsFile(const std::string& path);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_PARAMS_HPP_
