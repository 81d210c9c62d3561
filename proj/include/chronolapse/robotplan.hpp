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

// Conversion of shooting parameters into a plan a camera robot can execute:
// GPS waypoints with gimbal angles and a capture schedule.
//
// Geodesy is an equirectangular tangent plane at the scene origin
// (111320 m per degree of latitude). Gimbal yaw is a compass bearing
// (0 = North, clockwise); gimbal pitch is positive looking down.

#ifndef CHRONOLAPSE_ROBOTPLAN_HPP_
#define CHRONOLAPSE_ROBOTPLAN_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "chronolapse/params.hpp"
#include "chronolapse/scene.hpp"

namespace chronolapse {

inline constexpr double kMetersPerDegree = 111320.0;
inline constexpr double kMaxLocalRange = 50000.0;
inline constexpr double kMaxAbsLat0 = 89.0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

struct Waypoint {
  Timestamp time;
  double lat = 0.0;
  double lon = 0.0;
  double alt_m = 0.0;
  double gimbal_pitch_deg = 0.0;
  double gimbal_yaw_deg = 0.0;

  bool operator==(const Waypoint&) const = default;
};

struct CaptureSchedule {
  Timestamp start;
  Timestamp end;
  double interval_s = 0.0;

  bool operator==(const CaptureSchedule&) const = default;
};

struct RobotPlan {
  GeoReference georef;
  std::vector<Waypoint> waypoints;
  CaptureSchedule capture;
  double playback_fps = 24.0;

  bool operator==(const RobotPlan&) const = default;
};

// Throws ValidationError("lat0") when |lat0| >= 89 and
// ValidationError("position") beyond the 50 km validity range.
GeoPoint LocalToGps(const GeoReference& georef, const Vec3& p);
Vec3 GpsToLocal(const GeoReference& georef, const GeoPoint& g);

// Scene yaw (counterclockwise from +x) to compass bearing in [0, 360).
double CompassYaw(const GeoReference& georef, double scene_yaw_deg);
// Scene pitch (positive up) to gimbal pitch (positive down).
double GimbalPitch(double scene_pitch_deg);

// Samples the camera path at waypoint_count uniform progress points; the
// waypoint times are spread uniformly over [start, end] (rounded to ms).
RobotPlan CompilePlan(const SceneDescription& scene, const ShootingParameters& params,
                      const GeoReference& georef, int waypoint_count,
                      double playback_fps = 24.0);

void ValidatePlan(const RobotPlan& plan);

// JSON text; every non-integer quantity is written with at least nine
// decimals and enough digits to parse back to the same double.
std::string SerializePlan(const RobotPlan& plan);
RobotPlan DeserializePlan(std::string_view text);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_ROBOTPLAN_HPP_
