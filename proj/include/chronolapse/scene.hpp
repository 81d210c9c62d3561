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

// Simulated shooting world: ground, landmark solids, the region a camera
// can physically reach, moving people/vehicles, and the sun.
//
// Scene frame: x/y horizontal, z up (right-handed), meters. Scene yaw angles
// are measured counterclockwise from +x. The geo-reference pins +x to a
// compass bearing so everything can be mapped to GPS and real sun angles.

#ifndef CHRONOLAPSE_SCENE_HPP_
#define CHRONOLAPSE_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "chronolapse/common.hpp"
#include "chronolapse/timeutil.hpp"

namespace chronolapse {

struct GeoReference {
  double lat0 = 0.0;
  double lon0 = 0.0;
  double alt0 = 0.0;
  // Compass bearing of the local +x axis; 0 = North, clockwise positive.
  double heading_deg = 0.0;

  bool operator==(const GeoReference&) const = default;
};

// Axis-aligned horizontal rectangle, closed on all sides.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool Contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
  double Area() const { return (xmax - xmin) * (ymax - ymin); }
  bool operator==(const Rect&) const = default;
};

struct FlatGround {
  Rgb albedo;
  Rect bounds;

  bool operator==(const FlatGround&) const = default;
};

// Elevation grid. heights[r * cols + c] is the elevation at
// (origin.x + c * cell_size, origin.y + r * cell_size).
struct Heightfield {
  Rgb albedo;
  Vec2 origin;
  double cell_size = 1.0;
  int rows = 0;
  int cols = 0;
  std::vector<double> heights;

  // Bilinear elevation; positions outside the grid clamp to the edge.
  double HeightAt(double x, double y) const;
  Rect Footprint() const;

  bool operator==(const Heightfield& o) const {
    return albedo == o.albedo && origin.x == o.origin.x &&
           origin.y == o.origin.y && cell_size == o.cell_size &&
           rows == o.rows && cols == o.cols && heights == o.heights;
  }
};

using Ground = std::variant<FlatGround, Heightfield>;

struct Solid {
  Vec3 center;
  Vec3 size;
  Rgb albedo;
  // Saliency weight in (0, 1]; present only for landmark solids.
  std::optional<double> landmark;

  bool operator==(const Solid&) const = default;
};

struct ReachableRegion {
  std::vector<Rect> rects;
  double min_height = 0.0;
  double max_height = 0.0;

  bool operator==(const ReachableRegion&) const = default;
};

enum class AgentKind { kPerson, kVehicle };

struct AgentRoute {
  AgentKind kind = AgentKind::kPerson;
  std::vector<Vec2> polyline;
  double speed = 1.0;
  int count = 1;
  double phase_spread = 0.0;

  double Length() const;
  bool operator==(const AgentRoute& o) const;
};

struct SkyParams {
  Rgb day_zenith{0.25, 0.45, 0.85};
  Rgb night_zenith{0.005, 0.008, 0.02};
  double haze = 0.3;

  bool operator==(const SkyParams&) const = default;
};

struct SceneDescription {
  std::string name;
  GeoReference georef;
  Ground ground;
  std::vector<Solid> solids;
  ReachableRegion reachable;
  std::vector<AgentRoute> agents;
  SkyParams sky;

  Rect HorizontalBounds() const;
  // Diagonal of the horizontal bounds, used to normalize camera motion.
  double Diagonal() const;
  double GroundHeight(double x, double y) const;
  const Rgb& GroundAlbedo() const;
  // Index of the landmark with the highest weight (first on ties).
  std::optional<std::size_t> PrimaryLandmark() const;

  bool operator==(const SceneDescription&) const = default;
};

struct SunState {
  Vec3 direction;  // unit vector toward the sun, scene frame
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;  // compass, 0 = North, clockwise
  double irradiance = 0.0;
  double warmth = 0.0;
};

struct AgentSample {
  AgentKind kind = AgentKind::kPerson;
  Vec2 position;
  double heading_deg = 0.0;  // scene yaw of travel direction
};

// Parses and validates a scene document. Throws ParseError for malformed
// text and ValidationError (naming the field) for invariant violations.
SceneDescription LoadScene(std::string_view text);
SceneDescription LoadSceneFile(const std::string& path);
std::string SerializeScene(const SceneDescription& scene);
void ValidateScene(const SceneDescription& scene);

SunState ComputeSunState(const GeoReference& georef, Timestamp t);

// Local mean solar hour at t (UTC hour shifted by longitude, in [0, 24)).
double SolarHour(const GeoReference& georef, Timestamp t);

// UTC instant at which the local mean solar clock reads `solar_hour` on the
// UTC calendar date `date` (midnight instant).
Timestamp SolarHourToUtc(const GeoReference& georef, Timestamp date,
                         double solar_hour);

// Sunrise and sunset (local solar hours) for the given date. Polar day gives
// [0, 24]; polar night falls back to [6, 18].
std::pair<double, double> DaylightSolarHours(const GeoReference& georef,
                                             Timestamp date);

std::vector<AgentSample> AgentPositions(const SceneDescription& scene,
                                        Timestamp t, std::uint64_t seed);

bool IsReachable(const ReachableRegion& region, const Vec3& p);

const char* AgentKindName(AgentKind kind);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_SCENE_HPP_
