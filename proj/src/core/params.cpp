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

#include "chronolapse/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "formats.hpp"

namespace chronolapse {

using jsonutil::Json;

const char* PathModeName(PathMode mode) {
  switch (mode) {
    case PathMode::kStatic: return "static";
    case PathMode::kPan: return "pan";
    case PathMode::kTruck: return "truck";
    case PathMode::kOrbit: return "orbit";
  }
  return "static";
}

PathMode ParsePathMode(std::string_view name) {
  if (name == "static") return PathMode::kStatic;
  if (name == "pan") return PathMode::kPan;
  if (name == "truck") return PathMode::kTruck;
  if (name == "orbit") return PathMode::kOrbit;
  throw ParseError("unknown path mode '" + std::string(name) +
                   "', want static|pan|truck|orbit");
}

int FrameCount(const TimeWarpParams& tw) {
  const std::int64_t span_ms = tw.end.ms - tw.start.ms;
  const double interval_ms = tw.interval_s * 1000.0;
  const double rounded = std::round(interval_ms);
  if (std::abs(interval_ms - rounded) < 1e-9 && rounded >= 1.0) {
    return static_cast<int>(span_ms / static_cast<std::int64_t>(rounded)) + 1;
  }
  return static_cast<int>(std::floor(span_ms / interval_ms + 1e-12)) + 1;
}

Timestamp FrameTime(const TimeWarpParams& tw, int k) {
  return tw.start.PlusSeconds(k * tw.interval_s);
}

CameraPose EvaluatePath(const CameraPath& path, const SceneDescription& scene,
                        double progress, double vfov_deg) {
  const ViewfinderParams& base = path.base;
  CameraPose pose{base.location, base.yaw_deg, base.pitch_deg, vfov_deg};
  const double offset = path.amplitude * (progress - 0.5);
  switch (path.mode) {
    case PathMode::kStatic:
      break;
    case PathMode::kPan:
      pose.yaw_deg = base.yaw_deg + offset;
      break;
    case PathMode::kTruck: {
      const double yaw = DegToRad(base.yaw_deg);
      const Vec3 right{std::sin(yaw), -std::cos(yaw), 0.0};
      pose.position = base.location + right * offset;
      break;
    }
    case PathMode::kOrbit: {
      auto pivot_index = scene.PrimaryLandmark();
      if (!pivot_index) {
        throw ValidationError("mode", "orbit requires a landmark to pivot about");
      }
      const Vec3& pivot = scene.solids[*pivot_index].center;
      const double a = DegToRad(offset);
      const double dx = base.location.x - pivot.x;
      const double dy = base.location.y - pivot.y;
      pose.position = {pivot.x + dx * std::cos(a) - dy * std::sin(a),
                       pivot.y + dx * std::sin(a) + dy * std::cos(a),
                       base.location.z};
      pose.yaw_deg = base.yaw_deg + offset;
      break;
    }
  }
  pose.yaw_deg = Wrap360(pose.yaw_deg);
  return pose;
}

bool PathIsFeasible(const CameraPath& path, const SceneDescription& scene,
                    int samples) {
  if (path.mode == PathMode::kOrbit && !scene.PrimaryLandmark()) return false;
  for (int k = 0; k < samples; ++k) {
    double s = samples > 1 ? static_cast<double>(k) / (samples - 1) : 0.5;
    if (!IsReachable(scene.reachable, EvaluatePath(path, scene, s).position)) {
      return false;
    }
  }
  return true;
}

void ValidateParams(const ShootingParameters& p, const SceneDescription& scene,
                    const std::optional<FrameBudget>& budget) {
  const ViewfinderParams& vf = p.viewfinder;
  if (!std::isfinite(vf.location.x) || !std::isfinite(vf.location.y) ||
      !std::isfinite(vf.location.z)) {
    throw ValidationError("location", "must be finite");
  }
  if (!IsReachable(scene.reachable, vf.location)) {
    throw ValidationError("location", "outside the reachable region");
  }
  if (!std::isfinite(vf.yaw_deg)) throw ValidationError("yaw_deg", "must be finite");
  if (!(vf.pitch_deg >= -89.0 && vf.pitch_deg <= 89.0)) {
    throw ValidationError("pitch_deg", "must be in [-89, 89]");
  }
  if (!(p.path.base == vf)) {
    throw ValidationError("base", "path base must equal the viewfinder");
  }
  if (!(p.path.amplitude >= 0.0) || !std::isfinite(p.path.amplitude)) {
    throw ValidationError("amplitude", "must be finite and >= 0");
  }
  if ((p.path.amplitude == 0.0) != (p.path.mode == PathMode::kStatic)) {
    throw ValidationError("amplitude", "must be 0 exactly when mode is static");
  }
  if (p.path.mode == PathMode::kOrbit && !scene.PrimaryLandmark()) {
    throw ValidationError("mode", "orbit requires a landmark to pivot about");
  }
  const TimeWarpParams& tw = p.timewarp;
  if (!(tw.interval_s >= 0.001) || !std::isfinite(tw.interval_s)) {
    throw ValidationError("interval_s", "must be at least 1 ms");
  }
  if (tw.start > tw.end) throw ValidationError("start", "start must not be after end");
  if (budget) {
    int n = FrameCount(tw);
    if (n < budget->min_frames || n > budget->max_frames) {
      throw ValidationError("interval_s", "frame count " + std::to_string(n) +
                                              " outside budget [" +
                                              std::to_string(budget->min_frames) +
                                              ", " +
                                              std::to_string(budget->max_frames) + "]");
    }
  }
}

namespace formats {

Json ParamsToJson(const ShootingParameters& p) {
  return Json{
      {"viewfinder",
       {{"location", jsonutil::ToJson(p.viewfinder.location)},
        {"yaw_deg", p.viewfinder.yaw_deg},
        {"pitch_deg", p.viewfinder.pitch_deg}}},
      {"path", {{"mode", PathModeName(p.path.mode)}, {"amplitude", p.path.amplitude}}},
      {"timewarp",
       {{"start", FormatIso8601(p.timewarp.start)},
        {"end", FormatIso8601(p.timewarp.end)},
        {"interval_s", p.timewarp.interval_s}}},
  };
}

ShootingParameters ParamsFromJson(const Json& j, const std::string& path) {
  jsonutil::RejectUnknownKeys(j, path, {"viewfinder", "path", "timewarp"});
  ShootingParameters p;
  const std::string vp = jsonutil::Join(path, "viewfinder");
  const Json& vf = jsonutil::Field(j, "viewfinder", path);
  jsonutil::RejectUnknownKeys(vf, vp, {"location", "yaw_deg", "pitch_deg"});
  p.viewfinder.location =
      jsonutil::Vec3Of(jsonutil::Field(vf, "location", vp), jsonutil::Join(vp, "location"));
  p.viewfinder.yaw_deg = jsonutil::NumberField(vf, "yaw_deg", vp);
  p.viewfinder.pitch_deg = jsonutil::NumberField(vf, "pitch_deg", vp);

  const std::string pp = jsonutil::Join(path, "path");
  const Json& cp = jsonutil::Field(j, "path", path);
  jsonutil::RejectUnknownKeys(cp, pp, {"mode", "amplitude"});
  p.path.mode = ParsePathMode(jsonutil::StringField(cp, "mode", pp));
  p.path.amplitude = jsonutil::NumberField(cp, "amplitude", pp);
  p.path.base = p.viewfinder;

  const std::string tp = jsonutil::Join(path, "timewarp");
  const Json& tw = jsonutil::Field(j, "timewarp", path);
  jsonutil::RejectUnknownKeys(tw, tp, {"start", "end", "interval_s"});
  p.timewarp.start = jsonutil::TimestampField(tw, "start", tp);
  p.timewarp.end = jsonutil::TimestampField(tw, "end", tp);
  p.timewarp.interval_s = jsonutil::NumberField(tw, "interval_s", tp);
  return p;
}

Json PoseToJson(const CameraPose& pose) {
  return Json{{"position", jsonutil::ToJson(pose.position)},
              {"yaw_deg", pose.yaw_deg},
              {"pitch_deg", pose.pitch_deg},
              {"vfov_deg", pose.vfov_deg}};
}

CameraPose PoseFromJson(const Json& j, const std::string& path) {
  jsonutil::RejectUnknownKeys(j, path, {"position", "yaw_deg", "pitch_deg", "vfov_deg"});
  CameraPose pose;
  pose.position = jsonutil::Vec3Of(jsonutil::Field(j, "position", path),
                                   jsonutil::Join(path, "position"));
  pose.yaw_deg = jsonutil::NumberField(j, "yaw_deg", path);
  pose.pitch_deg = jsonutil::NumberField(j, "pitch_deg", path);
  pose.vfov_deg = jsonutil::NumberField(j, "vfov_deg", path);
  return pose;
}

Json GeoRefToJson(const GeoReference& g) {
  return Json{{"lat0", g.lat0}, {"lon0", g.lon0}, {"alt0", g.alt0},
              {"heading_deg", g.heading_deg}};
}

GeoReference GeoRefFromJson(const Json& j, const std::string& path) {
  jsonutil::RejectUnknownKeys(j, path, {"lat0", "lon0", "alt0", "heading_deg"});
  GeoReference g;
  g.lat0 = jsonutil::NumberField(j, "lat0", path);
  g.lon0 = jsonutil::NumberField(j, "lon0", path);
  g.alt0 = jsonutil::NumberField(j, "alt0", path);
  g.heading_deg = jsonutil::NumberField(j, "heading_deg", path);
  return g;
}

}  // namespace formats

std::string SerializeParams(const ShootingParameters& params) {
  return formats::ParamsToJson(params).dump(2) + "\n";
}

ShootingParameters ParseParams(std::string_view text) {
  return formats::ParamsFromJson(jsonutil::ParseText(text));
}

ShootingParameters LoadParamsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseParams(buf.str());
}

}  // namespace chronolapse
