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

#include "chronolapse/robotplan.hpp"

#include <charconv>
#include <cmath>

#include "formats.hpp"
#include "json_util.hpp"

namespace chronolapse {

namespace {

void CheckLat0(const GeoReference& georef) {
  if (!(std::abs(georef.lat0) < kMaxAbsLat0)) {
    throw ValidationError("lat0", "tangent-plane conversion needs |lat0| < 89 degrees");
  }
}

}  // namespace

GeoPoint LocalToGps(const GeoReference& georef, const Vec3& p) {
  CheckLat0(georef);
  if (!(std::hypot(p.x, p.y, p.z) < kMaxLocalRange)) {
    throw ValidationError("position", "point is outside the 50 km tangent-plane range");
  }
  const double h = DegToRad(georef.heading_deg);
  const double north = p.x * std::cos(h) + p.y * std::sin(h);
  const double east = p.x * std::sin(h) - p.y * std::cos(h);
  GeoPoint g;
  g.lat = georef.lat0 + north / kMetersPerDegree;
  g.lon = georef.lon0 + east / (kMetersPerDegree * std::cos(DegToRad(georef.lat0)));
  g.alt = georef.alt0 + p.z;
  return g;
}

Vec3 GpsToLocal(const GeoReference& georef, const GeoPoint& g) {
  CheckLat0(georef);
  const double h = DegToRad(georef.heading_deg);
  const double north = (g.lat - georef.lat0) * kMetersPerDegree;
  const double east = (g.lon - georef.lon0) * kMetersPerDegree * std::cos(DegToRad(georef.lat0));
  return {north * std::cos(h) + east * std::sin(h), north * std::sin(h) - east * std::cos(h),
          g.alt - georef.alt0};
}

double CompassYaw(const GeoReference& georef, double scene_yaw_deg) {
  return Wrap360(georef.heading_deg - scene_yaw_deg);
}

double GimbalPitch(double scene_pitch_deg) { return 0.0 - scene_pitch_deg; }

RobotPlan CompilePlan(const SceneDescription& scene, const ShootingParameters& params,
                      const GeoReference& georef, int waypoint_count, double playback_fps) {
  if (waypoint_count < 2) throw ValidationError("waypoint_count", "need at least 2 waypoints");
  if (!(playback_fps > 0.0)) throw ValidationError("playback_fps", "must be positive");
  ValidateParams(params, scene);
  CheckLat0(georef);

  RobotPlan plan;
  plan.georef = georef;
  plan.playback_fps = playback_fps;
  plan.capture = {params.timewarp.start, params.timewarp.end, params.timewarp.interval_s};
  const std::int64_t span = params.timewarp.end.ms - params.timewarp.start.ms;
  for (int k = 0; k < waypoint_count; ++k) {
    const double progress = static_cast<double>(k) / (waypoint_count - 1);
    const CameraPose pose = EvaluatePath(params.path, scene, progress);
    const GeoPoint g = LocalToGps(georef, pose.position);
    Waypoint w;
    w.time.ms = params.timewarp.start.ms +
                static_cast<std::int64_t>(std::llround(static_cast<double>(span) * k /
                                                       (waypoint_count - 1)));
    w.lat = g.lat;
    w.lon = g.lon;
    w.alt_m = g.alt;
    w.gimbal_pitch_deg = GimbalPitch(pose.pitch_deg);
    w.gimbal_yaw_deg = CompassYaw(georef, pose.yaw_deg);
    plan.waypoints.push_back(w);
  }
  return plan;
}

void ValidatePlan(const RobotPlan& plan) {
  if (plan.capture.end < plan.capture.start) {
    throw ValidationError("capture", "capture end precedes start");
  }
  if (!(plan.capture.interval_s > 0.0)) {
    throw ValidationError("interval_s", "capture interval must be positive");
  }
  if (!(plan.playback_fps > 0.0)) throw ValidationError("playback_fps", "must be positive");
  if (plan.waypoints.size() < 2) throw ValidationError("waypoints", "need at least 2 waypoints");
  if (plan.waypoints.front().time != plan.capture.start ||
      plan.waypoints.back().time != plan.capture.end) {
    throw ValidationError("waypoints", "waypoint times must span the capture window");
  }
  for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
    const Waypoint& w = plan.waypoints[i];
    if (i > 0 && w.time < plan.waypoints[i - 1].time) {
      throw ValidationError("waypoints", "waypoint times must be non-decreasing");
    }
    if (!(w.gimbal_yaw_deg >= 0.0 && w.gimbal_yaw_deg < 360.0)) {
      throw ValidationError("gimbal_yaw_deg", "must lie in [0, 360)");
    }
    if (!(w.gimbal_pitch_deg >= -90.0 && w.gimbal_pitch_deg <= 90.0)) {
      throw ValidationError("gimbal_pitch_deg", "must lie in [-90, 90]");
    }
  }
}

namespace {

// Shortest round-trip fixed notation, zero-padded to nine decimals.
std::string Decimal(double v) {
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (ec != std::errc()) throw Error("cannot format number");
  std::string s(buf, end);
  const std::size_t dot = s.find('.');
  const std::size_t decimals = dot == std::string::npos ? 0 : s.size() - dot - 1;
  if (dot == std::string::npos) s += '.';
  if (decimals < 9) s.append(9 - decimals, '0');
  return s;
}

std::string Quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string SerializePlan(const RobotPlan& plan) {
  ValidatePlan(plan);
  const GeoReference& g = plan.georef;
  std::string out = "{\n";
  out += "  \"georef\": {\n";
  out += "    \"lat0\": " + Decimal(g.lat0) + ",\n";
  out += "    \"lon0\": " + Decimal(g.lon0) + ",\n";
  out += "    \"alt0\": " + Decimal(g.alt0) + ",\n";
  out += "    \"heading_deg\": " + Decimal(g.heading_deg) + "\n";
  out += "  },\n";
  out += "  \"waypoints\": [\n";
  for (std::size_t i = 0; i < plan.waypoints.size(); ++i) {
    const Waypoint& w = plan.waypoints[i];
    out += "    {\n";
    out += "      \"time\": " + Quoted(FormatIso8601(w.time)) + ",\n";
    out += "      \"lat\": " + Decimal(w.lat) + ",\n";
    out += "      \"lon\": " + Decimal(w.lon) + ",\n";
    out += "      \"alt_m\": " + Decimal(w.alt_m) + ",\n";
    out += "      \"gimbal_pitch_deg\": " + Decimal(w.gimbal_pitch_deg) + ",\n";
    out += "      \"gimbal_yaw_deg\": " + Decimal(w.gimbal_yaw_deg) + "\n";
    out += i + 1 < plan.waypoints.size() ? "    },\n" : "    }\n";
  }
  out += "  ],\n";
  out += "  \"capture\": {\n";
  out += "    \"start\": " + Quoted(FormatIso8601(plan.capture.start)) + ",\n";
  out += "    \"end\": " + Quoted(FormatIso8601(plan.capture.end)) + ",\n";
  out += "    \"interval_s\": " + Decimal(plan.capture.interval_s) + "\n";
  out += "  },\n";
  out += "  \"playback_fps\": " + Decimal(plan.playback_fps) + "\n";
  out += "}\n";
  return out;
}

RobotPlan DeserializePlan(std::string_view text) {
  using namespace jsonutil;
  const Json j = ParseText(text);
  RejectUnknownKeys(j, "", {"georef", "waypoints", "capture", "playback_fps"});
  RobotPlan plan;
  plan.georef = formats::GeoRefFromJson(Field(j, "georef", ""), "georef");
  const Json& wps = ArrayField(j, "waypoints", "");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string p = "waypoints[" + std::to_string(i) + "]";
    RejectUnknownKeys(wps[i], p,
                      {"time", "lat", "lon", "alt_m", "gimbal_pitch_deg", "gimbal_yaw_deg"});
    Waypoint w;
    w.time = TimestampField(wps[i], "time", p);
    w.lat = NumberField(wps[i], "lat", p);
    w.lon = NumberField(wps[i], "lon", p);
    w.alt_m = NumberField(wps[i], "alt_m", p);
    w.gimbal_pitch_deg = NumberField(wps[i], "gimbal_pitch_deg", p);
    w.gimbal_yaw_deg = NumberField(wps[i], "gimbal_yaw_deg", p);
    plan.waypoints.push_back(w);
  }
  const Json& c = Field(j, "capture", "");
  RejectUnknownKeys(c, "capture", {"start", "end", "interval_s"});
  plan.capture.start = TimestampField(c, "start", "capture");
  plan.capture.end = TimestampField(c, "end", "capture");
  plan.capture.interval_s = NumberField(c, "interval_s", "capture");
  plan.playback_fps = NumberField(j, "playback_fps", "");
  ValidatePlan(plan);
  return plan;
}

}  // namespace chronolapse
