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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "chronolapse/robotplan.hpp"
#include "test_support.hpp"

namespace chronolapse {
namespace {

using testing::DataPath;
using testing::MinimalScene;

std::string ReadText(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::string TestDataPath(const std::string& name) {
  return std::string(CHRONO_TEST_DATA_DIR) + "/" + name;
}

TEST(Geodesy, OriginMapsToReference) {
  const GeoReference g{37.8, -122.4, 12.0, 30.0};
  const GeoPoint p = LocalToGps(g, {0, 0, 0});
  EXPECT_EQ(p.lat, 37.8);
  EXPECT_EQ(p.lon, -122.4);
  EXPECT_EQ(p.alt, 12.0);
  const Vec3 back = GpsToLocal(g, {37.8, -122.4, 12.0});
  EXPECT_EQ(back.x, 0.0);
  EXPECT_EQ(back.y, 0.0);
  EXPECT_EQ(back.z, 0.0);
}

TEST(Geodesy, PinnedDisplacements) {
  const GeoPoint north = LocalToGps({0, 0, 0, 0}, {111.32, 0, 0});
  EXPECT_NEAR(north.lat, 0.001, 1e-9);
  EXPECT_NEAR(north.lon, 0.0, 1e-12);
  // 45 degrees: one degree of longitude spans 111320 * cos(45) = 78715.0 m.
  const double east_m = 111.32 * std::cos(std::numbers::pi / 4);
  const GeoReference g45{45.0, 10.0, 0.0, 90.0};  // +x points East
  const GeoPoint east = LocalToGps(g45, {east_m, 0, 0});
  EXPECT_NEAR(east.lon, 10.001, 1e-9);
  EXPECT_NEAR(east.lat, 45.0, 1e-12);
  EXPECT_NEAR(east_m, 78.715, 1e-3);
}

TEST(Geodesy, RoundTripRandomPoints) {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> lat(-88.0, 88.0), lon(-180, 180), head(0, 360),
      xy(-20000, 20000), z(-500, 3000);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const GeoReference g{lat(rng), lon(rng), z(rng), head(rng)};
    const Vec3 p{xy(rng), xy(rng), z(rng)};
    const Vec3 q = GpsToLocal(g, LocalToGps(g, p));
    worst = std::max(worst, (q - p).Norm());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Geodesy, Errors) {
  try {
    LocalToGps({89.0, 0, 0, 0}, {0, 0, 0});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "lat0");
  }
  EXPECT_THROW(GpsToLocal({-89.5, 0, 0, 0}, {0, 0, 0}), ValidationError);
  try {
    LocalToGps({0, 0, 0, 0}, {50000, 0, 0});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "position");
  }
}

// Bearing of the scene direction (cos yaw, sin yaw) measured through the
// geodesy itself: step 10 m along it and read the north/east offsets.
double BearingViaGeodesy(const GeoReference& g, double yaw_deg) {
  const double r = yaw_deg * std::numbers::pi / 180;
  const GeoPoint a = LocalToGps(g, {0, 0, 0});
  const GeoPoint b = LocalToGps(g, {10 * std::cos(r), 10 * std::sin(r), 0});
  const double north = (b.lat - a.lat) * 111320.0;
  const double east = (b.lon - a.lon) * 111320.0 * std::cos(g.lat0 * std::numbers::pi / 180);
  double deg = std::atan2(east, north) * 180 / std::numbers::pi;
  if (deg < 0) deg += 360;
  return deg;
}

TEST(Gimbal, ConventionTable) {
  // Scene frame is right-handed with z up, so +y sits 90 degrees
  // counterclockwise from +x seen from above. heading 0: +x North, +y West.
  // heading 90: +x East, +y North.
  struct Row {
    double heading, yaw, compass;
  };
  const Row table[] = {
      {0, 0, 0},    {0, 90, 270},  {0, 180, 180}, {0, 270, 90},
      {90, 0, 90},  {90, 90, 0},   {90, 180, 270}, {90, 270, 180},
  };
  for (const Row& r : table) {
    const GeoReference g{0, 0, 0, r.heading};
    EXPECT_NEAR(CompassYaw(g, r.yaw), r.compass, 1e-12) << r.heading << " " << r.yaw;
    EXPECT_NEAR(BearingViaGeodesy(g, r.yaw), r.compass, 1e-9) << r.heading << " " << r.yaw;
  }
  EXPECT_EQ(GimbalPitch(10.0), -10.0);
  EXPECT_EQ(GimbalPitch(-30.0), 30.0);
}

TEST(Gimbal, YawAlwaysInRange) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int i = 0; i < 1000; ++i) {
    const double y = CompassYaw({0, 0, 0, u(rng)}, u(rng));
    EXPECT_GE(y, 0.0);
    EXPECT_LT(y, 360.0);
  }
}

ShootingParameters StaticParams() {
  ShootingParameters p;
  p.viewfinder = {{2, -3, 5}, 45.0, -20.0};
  p.path = {PathMode::kStatic, 0.0, p.viewfinder};
  p.timewarp = {ParseIso8601("2024-06-21T12:00:00Z"), ParseIso8601("2024-06-21T13:00:00Z"),
                30.0};
  return p;
}

TEST(CompilePlan, StaticPath) {
  const SceneDescription s = MinimalScene();
  const GeoReference g{48.0, 11.0, 500.0, 0.0};
  const RobotPlan plan = CompilePlan(s, StaticParams(), g, 7);
  ASSERT_EQ(plan.waypoints.size(), 7u);
  for (std::size_t k = 0; k < plan.waypoints.size(); ++k) {
    const Waypoint& w = plan.waypoints[k];
    EXPECT_EQ(w.lat, plan.waypoints[0].lat);
    EXPECT_EQ(w.lon, plan.waypoints[0].lon);
    EXPECT_EQ(w.alt_m, 505.0);
    EXPECT_EQ(w.gimbal_pitch_deg, 20.0);
    EXPECT_NEAR(w.gimbal_yaw_deg, 315.0, 1e-12);
    EXPECT_EQ(w.time.ms, plan.capture.start.ms + static_cast<std::int64_t>(k) * 600000);
  }
  EXPECT_EQ(plan.capture.start, StaticParams().timewarp.start);
  EXPECT_EQ(plan.capture.end, StaticParams().timewarp.end);
  EXPECT_EQ(plan.capture.interval_s, 30.0);
  EXPECT_NO_THROW(ValidatePlan(plan));
}

TEST(CompilePlan, UniformTimesRoundedToMs) {
  ShootingParameters p = StaticParams();
  p.timewarp.end = p.timewarp.start.PlusSeconds(10.0);
  const RobotPlan plan = CompilePlan(MinimalScene(), p, {0, 0, 0, 0}, 4);
  EXPECT_EQ(plan.waypoints[1].time.ms - plan.waypoints[0].time.ms, 3333);
  EXPECT_EQ(plan.waypoints[2].time.ms - plan.waypoints[0].time.ms, 6667);
  EXPECT_EQ(plan.waypoints[3].time, p.timewarp.end);
}

TEST(CompilePlan, Errors) {
  EXPECT_THROW(CompilePlan(MinimalScene(), StaticParams(), {0, 0, 0, 0}, 1), ValidationError);
  EXPECT_THROW(CompilePlan(MinimalScene(), StaticParams(), {0, 0, 0, 0}, 4, 0.0),
               ValidationError);
  ShootingParameters bad = StaticParams();
  bad.viewfinder.location = {40, 0, 5};
  bad.path.base = bad.viewfinder;
  EXPECT_THROW(CompilePlan(MinimalScene(), bad, {0, 0, 0, 0}, 4), ValidationError);
}

TEST(Serialization, RoundTripAndFormat) {
  const SceneDescription s = LoadSceneFile(DataPath("scenes/tutorial.json"));
  ShootingParameters p;
  p.viewfinder = {{-57.123456789, 12.5, 7.25}, 33.3, -4.4};
  p.path = {PathMode::kPan, 30.0, p.viewfinder};
  p.timewarp = {ParseIso8601("2024-06-21T12:00:00Z"), ParseIso8601("2024-06-21T14:00:00Z"),
                30.0};
  const RobotPlan plan = CompilePlan(s, p, s.georef, 16);
  const std::string text = SerializePlan(plan);
  EXPECT_EQ(DeserializePlan(text), plan);
  EXPECT_EQ(SerializePlan(DeserializePlan(text)), text);
  EXPECT_NE(text.find("\"time\": \"2024-06-21T12:00:00Z\""), std::string::npos);
  EXPECT_NE(text.find("\"interval_s\": 30.000000000"), std::string::npos);
  EXPECT_THROW(DeserializePlan("{}"), ParseError);
}

TEST(Serialization, GoldenTutorialPlan) {
  const SceneDescription s = LoadSceneFile(DataPath("scenes/tutorial.json"));
  const ShootingParameters p = LoadParamsFile(TestDataPath("tutorial_params.json"));
  const RobotPlan plan = CompilePlan(s, p, s.georef, 5);
  EXPECT_EQ(SerializePlan(plan), ReadText(TestDataPath("tutorial_plan.json")));

  // The frozen values agree with a hand evaluation: the truck starts 10 m to
  // the camera's left (+y) of (-60, 0, 10) and the camera faces +x, which the
  // 30 degree heading puts at bearing 30.
  const double h = 30.0 * std::numbers::pi / 180;
  const double north = -60 * std::cos(h) + 10 * std::sin(h);
  const double east = -60 * std::sin(h) - 10 * std::cos(h);
  const Waypoint& w = plan.waypoints.front();
  EXPECT_NEAR(w.lat, 37.8 + north / 111320.0, 1e-12);
  EXPECT_NEAR(w.lon, -122.4 + east / (111320.0 * std::cos(37.8 * std::numbers::pi / 180)),
              1e-12);
  EXPECT_NEAR(w.gimbal_yaw_deg, 30.0, 1e-12);
  EXPECT_EQ(w.gimbal_pitch_deg, -10.0);
}

}  // namespace
}  // namespace chronolapse
