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
#include <random>

#include "chronolapse/camera.hpp"
#include "chronolapse/params.hpp"
#include "test_support.hpp"

namespace chronolapse {
namespace {

using testing::MinimalScene;

std::string FieldOf(const ShootingParameters& p, const SceneDescription& s,
                    std::optional<FrameBudget> budget = std::nullopt) {
  try {
    ValidateParams(p, s, budget);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

ShootingParameters ValidParams() {
  ShootingParameters p;
  p.viewfinder = {{0, 0, 5}, 30.0, -5.0};
  p.path = {PathMode::kStatic, 0.0, p.viewfinder};
  p.timewarp = {ParseIso8601("2024-06-21T06:00:00Z"), ParseIso8601("2024-06-21T08:00:00Z"),
                30.0};
  return p;
}

SceneDescription SceneWithLandmark() {
  SceneDescription s = MinimalScene();
  s.solids.push_back({{20, 0, 5}, {4, 4, 10}, {0.5, 0.5, 0.5}, 1.0});
  return s;
}

TEST(Projection, OnAxisIsCenter) {
  const CameraPose pose{{0, 0, 0}, 37.0, 12.0, 60.0};
  const CameraBasis b = BasisOf(pose);
  const auto p = ProjectPoint(pose, pose.position + b.forward * 25.0, 16.0 / 9.0);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, 0.5, 1e-12);
  EXPECT_NEAR(p->y, 0.5, 1e-12);
}

TEST(Projection, BehindCameraExcluded) {
  const CameraPose pose{{0, 0, 0}, 0.0, 0.0, 60.0};
  EXPECT_FALSE(ProjectPoint(pose, {-10, 0, 0}, 1.0));
  EXPECT_FALSE(ProjectPoint(pose, {0, 5, 0}, 1.0));  // on the image plane
}

TEST(Projection, PinholeOffset) {
  // yaw 0 looks along +x; +y is to the left.
  const CameraPose pose{{0, 0, 0}, 0.0, 0.0, 60.0};
  const auto p = ProjectPoint(pose, {10, 2, 0}, 1.0);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, 0.5 - (2.0 / 10.0) / (2.0 * std::tan(kPi / 6.0)), 1e-12);
  EXPECT_NEAR(p->y, 0.5, 1e-12);
  const auto up = ProjectPoint(pose, {10, 0, 1}, 1.0);
  EXPECT_NEAR(up->y, 0.5 - (1.0 / 10.0) / (2.0 * std::tan(kPi / 6.0)), 1e-12);
}

TEST(Projection, BasisIsOrthonormal) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> yaw(-720, 720), pitch(-89, 89);
  for (int i = 0; i < 100; ++i) {
    const CameraBasis b = BasisOf({{0, 0, 0}, yaw(rng), pitch(rng), 60.0});
    EXPECT_NEAR(b.forward.Norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.right.Norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.up.Norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.forward.Dot(b.right), 0.0, 1e-12);
    EXPECT_NEAR(b.forward.Dot(b.up), 0.0, 1e-12);
    EXPECT_GE(b.up.z, 0.0);
  }
}

TEST(Pose, Validation) {
  EXPECT_NO_THROW(ValidatePose({{0, 0, 0}, 0, 89.0, 60.0}));
  EXPECT_THROW(ValidatePose({{0, 0, 0}, 0, 89.5, 60.0}), ValidationError);
  EXPECT_THROW(ValidatePose({{0, 0, 0}, 0, 0, 10.0}), ValidationError);
  EXPECT_THROW(ValidatePose({{0, 0, 0}, 0, 0, 120.0}), ValidationError);
  EXPECT_THROW(ValidatePose({{NAN, 0, 0}, 0, 0, 60.0}), ValidationError);
}

TEST(FrameCount, TwoHoursAtThirtySeconds) {
  TimeWarpParams tw{ParseIso8601("2024-06-21T06:00:00Z"), ParseIso8601("2024-06-21T08:00:00Z"),
                    30.0};
  EXPECT_EQ(FrameCount(tw), 241);
  EXPECT_EQ(FrameTime(tw, 240), tw.end);
}

TEST(FrameCount, DegenerateWindow) {
  const Timestamp s = ParseIso8601("2024-06-21T06:00:00Z");
  EXPECT_EQ(FrameCount({s, s, 45.0}), 1);
}

TEST(FrameCount, RandomWindowsMatchIntegerArithmetic) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> span(0, 6 * 3600 * 1000LL);
  std::uniform_int_distribution<int> interval_ms(500, 120000);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t s = span(rng);
    const int dt = interval_ms(rng);
    TimeWarpParams tw{Timestamp{1718950000000}, Timestamp{1718950000000 + s}, dt / 1000.0};
    EXPECT_EQ(FrameCount(tw), static_cast<int>(s / dt) + 1) << s << " " << dt;
  }
}

TEST(Path, StaticKeepsPose) {
  const SceneDescription s = MinimalScene();
  const ShootingParameters p = ValidParams();
  const CameraPose a = EvaluatePath(p.path, s, 0.0);
  for (double u : {0.25, 0.5, 1.0}) EXPECT_EQ(EvaluatePath(p.path, s, u), a);
  EXPECT_EQ(a.position, p.viewfinder.location);
  EXPECT_EQ(a.yaw_deg, 30.0);
}

TEST(Path, PanSweepsYawAboutBase) {
  const SceneDescription s = MinimalScene();
  CameraPath path{PathMode::kPan, 40.0, {{0, 0, 5}, 10.0, 0.0}};
  EXPECT_NEAR(EvaluatePath(path, s, 0.0).yaw_deg, Wrap360(10.0 - 20.0), 1e-12);
  EXPECT_NEAR(EvaluatePath(path, s, 0.5).yaw_deg, 10.0, 1e-12);
  EXPECT_NEAR(EvaluatePath(path, s, 1.0).yaw_deg, 30.0, 1e-12);
  EXPECT_EQ(EvaluatePath(path, s, 1.0).position, path.base.location);
}

TEST(Path, TruckMovesAlongCameraRight) {
  const SceneDescription s = MinimalScene();
  CameraPath path{PathMode::kTruck, 10.0, {{0, 0, 5}, 90.0, 0.0}};
  // Looking along +y, camera right is +x.
  const CameraPose end = EvaluatePath(path, s, 1.0);
  EXPECT_NEAR(end.position.x, 5.0, 1e-12);
  EXPECT_NEAR(end.position.y, 0.0, 1e-12);
  EXPECT_NEAR(EvaluatePath(path, s, 0.0).position.x, -5.0, 1e-12);
  EXPECT_NEAR(end.yaw_deg, 90.0, 1e-12);
}

TEST(Path, OrbitKeepsDistanceToPivot) {
  const SceneDescription s = SceneWithLandmark();
  CameraPath path{PathMode::kOrbit, 60.0, {{0, 0, 5}, 0.0, 0.0}};
  for (double u : {0.0, 0.3, 1.0}) {
    const CameraPose pose = EvaluatePath(path, s, u);
    EXPECT_NEAR(std::hypot(pose.position.x - 20.0, pose.position.y), 20.0, 1e-9);
    EXPECT_EQ(pose.position.z, 5.0);
    const double turn = 60.0 * (u - 0.5);
    EXPECT_NEAR(pose.yaw_deg, Wrap360(turn), 1e-9);
    // Bearing from pivot to camera rotates by the same angle.
    const double bearing = std::atan2(pose.position.y, pose.position.x - 20.0) * 180.0 / kPi;
    EXPECT_NEAR(Wrap180(bearing - 180.0), Wrap180(turn), 1e-9);
  }
}

TEST(Path, OrbitWithoutLandmarkThrows) {
  CameraPath path{PathMode::kOrbit, 30.0, {{0, 0, 5}, 0.0, 0.0}};
  EXPECT_THROW(EvaluatePath(path, MinimalScene(), 0.5), ValidationError);
  EXPECT_FALSE(PathIsFeasible(path, MinimalScene()));
}

TEST(Path, FeasibilityChecksReachability) {
  const SceneDescription s = MinimalScene();  // reachable x,y in [-10, 10]
  EXPECT_TRUE(PathIsFeasible({PathMode::kTruck, 20.0, {{0, 0, 5}, 90.0, 0.0}}, s));
  EXPECT_FALSE(PathIsFeasible({PathMode::kTruck, 20.2, {{0, 0, 5}, 90.0, 0.0}}, s));
}

TEST(ParamsValidation, NamesTheField) {
  const SceneDescription s = SceneWithLandmark();
  EXPECT_EQ(FieldOf(ValidParams(), s), "");

  ShootingParameters p = ValidParams();
  p.viewfinder.location = {50, 0, 5};
  p.path.base = p.viewfinder;
  EXPECT_EQ(FieldOf(p, s), "location");

  p = ValidParams();
  p.viewfinder.pitch_deg = 95;
  p.path.base = p.viewfinder;
  EXPECT_EQ(FieldOf(p, s), "pitch_deg");

  p = ValidParams();
  p.path.amplitude = 5;
  EXPECT_EQ(FieldOf(p, s), "amplitude");

  p = ValidParams();
  p.path.mode = PathMode::kPan;
  EXPECT_EQ(FieldOf(p, s), "amplitude");

  p = ValidParams();
  p.path.mode = PathMode::kOrbit;
  p.path.amplitude = 10;
  EXPECT_EQ(FieldOf(p, MinimalScene()), "mode");

  p = ValidParams();
  p.path.base.yaw_deg = 31;
  EXPECT_EQ(FieldOf(p, s), "base");

  p = ValidParams();
  std::swap(p.timewarp.start, p.timewarp.end);
  EXPECT_EQ(FieldOf(p, s), "start");

  p = ValidParams();
  p.timewarp.interval_s = 0;
  EXPECT_EQ(FieldOf(p, s), "interval_s");
}

TEST(ParamsValidation, FrameBudget) {
  const SceneDescription s = MinimalScene();
  ShootingParameters p = ValidParams();  // 241 frames
  EXPECT_EQ(FieldOf(p, s, FrameBudget{120, 600}), "");
  p.timewarp.end = ParseIso8601("2024-06-21T07:00:00Z");
  p.timewarp.interval_s = 60.0;  // 61 frames
  EXPECT_EQ(FieldOf(p, s, FrameBudget{120, 600}), "interval_s");
}

TEST(ParamsFormat, RoundTrip) {
  ShootingParameters p = ValidParams();
  p.viewfinder.location = {1.25, -3.0 / 7.0, 4.1};
  p.path = {PathMode::kTruck, 7.5, p.viewfinder};
  p.timewarp.end = ParseIso8601("2024-06-21T07:59:59.500Z");
  const std::string text = SerializeParams(p);
  EXPECT_EQ(ParseParams(text), p);
  EXPECT_EQ(SerializeParams(ParseParams(text)), text);
}

TEST(ParamsFormat, Errors) {
  std::string text = SerializeParams(ValidParams());
  EXPECT_THROW(ParseParams(text.substr(0, text.size() / 2)), ParseError);
  std::string bad_mode = text;
  bad_mode.replace(bad_mode.find("static"), 6, "dolly");
  EXPECT_THROW(ParseParams(bad_mode), ParseError);
  std::string extra = text;
  extra.insert(1, "\"zoom\": 2,");
  EXPECT_THROW(ParseParams(extra), Error);
}

}  // namespace
}  // namespace chronolapse
