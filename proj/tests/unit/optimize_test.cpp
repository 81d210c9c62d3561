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

#include <set>

#include "brute_force.hpp"
#include "chronolapse/optimize.hpp"
#include "test_support.hpp"

namespace chronolapse {
namespace {

using testing::BruteForcePath;
using testing::BruteForceTimeWarp;
using testing::BruteForceViewfinder;
using testing::CoarseScorer;
using testing::DataPath;
using testing::MinimalScene;

const SceneDescription& Tutorial() {
  static const SceneDescription s = LoadSceneFile(DataPath("scenes/tutorial.json"));
  return s;
}

const SearchSpace& Reduced() {
  static const SearchSpace s = LoadSpaceFile(DataPath("spaces/reduced.json"));
  return s;
}

SearchSpace Singleton() {
  SearchSpace s = Reduced();
  s.nx = s.ny = s.nz = 1;
  s.yaw_deg = {90};
  s.pitch_deg = {0};
  s.modes = {PathMode::kStatic};
  s.start_hours = {12};
  s.duration_hours = {1};
  s.interval_s = {60};
  s.budget = {5, 100};
  return s;
}

TEST(SearchSpace, ShippedFilesRoundTrip) {
  for (const char* name : {"spaces/default.json", "spaces/reduced.json", "spaces/ablation.json"}) {
    const SearchSpace s = LoadSpaceFile(DataPath(name));
    EXPECT_EQ(ParseSpace(SerializeSpace(s)), s) << name;
  }
}

TEST(SearchSpace, Validation) {
  auto field_of = [](const std::string& text) {
    try {
      ParseSpace(text);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  std::string base = SerializeSpace(Reduced());
  auto with = [&](const std::string& from, const std::string& to) {
    std::string t = base;
    const auto pos = t.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return t.replace(pos, from.size(), to);
  };
  EXPECT_EQ(field_of(with("\"yaw_deg\": [\n    0.0,\n    90.0,\n    180.0,\n    270.0\n  ]",
                          "\"yaw_deg\": []")),
            "yaw_deg");
  SearchSpace s = Reduced();
  s.nx = 0;
  EXPECT_THROW(ValidateSpace(s), ValidationError);
  s = Reduced();
  s.budget = {10, 5};
  EXPECT_THROW(ValidateSpace(s), ValidationError);
  s = Reduced();
  s.modes = {PathMode::kPan, PathMode::kPan};
  EXPECT_THROW(ValidateSpace(s), ValidationError);
  EXPECT_THROW(ParseSpace("{\"date\": \"2024-06-21\"}"), ParseError);
}

TEST(Candidates, MatchReferenceEnumeration) {
  for (const char* scene_name :
       {"scenes/tutorial.json", "scenes/ablation/bridge.json", "scenes/ablation/campus.json",
        "scenes/ablation/harbor.json", "scenes/ablation/hills.json", "scenes/ablation/plaza.json"}) {
    const SceneDescription scene = LoadSceneFile(DataPath(scene_name));
    EXPECT_EQ(ViewfinderCandidates(scene, Reduced()),
              testing::ReferenceViewfinders(scene, Reduced()))
        << scene_name;
    EXPECT_EQ(TimeWarpCandidates(scene, Reduced()), testing::ReferenceWindows(scene, Reduced()));
    const std::vector<ViewfinderParams> vfs = ViewfinderCandidates(scene, Reduced());
    for (std::size_t i = 0; i < vfs.size(); i += 7) {
      EXPECT_EQ(PathCandidates(scene, Reduced(), vfs[i]),
                testing::ReferencePaths(scene, Reduced(), vfs[i]));
    }
  }
}

TEST(Candidates, GridCentersInsideReachableBox) {
  SearchSpace s = Reduced();
  s.nx = 3;
  s.ny = 1;
  s.nz = 1;
  const std::vector<Vec3> pts = GridLocations(MinimalScene(), s);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_DOUBLE_EQ(pts[0].x, -10 + 20.0 / 6);
  EXPECT_DOUBLE_EQ(pts[1].x, 0.0);
  EXPECT_DOUBLE_EQ(pts[2].y, 0.0);
  EXPECT_DOUBLE_EQ(pts[2].z, 10.5);
}

TEST(Candidates, FrameBudgetRules) {
  SearchSpace s = Reduced();
  s.start_hours = {12};
  s.duration_hours = {2, 1};
  s.interval_s = {30, 60};
  s.budget = {120, 600};
  const std::vector<TimeWarpParams> c = TimeWarpCandidates(MinimalScene(), s);
  // 2 h at 30 s: 241 frames; 2 h at 60 s: 121; 1 h at 30 s: 121; 1 h at 60 s: 61 (dropped).
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(FrameCount(c[0]), 241);
  EXPECT_EQ(FrameCount(c[1]), 121);
  EXPECT_EQ(FrameCount(c[2]), 121);
  EXPECT_EQ(c[2].interval_s, 30.0);
  s.budget = {300, 600};
  EXPECT_THROW(OptimizeTimeWarp(MinimalScene(), {{0, 0, 5}, 0, 0}, {}, s), ValidationError);
}

TEST(Candidates, OrbitNeedsLandmark) {
  SearchSpace s = Reduced();
  s.modes = {PathMode::kOrbit, PathMode::kStatic};
  const ViewfinderParams vf{{0, 0, 5}, 0, 0};
  const std::vector<CameraPath> c = PathCandidates(MinimalScene(), s, vf);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].mode, PathMode::kStatic);
  s.modes = {PathMode::kOrbit};
  EXPECT_THROW(OptimizePath(MinimalScene(), vf, s), ValidationError);
}

TEST(Candidates, PathsLeavingRegionDropped) {
  SearchSpace s = Reduced();
  s.modes = {PathMode::kTruck};
  s.truck_amplitudes = {5, 30};
  const std::vector<CameraPath> c = PathCandidates(MinimalScene(), s, {{0, 0, 5}, 0, 0});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].amplitude, 5.0);
}

TEST(Optimize, SingletonSpace) {
  const SearchSpace s = Singleton();
  const auto vf = OptimizeViewfinder(Tutorial(), s);
  EXPECT_EQ(vf.candidates, 1u);
  EXPECT_EQ(vf.best, ViewfinderCandidates(Tutorial(), s).front());
  EXPECT_EQ(vf.score, ViewfinderScore(Tutorial(), s, vf.best));
  const auto path = OptimizePath(Tutorial(), vf.best, s);
  EXPECT_EQ(path.best.mode, PathMode::kStatic);
  EXPECT_EQ(path.best.amplitude, 0.0);
  const OptimizationReport r = OptimizeAll(Tutorial(), s);
  ASSERT_EQ(r.stages.size(), 3u);
  for (const StageReport& st : r.stages) EXPECT_EQ(st.candidates, 1u);
  EXPECT_EQ(r.evaluations, 3u);
  for (std::uint64_t seed : {1, 2, 99}) {
    EXPECT_EQ(RandomParams(Tutorial(), s, seed), r.params);
  }
}

TEST(Optimize, ViewfinderMatchesBruteForce) {
  const CoarseScorer coarse(0.2);
  for (const AestheticScorer* scorer :
       {&DefaultScorer(), static_cast<const AestheticScorer*>(&coarse)}) {
    const auto got = OptimizeViewfinder(Tutorial(), Reduced(), *scorer);
    const auto want = BruteForceViewfinder(Tutorial(), Reduced(), *scorer);
    EXPECT_EQ(got.candidates, want.candidates);
    EXPECT_EQ(got.best_index, want.index);
    EXPECT_EQ(got.score, want.score);
  }
}

TEST(Optimize, CoarseScorerCreatesTies) {
  const CoarseScorer coarse(0.2);
  std::vector<double> scores;
  for (const auto& vf : ViewfinderCandidates(Tutorial(), Reduced())) {
    scores.push_back(ViewfinderScore(Tutorial(), Reduced(), vf, coarse));
  }
  const double best = *std::max_element(scores.begin(), scores.end());
  EXPECT_GE(std::count(scores.begin(), scores.end(), best), 2);
}

TEST(Optimize, PathAndTimeWarpMatchBruteForce) {
  const CoarseScorer coarse(0.2);
  for (const AestheticScorer* scorer :
       {&DefaultScorer(), static_cast<const AestheticScorer*>(&coarse)}) {
    const ViewfinderParams vf = OptimizeViewfinder(Tutorial(), Reduced(), *scorer).best;
    const auto path = OptimizePath(Tutorial(), vf, Reduced(), *scorer);
    const auto want_path = BruteForcePath(Tutorial(), Reduced(), vf, *scorer);
    EXPECT_EQ(path.candidates, want_path.candidates);
    EXPECT_EQ(path.best_index, want_path.index);
    EXPECT_EQ(path.score, want_path.score);
    const auto tw = OptimizeTimeWarp(Tutorial(), vf, path.best, Reduced(), *scorer);
    const auto want_tw = BruteForceTimeWarp(Tutorial(), Reduced(), path.best, *scorer);
    EXPECT_EQ(tw.candidates, want_tw.candidates);
    EXPECT_EQ(tw.best_index, want_tw.index);
    EXPECT_EQ(tw.score, want_tw.score);
  }
}

TEST(Optimize, SymmetricTieGoesToSmallerIndex) {
  // Flat scene, noon probe, sun overhead: yaw 0 and yaw 180 views differ only
  // by a mirror of the sky, so a scorer blind to azimuth ties them.
  SearchSpace s = Singleton();
  s.yaw_deg = {180, 0};
  const CoarseScorer coarse(0.5);
  const auto r = OptimizeViewfinder(MinimalScene(), s, coarse);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best.yaw_deg, 180.0);
}

TEST(Optimize, SunsetWindowWinsOnLightDynamism) {
  const auto [rise, set] = DaylightSolarHours(Tutorial().georef, Reduced().date);
  SearchSpace s = Reduced();
  s.start_hours = {12.0, set - 1.0};
  s.duration_hours = {2};
  s.interval_s = {60};
  s.budget = {60, 200};
  const ViewfinderParams vf{{-60, 0, 10}, 0, 0};
  const CameraPath path{PathMode::kStatic, 0, vf};
  const std::vector<TimeWarpParams> c = TimeWarpCandidates(Tutorial(), s);
  ASSERT_EQ(c.size(), 2u);
  const double midday = ScoreTimeLapse(RenderProbeSequence(Tutorial(), s, {vf, path, c[0]}))
                            .light_dynamism;
  const double sunset = ScoreTimeLapse(RenderProbeSequence(Tutorial(), s, {vf, path, c[1]}))
                            .light_dynamism;
  EXPECT_GT(sunset, midday);
  EXPECT_EQ(OptimizeTimeWarp(Tutorial(), vf, path, s).best_index, 1u);
}

TEST(Optimize, FullRunDeterministicAndValid) {
  OptimizeOptions o;
  o.seed = 5;
  const OptimizationReport a = OptimizeAll(Tutorial(), Reduced(), o);
  const OptimizationReport b = OptimizeAll(Tutorial(), Reduced(), o);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.score.total, b.score.total);
  ASSERT_EQ(a.stages.size(), 3u);
  EXPECT_EQ(a.stages[0].name, "image");
  EXPECT_EQ(a.stages[1].name, "video");
  EXPECT_EQ(a.stages[2].name, "time");
  EXPECT_NO_THROW(ValidateParams(a.params, Tutorial(), Reduced().budget));
  EXPECT_EQ(a.params.path.base, a.params.viewfinder);
}

TEST(Optimize, DisabledStagesUseRandomDraws) {
  OptimizeOptions o;
  o.seed = 17;
  o.stages = StageSelection::Parse("v");
  const OptimizationReport r = OptimizeAll(Tutorial(), Reduced(), o);
  EXPECT_FALSE(r.stages[0].optimized);
  EXPECT_TRUE(r.stages[1].optimized);
  EXPECT_FALSE(r.stages[2].optimized);
  EXPECT_EQ(r.stages[0].candidates, 0u);
  EXPECT_EQ(r.params.viewfinder, RandomViewfinder(Tutorial(), Reduced(), 17));
  EXPECT_EQ(r.params.timewarp, RandomTimeWarp(Tutorial(), Reduced(), 17));
  EXPECT_THROW(StageSelection::Parse("ivx"), ValidationError);
  EXPECT_EQ(StageSelection::Parse(""), (StageSelection{false, false, false}));
}

TEST(RandomParams, DeterministicAndAdmissible) {
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ShootingParameters p = RandomParams(Tutorial(), Reduced(), seed);
    EXPECT_TRUE(IsReachable(Tutorial().reachable, p.viewfinder.location));
    const int n = FrameCount(p.timewarp);
    EXPECT_GE(n, Reduced().budget.min_frames);
    EXPECT_LE(n, Reduced().budget.max_frames);
    EXPECT_TRUE(PathIsFeasible(p.path, Tutorial()));
    EXPECT_EQ(p.path.base, p.viewfinder);
    if (seed < 20) EXPECT_EQ(RandomParams(Tutorial(), Reduced(), seed), p);
    distinct.insert(SerializeParams(p));
  }
  EXPECT_GT(distinct.size(), 500u);
}

TEST(Report, SerializesStagesInOrder) {
  const OptimizationReport r = OptimizeAll(Tutorial(), Singleton());
  const std::string text = SerializeReport(r);
  const auto i = text.find("\"image\"");
  const auto v = text.find("\"video\"");
  const auto t = text.find("\"time\"");
  ASSERT_NE(i, std::string::npos);
  EXPECT_LT(i, v);
  EXPECT_LT(v, t);
}

}  // namespace
}  // namespace chronolapse
