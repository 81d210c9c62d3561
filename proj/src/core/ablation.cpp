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

#include "chronolapse/ablation.hpp"

#include <chrono>

#include "json_util.hpp"

namespace chronolapse {

bool AblationResult::NonDecreasing() const {
  for (int c = 1; c < kAblationConfigs; ++c) {
    if (mean_totals[c] < mean_totals[c - 1]) return false;
  }
  return true;
}

SceneDescription RestrictToRegion(const SceneDescription& scene, std::size_t rect_index) {
  if (rect_index >= scene.reachable.rects.size()) {
    throw ValidationError("rects", "region index out of range");
  }
  SceneDescription out = scene;
  out.reachable.rects = {scene.reachable.rects[rect_index]};
  return out;
}

namespace {

double Total(const SceneDescription& scene, const SearchSpace& space,
             const ShootingParameters& params) {
  return Assess(RenderProbeSequence(scene, space, params), scene).quality.total;
}

AblationRegionResult RunRegion(const SceneDescription& scene, const SearchSpace& space,
                               int seeds, std::uint64_t base_seed) {
  AblationRegionResult row;
  const ViewfinderParams vf = OptimizeViewfinder(scene, space).best;
  const CameraPath path = OptimizePath(scene, vf, space).best;
  const TimeWarpParams tw = OptimizeTimeWarp(scene, vf, path, space).best;

  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(s);
    const TimeWarpParams rand_tw = RandomTimeWarp(scene, space, seed);

    const ViewfinderParams rand_vf = RandomViewfinder(scene, space, seed);
    row.totals[0] += Total(scene, space, {rand_vf, RandomPath(scene, space, rand_vf, seed),
                                          rand_tw});
    row.totals[1] += Total(scene, space, {vf, RandomPath(scene, space, vf, seed), rand_tw});
    row.totals[2] += Total(scene, space, {vf, path, rand_tw});
  }
  for (int c = 0; c < 3; ++c) row.totals[c] /= seeds;
  row.totals[3] = Total(scene, space, {vf, path, tw});
  return row;
}

}  // namespace

AblationResult RunAblation(const std::vector<SceneDescription>& scenes,
                           const SearchSpace& space, int seeds, std::uint64_t base_seed,
                           const AblationProgress& progress) {
  if (seeds < 1) throw ValidationError("seeds", "need at least one seed");
  ValidateSpace(space);
  const auto t0 = std::chrono::steady_clock::now();
  AblationResult result;
  for (const SceneDescription& scene : scenes) {
    for (std::size_t r = 0; r < scene.reachable.rects.size(); ++r) {
      AblationRegionResult row = RunRegion(RestrictToRegion(scene, r), space, seeds, base_seed);
      row.scene = scene.name;
      row.region = static_cast<int>(r);
      if (progress) progress(row);
      result.regions.push_back(row);
    }
  }
  if (!result.regions.empty()) {
    for (const AblationRegionResult& row : result.regions) {
      for (int c = 0; c < kAblationConfigs; ++c) result.mean_totals[c] += row.totals[c];
    }
    for (double& m : result.mean_totals) m /= static_cast<double>(result.regions.size());
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string SerializeAblation(const AblationResult& result) {
  using jsonutil::Json;
  Json configs = Json::array();
  for (int c = 0; c < kAblationConfigs; ++c) {
    configs.push_back({{"config", kAblationConfigNames[c]}, {"mean_total", result.mean_totals[c]}});
  }
  Json regions = Json::array();
  for (const AblationRegionResult& row : result.regions) {
    Json totals = Json::object();
    for (int c = 0; c < kAblationConfigs; ++c) totals[kAblationConfigNames[c]] = row.totals[c];
    regions.push_back({{"scene", row.scene}, {"region", row.region}, {"totals", totals}});
  }
  Json j = {{"configs", configs},
            {"regions", regions},
            {"non_decreasing", result.NonDecreasing()},
            {"gain", result.Gain()},
            {"wall_time_s", result.wall_time_s}};
  return j.dump(2) + "\n";
}

}  // namespace chronolapse
