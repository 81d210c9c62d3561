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

// Stage ablation: for every scene and each of its reachable rectangles
// taken as a separate region, parameters are produced with the stages
// enabled cumulatively (none, I, I+V, I+V+T). Disabled stages are drawn at
// random and averaged over several seeds. Every result is scored by
// Assess() on its probe-resolution sequence.

#ifndef CHRONOLAPSE_ABLATION_HPP_
#define CHRONOLAPSE_ABLATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chronolapse/optimize.hpp"

namespace chronolapse {

inline constexpr int kAblationConfigs = 4;
inline constexpr std::array<const char*, kAblationConfigs> kAblationConfigNames = {
    "none", "I", "I+V", "I+V+T"};

struct AblationRegionResult {
  std::string scene;
  int region = 0;
  std::array<double, kAblationConfigs> totals{};  // seed-averaged where random
};

struct AblationResult {
  std::vector<AblationRegionResult> regions;
  std::array<double, kAblationConfigs> mean_totals{};
  double wall_time_s = 0.0;

  bool NonDecreasing() const;
  double Gain() const { return mean_totals.back() - mean_totals.front(); }
};

// The scene restricted to one of its reachable rectangles.
SceneDescription RestrictToRegion(const SceneDescription& scene, std::size_t rect_index);

using AblationProgress = std::function<void(const AblationRegionResult&)>;

AblationResult RunAblation(const std::vector<SceneDescription>& scenes,
                           const SearchSpace& space, int seeds,
                           std::uint64_t base_seed = 1,
                           const AblationProgress& progress = nullptr);

std::string SerializeAblation(const AblationResult& result);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_ABLATION_HPP_
