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

// Staged exhaustive search over shooting parameters: viewfinder, then
// camera path, then time-warp. Each stage enumerates a finite candidate
// list, scores every candidate with the public scorers on low-resolution
// probe renders, and keeps the best one (ties go to the smallest index).

#ifndef CHRONOLAPSE_OPTIMIZE_HPP_
#define CHRONOLAPSE_OPTIMIZE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chronolapse/aesthetics.hpp"
#include "chronolapse/params.hpp"
#include "chronolapse/render.hpp"
#include "chronolapse/scene.hpp"

namespace chronolapse {

inline constexpr double kPathImageWeight = 0.25;
inline constexpr int kPathSamples = 16;
inline constexpr int kMaxRandomAttempts = 1000;

struct ProbeConfig {
  int width = kProbeWidth;
  int height = kProbeHeight;
  int timestamps = 3;

  bool operator==(const ProbeConfig&) const = default;
};

struct SearchSpace {
  Timestamp date;  // UTC midnight of the shooting day
  int nx = 1, ny = 1, nz = 1;
  std::vector<double> yaw_deg;
  std::vector<double> pitch_deg;
  std::vector<PathMode> modes;
  std::vector<double> pan_amplitudes;
  std::vector<double> truck_amplitudes;
  std::vector<double> orbit_amplitudes;
  std::vector<double> start_hours;  // local solar hours on `date`
  std::vector<double> duration_hours;
  std::vector<double> interval_s;
  FrameBudget budget;
  ProbeConfig probe;

  const std::vector<double>& AmplitudesFor(PathMode mode) const;
  bool operator==(const SearchSpace&) const = default;
};

void ValidateSpace(const SearchSpace& space);
SearchSpace ParseSpace(std::string_view text);
SearchSpace LoadSpaceFile(const std::string& path);
std::string SerializeSpace(const SearchSpace& space);

// Probe render settings: probe resolution, auto exposure without jitter.
RenderSettings ProbeRenderSettings(const SearchSpace& space, std::uint64_t seed = 0);

// Probe instants at fractions (i + 1) / (n + 1) of the daylight span.
std::vector<Timestamp> ProbeTimestamps(const SceneDescription& scene, const SearchSpace& space);

// Candidate lists in flat-index order.
// Grid cell centers over the bounding box of the reachable rectangles and
// the height range, x fastest, then y, then z; unreachable points dropped.
std::vector<Vec3> GridLocations(const SceneDescription& scene, const SearchSpace& space);
// Location-major, then yaw, then pitch.
std::vector<ViewfinderParams> ViewfinderCandidates(const SceneDescription& scene,
                                                   const SearchSpace& space);
// Mode order of the space, amplitude levels within a mode. Static yields a
// single zero-amplitude candidate. Orbit without a landmark and paths that
// leave the reachable region are dropped.
std::vector<CameraPath> PathCandidates(const SceneDescription& scene, const SearchSpace& space,
                                       const ViewfinderParams& vf);
// Start-major, then duration, then interval; only windows inside the
// frame budget.
std::vector<TimeWarpParams> TimeWarpCandidates(const SceneDescription& scene,
                                               const SearchSpace& space);

// Stage objectives.
double ViewfinderScore(const SceneDescription& scene, const SearchSpace& space,
                       const ViewfinderParams& vf,
                       const AestheticScorer& scorer = DefaultScorer());
double PathScore(const SceneDescription& scene, const SearchSpace& space, const CameraPath& path,
                 const AestheticScorer& scorer = DefaultScorer());
double TimeWarpScore(const SceneDescription& scene, const SearchSpace& space,
                     const CameraPath& path, const TimeWarpParams& tw,
                     const AestheticScorer& scorer = DefaultScorer());

template <typename T>
struct StageResult {
  T best;
  double score = 0.0;
  std::size_t best_index = 0;
  std::size_t candidates = 0;
};

StageResult<ViewfinderParams> OptimizeViewfinder(const SceneDescription& scene,
                                                 const SearchSpace& space,
                                                 const AestheticScorer& scorer = DefaultScorer());
StageResult<CameraPath> OptimizePath(const SceneDescription& scene, const ViewfinderParams& vf,
                                     const SearchSpace& space,
                                     const AestheticScorer& scorer = DefaultScorer());
StageResult<TimeWarpParams> OptimizeTimeWarp(const SceneDescription& scene,
                                             const ViewfinderParams& vf, const CameraPath& path,
                                             const SearchSpace& space,
                                             const AestheticScorer& scorer = DefaultScorer());

struct StageSelection {
  bool image = true;
  bool video = true;
  bool time = true;

  // "ivt" letters; any subset, any order.
  static StageSelection Parse(std::string_view letters);
  bool operator==(const StageSelection&) const = default;
};

struct StageReport {
  std::string name;  // image, video or time
  bool optimized = false;
  std::size_t candidates = 0;  // evaluated candidates (0 when not optimized)
  std::size_t best_index = 0;
  double best_score = 0.0;
};

struct OptimizationReport {
  std::vector<StageReport> stages;  // always image, video, time
  std::size_t evaluations = 0;
  double wall_time_s = 0.0;
  ShootingParameters params;
  QualityScore score;  // assessment of the final probe sequence
};

// Disabled stages take their group from `fallback` when given (a path
// that becomes infeasible at the new viewfinder falls back to static) or
// are drawn as in RandomParams otherwise.
struct OptimizeOptions {
  StageSelection stages;
  std::uint64_t seed = 0;
  std::optional<ShootingParameters> fallback;
};

OptimizationReport OptimizeAll(const SceneDescription& scene, const SearchSpace& space,
                               const OptimizeOptions& options = {},
                               const AestheticScorer& scorer = DefaultScorer());

// Independent uniform draws per parameter group. Each group uses its own
// stream derived from the seed, so e.g. the time-warp drawn for a seed does
// not depend on whether the viewfinder was drawn or optimized.
ViewfinderParams RandomViewfinder(const SceneDescription& scene, const SearchSpace& space,
                                  std::uint64_t seed);
CameraPath RandomPath(const SceneDescription& scene, const SearchSpace& space,
                      const ViewfinderParams& vf, std::uint64_t seed);
TimeWarpParams RandomTimeWarp(const SceneDescription& scene, const SearchSpace& space,
                              std::uint64_t seed);
ShootingParameters RandomParams(const SceneDescription& scene, const SearchSpace& space,
                                std::uint64_t seed);

// Probe-resolution sequence of the given parameters (jitter off).
FrameSequence RenderProbeSequence(const SceneDescription& scene, const SearchSpace& space,
                                  const ShootingParameters& params);

std::string SerializeReport(const OptimizationReport& report);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_OPTIMIZE_HPP_
