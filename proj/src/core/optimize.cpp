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

#include "chronolapse/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "formats.hpp"
#include "json_util.hpp"
#include "rng.hpp"

namespace chronolapse {

using jsonutil::Json;

const std::vector<double>& SearchSpace::AmplitudesFor(PathMode mode) const {
  static const std::vector<double> kStatic{0.0};
  switch (mode) {
    case PathMode::kStatic: return kStatic;
    case PathMode::kPan: return pan_amplitudes;
    case PathMode::kTruck: return truck_amplitudes;
    case PathMode::kOrbit: return orbit_amplitudes;
  }
  return kStatic;
}

void ValidateSpace(const SearchSpace& space) {
  if (space.nx < 1 || space.ny < 1 || space.nz < 1) {
    throw ValidationError("grid", "grid resolutions must be at least 1");
  }
  auto non_empty = [](const std::vector<double>& v, const char* field) {
    if (v.empty()) throw ValidationError(field, "candidate list is empty");
  };
  non_empty(space.yaw_deg, "yaw_deg");
  non_empty(space.pitch_deg, "pitch_deg");
  non_empty(space.start_hours, "start_hours");
  non_empty(space.duration_hours, "duration_hours");
  non_empty(space.interval_s, "interval_s");
  if (space.modes.empty()) throw ValidationError("modes", "candidate list is empty");
  for (std::size_t i = 0; i < space.modes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (space.modes[i] == space.modes[j]) {
        throw ValidationError("modes", "duplicate mode");
      }
    }
    if (space.modes[i] == PathMode::kStatic) continue;
    const std::vector<double>& amps = space.AmplitudesFor(space.modes[i]);
    if (amps.empty()) {
      throw ValidationError("amplitudes", std::string("no amplitude levels for ") +
                                              PathModeName(space.modes[i]));
    }
    for (double a : amps) {
      if (!(a > 0.0)) throw ValidationError("amplitudes", "moving-path amplitudes must be > 0");
    }
  }
  for (double p : space.pitch_deg) {
    if (!(p >= -89.0 && p <= 89.0)) throw ValidationError("pitch_deg", "pitch must be in [-89, 89]");
  }
  for (double h : space.duration_hours) {
    if (!(h >= 0.0)) throw ValidationError("duration_hours", "durations must be >= 0");
  }
  for (double s : space.interval_s) {
    if (!(s > 0.0)) throw ValidationError("interval_s", "intervals must be > 0");
  }
  if (space.budget.min_frames < 5 || space.budget.max_frames < space.budget.min_frames) {
    throw ValidationError("frame_budget", "budget must satisfy 5 <= min <= max");
  }
  if (space.probe.width < 16 || space.probe.height < 16) {
    throw ValidationError("probe", "probe resolution must be at least 16x16");
  }
  if (space.probe.timestamps < 1) {
    throw ValidationError("probe", "need at least one probe timestamp");
  }
}

namespace {

std::vector<double> NumberList(const Json& j, std::string_view key, const std::string& path) {
  const Json& arr = jsonutil::ArrayField(j, key, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(jsonutil::Number(arr[i], jsonutil::Join(path, key) + "[" +
                                               std::to_string(i) + "]"));
  }
  return out;
}

Json ModeName(PathMode m) { return PathModeName(m); }

}  // namespace

SearchSpace ParseSpace(std::string_view text) {
  using namespace jsonutil;
  const Json j = ParseText(text);
  RejectUnknownKeys(j, "", {"date", "grid", "yaw_deg", "pitch_deg", "modes", "amplitudes",
                            "start_hours", "duration_hours", "interval_s", "frame_budget",
                            "probe"});
  SearchSpace s;
  try {
    s.date = ParseDate(StringField(j, "date", ""));
  } catch (const ParseError& e) {
    throw ParseError(std::string("date: ") + e.what());
  }
  const Json& grid = ArrayField(j, "grid", "");
  if (grid.size() != 3) throw ParseError("grid: expected [nx, ny, nz]");
  s.nx = static_cast<int>(Integer(grid[0], "grid[0]"));
  s.ny = static_cast<int>(Integer(grid[1], "grid[1]"));
  s.nz = static_cast<int>(Integer(grid[2], "grid[2]"));
  s.yaw_deg = NumberList(j, "yaw_deg", "");
  s.pitch_deg = NumberList(j, "pitch_deg", "");
  const Json& modes = ArrayField(j, "modes", "");
  for (const Json& m : modes) {
    if (!m.is_string()) throw ParseError("modes: expected mode names");
    try {
      s.modes.push_back(ParsePathMode(m.get<std::string>()));
    } catch (const ValidationError& e) {
      throw ValidationError("modes", e.what());
    }
  }
  if (j.contains("amplitudes")) {
    const Json& a = j["amplitudes"];
    RejectUnknownKeys(a, "amplitudes", {"pan", "truck", "orbit"});
    if (a.contains("pan")) s.pan_amplitudes = NumberList(a, "pan", "amplitudes");
    if (a.contains("truck")) s.truck_amplitudes = NumberList(a, "truck", "amplitudes");
    if (a.contains("orbit")) s.orbit_amplitudes = NumberList(a, "orbit", "amplitudes");
  }
  s.start_hours = NumberList(j, "start_hours", "");
  s.duration_hours = NumberList(j, "duration_hours", "");
  s.interval_s = NumberList(j, "interval_s", "");
  if (j.contains("frame_budget")) {
    const Json& b = j["frame_budget"];
    if (!b.is_array() || b.size() != 2) throw ParseError("frame_budget: expected [min, max]");
    s.budget.min_frames = static_cast<int>(Integer(b[0], "frame_budget[0]"));
    s.budget.max_frames = static_cast<int>(Integer(b[1], "frame_budget[1]"));
  }
  if (j.contains("probe")) {
    const Json& p = j["probe"];
    RejectUnknownKeys(p, "probe", {"width", "height", "timestamps"});
    if (p.contains("width")) s.probe.width = static_cast<int>(IntegerField(p, "width", "probe"));
    if (p.contains("height")) {
      s.probe.height = static_cast<int>(IntegerField(p, "height", "probe"));
    }
    if (p.contains("timestamps")) {
      s.probe.timestamps = static_cast<int>(IntegerField(p, "timestamps", "probe"));
    }
  }
  ValidateSpace(s);
  return s;
}

SearchSpace LoadSpaceFile(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open search space '" + path + "'");
  std::stringstream buf;
  buf << file.rdbuf();
  return ParseSpace(buf.str());
}

std::string SerializeSpace(const SearchSpace& s) {
  Json modes = Json::array();
  for (PathMode m : s.modes) modes.push_back(ModeName(m));
  Json j = {{"date", FormatDate(s.date)},
            {"grid", {s.nx, s.ny, s.nz}},
            {"yaw_deg", s.yaw_deg},
            {"pitch_deg", s.pitch_deg},
            {"modes", modes},
            {"amplitudes",
             {{"pan", s.pan_amplitudes}, {"truck", s.truck_amplitudes},
              {"orbit", s.orbit_amplitudes}}},
            {"start_hours", s.start_hours},
            {"duration_hours", s.duration_hours},
            {"interval_s", s.interval_s},
            {"frame_budget", {s.budget.min_frames, s.budget.max_frames}},
            {"probe",
             {{"width", s.probe.width},
              {"height", s.probe.height},
              {"timestamps", s.probe.timestamps}}}};
  return j.dump(2) + "\n";
}

RenderSettings ProbeRenderSettings(const SearchSpace& space, std::uint64_t seed) {
  RenderSettings settings = ProbeSettings(seed);
  settings.width = space.probe.width;
  settings.height = space.probe.height;
  settings.exposure = ExposureMode::Auto(0.0);
  return settings;
}

std::vector<Timestamp> ProbeTimestamps(const SceneDescription& scene, const SearchSpace& space) {
  const auto [rise, set] = DaylightSolarHours(scene.georef, space.date);
  std::vector<Timestamp> out;
  const int n = space.probe.timestamps;
  for (int i = 0; i < n; ++i) {
    const double hour = rise + (set - rise) * (i + 1) / (n + 1);
    out.push_back(SolarHourToUtc(scene.georef, space.date, hour));
  }
  return out;
}

std::vector<Vec3> GridLocations(const SceneDescription& scene, const SearchSpace& space) {
  const ReachableRegion& region = scene.reachable;
  Rect box = region.rects.front();
  for (const Rect& r : region.rects) {
    box.xmin = std::min(box.xmin, r.xmin);
    box.ymin = std::min(box.ymin, r.ymin);
    box.xmax = std::max(box.xmax, r.xmax);
    box.ymax = std::max(box.ymax, r.ymax);
  }
  auto center = [](double lo, double hi, int i, int n) {
    return lo + (hi - lo) * (i + 0.5) / n;
  };
  std::vector<Vec3> out;
  for (int iz = 0; iz < space.nz; ++iz) {
    for (int iy = 0; iy < space.ny; ++iy) {
      for (int ix = 0; ix < space.nx; ++ix) {
        const Vec3 p{center(box.xmin, box.xmax, ix, space.nx),
                     center(box.ymin, box.ymax, iy, space.ny),
                     center(region.min_height, region.max_height, iz, space.nz)};
        if (IsReachable(region, p)) out.push_back(p);
      }
    }
  }
  return out;
}

std::vector<ViewfinderParams> ViewfinderCandidates(const SceneDescription& scene,
                                                   const SearchSpace& space) {
  std::vector<ViewfinderParams> out;
  for (const Vec3& p : GridLocations(scene, space)) {
    for (double yaw : space.yaw_deg) {
      for (double pitch : space.pitch_deg) out.push_back({p, yaw, pitch});
    }
  }
  return out;
}

namespace {

bool PathAdmissible(const SceneDescription& scene, const CameraPath& path) {
  if (path.mode == PathMode::kOrbit && !scene.PrimaryLandmark()) return false;
  return PathIsFeasible(path, scene, kPathSamples);
}

TimeWarpParams MakeWindow(const SceneDescription& scene, const SearchSpace& space,
                          double start_hour, double duration_h, double interval_s) {
  TimeWarpParams tw;
  tw.start = SolarHourToUtc(scene.georef, space.date, start_hour);
  tw.end = tw.start.PlusSeconds(duration_h * 3600.0);
  tw.interval_s = interval_s;
  return tw;
}

bool InBudget(const TimeWarpParams& tw, const FrameBudget& budget) {
  const int n = FrameCount(tw);
  return n >= budget.min_frames && n <= budget.max_frames;
}

}  // namespace

std::vector<CameraPath> PathCandidates(const SceneDescription& scene, const SearchSpace& space,
                                       const ViewfinderParams& vf) {
  std::vector<CameraPath> out;
  for (PathMode mode : space.modes) {
    for (double amp : space.AmplitudesFor(mode)) {
      const CameraPath path{mode, amp, vf};
      if (PathAdmissible(scene, path)) out.push_back(path);
    }
  }
  return out;
}

std::vector<TimeWarpParams> TimeWarpCandidates(const SceneDescription& scene,
                                               const SearchSpace& space) {
  std::vector<TimeWarpParams> out;
  for (double start : space.start_hours) {
    for (double dur : space.duration_hours) {
      for (double dt : space.interval_s) {
        const TimeWarpParams tw = MakeWindow(scene, space, start, dur, dt);
        if (InBudget(tw, space.budget)) out.push_back(tw);
      }
    }
  }
  return out;
}

namespace {

double FrameImageScore(const SceneDescription& scene, const CameraPose& pose, Timestamp t,
                       const RenderSettings& settings, const AestheticScorer& scorer) {
  const Frame frame = RenderFrame(scene, pose, t, settings);
  const double aspect = static_cast<double>(settings.width) / settings.height;
  const std::vector<SalientPoint> salient = ProjectLandmarks(scene, pose, aspect);
  return scorer.Image(frame, salient).q_i;
}

}  // namespace

double ViewfinderScore(const SceneDescription& scene, const SearchSpace& space,
                       const ViewfinderParams& vf, const AestheticScorer& scorer) {
  const RenderSettings settings = ProbeRenderSettings(space);
  CameraPose pose;
  pose.position = vf.location;
  pose.yaw_deg = vf.yaw_deg;
  pose.pitch_deg = vf.pitch_deg;
  pose.vfov_deg = settings.vfov_deg;
  const std::vector<Timestamp> times = ProbeTimestamps(scene, space);
  double sum = 0.0;
  for (Timestamp t : times) sum += FrameImageScore(scene, pose, t, settings, scorer);
  return sum / static_cast<double>(times.size());
}

double PathScore(const SceneDescription& scene, const SearchSpace& space, const CameraPath& path,
                 const AestheticScorer& scorer) {
  const RenderSettings settings = ProbeRenderSettings(space);
  std::vector<CameraPose> poses;
  for (int k = 0; k < kPathSamples; ++k) {
    poses.push_back(EvaluatePath(path, scene, static_cast<double>(k) / (kPathSamples - 1),
                                 settings.vfov_deg));
  }
  const double aspect = static_cast<double>(settings.width) / settings.height;
  const double q_v = scorer.Video(poses, scene, aspect).q_v;

  const std::vector<Timestamp> times = ProbeTimestamps(scene, space);
  const Timestamp picks[3] = {times.front(), times[times.size() / 2], times.back()};
  const double progress[3] = {0.0, 0.5, 1.0};
  double image = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CameraPose pose = EvaluatePath(path, scene, progress[i], settings.vfov_deg);
    image += FrameImageScore(scene, pose, picks[i], settings, scorer);
  }
  return q_v + kPathImageWeight * (image / 3.0);
}

FrameSequence RenderProbeSequence(const SceneDescription& scene, const SearchSpace& space,
                                  const ShootingParameters& params) {
  return RenderSequence(scene, params, ProbeRenderSettings(space));
}

double TimeWarpScore(const SceneDescription& scene, const SearchSpace& space,
                     const CameraPath& path, const TimeWarpParams& tw,
                     const AestheticScorer& scorer) {
  ShootingParameters params{path.base, path, tw};
  return scorer.TimeLapse(RenderProbeSequence(scene, space, params)).q_t;
}

namespace {

// Scores every candidate (in parallel) and reduces by (score, index).
template <typename T, typename ScoreFn>
StageResult<T> Argmax(const std::vector<T>& candidates, ScoreFn score_fn) {
  std::vector<double> scores(candidates.size());
  ParallelFor(candidates.size(), [&](std::size_t i) { scores[i] = score_fn(candidates[i]); });
  StageResult<T> result;
  result.candidates = candidates.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == 0 || scores[i] > result.score) {
      result.score = scores[i];
      result.best_index = i;
    }
  }
  result.best = candidates[result.best_index];
  return result;
}

}  // namespace

StageResult<ViewfinderParams> OptimizeViewfinder(const SceneDescription& scene,
                                                 const SearchSpace& space,
                                                 const AestheticScorer& scorer) {
  ValidateSpace(space);
  const std::vector<ViewfinderParams> candidates = ViewfinderCandidates(scene, space);
  if (candidates.empty()) {
    throw ValidationError("grid", "no grid point lies in the reachable region");
  }
  return Argmax(candidates, [&](const ViewfinderParams& vf) {
    return ViewfinderScore(scene, space, vf, scorer);
  });
}

StageResult<CameraPath> OptimizePath(const SceneDescription& scene, const ViewfinderParams& vf,
                                     const SearchSpace& space, const AestheticScorer& scorer) {
  ValidateSpace(space);
  const std::vector<CameraPath> candidates = PathCandidates(scene, space, vf);
  if (candidates.empty()) {
    throw ValidationError("modes", "no admissible camera path for this viewfinder");
  }
  return Argmax(candidates, [&](const CameraPath& path) {
    return PathScore(scene, space, path, scorer);
  });
}

StageResult<TimeWarpParams> OptimizeTimeWarp(const SceneDescription& scene,
                                             const ViewfinderParams& vf, const CameraPath& path,
                                             const SearchSpace& space,
                                             const AestheticScorer& scorer) {
  ValidateSpace(space);
  const std::vector<TimeWarpParams> candidates = TimeWarpCandidates(scene, space);
  if (candidates.empty()) {
    throw ValidationError("frame_budget", "no time window fits the frame budget");
  }
  CameraPath based = path;
  based.base = vf;
  return Argmax(candidates, [&](const TimeWarpParams& tw) {
    return TimeWarpScore(scene, space, based, tw, scorer);
  });
}

StageSelection StageSelection::Parse(std::string_view letters) {
  StageSelection s{false, false, false};
  for (char c : letters) {
    switch (c) {
      case 'i': s.image = true; break;
      case 'v': s.video = true; break;
      case 't': s.time = true; break;
      default:
        throw ValidationError("stages", "unknown stage letter '" + std::string(1, c) +
                                            "' (expected i, v, t)");
    }
  }
  return s;
}

namespace {

enum StageStream : std::uint64_t { kViewfinderStream = 1, kPathStream = 2, kTimeStream = 3 };

std::size_t Pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::mt19937_64 StreamFor(std::uint64_t seed, StageStream stream) {
  return std::mt19937_64(HashCombine(seed, stream));
}

[[noreturn]] void Exhausted(const char* field) {
  throw ValidationError(field, "random draw found no admissible candidate in " +
                                   std::to_string(kMaxRandomAttempts) + " attempts");
}

}  // namespace

ViewfinderParams RandomViewfinder(const SceneDescription& scene, const SearchSpace& space,
                                  std::uint64_t seed) {
  ValidateSpace(space);
  std::mt19937_64 rng = StreamFor(seed, kViewfinderStream);
  const ReachableRegion& region = scene.reachable;
  Rect box = region.rects.front();
  for (const Rect& r : region.rects) {
    box.xmin = std::min(box.xmin, r.xmin);
    box.ymin = std::min(box.ymin, r.ymin);
    box.xmax = std::max(box.xmax, r.xmax);
    box.ymax = std::max(box.ymax, r.ymax);
  }
  for (int attempt = 0; attempt < kMaxRandomAttempts; ++attempt) {
    const std::size_t ix = Pick(rng, space.nx);
    const std::size_t iy = Pick(rng, space.ny);
    const std::size_t iz = Pick(rng, space.nz);
    const double yaw = space.yaw_deg[Pick(rng, space.yaw_deg.size())];
    const double pitch = space.pitch_deg[Pick(rng, space.pitch_deg.size())];
    const Vec3 p{box.xmin + (box.xmax - box.xmin) * (ix + 0.5) / space.nx,
                 box.ymin + (box.ymax - box.ymin) * (iy + 0.5) / space.ny,
                 region.min_height + (region.max_height - region.min_height) * (iz + 0.5) /
                                         space.nz};
    if (IsReachable(region, p)) return {p, yaw, pitch};
  }
  Exhausted("grid");
}

CameraPath RandomPath(const SceneDescription& scene, const SearchSpace& space,
                      const ViewfinderParams& vf, std::uint64_t seed) {
  ValidateSpace(space);
  std::mt19937_64 rng = StreamFor(seed, kPathStream);
  for (int attempt = 0; attempt < kMaxRandomAttempts; ++attempt) {
    const PathMode mode = space.modes[Pick(rng, space.modes.size())];
    const std::vector<double>& amps = space.AmplitudesFor(mode);
    const CameraPath path{mode, amps[Pick(rng, amps.size())], vf};
    if (PathAdmissible(scene, path)) return path;
  }
  Exhausted("modes");
}

TimeWarpParams RandomTimeWarp(const SceneDescription& scene, const SearchSpace& space,
                              std::uint64_t seed) {
  ValidateSpace(space);
  std::mt19937_64 rng = StreamFor(seed, kTimeStream);
  for (int attempt = 0; attempt < kMaxRandomAttempts; ++attempt) {
    const double start = space.start_hours[Pick(rng, space.start_hours.size())];
    const double dur = space.duration_hours[Pick(rng, space.duration_hours.size())];
    const double dt = space.interval_s[Pick(rng, space.interval_s.size())];
    const TimeWarpParams tw = MakeWindow(scene, space, start, dur, dt);
    if (InBudget(tw, space.budget)) return tw;
  }
  Exhausted("frame_budget");
}

ShootingParameters RandomParams(const SceneDescription& scene, const SearchSpace& space,
                                std::uint64_t seed) {
  ShootingParameters p;
  p.viewfinder = RandomViewfinder(scene, space, seed);
  p.path = RandomPath(scene, space, p.viewfinder, seed);
  p.timewarp = RandomTimeWarp(scene, space, seed);
  return p;
}

OptimizationReport OptimizeAll(const SceneDescription& scene, const SearchSpace& space,
                               const OptimizeOptions& options, const AestheticScorer& scorer) {
  ValidateSpace(space);
  const auto t0 = std::chrono::steady_clock::now();
  OptimizationReport report;
  ShootingParameters& p = report.params;

  StageReport image{"image"};
  if (options.stages.image) {
    const auto r = OptimizeViewfinder(scene, space, scorer);
    p.viewfinder = r.best;
    image = {"image", true, r.candidates, r.best_index, r.score};
  } else if (options.fallback) {
    p.viewfinder = options.fallback->viewfinder;
  } else {
    p.viewfinder = RandomViewfinder(scene, space, options.seed);
  }

  StageReport video{"video"};
  if (options.stages.video) {
    const auto r = OptimizePath(scene, p.viewfinder, space, scorer);
    p.path = r.best;
    video = {"video", true, r.candidates, r.best_index, r.score};
  } else if (options.fallback) {
    p.path = options.fallback->path;
    p.path.base = p.viewfinder;
    if (!PathAdmissible(scene, p.path)) p.path = {PathMode::kStatic, 0.0, p.viewfinder};
  } else {
    p.path = RandomPath(scene, space, p.viewfinder, options.seed);
  }

  StageReport time{"time"};
  if (options.stages.time) {
    const auto r = OptimizeTimeWarp(scene, p.viewfinder, p.path, space, scorer);
    p.timewarp = r.best;
    time = {"time", true, r.candidates, r.best_index, r.score};
  } else if (options.fallback) {
    p.timewarp = options.fallback->timewarp;
  } else {
    p.timewarp = RandomTimeWarp(scene, space, options.seed);
  }

  report.stages = {image, video, time};
  for (const StageReport& s : report.stages) report.evaluations += s.candidates;
  report.score = Assess(RenderProbeSequence(scene, space, p), scene, scorer).quality;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string SerializeReport(const OptimizationReport& report) {
  Json stages = Json::array();
  for (const StageReport& s : report.stages) {
    stages.push_back({{"stage", s.name},
                      {"optimized", s.optimized},
                      {"candidates", s.candidates},
                      {"best_index", s.best_index},
                      {"best_score", s.best_score}});
  }
  Json j = {{"stages", stages},
            {"evaluations", report.evaluations},
            {"wall_time_s", report.wall_time_s},
            {"params", formats::ParamsToJson(report.params)},
            {"score", formats::ScoreToJson(report.score)}};
  return j.dump(2) + "\n";
}

}  // namespace chronolapse
