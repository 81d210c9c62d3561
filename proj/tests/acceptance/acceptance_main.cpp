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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Pass --skip-ablation for a quick run without the
// multi-minute ablation study.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "chronolapse/ablation.hpp"
#include "chronolapse/aesthetics.hpp"
#include "chronolapse/postproc.hpp"
#include "chronolapse/robotplan.hpp"

namespace chronolapse {
namespace {

namespace fs = std::filesystem;

std::string DataPath(const std::string& rel) { return std::string(CHRONO_DATA_DIR) + "/" + rel; }

std::string Fmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

// --- ablation --------------------------------------------------------------

Outcome AblationTrend() {
  std::vector<SceneDescription> scenes;
  for (const char* name : {"bridge", "campus", "harbor", "hills", "plaza"}) {
    scenes.push_back(LoadSceneFile(DataPath(std::string("scenes/ablation/") + name + ".json")));
  }
  const SearchSpace space = LoadSpaceFile(DataPath("spaces/ablation.json"));
  const AblationResult r = RunAblation(scenes, space, 10, 1);
  const auto& m = r.mean_totals;
  bool monotone = true;
  for (int i = 1; i < kAblationConfigs; ++i) monotone = monotone && m[i] >= m[i - 1];
  const double gain = m[3] - m[0];
  return {monotone && gain >= 0.03 && r.regions.size() == 20,
          Fmt("regions=%zu none=%.4f I=%.4f I+V=%.4f I+V+T=%.4f gain=%.4f (need >=0.03)",
              r.regions.size(), m[0], m[1], m[2], m[3], gain)};
}

// --- exhaustive search equivalence ----------------------------------------

Outcome ExhaustiveEquivalence() {
  const SceneDescription scene = LoadSceneFile(DataPath("scenes/tutorial.json"));
  const SearchSpace space = LoadSpaceFile(DataPath("spaces/reduced.json"));
  const testing::CoarseScorer coarse(0.2);
  int compared = 0, mismatches = 0;
  std::size_t max_candidates = 0, tied_best = 0;
  auto check = [&](std::size_t got_index, double got_score, std::size_t got_n,
                   const testing::BruteForcePick& want) {
    ++compared;
    max_candidates = std::max(max_candidates, want.candidates);
    if (got_index != want.index || got_score != want.score || got_n != want.candidates) {
      ++mismatches;
    }
  };
  for (const AestheticScorer* scorer :
       {&DefaultScorer(), static_cast<const AestheticScorer*>(&coarse)}) {
    const auto vf = OptimizeViewfinder(scene, space, *scorer);
    check(vf.best_index, vf.score, vf.candidates,
          testing::BruteForceViewfinder(scene, space, *scorer));
    const auto path = OptimizePath(scene, vf.best, space, *scorer);
    check(path.best_index, path.score, path.candidates,
          testing::BruteForcePath(scene, space, vf.best, *scorer));
    const auto tw = OptimizeTimeWarp(scene, vf.best, path.best, space, *scorer);
    check(tw.best_index, tw.score, tw.candidates,
          testing::BruteForceTimeWarp(scene, space, path.best, *scorer));
    if (scorer == &coarse) {
      for (const auto& c : ViewfinderCandidates(scene, space)) {
        tied_best += ViewfinderScore(scene, space, c, coarse) == vf.score;
      }
    }
  }
  return {mismatches == 0 && max_candidates <= 200 && tied_best >= 2,
          Fmt("%d stage runs, %d mismatches, largest list %zu, %zu-way tie in coarse image stage",
              compared, mismatches, max_candidates, tied_best)};
}

// --- solar model -----------------------------------------------------------

Outcome SolarModel() {
  struct Point {
    double lat, lon;
    const char* utc;
    double elevation;
  };
  // Analytic: overhead sun; 90 - 40 + 23.44. The others are NREL SPA values.
  const Point points[] = {
      {0.0, 0.0, "2024-03-20T12:00:00Z", 90.0},
      {40.0, 0.0, "2024-06-21T12:00:00Z", 73.44},
      {40.0, -105.0, "2024-04-15T16:00:00Z", 40.264},
      {51.5, 0.0, "2024-06-13T09:00:00Z", 45.480},
      {-33.9, 151.2, "2024-12-25T02:00:00Z", 79.434},
      {60.0, 25.0, "2024-06-13T17:00:00Z", 15.230},
  };
  double worst = 0.0;
  for (const Point& p : points) {
    const SunState s = ComputeSunState({p.lat, p.lon, 0.0, 0.0}, ParseIso8601(p.utc));
    worst = std::max(worst, std::abs(s.elevation_deg - p.elevation));
  }
  return {worst <= 1.0, Fmt("6 points, worst elevation error %.3f deg (limit 1.0)", worst)};
}

// --- deflicker -------------------------------------------------------------

Outcome DeflickerCriterion() {
  const SceneDescription scene = LoadSceneFile(DataPath("scenes/tutorial.json"));
  const ShootingParameters params =
      LoadParamsFile(std::string(CHRONO_TEST_DATA_DIR) + "/tutorial_params.json");
  RenderSettings settings = ProbeSettings();
  const FrameSequence clean = RenderSequence(scene, params, settings);
  settings.exposure = ExposureMode::Auto(0.1);
  settings.seed = 1;
  const FrameSequence noisy = RenderSequence(scene, params, settings);
  DeflickerConfig config;
  config.method = DeflickerMethod::kGainMatch;
  const FrameSequence fixed = Deflicker(noisy, config);

  const double before = FlickerIndex(noisy), after = FlickerIndex(fixed);
  const double reduction = 1.0 - after / before;
  const std::vector<double> ref = LuminanceSeries(clean), got = LuminanceSeries(fixed);
  double worst = 0.0;
  int over = 0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double d = std::abs(got[k] - ref[k]);
    worst = std::max(worst, d);
    over += d > 0.02;
  }
  return {reduction >= 0.5 && worst <= 0.02,
          Fmt("%zu frames, flicker %.4f -> %.4f (-%.0f%%, need >=50%%); per-frame |dmu| vs "
              "clean max %.4f, %d frames > 0.02 (need all <= 0.02)",
              ref.size(), before, after, 100 * reduction, worst, over)};
}

// --- histogram equalization ------------------------------------------------

Frame GrayRow(const std::vector<int>& values) {
  Frame f;
  f.width = static_cast<int>(values.size());
  f.height = 1;
  for (int v : values) f.pixels.insert(f.pixels.end(), 3, static_cast<std::uint8_t>(v));
  return f;
}

Outcome HistogramEqualization() {
  auto values = [](const Frame& f) {
    std::vector<int> out;
    for (std::size_t i = 0; i < f.pixels.size(); i += 3) out.push_back(f.pixels[i]);
    return out;
  };
  const bool keep = values(EqualizeHistogram(GrayRow({0, 85, 170, 255}))) ==
                    std::vector<int>{0, 85, 170, 255};
  const bool stretch = values(EqualizeHistogram(GrayRow({100, 200}))) == std::vector<int>{0, 255};
  Frame constant = GrayRow(std::vector<int>(12, 77));
  const bool flat = EqualizeHistogram(constant) == constant;
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> byte(0, 255);
  int idempotent = 0;
  for (int i = 0; i < 100; ++i) {
    Frame f;
    f.width = 24;
    f.height = 16;
    f.pixels.resize(24 * 16 * 3);
    for (auto& p : f.pixels) p = static_cast<std::uint8_t>(byte(rng));
    const Frame once = EqualizeHistogram(f);
    idempotent += EqualizeHistogram(once) == once;
  }
  return {keep && stretch && flat && idempotent == 100,
          Fmt("[0,85,170,255] %s, [100,200] %s, constant %s, idempotent %d/100",
              keep ? "unchanged" : "CHANGED", stretch ? "->[0,255]" : "WRONG",
              flat ? "unchanged" : "CHANGED", idempotent)};
}

// --- scoring closed forms --------------------------------------------------

Outcome ScoringClosedForms() {
  const std::vector<double> gray(32 * 18 * 3, 0.5);
  const double q_i = ScoreImageNormalized(gray, 32, 18, {}).q_i;

  FrameSequence seq;
  for (int k = 0; k < 20; ++k) {
    Frame f;
    f.width = 16;
    f.height = 16;
    f.pixels.assign(16 * 16 * 3, 128);
    f.timestamp = Timestamp{k * 30000LL};
    seq.frames.push_back(f);
  }
  const double q_t = ScoreTimeLapse(seq).q_t;

  SceneDescription scene = LoadSceneFile(DataPath("scenes/tutorial.json"));
  const std::vector<CameraPose> poses(16, CameraPose{{-60, 0, 10}, 0.0, 0.0, 60.0});
  const VideoScore v = ScoreVideo(poses, scene);
  const bool ok = std::abs(q_i - 0.375) <= 1e-6 && std::abs(q_t - 0.5) <= 1e-6 &&
                  v.translational_smoothness == 1.0 && v.rotational_smoothness == 1.0;
  return {ok, Fmt("mid-gray q_i=%.9f, constant q_t=%.9f, static smoothness %.17g/%.17g", q_i,
                  q_t, v.translational_smoothness, v.rotational_smoothness)};
}

// --- geodesy ---------------------------------------------------------------

Outcome Geodesy() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-88.0, 88.0), lon(-180, 180), head(0, 360),
      xy(-20000, 20000), z(-500, 3000);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GeoReference g{lat(rng), lon(rng), z(rng), head(rng)};
    const Vec3 p{xy(rng), xy(rng), z(rng)};
    const Vec3 q = GpsToLocal(g, LocalToGps(g, p));
    worst = std::max(worst, std::hypot(q.x - p.x, q.y - p.y, q.z - p.z));
  }
  const GeoPoint north = LocalToGps({0, 0, 0, 0}, {111.32, 0, 0});
  const double north_err = std::max(std::abs(north.lat - 0.001), std::abs(north.lon));
  const GeoPoint east =
      LocalToGps({45.0, 0, 0, 90.0}, {111.32 * std::cos(std::numbers::pi / 4), 0, 0});
  const double east_err = std::max(std::abs(east.lon - 0.001), std::abs(east.lat - 45.0));
  return {worst < 1e-6 && north_err <= 1e-9 && east_err <= 1e-9,
          Fmt("round trip worst %.2e m over 1000 points; 111.32 m N err %.1e deg; "
              "78.715 m E at 45N err %.1e deg",
              worst, north_err, east_err)};
}

// --- frame counts ----------------------------------------------------------

Outcome FrameCounts() {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<std::int64_t> start(0, 400LL * 86400000), span(0, 6LL * 3600000);
  std::uniform_int_distribution<int> interval(1, 600);
  int exact = 0;
  for (int i = 0; i < 20; ++i) {
    TimeWarpParams tw;
    tw.start = Timestamp{start(rng)};
    tw.end = Timestamp{tw.start.ms + span(rng)};
    tw.interval_s = interval(rng);
    const std::int64_t step = static_cast<std::int64_t>(tw.interval_s) * 1000;
    const std::int64_t expected = (tw.end.ms - tw.start.ms) / step + 1;
    exact += FrameCount(tw) == expected;
  }
  TimeWarpParams two_hours{ParseIso8601("2024-06-21T10:00:00Z"),
                           ParseIso8601("2024-06-21T12:00:00Z"), 30.0};
  const int n = FrameCount(two_hours);
  return {exact == 20 && n == 241,
          Fmt("%d/20 random windows exact, 2 h at 30 s -> %d frames", exact, n)};
}

// --- CLI determinism -------------------------------------------------------

std::string ReadBytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

bool SameTree(const fs::path& a, const fs::path& b, std::size_t* files) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t other = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++other;
  if (names.size() != other) return false;
  for (const std::string& n : names) {
    if (ReadBytes(a / n) != ReadBytes(b / n)) return false;
  }
  *files = names.size();
  return true;
}

Outcome CliDeterminism() {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("chronolapse-accept-" + std::to_string(rd()));
  fs::create_directories(dir);
  const std::string cli = CHRONO_CLI_PATH;
  const std::string scene = DataPath("scenes/tutorial.json");
  const std::string space = DataPath("spaces/reduced.json");
  bool ok = true;
  for (const char* run : {"1", "2"}) {
    const std::string params = (dir / (std::string("params") + run + ".json")).string();
    const std::string plan = "\"" + cli + "\" plan --scene \"" + scene + "\" --space \"" + space +
                             "\" --seed 42 --out \"" + params + "\" > /dev/null 2>&1";
    const std::string render = "\"" + cli + "\" render --scene \"" + scene + "\" --params \"" +
                               params + "\" --jitter 0.1 --seed 9 --width 96 --height 54 --out \"" +
                               (dir / (std::string("frames") + run)).string() +
                               "\" > /dev/null 2>&1";
    ok = ok && std::system(plan.c_str()) == 0 && std::system(render.c_str()) == 0;
  }
  std::size_t files = 0;
  const bool same_plan = ok && ReadBytes(dir / "params1.json") == ReadBytes(dir / "params2.json") &&
                         !ReadBytes(dir / "params1.json").empty();
  const bool same_render = ok && SameTree(dir / "frames1", dir / "frames2", &files);
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {same_plan && same_render,
          Fmt("plan %s, render %s (%zu files compared)", same_plan ? "identical" : "DIFFERS",
              same_render ? "identical" : "DIFFERS", files)};
}

}  // namespace
}  // namespace chronolapse

int main(int argc, char** argv) {
  using namespace chronolapse;
  bool skip_ablation = false;
  for (int i = 1; i < argc; ++i) skip_ablation |= std::string(argv[i]) == "--skip-ablation";

  if (skip_ablation) {
    std::printf("SKIP  ablation_trend\n");
  } else {
    Report("ablation_trend", AblationTrend);
  }
  Report("exhaustive_equivalence", ExhaustiveEquivalence);
  Report("solar_model", SolarModel);
  Report("deflicker", DeflickerCriterion);
  Report("histogram_equalization", HistogramEqualization);
  Report("scoring_closed_forms", ScoringClosedForms);
  Report("geodesy", Geodesy);
  Report("frame_counts", FrameCounts);
  Report("cli_determinism", CliDeterminism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
