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

// Deterministic single-bounce ray caster. Frames are a pure function of
// (scene, pose, time, settings); auto-exposure jitter is drawn from a hash
// of (seed, time) so jittered sequences are reproducible too.

#ifndef CHRONOLAPSE_RENDER_HPP_
#define CHRONOLAPSE_RENDER_HPP_

#include <cstdint>
#include <vector>

#include "chronolapse/camera.hpp"
#include "chronolapse/params.hpp"
#include "chronolapse/scene.hpp"
#include "chronolapse/timeutil.hpp"

namespace chronolapse {

inline constexpr double kAutoExposureTarget = 0.45;
// Longest exposure the simulated camera can reach; night scenes stay dark.
inline constexpr double kMaxAutoGain = 32.0;
inline constexpr double kMinAutoGain = 1.0 / 64.0;
// Share of sun/sky light that reaches surfaces regardless of orientation.
inline constexpr double kAmbientFraction = 0.3;

inline constexpr int kProbeWidth = 96;
inline constexpr int kProbeHeight = 54;
inline constexpr int kFinalWidth = 640;
inline constexpr int kFinalHeight = 360;

enum class ExposureKind { kAuto, kManual };

struct ExposureMode {
  ExposureKind kind = ExposureKind::kAuto;
  double jitter_sigma = 0.0;  // auto only, in [0, 0.2]
  double gain = 1.0;          // manual only, > 0

  static ExposureMode Auto(double jitter_sigma = 0.0) {
    return {ExposureKind::kAuto, jitter_sigma, 1.0};
  }
  static ExposureMode Manual(double gain) { return {ExposureKind::kManual, 0.0, gain}; }
  bool operator==(const ExposureMode&) const = default;
};

struct RenderSettings {
  int width = kFinalWidth;
  int height = kFinalHeight;
  ExposureMode exposure;
  bool shadows = true;
  std::uint64_t seed = 0;
  double vfov_deg = 60.0;
  double fps_playback = 24.0;

  bool operator==(const RenderSettings&) const = default;
};

RenderSettings ProbeSettings(std::uint64_t seed = 0);

struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major interleaved RGB
  Timestamp timestamp;
  CameraPose pose;
  double pre_gain_mean_luminance = 0.0;

  double MeanLuminance() const;
  bool operator==(const Frame&) const = default;
};

struct FrameSequence {
  std::vector<Frame> frames;
  ShootingParameters params;
  double fps_playback = 24.0;

  std::vector<CameraPose> Poses() const;
  bool operator==(const FrameSequence&) const = default;
};

// Throws ValidationError for a bad resolution, exposure mode or fov.
void ValidateSettings(const RenderSettings& settings);

// Checks ordering and dimension invariants of a sequence.
void ValidateSequence(const FrameSequence& seq);

// Multiplicative exposure error exp(N(0, sigma)) the auto mode applies at t.
double ExposureJitter(const RenderSettings& settings, Timestamp t);

Frame RenderFrame(const SceneDescription& scene, const CameraPose& pose,
                  Timestamp t, const RenderSettings& settings);

// Frames at start + k * interval for k = 0..FrameCount-1, with the camera at
// path progress k / max(1, K - 1).
FrameSequence RenderSequence(const SceneDescription& scene,
                             const ShootingParameters& params,
                             const RenderSettings& settings);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_RENDER_HPP_
