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

// Flicker removal for auto-exposed sequences and the on-disk output format
// (PNG frames plus manifest.json).

#ifndef CHRONOLAPSE_POSTPROC_HPP_
#define CHRONOLAPSE_POSTPROC_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "chronolapse/aesthetics.hpp"
#include "chronolapse/render.hpp"
#include "chronolapse/scene.hpp"

namespace chronolapse {

enum class DeflickerMethod { kGainMatch, kHistEq, kBoth };

const char* DeflickerMethodName(DeflickerMethod method);
DeflickerMethod ParseDeflickerMethod(std::string_view name);

struct DeflickerConfig {
  int window = 5;  // odd, >= 3
  DeflickerMethod method = DeflickerMethod::kGainMatch;
  double min_gain = 0.25;
  double max_gain = 4.0;
};

void ValidateDeflickerConfig(const DeflickerConfig& config);

// Mean absolute deviation of per-frame mean luminance from its moving
// average (window 5), over interior frames. Same definition the time-lapse
// scorer uses for its flicker penalty.
double FlickerIndex(const FrameSequence& seq, int window = 5);

// Equalizes the brightness channel V = max(R, G, B) with
// h(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255) and rescales each
// pixel's RGB by h(V) / V, so hue and saturation are kept. The map is
// re-applied until the histogram stops changing, which makes the operation
// idempotent. A single-valued histogram returns the frame unchanged.
Frame EqualizeHistogram(const Frame& frame);

// gain_match: each frame is scaled in linear light so its mean luminance
// moves by the ratio smoothed / measured (gain clamped to the config range).
// histeq: EqualizeHistogram per frame. both: gain_match then histeq.
// Timestamps, poses and params are carried through untouched.
FrameSequence Deflicker(const FrameSequence& seq, const DeflickerConfig& config = {});

// A sequence as stored on disk, with the optional extras of its manifest.
struct StoredSequence {
  FrameSequence sequence;
  std::optional<ScoreReport> score;
  std::optional<SceneDescription> scene;
};

// Writes frame_%06d.png files and manifest.json into `directory` (created
// if missing). Returns the manifest text. Throws IoError with the path on
// failure.
std::string WriteOutput(const FrameSequence& seq, const std::string& directory,
                        const std::optional<ScoreReport>& score = std::nullopt,
                        const SceneDescription* scene = nullptr);

StoredSequence ReadOutput(const std::string& directory);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_POSTPROC_HPP_
