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

// Deterministic aesthetic scorers for the three quality terms of a
// time-lapse: single-image composition (q_i), camera motion (q_v) and
// temporal behaviour (q_t). The overall quality is their mean so that it
// stays in [0, 1].
//
// Every scorer is a closed-form heuristic; all tuning constants live in
// `aesthetic_constants` below. Callers that want different models implement
// `AestheticScorer` and pass it to Assess() or the optimizer.

#ifndef CHRONOLAPSE_AESTHETICS_HPP_
#define CHRONOLAPSE_AESTHETICS_HPP_

#include <span>
#include <vector>

#include "chronolapse/camera.hpp"
#include "chronolapse/render.hpp"
#include "chronolapse/scene.hpp"

namespace chronolapse {

namespace aesthetic_constants {
// Image term.
inline constexpr double kExposureCenter = 0.5;
inline constexpr double kExposureSigma = 0.18;
inline constexpr double kContrastNorm = 0.25;
inline constexpr double kColorfulnessNorm = 0.3;
inline constexpr double kColorfulnessMeanWeight = 0.3;
inline constexpr double kThirdsSigma = 0.1;
inline constexpr double kThirdsWithoutSubject = 0.5;
// Video term.
inline constexpr double kTranslationScale = 0.001;  // fraction of scene diagonal
inline constexpr double kRotationScaleDeg = 0.5;
inline constexpr double kFramingMargin = 0.1;  // central 80% of the image
// Time-lapse term.
inline constexpr int kTemporalWindow = 5;
inline constexpr double kLightRangeNorm = 0.3;
inline constexpr double kPixelStdNorm = 0.08;
inline constexpr double kFlickerNorm = 0.05;
inline constexpr double kLightWeight = 0.25;
inline constexpr double kPixelWeight = 0.25;
inline constexpr double kSteadinessWeight = 0.5;
inline constexpr int kDynamismMaxWidth = 64;
inline constexpr int kDynamismMaxHeight = 36;
// Assessment.
inline constexpr int kMaxImageSamples = 9;
}  // namespace aesthetic_constants

struct SalientPoint {
  Vec2 xy;  // normalized image coordinates
  double weight = 1.0;
};

struct ImageScore {
  double exposure = 0.0;
  double contrast = 0.0;
  double colorfulness = 0.0;
  double thirds = 0.0;
  double q_i = 0.0;
};

struct VideoScore {
  double translational_smoothness = 0.0;
  double rotational_smoothness = 0.0;
  double framing_persistence = 0.0;
  double q_v = 0.0;
};

struct TimeLapseScore {
  double light_dynamism = 0.0;
  double pixel_dynamism = 0.0;
  double flicker_penalty = 0.0;
  double q_t = 0.0;
};

struct QualityScore {
  double q_i = 0.0;
  double q_v = 0.0;
  double q_t = 0.0;
  double total = 0.0;

  static QualityScore FromTerms(double q_i, double q_v, double q_t) {
    return {q_i, q_v, q_t, (q_i + q_v + q_t) / 3.0};
  }
};

// Full breakdown produced by Assess(); `image` holds the component means
// over the sampled frames.
struct ScoreReport {
  ImageScore image;
  VideoScore video;
  TimeLapseScore timelapse;
  QualityScore quality;
  int image_samples = 0;
};

// Landmark centers visible in front of the camera and inside [0, 1]^2.
std::vector<SalientPoint> ProjectLandmarks(const SceneDescription& scene,
                                           const CameraPose& pose,
                                           double aspect = 16.0 / 9.0);

ImageScore ScoreImage(const Frame& frame, std::span<const SalientPoint> salient);

// Same score on normalized RGB values in [0, 1] (interleaved, row-major).
// Frames route through this after dividing by 255.
ImageScore ScoreImageNormalized(std::span<const double> rgb, int width, int height,
                                std::span<const SalientPoint> salient);

// Requires at least 3 poses sampled at uniform path progress.
VideoScore ScoreVideo(std::span<const CameraPose> poses,
                      const SceneDescription& scene, double aspect = 16.0 / 9.0);

// Requires at least 5 frames.
TimeLapseScore ScoreTimeLapse(const FrameSequence& seq);

class AestheticScorer {
 public:
  virtual ~AestheticScorer() = default;
  virtual ImageScore Image(const Frame& frame,
                           std::span<const SalientPoint> salient) const = 0;
  virtual VideoScore Video(std::span<const CameraPose> poses,
                           const SceneDescription& scene, double aspect) const = 0;
  virtual TimeLapseScore TimeLapse(const FrameSequence& seq) const = 0;
};

// The closed-form heuristics above.
const AestheticScorer& DefaultScorer();

ScoreReport Assess(const FrameSequence& seq, const SceneDescription& scene,
                   const AestheticScorer& scorer = DefaultScorer());

// Mean encoded luminance of every frame, in order.
std::vector<double> LuminanceSeries(const FrameSequence& seq);

// Centered moving average over odd `window`. Interior points average their
// full window; the first/last half-window copy the nearest interior value.
std::vector<double> SmoothSeries(std::span<const double> series, int window);

// Mean |x_k - smoothed_k| over interior points. Requires size >= window.
double FlickerOfSeries(std::span<const double> series, int window);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_AESTHETICS_HPP_
