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

#include "chronolapse/aesthetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chronolapse/color.hpp"

namespace chronolapse {

namespace ac = aesthetic_constants;

std::vector<SalientPoint> ProjectLandmarks(const SceneDescription& scene,
                                           const CameraPose& pose, double aspect) {
  std::vector<SalientPoint> out;
  for (const Solid& s : scene.solids) {
    if (!s.landmark) continue;
    auto xy = ProjectPoint(pose, s.center, aspect);
    if (!xy) continue;
    if (xy->x < 0.0 || xy->x > 1.0 || xy->y < 0.0 || xy->y > 1.0) continue;
    out.push_back({*xy, *s.landmark});
  }
  return out;
}

ImageScore ScoreImageNormalized(std::span<const double> rgb, int width, int height,
                                std::span<const SalientPoint> salient) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  double sum_y = 0, sum_yy = 0, sum_rg = 0, sum_rgrg = 0, sum_yb = 0, sum_ybyb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
    const double y = kLumaR * r + kLumaG * g + kLumaB * b;
    const double rg = r - g;
    const double yb = 0.5 * (r + g) - b;
    sum_y += y;
    sum_yy += y * y;
    sum_rg += rg;
    sum_rgrg += rg * rg;
    sum_yb += yb;
    sum_ybyb += yb * yb;
  }
  const double inv = 1.0 / static_cast<double>(n);
  auto stddev = [&](double s, double ss) {
    double m = s * inv;
    return std::sqrt(std::max(0.0, ss * inv - m * m));
  };
  const double mu_y = sum_y * inv;
  const double sigma_y = stddev(sum_y, sum_yy);
  const double mu_rg = sum_rg * inv, mu_yb = sum_yb * inv;
  const double sigma_rg = stddev(sum_rg, sum_rgrg);
  const double sigma_yb = stddev(sum_yb, sum_ybyb);

  ImageScore s;
  const double dy = mu_y - ac::kExposureCenter;
  s.exposure = std::exp(-dy * dy / (2.0 * ac::kExposureSigma * ac::kExposureSigma));
  s.contrast = Clamp01(sigma_y / ac::kContrastNorm);
  const double m = std::hypot(sigma_rg, sigma_yb) +
                   ac::kColorfulnessMeanWeight * std::hypot(mu_rg, mu_yb);
  s.colorfulness = Clamp01(m / ac::kColorfulnessNorm);

  double weight = 0.0;
  Vec2 centroid;
  for (const SalientPoint& p : salient) {
    centroid.x += p.weight * p.xy.x;
    centroid.y += p.weight * p.xy.y;
    weight += p.weight;
  }
  if (weight > 0.0) {
    centroid.x /= weight;
    centroid.y /= weight;
    double best = std::numeric_limits<double>::infinity();
    for (double tx : {1.0 / 3.0, 2.0 / 3.0}) {
      for (double ty : {1.0 / 3.0, 2.0 / 3.0}) {
        best = std::min(best, std::hypot(centroid.x - tx, centroid.y - ty));
      }
    }
    s.thirds = std::exp(-best * best / (2.0 * ac::kThirdsSigma * ac::kThirdsSigma));
  } else {
    s.thirds = ac::kThirdsWithoutSubject;
  }
  s.q_i = 0.25 * (s.exposure + s.contrast + s.colorfulness + s.thirds);
  return s;
}

ImageScore ScoreImage(const Frame& frame, std::span<const SalientPoint> salient) {
  std::vector<double> rgb(frame.pixels.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = frame.pixels[i] / 255.0;
  return ScoreImageNormalized(rgb, frame.width, frame.height, salient);
}

VideoScore ScoreVideo(std::span<const CameraPose> poses,
                      const SceneDescription& scene, double aspect) {
  if (poses.size() < 3) {
    throw ValidationError("poses", "video scoring needs at least 3 poses");
  }
  const double diag = scene.Diagonal();
  double accel_sum = 0.0;
  double angular_sum = 0.0;
  const std::size_t interior = poses.size() - 2;
  for (std::size_t k = 1; k + 1 < poses.size(); ++k) {
    const Vec3 a = poses[k + 1].position - poses[k].position * 2.0 + poses[k - 1].position;
    accel_sum += a.Norm();
    const double dyaw = Wrap180(poses[k + 1].yaw_deg - poses[k].yaw_deg) -
                        Wrap180(poses[k].yaw_deg - poses[k - 1].yaw_deg);
    const double dpitch =
        poses[k + 1].pitch_deg - 2.0 * poses[k].pitch_deg + poses[k - 1].pitch_deg;
    angular_sum += std::hypot(dyaw, dpitch);
  }
  VideoScore v;
  v.translational_smoothness =
      std::exp(-(accel_sum / interior) / (ac::kTranslationScale * diag));
  v.rotational_smoothness = std::exp(-(angular_sum / interior) / ac::kRotationScaleDeg);

  auto primary = scene.PrimaryLandmark();
  if (!primary) {
    v.framing_persistence = 1.0;
  } else {
    const Vec3& target = scene.solids[*primary].center;
    int inside = 0;
    const double lo = ac::kFramingMargin, hi = 1.0 - ac::kFramingMargin;
    for (const CameraPose& pose : poses) {
      auto xy = ProjectPoint(pose, target, aspect);
      if (xy && xy->x >= lo && xy->x <= hi && xy->y >= lo && xy->y <= hi) ++inside;
    }
    v.framing_persistence = static_cast<double>(inside) / poses.size();
  }
  v.q_v = (v.translational_smoothness + v.rotational_smoothness + v.framing_persistence) / 3.0;
  return v;
}

std::vector<double> LuminanceSeries(const FrameSequence& seq) {
  std::vector<double> mu;
  mu.reserve(seq.frames.size());
  for (const Frame& f : seq.frames) mu.push_back(f.MeanLuminance());
  return mu;
}

std::vector<double> SmoothSeries(std::span<const double> series, int window) {
  if (window < 1 || window % 2 == 0) {
    throw ValidationError("window", "smoothing window must be odd and positive");
  }
  const int n = static_cast<int>(series.size());
  if (n < window) {
    throw ValidationError("frames", "series shorter than the smoothing window");
  }
  const int half = window / 2;
  std::vector<double> out(n);
  for (int k = half; k < n - half; ++k) {
    double sum = 0.0;
    for (int j = k - half; j <= k + half; ++j) sum += series[j];
    out[k] = sum / window;
  }
  for (int k = 0; k < half; ++k) out[k] = out[half];
  for (int k = n - half; k < n; ++k) out[k] = out[n - half - 1];
  return out;
}

double FlickerOfSeries(std::span<const double> series, int window) {
  const std::vector<double> smooth = SmoothSeries(series, window);
  const int n = static_cast<int>(series.size());
  const int half = window / 2;
  double sum = 0.0;
  for (int k = half; k < n - half; ++k) sum += std::abs(series[k] - smooth[k]);
  return sum / (n - 2 * half);
}

namespace {

// Box-averaged luminance plane no larger than the dynamism grid.
std::vector<double> DownsampledLuminance(const Frame& f, int dw, int dh) {
  std::vector<double> out(static_cast<std::size_t>(dw) * dh, 0.0);
  for (int oy = 0; oy < dh; ++oy) {
    const int y0 = oy * f.height / dh, y1 = (oy + 1) * f.height / dh;
    for (int ox = 0; ox < dw; ++ox) {
      const int x0 = ox * f.width / dw, x1 = (ox + 1) * f.width / dw;
      double sum = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::size_t i = (static_cast<std::size_t>(y) * f.width + x) * 3;
          sum += PixelLuminance(f.pixels[i], f.pixels[i + 1], f.pixels[i + 2]);
        }
      }
      out[static_cast<std::size_t>(oy) * dw + ox] = sum / ((y1 - y0) * (x1 - x0));
    }
  }
  return out;
}

}  // namespace

TimeLapseScore ScoreTimeLapse(const FrameSequence& seq) {
  if (seq.frames.size() < 5) {
    throw ValidationError("frames", "time-lapse scoring needs at least 5 frames");
  }
  const std::vector<double> mu = LuminanceSeries(seq);
  const std::vector<double> smooth = SmoothSeries(mu, ac::kTemporalWindow);
  const auto [lo, hi] = std::minmax_element(smooth.begin(), smooth.end());

  TimeLapseScore s;
  s.light_dynamism = Clamp01((*hi - *lo) / ac::kLightRangeNorm);

  const int dw = std::min(seq.frames[0].width, ac::kDynamismMaxWidth);
  const int dh = std::min(seq.frames[0].height, ac::kDynamismMaxHeight);
  const std::size_t cells = static_cast<std::size_t>(dw) * dh;
  std::vector<double> sum(cells, 0.0), sum_sq(cells, 0.0);
  for (const Frame& f : seq.frames) {
    const std::vector<double> plane = DownsampledLuminance(f, dw, dh);
    for (std::size_t i = 0; i < cells; ++i) {
      sum[i] += plane[i];
      sum_sq[i] += plane[i] * plane[i];
    }
  }
  const double n = static_cast<double>(seq.frames.size());
  double std_sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double m = sum[i] / n;
    std_sum += std::sqrt(std::max(0.0, sum_sq[i] / n - m * m));
  }
  s.pixel_dynamism = Clamp01((std_sum / cells) / ac::kPixelStdNorm);
  s.flicker_penalty = Clamp01(FlickerOfSeries(mu, ac::kTemporalWindow) / ac::kFlickerNorm);
  s.q_t = ac::kLightWeight * s.light_dynamism + ac::kPixelWeight * s.pixel_dynamism +
          ac::kSteadinessWeight * (1.0 - s.flicker_penalty);
  return s;
}

namespace {

class HeuristicScorer final : public AestheticScorer {
 public:
  ImageScore Image(const Frame& frame,
                   std::span<const SalientPoint> salient) const override {
    return ScoreImage(frame, salient);
  }
  VideoScore Video(std::span<const CameraPose> poses, const SceneDescription& scene,
                   double aspect) const override {
    return ScoreVideo(poses, scene, aspect);
  }
  TimeLapseScore TimeLapse(const FrameSequence& seq) const override {
    return ScoreTimeLapse(seq);
  }
};

}  // namespace

const AestheticScorer& DefaultScorer() {
  static const HeuristicScorer scorer;
  return scorer;
}

ScoreReport Assess(const FrameSequence& seq, const SceneDescription& scene,
                   const AestheticScorer& scorer) {
  ValidateSequence(seq);
  if (seq.frames.empty()) throw ValidationError("frames", "empty sequence");
  const int n = static_cast<int>(seq.frames.size());
  const double aspect = static_cast<double>(seq.frames[0].width) / seq.frames[0].height;

  std::vector<int> picks;
  if (n <= ac::kMaxImageSamples) {
    for (int k = 0; k < n; ++k) picks.push_back(k);
  } else {
    for (int k = 0; k < ac::kMaxImageSamples; ++k) {
      picks.push_back(static_cast<int>(
          std::lround(static_cast<double>(k) * (n - 1) / (ac::kMaxImageSamples - 1))));
    }
  }
  std::vector<ImageScore> images(picks.size());
  ParallelFor(picks.size(), [&](std::size_t i) {
    const Frame& f = seq.frames[picks[i]];
    images[i] = scorer.Image(f, ProjectLandmarks(scene, f.pose, aspect));
  });

  ScoreReport report;
  report.image_samples = static_cast<int>(picks.size());
  for (const ImageScore& s : images) {
    report.image.exposure += s.exposure;
    report.image.contrast += s.contrast;
    report.image.colorfulness += s.colorfulness;
    report.image.thirds += s.thirds;
    report.image.q_i += s.q_i;
  }
  const double inv = 1.0 / static_cast<double>(images.size());
  report.image.exposure *= inv;
  report.image.contrast *= inv;
  report.image.colorfulness *= inv;
  report.image.thirds *= inv;
  report.image.q_i *= inv;

  const std::vector<CameraPose> poses = seq.Poses();
  report.video = scorer.Video(poses, scene, aspect);
  report.timelapse = scorer.TimeLapse(seq);
  report.quality =
      QualityScore::FromTerms(report.image.q_i, report.video.q_v, report.timelapse.q_t);
  return report;
}

}  // namespace chronolapse
