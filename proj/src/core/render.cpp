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

#include "chronolapse/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chronolapse/color.hpp"
#include "rng.hpp"

namespace chronolapse {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEpsilon = 1e-6;

const Rgb kWhite{1.0, 1.0, 1.0};
const Rgb kLowSunTint{1.0, 0.72, 0.45};
const Rgb kHorizonDay{0.78, 0.82, 0.88};
const Rgb kHorizonWarm{1.0, 0.55, 0.3};

const Vec3 kPersonSize{0.6, 0.6, 1.8};
const Vec3 kVehicleSize{4.5, 1.9, 1.5};
const Rgb kPersonColors[] = {{0.65, 0.18, 0.15}, {0.2, 0.35, 0.6}, {0.85, 0.75, 0.3}};
const Rgb kVehicleColors[] = {{0.75, 0.75, 0.78}, {0.1, 0.1, 0.12}, {0.6, 0.08, 0.08},
                              {0.15, 0.25, 0.55}};

// Box rotated about the vertical axis by (cos_h, sin_h).
struct Box {
  Vec3 center;
  Vec3 half;
  double cos_h = 1.0;
  double sin_h = 0.0;
  Rgb albedo;
  double radius_sq = 0.0;  // bounding sphere
};

struct Hit {
  double t = kInf;
  Vec3 normal;
  Rgb albedo;
};

Vec3 ToBox(const Box& b, const Vec3& v) {
  return {v.x * b.cos_h + v.y * b.sin_h, -v.x * b.sin_h + v.y * b.cos_h, v.z};
}

Vec3 FromBox(const Box& b, const Vec3& v) {
  return {v.x * b.cos_h - v.y * b.sin_h, v.x * b.sin_h + v.y * b.cos_h, v.z};
}

// Slab test; returns entry distance (or kInf) and the entry face normal.
double IntersectBox(const Box& box, const Vec3& origin, const Vec3& dir,
                    Vec3* normal) {
  const Vec3 to_center = box.center - origin;
  const double along = to_center.Dot(dir);
  const double dist_sq = to_center.Dot(to_center);
  if (dist_sq - along * along > box.radius_sq) return kInf;
  if (along < 0.0 && dist_sq > box.radius_sq) return kInf;
  const Vec3 o = ToBox(box, origin - box.center);
  const Vec3 d = ToBox(box, dir);
  const double oc[3] = {o.x, o.y, o.z};
  const double dc[3] = {d.x, d.y, d.z};
  const double hc[3] = {box.half.x, box.half.y, box.half.z};
  double t_near = -kInf;
  double t_far = kInf;
  int axis = -1;
  double sign = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dc[a]) < 1e-12) {
      if (oc[a] < -hc[a] || oc[a] > hc[a]) return kInf;
      continue;
    }
    double inv = 1.0 / dc[a];
    double t0 = (-hc[a] - oc[a]) * inv;
    double t1 = (hc[a] - oc[a]) * inv;
    double s = -1.0;
    if (t0 > t1) {
      std::swap(t0, t1);
      s = 1.0;
    }
    if (t0 > t_near) {
      t_near = t0;
      axis = a;
      sign = s;
    }
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return kInf;
  }
  if (t_far < kEpsilon || axis < 0) return kInf;
  if (t_near < kEpsilon) return kInf;  // origin inside the box
  if (normal) {
    Vec3 n{0, 0, 0};
    if (axis == 0) n.x = sign;
    if (axis == 1) n.y = sign;
    if (axis == 2) n.z = sign;
    *normal = FromBox(box, n);
  }
  return t_near;
}

class Tracer {
 public:
  Tracer(const SceneDescription& scene, Timestamp t, std::uint64_t seed)
      : scene_(scene), sun_(ComputeSunState(scene.georef, t)) {
    for (const Solid& s : scene.solids) {
      boxes_.push_back({s.center, s.size * 0.5, 1.0, 0.0, s.albedo});
      boxes_.back().radius_sq = boxes_.back().half.Dot(boxes_.back().half);
    }
    auto agents = AgentPositions(scene, t, seed);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const AgentSample& a = agents[i];
      bool person = a.kind == AgentKind::kPerson;
      Vec3 size = person ? kPersonSize : kVehicleSize;
      double ground = scene.GroundHeight(a.position.x, a.position.y);
      double h = DegToRad(a.heading_deg);
      Rgb color = person ? kPersonColors[i % 3] : kVehicleColors[i % 4];
      boxes_.push_back({{a.position.x, a.position.y, ground + size.z * 0.5},
                        size * 0.5, std::cos(h), std::sin(h), color});
      boxes_.back().radius_sq = boxes_.back().half.Dot(boxes_.back().half);
    }
    if (const auto* hf = std::get_if<Heightfield>(&scene.ground)) {
      heightfield_ = hf;
      hmax_ = *std::max_element(hf->heights.begin(), hf->heights.end());
      double slope = 0.0;
      for (int r = 0; r < hf->rows; ++r) {
        for (int c = 0; c < hf->cols; ++c) {
          double h0 = hf->heights[r * hf->cols + c];
          if (c + 1 < hf->cols) {
            slope = std::max(slope, std::abs(hf->heights[r * hf->cols + c + 1] - h0));
          }
          if (r + 1 < hf->rows) {
            slope = std::max(slope, std::abs(hf->heights[(r + 1) * hf->cols + c] - h0));
          }
        }
      }
      // Bilinear patches can be steeper along the diagonal.
      lipschitz_ = 2.0 * slope / hf->cell_size + 1e-3;
      max_distance_ = 4.0 * scene.Diagonal() + 1000.0;
    }
    const double b = std::sqrt(sun_.irradiance);
    zenith_ = Lerp(scene.sky.night_zenith, scene.sky.day_zenith, b);
    Rgb horizon = Lerp(scene.sky.night_zenith * 1.5, kHorizonDay, b);
    horizon_ = Lerp(horizon, kHorizonWarm * b, 0.6 * sun_.warmth);
    tint_ = Lerp(kWhite, kLowSunTint, sun_.warmth);
  }

  const SunState& sun() const { return sun_; }

  Rgb Shade(const Vec3& origin, const Vec3& dir, bool shadows) const {
    Hit hit = Trace(origin, dir);
    if (hit.t == kInf) return Sky(dir);
    const Vec3 p = origin + dir * hit.t;
    const double ndl = std::max(0.0, hit.normal.Dot(sun_.direction));
    double visible = 1.0;
    if (shadows && ndl > 0.0 && sun_.direction.z > 0.0) {
      if (Occluded(p + hit.normal * 1e-4, sun_.direction)) visible = 0.0;
    }
    const double irr = sun_.irradiance;
    Rgb direct = tint_ * ((1.0 - kAmbientFraction) * ndl * visible);
    Rgb light = kWhite * kAmbientFraction + direct;
    Rgb color = hit.albedo * light * irr;
    if (scene_.sky.haze > 0.0) {
      double fog = 1.0 - std::exp(-scene_.sky.haze * hit.t / 2500.0);
      color = Lerp(color, horizon_, fog);
    }
    return color;
  }

 private:
  Rgb Sky(const Vec3& dir) const {
    double e = std::clamp(dir.z, 0.0, 1.0);
    double grad = std::pow(1.0 - e, 3.0) * (0.4 + 0.6 * scene_.sky.haze);
    Rgb sky = Lerp(zenith_, horizon_, grad);
    double glow = std::max(0.0, dir.Dot(sun_.direction));
    if (sun_.direction.z > -0.1) {
      sky = sky + tint_ * (0.6 * std::pow(glow, 64.0) * std::sqrt(sun_.irradiance));
    }
    return sky;
  }

  Hit Trace(const Vec3& origin, const Vec3& dir) const {
    Hit best;
    TraceGround(origin, dir, &best);
    for (const Box& box : boxes_) {
      Vec3 n;
      double t = IntersectBox(box, origin, dir, &n);
      if (t < best.t) {
        best.t = t;
        best.normal = n;
        best.albedo = box.albedo;
      }
    }
    return best;
  }

  bool Occluded(const Vec3& origin, const Vec3& dir) const {
    for (const Box& box : boxes_) {
      if (IntersectBox(box, origin, dir, nullptr) < kInf) return true;
    }
    return false;
  }

  void TraceGround(const Vec3& origin, const Vec3& dir, Hit* hit) const {
    if (!heightfield_) {
      if (dir.z < -1e-12 && origin.z > 0.0) {
        hit->t = -origin.z / dir.z;
        hit->normal = {0.0, 0.0, 1.0};
        hit->albedo = scene_.GroundAlbedo();
      }
      return;
    }
    const Heightfield& hf = *heightfield_;
    double t = 0.0;
    if (origin.z > hmax_) {
      if (dir.z >= 0.0) return;
      t = (origin.z - hmax_) / -dir.z;
    }
    const double horizontal = std::hypot(dir.x, dir.y);
    const double min_step = hf.cell_size * 0.05;
    double prev_t = t;
    for (int it = 0; it < 512 && t < max_distance_; ++it) {
      Vec3 p = origin + dir * t;
      double above = p.z - hf.HeightAt(p.x, p.y);
      if (above <= 0.0) {
        double lo = prev_t, hi = t;
        for (int k = 0; k < 20; ++k) {
          double mid = 0.5 * (lo + hi);
          Vec3 q = origin + dir * mid;
          if (q.z - hf.HeightAt(q.x, q.y) > 0.0) lo = mid; else hi = mid;
        }
        hit->t = hi;
        Vec3 q = origin + dir * hi;
        double e = hf.cell_size * 0.25;
        double dx = hf.HeightAt(q.x + e, q.y) - hf.HeightAt(q.x - e, q.y);
        double dy = hf.HeightAt(q.x, q.y + e) - hf.HeightAt(q.x, q.y - e);
        hit->normal = Vec3{-dx / (2 * e), -dy / (2 * e), 1.0}.Normalized();
        hit->albedo = hf.albedo;
        return;
      }
      if (dir.z >= 0.0 && p.z > hmax_) return;
      double closing = lipschitz_ * horizontal - dir.z;
      double step = closing > 1e-9 ? above / closing : max_distance_;
      prev_t = t;
      t += std::max(step, min_step);
    }
  }

  const SceneDescription& scene_;
  SunState sun_;
  std::vector<Box> boxes_;
  const Heightfield* heightfield_ = nullptr;
  double hmax_ = 0.0;
  double lipschitz_ = 0.0;
  double max_distance_ = 0.0;
  Rgb zenith_;
  Rgb horizon_;
  Rgb tint_;
};

}  // namespace

RenderSettings ProbeSettings(std::uint64_t seed) {
  RenderSettings s;
  s.width = kProbeWidth;
  s.height = kProbeHeight;
  s.exposure = ExposureMode::Auto(0.0);
  s.seed = seed;
  return s;
}

double Frame::MeanLuminance() const { return chronolapse::MeanLuminance(pixels); }

std::vector<CameraPose> FrameSequence::Poses() const {
  std::vector<CameraPose> poses;
  poses.reserve(frames.size());
  for (const Frame& f : frames) poses.push_back(f.pose);
  return poses;
}

void ValidateSettings(const RenderSettings& s) {
  if (s.width < 16 || s.height < 16) {
    throw ValidationError("width", "resolution must be at least 16x16");
  }
  if (s.exposure.kind == ExposureKind::kAuto) {
    if (!(s.exposure.jitter_sigma >= 0.0 && s.exposure.jitter_sigma <= 0.2)) {
      throw ValidationError("jitter_sigma", "must be in [0, 0.2]");
    }
  } else if (!(s.exposure.gain > 0.0) || !std::isfinite(s.exposure.gain)) {
    throw ValidationError("gain", "manual gain must be positive");
  }
  if (!(s.vfov_deg > 10.0 && s.vfov_deg < 120.0)) {
    throw ValidationError("vfov_deg", "must be in (10, 120)");
  }
  if (!(s.fps_playback > 0.0)) throw ValidationError("fps", "must be positive");
}

void ValidateSequence(const FrameSequence& seq) {
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    if (f.pixels.size() != static_cast<std::size_t>(f.width) * f.height * 3) {
      throw ValidationError("pixels", "pixel buffer does not match dimensions");
    }
    if (i > 0) {
      if (f.width != seq.frames[0].width || f.height != seq.frames[0].height) {
        throw ValidationError("frames", "frames differ in dimensions");
      }
      if (!(f.timestamp > seq.frames[i - 1].timestamp)) {
        throw ValidationError("timestamp", "timestamps must strictly increase");
      }
    }
  }
}

double ExposureJitter(const RenderSettings& settings, Timestamp t) {
  if (settings.exposure.kind != ExposureKind::kAuto ||
      settings.exposure.jitter_sigma == 0.0) {
    return 1.0;
  }
  double z = NormalFromHash(settings.seed, 0x6a69747465725eULL,
                            static_cast<std::uint64_t>(t.ms));
  return std::exp(settings.exposure.jitter_sigma * z);
}

Frame RenderFrame(const SceneDescription& scene, const CameraPose& pose,
                  Timestamp t, const RenderSettings& settings) {
  ValidatePose(pose);
  ValidateSettings(settings);
  const int w = settings.width;
  const int h = settings.height;
  const Tracer tracer(scene, t, settings.seed);
  const CameraBasis basis = BasisOf(pose);
  const double half = std::tan(DegToRad(pose.vfov_deg) / 2.0);
  const double aspect = static_cast<double>(w) / h;

  std::vector<float> linear(static_cast<std::size_t>(w) * h * 3);
  double lum_sum = 0.0;
  for (int j = 0; j < h; ++j) {
    const double ny = (1.0 - 2.0 * (j + 0.5) / h) * half;
    for (int i = 0; i < w; ++i) {
      const double nx = (2.0 * (i + 0.5) / w - 1.0) * half * aspect;
      const Vec3 dir = (basis.forward + basis.right * nx + basis.up * ny).Normalized();
      Rgb c = tracer.Shade(pose.position, dir, settings.shadows);
      c = {std::clamp(c.r, 0.0, 1.0), std::clamp(c.g, 0.0, 1.0), std::clamp(c.b, 0.0, 1.0)};
      const std::size_t idx = (static_cast<std::size_t>(j) * w + i) * 3;
      linear[idx] = static_cast<float>(c.r);
      linear[idx + 1] = static_cast<float>(c.g);
      linear[idx + 2] = static_cast<float>(c.b);
      lum_sum += kLumaR * c.r + kLumaG * c.g + kLumaB * c.b;
    }
  }

  Frame frame;
  frame.width = w;
  frame.height = h;
  frame.timestamp = t;
  frame.pose = pose;
  frame.pre_gain_mean_luminance = lum_sum / (static_cast<double>(w) * h);

  double gain = settings.exposure.gain;
  if (settings.exposure.kind == ExposureKind::kAuto) {
    const double target = kAutoExposureTarget * ExposureJitter(settings, t);
    gain = SolveGainForMean(linear, target, kMinAutoGain, kMaxAutoGain);
  }
  frame.pixels.resize(linear.size());
  EncodeWithGain(linear, gain, frame.pixels);
  return frame;
}

FrameSequence RenderSequence(const SceneDescription& scene,
                             const ShootingParameters& params,
                             const RenderSettings& settings) {
  ValidateParams(params, scene);
  ValidateSettings(settings);
  const int count = FrameCount(params.timewarp);
  FrameSequence seq;
  seq.params = params;
  seq.fps_playback = settings.fps_playback;
  seq.frames.resize(count);
  ParallelFor(static_cast<std::size_t>(count), [&](std::size_t k) {
    const double progress = static_cast<double>(k) / std::max(1, count - 1);
    const CameraPose pose = EvaluatePath(params.path, scene, progress, settings.vfov_deg);
    seq.frames[k] = RenderFrame(scene, pose, FrameTime(params.timewarp, static_cast<int>(k)),
                                settings);
  });
  return seq;
}

}  // namespace chronolapse
