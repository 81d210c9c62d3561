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

#include "chronolapse/postproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronolapse/color.hpp"
#include "formats.hpp"
#include "json_util.hpp"
#include "png_io.hpp"

namespace chronolapse {

namespace fs = std::filesystem;
using jsonutil::Json;

const char* DeflickerMethodName(DeflickerMethod method) {
  switch (method) {
    case DeflickerMethod::kGainMatch: return "gain_match";
    case DeflickerMethod::kHistEq: return "histeq";
    case DeflickerMethod::kBoth: return "both";
  }
  return "?";
}

DeflickerMethod ParseDeflickerMethod(std::string_view name) {
  if (name == "gain_match") return DeflickerMethod::kGainMatch;
  if (name == "histeq") return DeflickerMethod::kHistEq;
  if (name == "both") return DeflickerMethod::kBoth;
  throw ValidationError("method", "unknown deflicker method '" + std::string(name) +
                                      "' (expected gain_match, histeq or both)");
}

void ValidateDeflickerConfig(const DeflickerConfig& config) {
  if (config.window < 3 || config.window % 2 == 0) {
    throw ValidationError("window", "window must be odd and at least 3");
  }
  if (!(config.min_gain > 0.0) || !(config.max_gain >= config.min_gain)) {
    throw ValidationError("gain", "gain clamp must satisfy 0 < min <= max");
  }
}

double FlickerIndex(const FrameSequence& seq, int window) {
  if (static_cast<int>(seq.frames.size()) < window) {
    throw ValidationError("frames", "flicker index needs at least " +
                                        std::to_string(window) + " frames");
  }
  const std::vector<double> mu = LuminanceSeries(seq);
  return FlickerOfSeries(mu, window);
}

namespace {

using Histogram = std::array<std::int64_t, 256>;
using ToneMap = std::array<int, 256>;

// Brightness channel used for equalization.
inline std::uint8_t ValueOf(const std::uint8_t* px) {
  return std::max({px[0], px[1], px[2]});
}

// Equalization map of a histogram, or nullopt when it is single-valued.
std::optional<ToneMap> EqualizationMap(const Histogram& hist, std::int64_t n) {
  std::int64_t cdf_min = 0;
  for (std::int64_t c : hist) {
    if (c > 0) {
      cdf_min = c;
      break;
    }
  }
  if (cdf_min == n) return std::nullopt;
  ToneMap map{};
  std::int64_t cdf = 0;
  const double denom = static_cast<double>(n - cdf_min);
  for (int v = 0; v < 256; ++v) {
    cdf += hist[v];
    const double h = std::floor((cdf - cdf_min) / denom * 255.0 + 0.5);
    map[v] = static_cast<int>(std::clamp(h, 0.0, 255.0));
  }
  return map;
}

bool IsIdentityOnSupport(const ToneMap& map, const Histogram& hist) {
  for (int v = 0; v < 256; ++v) {
    if (hist[v] > 0 && map[v] != v) return false;
  }
  return true;
}

}  // namespace

Frame EqualizeHistogram(const Frame& frame) {
  const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
  Histogram hist{};
  for (std::size_t i = 0; i < n; ++i) ++hist[ValueOf(&frame.pixels[i * 3])];

  // Compose maps on the value histogram until equalization leaves it alone.
  ToneMap total;
  for (int v = 0; v < 256; ++v) total[v] = v;
  bool changed = false;
  for (int iter = 0; iter < 256; ++iter) {
    const std::optional<ToneMap> map = EqualizationMap(hist, static_cast<std::int64_t>(n));
    if (!map || IsIdentityOnSupport(*map, hist)) break;
    Histogram next{};
    for (int v = 0; v < 256; ++v) next[(*map)[v]] += hist[v];
    for (int v = 0; v < 256; ++v) total[v] = (*map)[total[v]];
    hist = next;
    changed = true;
  }
  if (!changed) return frame;

  Frame out = frame;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t* px = &out.pixels[i * 3];
    const int v = ValueOf(px);
    const int h = total[v];
    if (h == v) continue;
    if (v == 0) {
      px[0] = px[1] = px[2] = static_cast<std::uint8_t>(h);
      continue;
    }
    const double scale = static_cast<double>(h) / v;
    for (int c = 0; c < 3; ++c) {
      const double x = std::floor(px[c] * scale + 0.5);
      px[c] = static_cast<std::uint8_t>(std::clamp(x, 0.0, 255.0));
    }
  }
  return out;
}

namespace {

// Rescales one frame so its encoded mean luminance changes by `ratio`.
Frame ApplyLuminanceRatio(const Frame& frame, double ratio) {
  std::vector<float> lin(frame.pixels.size());
  for (std::size_t i = 0; i < lin.size(); ++i) {
    lin[i] = static_cast<float>(DecodeByte(frame.pixels[i]));
  }
  const double current = EncodedMeanAtGain(lin, 1.0);
  const double gain =
      SolveGainForMean(lin, current * ratio, 1.0 / 256.0, 256.0);
  Frame out = frame;
  EncodeWithGain(lin, gain, out.pixels);
  return out;
}

FrameSequence GainMatch(const FrameSequence& seq, const DeflickerConfig& config) {
  const std::vector<double> mu = LuminanceSeries(seq);
  const std::vector<double> smooth = SmoothSeries(mu, config.window);
  FrameSequence out = seq;
  ParallelFor(seq.frames.size(), [&](std::size_t k) {
    if (smooth[k] == mu[k]) return;
    const double ratio =
        std::clamp(smooth[k] / std::max(mu[k], 0.001), config.min_gain, config.max_gain);
    out.frames[k] = ApplyLuminanceRatio(seq.frames[k], ratio);
  });
  return out;
}

FrameSequence HistEq(const FrameSequence& seq) {
  FrameSequence out = seq;
  ParallelFor(seq.frames.size(), [&](std::size_t k) {
    out.frames[k] = EqualizeHistogram(seq.frames[k]);
  });
  return out;
}

}  // namespace

FrameSequence Deflicker(const FrameSequence& seq, const DeflickerConfig& config) {
  ValidateDeflickerConfig(config);
  if (static_cast<int>(seq.frames.size()) < config.window) {
    throw ValidationError("frames", "deflicker needs at least " +
                                        std::to_string(config.window) + " frames");
  }
  switch (config.method) {
    case DeflickerMethod::kGainMatch: return GainMatch(seq, config);
    case DeflickerMethod::kHistEq: return HistEq(seq);
    case DeflickerMethod::kBoth: return HistEq(GainMatch(seq, config));
  }
  return seq;
}

namespace {

std::string FrameFileName(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.png", k);
  return buf;
}

}  // namespace

std::string WriteOutput(const FrameSequence& seq, const std::string& directory,
                        const std::optional<ScoreReport>& score,
                        const SceneDescription* scene) {
  ValidateSequence(seq);
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory + "': " + ec.message());

  Json frames = Json::array();
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const Frame& f = seq.frames[k];
    const std::string name = FrameFileName(k);
    WritePng((fs::path(directory) / name).string(), f.width, f.height, f.pixels);
    frames.push_back({{"file", name},
                      {"timestamp", FormatIso8601(f.timestamp)},
                      {"pose", formats::PoseToJson(f.pose)},
                      {"pre_gain_mean_luminance", f.pre_gain_mean_luminance}});
  }
  Json manifest = {{"fps", seq.fps_playback},
                   {"frames", std::move(frames)},
                   {"params", formats::ParamsToJson(seq.params)}};
  if (score) manifest["score"] = formats::ScoreReportToJson(*score);
  if (scene) manifest["scene"] = Json::parse(SerializeScene(*scene));

  const std::string text = manifest.dump(2) + "\n";
  const std::string path = (fs::path(directory) / "manifest.json").string();
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) throw IoError("cannot write '" + path + "'");
  return text;
}

StoredSequence ReadOutput(const std::string& directory) {
  const std::string path = (fs::path(directory) / "manifest.json").string();
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << file.rdbuf();
  const Json manifest = jsonutil::ParseText(buf.str());
  jsonutil::RejectUnknownKeys(manifest, "", {"fps", "frames", "params", "score", "scene"});

  StoredSequence stored;
  FrameSequence& seq = stored.sequence;
  seq.fps_playback = jsonutil::NumberField(manifest, "fps", "");
  seq.params = formats::ParamsFromJson(jsonutil::Field(manifest, "params", ""), "params");
  const Json& frames = jsonutil::ArrayField(manifest, "frames", "");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const std::string fp = "frames[" + std::to_string(k) + "]";
    const Json& entry = frames[k];
    jsonutil::RejectUnknownKeys(entry, fp,
                                {"file", "timestamp", "pose", "pre_gain_mean_luminance"});
    const std::string name = jsonutil::StringField(entry, "file", fp);
    RgbImage image = ReadPng((fs::path(directory) / name).string());
    Frame f;
    f.width = image.width;
    f.height = image.height;
    f.pixels = std::move(image.pixels);
    f.timestamp = jsonutil::TimestampField(entry, "timestamp", fp);
    f.pose = formats::PoseFromJson(jsonutil::Field(entry, "pose", fp), jsonutil::Join(fp, "pose"));
    f.pre_gain_mean_luminance = jsonutil::NumberField(entry, "pre_gain_mean_luminance", fp);
    seq.frames.push_back(std::move(f));
  }
  ValidateSequence(seq);
  if (manifest.contains("score")) {
    stored.score = formats::ScoreReportFromJson(manifest["score"], "score");
  }
  if (manifest.contains("scene")) stored.scene = LoadScene(manifest["scene"].dump());
  return stored;
}

}  // namespace chronolapse
