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

#include "formats.hpp"

namespace chronolapse::formats {

Json ScoreToJson(const QualityScore& s) {
  return Json{{"q_i", s.q_i}, {"q_v", s.q_v}, {"q_t", s.q_t}, {"total", s.total}};
}

QualityScore ScoreFromJson(const Json& j, const std::string& path) {
  jsonutil::RejectUnknownKeys(j, path, {"q_i", "q_v", "q_t", "total"});
  QualityScore s;
  s.q_i = jsonutil::NumberField(j, "q_i", path);
  s.q_v = jsonutil::NumberField(j, "q_v", path);
  s.q_t = jsonutil::NumberField(j, "q_t", path);
  s.total = jsonutil::NumberField(j, "total", path);
  return s;
}

Json ScoreReportToJson(const ScoreReport& r) {
  return Json{
      {"quality", ScoreToJson(r.quality)},
      {"image",
       {{"exposure", r.image.exposure},
        {"contrast", r.image.contrast},
        {"colorfulness", r.image.colorfulness},
        {"thirds", r.image.thirds},
        {"q_i", r.image.q_i},
        {"samples", r.image_samples}}},
      {"video",
       {{"translational_smoothness", r.video.translational_smoothness},
        {"rotational_smoothness", r.video.rotational_smoothness},
        {"framing_persistence", r.video.framing_persistence},
        {"q_v", r.video.q_v}}},
      {"timelapse",
       {{"light_dynamism", r.timelapse.light_dynamism},
        {"pixel_dynamism", r.timelapse.pixel_dynamism},
        {"flicker_penalty", r.timelapse.flicker_penalty},
        {"q_t", r.timelapse.q_t}}},
  };
}

ScoreReport ScoreReportFromJson(const Json& j, const std::string& path) {
  jsonutil::RejectUnknownKeys(j, path, {"quality", "image", "video", "timelapse"});
  ScoreReport r;
  r.quality = ScoreFromJson(jsonutil::Field(j, "quality", path),
                            jsonutil::Join(path, "quality"));
  const std::string ip = jsonutil::Join(path, "image");
  const Json& im = jsonutil::Field(j, "image", path);
  jsonutil::RejectUnknownKeys(
      im, ip, {"exposure", "contrast", "colorfulness", "thirds", "q_i", "samples"});
  r.image.exposure = jsonutil::NumberField(im, "exposure", ip);
  r.image.contrast = jsonutil::NumberField(im, "contrast", ip);
  r.image.colorfulness = jsonutil::NumberField(im, "colorfulness", ip);
  r.image.thirds = jsonutil::NumberField(im, "thirds", ip);
  r.image.q_i = jsonutil::NumberField(im, "q_i", ip);
  r.image_samples = static_cast<int>(jsonutil::IntegerField(im, "samples", ip));
  const std::string vp = jsonutil::Join(path, "video");
  const Json& v = jsonutil::Field(j, "video", path);
  jsonutil::RejectUnknownKeys(v, vp, {"translational_smoothness", "rotational_smoothness",
                                      "framing_persistence", "q_v"});
  r.video.translational_smoothness = jsonutil::NumberField(v, "translational_smoothness", vp);
  r.video.rotational_smoothness = jsonutil::NumberField(v, "rotational_smoothness", vp);
  r.video.framing_persistence = jsonutil::NumberField(v, "framing_persistence", vp);
  r.video.q_v = jsonutil::NumberField(v, "q_v", vp);
  const std::string tp = jsonutil::Join(path, "timelapse");
  const Json& t = jsonutil::Field(j, "timelapse", path);
  jsonutil::RejectUnknownKeys(t, tp,
                              {"light_dynamism", "pixel_dynamism", "flicker_penalty", "q_t"});
  r.timelapse.light_dynamism = jsonutil::NumberField(t, "light_dynamism", tp);
  r.timelapse.pixel_dynamism = jsonutil::NumberField(t, "pixel_dynamism", tp);
  r.timelapse.flicker_penalty = jsonutil::NumberField(t, "flicker_penalty", tp);
  r.timelapse.q_t = jsonutil::NumberField(t, "q_t", tp);
  return r;
}

}  // namespace chronolapse::formats
