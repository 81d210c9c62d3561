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

#include "chronolapse/chronolapse.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "chronolapse/ablation.hpp"
#include "chronolapse/aesthetics.hpp"
#include "chronolapse/optimize.hpp"
#include "chronolapse/postproc.hpp"
#include "chronolapse/render.hpp"
#include "chronolapse/robotplan.hpp"
#include "chronolapse/scene.hpp"
#include "chronolapse/service.hpp"
#include "formats.hpp"

namespace cl = chronolapse;

struct clp_scene {
  cl::SceneDescription scene;
};

struct clp_space {
  cl::SearchSpace space;
};

struct clp_params {
  cl::ShootingParameters params;
};

struct clp_sequence {
  cl::FrameSequence seq;
  std::optional<cl::SceneDescription> scene;
};

struct clp_service {
  std::unique_ptr<cl::Service> service;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

clp_status Fail(clp_status status, const std::string& message, const std::string& field = "") {
  g_error = message;
  g_field = field;
  return status;
}

template <typename Fn>
clp_status Guard(Fn&& fn) {
  g_error.clear();
  g_field.clear();
  try {
    fn();
    return CLP_OK;
  } catch (const cl::ValidationError& e) {
    return Fail(CLP_ERR_VALIDATION, e.what(), e.field());
  } catch (const cl::ParseError& e) {
    return Fail(CLP_ERR_PARSE, e.what());
  } catch (const cl::IoError& e) {
    return Fail(CLP_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(CLP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(CLP_ERR_INTERNAL, e.what());
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define CLP_REQUIRE(ptr)                                                  \
  do {                                                                    \
    if (!(ptr)) return Fail(CLP_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

}  // namespace

extern "C" {

const char* clp_version(void) { return "1.0.0"; }

const char* clp_status_string(clp_status status) {
  switch (status) {
    case CLP_OK: return "ok";
    case CLP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CLP_ERR_PARSE: return "parse error";
    case CLP_ERR_VALIDATION: return "validation error";
    case CLP_ERR_IO: return "i/o error";
    case CLP_ERR_NOT_FOUND: return "not found";
    case CLP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* clp_last_error(void) { return g_error.c_str(); }
const char* clp_last_error_field(void) { return g_field.c_str(); }
void clp_string_free(char* s) { std::free(s); }

clp_status clp_scene_load_file(const char* path, clp_scene** out) {
  CLP_REQUIRE(path);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_scene{cl::LoadSceneFile(path)}; });
}

clp_status clp_scene_load_text(const char* text, clp_scene** out) {
  CLP_REQUIRE(text);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_scene{cl::LoadScene(text)}; });
}

clp_status clp_scene_to_json(const clp_scene* scene, char** out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(out);
  return Guard([&] { *out = CopyString(cl::SerializeScene(scene->scene)); });
}

clp_status clp_scene_georef(const clp_scene* scene, clp_georef* out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(out);
  const cl::GeoReference& g = scene->scene.georef;
  *out = {g.lat0, g.lon0, g.alt0, g.heading_deg};
  return CLP_OK;
}

void clp_scene_free(clp_scene* scene) { delete scene; }

clp_status clp_space_load_file(const char* path, clp_space** out) {
  CLP_REQUIRE(path);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_space{cl::LoadSpaceFile(path)}; });
}

clp_status clp_space_load_text(const char* text, clp_space** out) {
  CLP_REQUIRE(text);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_space{cl::ParseSpace(text)}; });
}

void clp_space_free(clp_space* space) { delete space; }

clp_status clp_params_load_file(const char* path, clp_params** out) {
  CLP_REQUIRE(path);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_params{cl::LoadParamsFile(path)}; });
}

clp_status clp_params_from_json(const char* text, clp_params** out) {
  CLP_REQUIRE(text);
  CLP_REQUIRE(out);
  return Guard([&] { *out = new clp_params{cl::ParseParams(text)}; });
}

clp_status clp_params_to_json(const clp_params* params, char** out) {
  CLP_REQUIRE(params);
  CLP_REQUIRE(out);
  return Guard([&] { *out = CopyString(cl::SerializeParams(params->params)); });
}

clp_status clp_params_validate(const clp_scene* scene, const clp_params* params) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(params);
  return Guard([&] { cl::ValidateParams(params->params, scene->scene); });
}

void clp_params_free(clp_params* params) { delete params; }

clp_status clp_plan(const clp_scene* scene, const clp_space* space, uint64_t seed,
                    const char* stages, clp_params** params_out, char** report_out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(space);
  CLP_REQUIRE(params_out);
  return Guard([&] {
    cl::OptimizeOptions options;
    options.seed = seed;
    options.stages = cl::StageSelection::Parse(stages ? stages : "ivt");
    const cl::OptimizationReport report = cl::OptimizeAll(scene->scene, space->space, options);
    char* report_text = report_out ? CopyString(cl::SerializeReport(report)) : nullptr;
    *params_out = new clp_params{report.params};
    if (report_out) *report_out = report_text;
  });
}

clp_status clp_ablate(const char* const* scene_paths, size_t scene_count, const clp_space* space,
                      int seeds, uint64_t base_seed, char** report_out) {
  CLP_REQUIRE(scene_paths);
  CLP_REQUIRE(space);
  CLP_REQUIRE(report_out);
  return Guard([&] {
    std::vector<cl::SceneDescription> scenes;
    for (size_t i = 0; i < scene_count; ++i) {
      if (!scene_paths[i]) throw cl::ValidationError("scenes", "null scene path");
      scenes.push_back(cl::LoadSceneFile(scene_paths[i]));
    }
    const cl::AblationResult result = cl::RunAblation(scenes, space->space, seeds, base_seed);
    *report_out = CopyString(cl::SerializeAblation(result));
  });
}

void clp_render_settings_default(clp_render_settings* settings) {
  if (!settings) return;
  const cl::RenderSettings d;
  settings->width = d.width;
  settings->height = d.height;
  settings->auto_exposure = 1;
  settings->jitter_sigma = 0.0;
  settings->gain = 1.0;
  settings->shadows = d.shadows ? 1 : 0;
  settings->seed = d.seed;
  settings->vfov_deg = d.vfov_deg;
  settings->fps = d.fps_playback;
}

clp_status clp_render(const clp_scene* scene, const clp_params* params,
                      const clp_render_settings* settings, clp_sequence** out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(params);
  CLP_REQUIRE(settings);
  CLP_REQUIRE(out);
  return Guard([&] {
    cl::RenderSettings s;
    s.width = settings->width;
    s.height = settings->height;
    s.exposure = settings->auto_exposure ? cl::ExposureMode::Auto(settings->jitter_sigma)
                                         : cl::ExposureMode::Manual(settings->gain);
    s.shadows = settings->shadows != 0;
    s.seed = settings->seed;
    s.vfov_deg = settings->vfov_deg;
    s.fps_playback = settings->fps;
    auto seq = std::make_unique<clp_sequence>();
    seq->seq = cl::RenderSequence(scene->scene, params->params, s);
    seq->scene = scene->scene;
    *out = seq.release();
  });
}

clp_status clp_sequence_write(const clp_sequence* seq, const char* directory,
                              const clp_scene* scene, int with_score) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(directory);
  return Guard([&] {
    const cl::SceneDescription* embedded = scene ? &scene->scene : nullptr;
    std::optional<cl::ScoreReport> score;
    if (with_score) {
      if (!embedded) throw cl::ValidationError("scene", "scoring needs a scene");
      score = cl::Assess(seq->seq, *embedded);
    }
    cl::WriteOutput(seq->seq, directory, score, embedded);
  });
}

clp_status clp_sequence_read(const char* directory, clp_sequence** out) {
  CLP_REQUIRE(directory);
  CLP_REQUIRE(out);
  return Guard([&] {
    cl::StoredSequence stored = cl::ReadOutput(directory);
    *out = new clp_sequence{std::move(stored.sequence), std::move(stored.scene)};
  });
}

clp_status clp_sequence_frame_count(const clp_sequence* seq, size_t* out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(out);
  *out = seq->seq.frames.size();
  return CLP_OK;
}

clp_status clp_sequence_mean_luminance(const clp_sequence* seq, size_t index, double* out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(out);
  if (index >= seq->seq.frames.size()) {
    return Fail(CLP_ERR_INVALID_ARGUMENT, "frame index out of range");
  }
  *out = seq->seq.frames[index].MeanLuminance();
  return CLP_OK;
}

clp_status clp_sequence_scene(const clp_sequence* seq, clp_scene** out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(out);
  if (!seq->scene) return Fail(CLP_ERR_NOT_FOUND, "sequence carries no scene");
  return Guard([&] { *out = new clp_scene{*seq->scene}; });
}

void clp_sequence_free(clp_sequence* seq) { delete seq; }

clp_status clp_deflicker(const clp_sequence* seq, const char* method, int window,
                         clp_sequence** out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(out);
  return Guard([&] {
    cl::DeflickerConfig config;
    if (method) config.method = cl::ParseDeflickerMethod(method);
    config.window = window;
    auto result = std::make_unique<clp_sequence>();
    result->seq = cl::Deflicker(seq->seq, config);
    result->scene = seq->scene;
    *out = result.release();
  });
}

clp_status clp_flicker_index(const clp_sequence* seq, int window, double* out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(out);
  return Guard([&] { *out = cl::FlickerIndex(seq->seq, window); });
}

clp_status clp_assess(const clp_sequence* seq, const clp_scene* scene, char** out) {
  CLP_REQUIRE(seq);
  CLP_REQUIRE(scene);
  CLP_REQUIRE(out);
  return Guard([&] {
    const cl::ScoreReport report = cl::Assess(seq->seq, scene->scene);
    *out = CopyString(cl::formats::ScoreReportToJson(report).dump(2) + "\n");
  });
}

clp_status clp_export_plan(const clp_scene* scene, const clp_params* params,
                           const clp_georef* georef, int waypoints, double playback_fps,
                           char** out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(params);
  CLP_REQUIRE(out);
  return Guard([&] {
    cl::GeoReference g = scene->scene.georef;
    if (georef) g = {georef->lat0, georef->lon0, georef->alt0, georef->heading_deg};
    cl::SceneDescription located = scene->scene;
    located.georef = g;
    cl::ValidateScene(located);
    const cl::RobotPlan plan =
        cl::CompilePlan(scene->scene, params->params, g, waypoints, playback_fps);
    *out = CopyString(cl::SerializePlan(plan));
  });
}

clp_status clp_service_create(const clp_scene* scene, const clp_space* space,
                              const clp_params* params, const clp_service_options* options,
                              clp_service** out) {
  CLP_REQUIRE(scene);
  CLP_REQUIRE(space);
  CLP_REQUIRE(out);
  return Guard([&] {
    cl::ServiceOptions opts;
    if (options) {
      if (options->host) opts.host = options->host;
      opts.port = options->port;
      if (options->static_dir) opts.static_dir = options->static_dir;
      if (options->output_dir) opts.output_dir = options->output_dir;
    }
    std::optional<cl::ShootingParameters> initial;
    if (params) initial = params->params;
    auto svc = std::make_unique<clp_service>();
    svc->service = std::make_unique<cl::Service>(scene->scene, space->space, initial, opts);
    *out = svc.release();
  });
}

clp_status clp_service_bind(clp_service* service, int* port_out) {
  CLP_REQUIRE(service);
  return Guard([&] {
    const int port = service->service->Bind();
    if (port_out) *port_out = port;
  });
}

clp_status clp_service_run(clp_service* service) {
  CLP_REQUIRE(service);
  return Guard([&] { service->service->Run(); });
}

clp_status clp_service_stop(clp_service* service) {
  CLP_REQUIRE(service);
  return Guard([&] { service->service->Stop(); });
}

void clp_service_free(clp_service* service) { delete service; }

}  // extern "C"
