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

// Command-line front end. Talks to the library through the C API only.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chronolapse/chronolapse.h"

namespace {

struct Failure {
  std::string message;
};

void Check(clp_status status, const std::string& what) {
  if (status == CLP_OK) return;
  std::string msg = what + ": " + clp_last_error();
  if (msg.back() == ' ') msg.pop_back();
  throw Failure{msg};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Scene = std::unique_ptr<clp_scene, Deleter<clp_scene, clp_scene_free>>;
using Space = std::unique_ptr<clp_space, Deleter<clp_space, clp_space_free>>;
using Params = std::unique_ptr<clp_params, Deleter<clp_params, clp_params_free>>;
using Sequence = std::unique_ptr<clp_sequence, Deleter<clp_sequence, clp_sequence_free>>;
using Service = std::unique_ptr<clp_service, Deleter<clp_service, clp_service_free>>;

// Takes ownership of a library-allocated string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  clp_string_free(s);
  return out;
}

Scene LoadScene(const std::string& path) {
  clp_scene* s = nullptr;
  Check(clp_scene_load_file(path.c_str(), &s), "scene '" + path + "'");
  return Scene(s);
}

Space LoadSpace(const std::string& path) {
  clp_space* s = nullptr;
  Check(clp_space_load_file(path.c_str(), &s), "search space '" + path + "'");
  return Space(s);
}

Params LoadParams(const std::string& path) {
  clp_params* p = nullptr;
  Check(clp_params_load_file(path.c_str(), &p), "params '" + path + "'");
  return Params(p);
}

Sequence ReadFrames(const std::string& dir) {
  clp_sequence* s = nullptr;
  Check(clp_sequence_read(dir.c_str(), &s), "frames '" + dir + "'");
  return Sequence(s);
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) throw Failure{"cannot write '" + path + "'"};
}

struct PlanArgs {
  std::string scene, space, out, report, stages = "ivt";
  std::uint64_t seed = 0;
};

void RunPlan(const PlanArgs& a) {
  Scene scene = LoadScene(a.scene);
  Space space = LoadSpace(a.space);
  clp_params* raw = nullptr;
  char* report = nullptr;
  Check(clp_plan(scene.get(), space.get(), a.seed, a.stages.c_str(), &raw,
                 a.report.empty() ? nullptr : &report),
        "plan");
  Params params(raw);
  const std::string report_text = Take(report);
  char* json = nullptr;
  Check(clp_params_to_json(params.get(), &json), "plan");
  Emit(a.out, Take(json));
  if (!a.report.empty()) Emit(a.report, report_text);
}

struct RenderArgs {
  std::string scene, params, out;
  int width = 0, height = 0;
  double jitter = 0.0;
  std::optional<double> gain;
  std::uint64_t seed = 0;
  bool no_shadows = false, score = false;
};

void RunRender(const RenderArgs& a) {
  Scene scene = LoadScene(a.scene);
  Params params = LoadParams(a.params);
  Check(clp_params_validate(scene.get(), params.get()), "params '" + a.params + "'");
  clp_render_settings settings;
  clp_render_settings_default(&settings);
  if (a.width > 0) settings.width = a.width;
  if (a.height > 0) settings.height = a.height;
  settings.jitter_sigma = a.jitter;
  if (a.gain) {
    settings.auto_exposure = 0;
    settings.gain = *a.gain;
  }
  settings.seed = a.seed;
  settings.shadows = a.no_shadows ? 0 : 1;
  clp_sequence* raw = nullptr;
  Check(clp_render(scene.get(), params.get(), &settings, &raw), "render");
  Sequence seq(raw);
  Check(clp_sequence_write(seq.get(), a.out.c_str(), scene.get(), a.score ? 1 : 0), "render");
  size_t n = 0;
  clp_sequence_frame_count(seq.get(), &n);
  std::cerr << "wrote " << n << " frames to " << a.out << "\n";
}

struct DeflickerArgs {
  std::string frames, out, method = "gain_match";
  int window = 5;
};

void RunDeflicker(const DeflickerArgs& a) {
  Sequence in = ReadFrames(a.frames);
  double before = 0.0, after = 0.0;
  Check(clp_flicker_index(in.get(), a.window, &before), "deflicker");
  clp_sequence* raw = nullptr;
  Check(clp_deflicker(in.get(), a.method.c_str(), a.window, &raw), "deflicker");
  Sequence out(raw);
  Check(clp_flicker_index(out.get(), a.window, &after), "deflicker");
  clp_scene* embedded = nullptr;
  Scene scene;
  if (clp_sequence_scene(in.get(), &embedded) == CLP_OK) scene.reset(embedded);
  Check(clp_sequence_write(out.get(), a.out.c_str(), scene.get(), 0), "deflicker");
  std::fprintf(stderr, "flicker index %.6f -> %.6f\n", before, after);
}

struct AssessArgs {
  std::string frames, scene, out;
};

void RunAssess(const AssessArgs& a) {
  Sequence seq = ReadFrames(a.frames);
  Scene scene;
  if (!a.scene.empty()) {
    scene = LoadScene(a.scene);
  } else {
    clp_scene* embedded = nullptr;
    if (clp_sequence_scene(seq.get(), &embedded) != CLP_OK) {
      throw Failure{"assess: manifest in '" + a.frames + "' has no scene; pass --scene"};
    }
    scene.reset(embedded);
  }
  char* json = nullptr;
  Check(clp_assess(seq.get(), scene.get(), &json), "assess");
  Emit(a.out, Take(json));
}

struct ExportArgs {
  std::string scene, params, out;
  std::optional<double> lat0, lon0, alt0, heading;
  int waypoints = 16;
  double fps = 24.0;
};

void RunExport(const ExportArgs& a) {
  Scene scene = LoadScene(a.scene);
  Params params = LoadParams(a.params);
  clp_georef g;
  Check(clp_scene_georef(scene.get(), &g), "export");
  if (a.lat0) g.lat0 = *a.lat0;
  if (a.lon0) g.lon0 = *a.lon0;
  if (a.alt0) g.alt0 = *a.alt0;
  if (a.heading) g.heading_deg = *a.heading;
  char* json = nullptr;
  Check(clp_export_plan(scene.get(), params.get(), &g, a.waypoints, a.fps, &json), "export");
  Emit(a.out, Take(json));
}

struct ServeArgs {
  std::string scene, space, params, host = "127.0.0.1", static_dir, jobs_dir = "chronolapse_jobs";
  int port = 8080;
};

clp_service* g_service = nullptr;

extern "C" void OnSignal(int) {
  if (g_service) clp_service_stop(g_service);
}

void RunServe(const ServeArgs& a) {
  Scene scene = LoadScene(a.scene);
  Space space = LoadSpace(a.space);
  Params params;
  if (!a.params.empty()) params = LoadParams(a.params);
  clp_service_options options{a.host.c_str(), a.port,
                              a.static_dir.empty() ? nullptr : a.static_dir.c_str(),
                              a.jobs_dir.c_str()};
  clp_service* raw = nullptr;
  Check(clp_service_create(scene.get(), space.get(), params.get(), &options, &raw), "serve");
  Service service(raw);
  int port = 0;
  Check(clp_service_bind(service.get(), &port), "serve");
  std::cout << "listening on http://" << a.host << ":" << port << "\n";
  std::cout.flush();
  g_service = service.get();
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  const clp_status status = clp_service_run(service.get());
  g_service = nullptr;
  Check(status, "serve");
}

struct AblateArgs {
  std::vector<std::string> scenes;
  std::string space, out;
  int seeds = 10;
  std::uint64_t base_seed = 1;
};

void RunAblate(const AblateArgs& a) {
  Space space = LoadSpace(a.space);
  std::vector<const char*> paths;
  for (const std::string& s : a.scenes) paths.push_back(s.c_str());
  char* json = nullptr;
  Check(clp_ablate(paths.data(), paths.size(), space.get(), a.seeds, a.base_seed, &json),
        "ablate");
  Emit(a.out, Take(json));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, render and export virtual time-lapse shots."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(clp_version()));

  PlanArgs plan;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Optimize shooting parameters for a scene");
  plan_cmd->add_option("--scene", plan.scene, "Scene file")->required()->envname("CHRONO_SCENE");
  plan_cmd->add_option("--space", plan.space, "Search space file")->required();
  plan_cmd->add_option("--seed", plan.seed, "Seed for stages drawn at random");
  plan_cmd->add_option("--stages", plan.stages, "Optimized stages, subset of 'ivt'");
  plan_cmd->add_option("--out", plan.out, "Params output (default stdout)");
  plan_cmd->add_option("--report", plan.report, "Optimization report output");

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render a frame sequence");
  render_cmd->add_option("--scene", render.scene, "Scene file")->required()->envname("CHRONO_SCENE");
  render_cmd->add_option("--params", render.params, "Params file")->required();
  render_cmd->add_option("--out", render.out, "Output directory")->required();
  render_cmd->add_option("--width", render.width, "Frame width")->check(CLI::PositiveNumber);
  render_cmd->add_option("--height", render.height, "Frame height")->check(CLI::PositiveNumber);
  render_cmd->add_option("--jitter", render.jitter, "Auto-exposure jitter sigma");
  render_cmd->add_option("--gain", render.gain, "Fixed exposure gain (disables auto exposure)");
  render_cmd->add_option("--seed", render.seed, "Jitter seed");
  render_cmd->add_flag("--no-shadows", render.no_shadows, "Skip shadow rays");
  render_cmd->add_flag("--score", render.score, "Attach a score report to the manifest");

  DeflickerArgs deflicker;
  CLI::App* deflicker_cmd = app.add_subcommand("deflicker", "Smooth exposure flicker");
  deflicker_cmd->add_option("--frames", deflicker.frames, "Input directory")->required();
  deflicker_cmd->add_option("--out", deflicker.out, "Output directory")->required();
  deflicker_cmd->add_option("--method", deflicker.method, "gain_match, histeq or both");
  deflicker_cmd->add_option("--window", deflicker.window, "Odd smoothing window");

  AssessArgs assess;
  CLI::App* assess_cmd = app.add_subcommand("assess", "Score a frame sequence");
  assess_cmd->add_option("--frames", assess.frames, "Input directory")->required();
  assess_cmd->add_option("--scene", assess.scene, "Scene file (default: from manifest)")
      ->envname("CHRONO_SCENE");
  assess_cmd->add_option("--out", assess.out, "Report output (default stdout)");

  ExportArgs exp;
  CLI::App* export_cmd = app.add_subcommand("export", "Compile a robot flight plan");
  export_cmd->add_option("--scene", exp.scene, "Scene file")->required()->envname("CHRONO_SCENE");
  export_cmd->add_option("--params", exp.params, "Params file")->required();
  export_cmd->add_option("--lat0", exp.lat0, "Origin latitude (default: scene)");
  export_cmd->add_option("--lon0", exp.lon0, "Origin longitude (default: scene)");
  export_cmd->add_option("--alt0", exp.alt0, "Origin altitude (default: scene)");
  export_cmd->add_option("--heading", exp.heading, "Heading of +x (default: scene)");
  export_cmd->add_option("--waypoints", exp.waypoints, "Waypoint count");
  export_cmd->add_option("--fps", exp.fps, "Playback frame rate");
  export_cmd->add_option("--out", exp.out, "Plan output (default stdout)");

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--scene", serve.scene, "Scene file")->required()->envname("CHRONO_SCENE");
  serve_cmd->add_option("--space", serve.space, "Search space file")->required();
  serve_cmd->add_option("--params", serve.params, "Initial params file");
  serve_cmd->add_option("--host", serve.host, "Listen address");
  serve_cmd->add_option("--port", serve.port, "Listen port (0 = any)")
      ->envname("CHRONO_PORT")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--static", serve.static_dir, "Directory served at /");
  serve_cmd->add_option("--jobs-dir", serve.jobs_dir, "Time-lapse job output directory");

  AblateArgs ablate;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Run the stage ablation study");
  ablate_cmd->add_option("--scenes", ablate.scenes, "Scene files")->required();
  ablate_cmd->add_option("--space", ablate.space, "Search space file")->required();
  ablate_cmd->add_option("--seeds", ablate.seeds, "Random draws per disabled stage");
  ablate_cmd->add_option("--base-seed", ablate.base_seed, "First seed");
  ablate_cmd->add_option("--out", ablate.out, "Summary output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*plan_cmd) RunPlan(plan);
    if (*render_cmd) RunRender(render);
    if (*deflicker_cmd) RunDeflicker(deflicker);
    if (*assess_cmd) RunAssess(assess);
    if (*export_cmd) RunExport(exp);
    if (*serve_cmd) RunServe(serve);
    if (*ablate_cmd) RunAblate(ablate);
  } catch (const Failure& f) {
    std::cerr << "chronolapse: " << f.message << "\n";
    return 1;
  }
  return 0;
}
