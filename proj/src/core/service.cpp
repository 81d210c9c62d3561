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

#include "chronolapse/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include "chronolapse/postproc.hpp"
#include "chronolapse/robotplan.hpp"
#include "formats.hpp"
#include "json_util.hpp"
#include "png_io.hpp"

namespace chronolapse {

using jsonutil::Json;

namespace {

enum class JobState { kQueued, kRunning, kDone, kFailed };

const char* JobStateName(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "?";
}

struct Job {
  std::uint64_t id = 0;
  std::string kind;
  JobState state = JobState::kQueued;
  double progress = 0.0;
  Json result;
  std::string error;
};

Json JobToJson(const Job& job) {
  Json j = {{"id", std::to_string(job.id)},
            {"kind", job.kind},
            {"state", JobStateName(job.state)},
            {"progress", job.progress}};
  if (job.state == JobState::kDone) j["result"] = job.result;
  if (job.state == JobState::kFailed) j["error"] = job.error;
  return j;
}

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& message,
                const std::string& field = "") {
  Json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  Reply(res, status, body);
}

// Runs a handler, mapping library exceptions onto HTTP errors.
void Guarded(httplib::Response& res, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    ReplyError(res, 400, e.what(), e.field());
  } catch (const ParseError& e) {
    ReplyError(res, 400, e.what());
  } catch (const std::exception& e) {
    ReplyError(res, 500, e.what());
  }
}

double QueryNumber(const httplib::Request& req, const char* key, double fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string text = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, std::string("expected a number, got '") + text + "'");
  }
}

long long QueryInteger(const httplib::Request& req, const char* key, long long fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string text = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, std::string("expected an integer, got '") + text + "'");
  }
}

Json SceneSummary(const SceneDescription& scene) {
  const Rect b = scene.HorizontalBounds();
  Json rects = Json::array();
  for (const Rect& r : scene.reachable.rects) rects.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
  Json landmarks = Json::array();
  for (std::size_t i = 0; i < scene.solids.size(); ++i) {
    const Solid& s = scene.solids[i];
    if (!s.landmark) continue;
    landmarks.push_back({{"index", i},
                         {"center", jsonutil::ToJson(s.center)},
                         {"size", jsonutil::ToJson(s.size)},
                         {"weight", *s.landmark}});
  }
  int agents = 0;
  for (const AgentRoute& r : scene.agents) agents += r.count;
  return {{"name", scene.name},
          {"georef", formats::GeoRefToJson(scene.georef)},
          {"ground", std::holds_alternative<FlatGround>(scene.ground) ? "flat" : "heightfield"},
          {"bounds", {b.xmin, b.ymin, b.xmax, b.ymax}},
          {"reachable",
           {{"rects", rects},
            {"height_range", {scene.reachable.min_height, scene.reachable.max_height}}}},
          {"landmarks", landmarks},
          {"solids", scene.solids.size()},
          {"agents", agents}};
}

}  // namespace

class Service::Impl {
 public:
  Impl(SceneDescription scene, SearchSpace space, std::optional<ShootingParameters> params,
       ServiceOptions options)
      : scene_(std::move(scene)), space_(std::move(space)), options_(std::move(options)) {
    ValidateScene(scene_);
    ValidateSpace(space_);
    params_ = params ? *params : RandomParams(scene_, space_, 0);
    ValidateParams(params_, scene_);
    worker_ = std::thread([this] { WorkLoop(); });
    Routes();
  }

  ~Impl() {
    Stop();
    {
      std::lock_guard lock(queue_mu_);
      shutting_down_ = true;
    }
    queue_cv_.notify_all();
    if (worker_.joinable()) worker_.join();
  }

  int Bind() {
    if (bound_port_ > 0) return bound_port_;
    int port = options_.port;
    if (port == 0) {
      port = server_.bind_to_any_port(options_.host);
    } else if (!server_.bind_to_port(options_.host, port)) {
      port = -1;
    }
    if (port <= 0) {
      throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    }
    bound_port_ = port;
    return port;
  }

  void Run() {
    Bind();
    server_.listen_after_bind();
  }

  void Stop() { server_.stop(); }

  void WaitForJobs() {
    std::unique_lock lock(queue_mu_);
    idle_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
  }

 private:
  void Routes() {
    if (!options_.static_dir.empty()) server_.set_mount_point("/", options_.static_dir);

    server_.Get("/api/scene", [this](const httplib::Request&, httplib::Response& res) {
      Reply(res, 200, SceneSummary(scene_));
    });

    server_.Get("/api/params", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock lock(mu_);
      res.set_header("ETag", std::to_string(version_));
      Reply(res, 200, formats::ParamsToJson(params_));
    });

    server_.Put("/api/params", [this](const httplib::Request& req, httplib::Response& res) {
      Guarded(res, [&] { PutParams(req, res); });
    });

    server_.Get("/api/preview", [this](const httplib::Request& req, httplib::Response& res) {
      Guarded(res, [&] { Preview(req, res); });
    });

    server_.Post("/api/optimize", [this](const httplib::Request& req, httplib::Response& res) {
      Guarded(res, [&] { StartOptimize(req, res); });
    });

    server_.Post("/api/timelapse", [this](const httplib::Request& req, httplib::Response& res) {
      Guarded(res, [&] { StartTimelapse(req, res); });
    });

    server_.Get(R"(/api/jobs/([^/]+))", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      std::shared_lock lock(mu_);
      const std::string id = req.matches[1];
      for (const auto& [key, job] : jobs_) {
        if (std::to_string(key) == id) {
          Reply(res, 200, JobToJson(job));
          return;
        }
      }
      ReplyError(res, 404, "unknown job '" + id + "'");
    });

    server_.Get("/api/score", [this](const httplib::Request&, httplib::Response& res) {
      Guarded(res, [&] {
        const ShootingParameters params = Snapshot();
        const ScoreReport report =
            Assess(RenderProbeSequence(scene_, space_, params), scene_);
        Reply(res, 200, formats::ScoreReportToJson(report));
      });
    });

    server_.Get("/api/export/robotplan", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      Guarded(res, [&] {
        GeoReference g = scene_.georef;
        g.lat0 = QueryNumber(req, "lat0", g.lat0);
        g.lon0 = QueryNumber(req, "lon0", g.lon0);
        g.alt0 = QueryNumber(req, "alt0", g.alt0);
        g.heading_deg = QueryNumber(req, "heading", g.heading_deg);
        SceneDescription located = scene_;
        located.georef = g;
        ValidateScene(located);
        const int waypoints = static_cast<int>(QueryInteger(req, "waypoints", 16));
        const RobotPlan plan = CompilePlan(scene_, Snapshot(), g, waypoints);
        res.status = 200;
        res.set_content(SerializePlan(plan), "application/json");
      });
    });
  }

  ShootingParameters Snapshot() const {
    std::shared_lock lock(mu_);
    return params_;
  }

  void PutParams(const httplib::Request& req, httplib::Response& res) {
    const ShootingParameters params = formats::ParamsFromJson(jsonutil::ParseText(req.body));
    ValidateParams(params, scene_);
    std::unique_lock lock(mu_);
    if (pending_optimizations_ > 0) {
      ReplyError(res, 409, "an optimization job is pending; parameters are locked");
      return;
    }
    if (req.has_header("If-Match") && req.get_header_value("If-Match") != std::to_string(version_)) {
      ReplyError(res, 409, "parameters changed since version " + req.get_header_value("If-Match"));
      return;
    }
    params_ = params;
    ++version_;
    res.set_header("ETag", std::to_string(version_));
    Reply(res, 200, formats::ParamsToJson(params_));
  }

  void Preview(const httplib::Request& req, httplib::Response& res) {
    const ShootingParameters params = Snapshot();
    const int w = static_cast<int>(QueryInteger(req, "w", kMaxPreviewWidth));
    const int h = static_cast<int>(QueryInteger(req, "h", kMaxPreviewHeight));
    if (w < 16 || w > kMaxPreviewWidth) throw ValidationError("w", "width must be in [16, 320]");
    if (h < 16 || h > kMaxPreviewHeight) throw ValidationError("h", "height must be in [16, 180]");
    Timestamp t = params.timewarp.start;
    if (req.has_param("time")) {
      try {
        t = ParseIso8601(req.get_param_value("time"));
      } catch (const ParseError& e) {
        throw ValidationError("time", e.what());
      }
    }
    const double span = SecondsBetween(params.timewarp.start, params.timewarp.end);
    const double progress =
        span > 0.0 ? std::clamp(SecondsBetween(params.timewarp.start, t) / span, 0.0, 1.0) : 0.0;
    RenderSettings settings;
    settings.width = w;
    settings.height = h;
    settings.exposure = ExposureMode::Auto(0.0);
    const CameraPose pose = EvaluatePath(params.path, scene_, progress, settings.vfov_deg);
    const Frame frame = RenderFrame(scene_, pose, t, settings);
    const std::vector<std::uint8_t> png = EncodePng(frame.width, frame.height, frame.pixels);
    res.status = 200;
    res.set_header("X-Mean-Luminance", std::to_string(frame.MeanLuminance()));
    res.set_header("X-Timestamp", FormatIso8601(t));
    res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
  }

  void StartOptimize(const httplib::Request& req, httplib::Response& res) {
    const StageSelection stages =
        StageSelection::Parse(req.has_param("stages") ? req.get_param_value("stages") : "ivt");
    const long long seed = QueryInteger(req, "seed", 0);
    if (seed < 0) throw ValidationError("seed", "seed must be non-negative");
    std::uint64_t id;
    {
      std::unique_lock lock(mu_);
      id = NewJob("optimize");
      ++pending_optimizations_;
    }
    Enqueue([this, id, stages, seed] {
      RunJob(id, [&]() -> Json {
        OptimizeOptions opts;
        opts.stages = stages;
        opts.seed = static_cast<std::uint64_t>(seed);
        opts.fallback = Snapshot();
        OptimizationReport report;
        try {
          report = OptimizeAll(scene_, space_, opts);
        } catch (...) {
          std::unique_lock lock(mu_);
          --pending_optimizations_;
          throw;
        }
        std::unique_lock lock(mu_);
        params_ = report.params;
        ++version_;
        --pending_optimizations_;
        return jsonutil::ParseText(SerializeReport(report));
      });
    });
    Reply(res, 202, {{"job", std::to_string(id)}});
  }

  void StartTimelapse(const httplib::Request& req, httplib::Response& res) {
    DeflickerConfig deflicker;
    RenderSettings settings;
    settings.width = options_.timelapse_width;
    settings.height = options_.timelapse_height;
    settings.exposure = ExposureMode::Auto(0.0);
    if (!req.body.empty()) {
      const Json body = jsonutil::ParseText(req.body);
      jsonutil::RejectUnknownKeys(body, "", {"width", "height", "method", "window", "jitter_sigma"});
      if (body.contains("width")) settings.width = static_cast<int>(jsonutil::IntegerField(body, "width", ""));
      if (body.contains("height")) settings.height = static_cast<int>(jsonutil::IntegerField(body, "height", ""));
      if (body.contains("method")) {
        deflicker.method = ParseDeflickerMethod(jsonutil::StringField(body, "method", ""));
      }
      if (body.contains("window")) deflicker.window = static_cast<int>(jsonutil::IntegerField(body, "window", ""));
      if (body.contains("jitter_sigma")) {
        settings.exposure = ExposureMode::Auto(jsonutil::NumberField(body, "jitter_sigma", ""));
      }
    }
    ValidateSettings(settings);
    ValidateDeflickerConfig(deflicker);
    std::uint64_t id;
    {
      std::unique_lock lock(mu_);
      id = NewJob("timelapse");
    }
    const ShootingParameters params = Snapshot();
    Enqueue([this, id, params, settings, deflicker] {
      RunJob(id, [&]() -> Json {
        const FrameSequence raw = RenderSequence(scene_, params, settings);
        const FrameSequence clean = static_cast<int>(raw.frames.size()) >= deflicker.window
                                        ? Deflicker(raw, deflicker)
                                        : raw;
        std::optional<ScoreReport> score;
        if (clean.frames.size() >= 5) score = Assess(clean, scene_);
        const std::string dir =
            (std::filesystem::path(options_.output_dir) / ("job-" + std::to_string(id))).string();
        WriteOutput(clean, dir, score, &scene_);
        Json result = {{"directory", dir}, {"frames", clean.frames.size()}};
        if (score) result["score"] = formats::ScoreToJson(score->quality);
        return result;
      });
    });
    Reply(res, 202, {{"job", std::to_string(id)}});
  }

  // Caller holds mu_ exclusively.
  std::uint64_t NewJob(const std::string& kind) {
    const std::uint64_t id = next_job_++;
    Job job;
    job.id = id;
    job.kind = kind;
    jobs_[id] = job;
    return id;
  }

  void RunJob(std::uint64_t id, const std::function<Json()>& body) {
    {
      std::unique_lock lock(mu_);
      jobs_[id].state = JobState::kRunning;
    }
    try {
      Json result = body();
      std::unique_lock lock(mu_);
      Job& job = jobs_[id];
      job.result = std::move(result);
      job.progress = 1.0;
      job.state = JobState::kDone;
    } catch (const std::exception& e) {
      std::unique_lock lock(mu_);
      Job& job = jobs_[id];
      job.error = e.what();
      job.state = JobState::kFailed;
    }
  }

  void Enqueue(std::function<void()> task) {
    {
      std::lock_guard lock(queue_mu_);
      queue_.push_back(std::move(task));
    }
    queue_cv_.notify_all();
  }

  void WorkLoop() {
    for (;;) {
      std::function<void()> task;
      {
        std::unique_lock lock(queue_mu_);
        queue_cv_.wait(lock, [this] { return shutting_down_ || !queue_.empty(); });
        if (queue_.empty()) return;
        task = std::move(queue_.front());
        queue_.pop_front();
        busy_ = true;
      }
      task();
      {
        std::lock_guard lock(queue_mu_);
        busy_ = false;
      }
      idle_cv_.notify_all();
    }
  }

  const SceneDescription scene_;
  const SearchSpace space_;
  const ServiceOptions options_;

  mutable std::shared_mutex mu_;
  ShootingParameters params_;
  std::uint64_t version_ = 1;
  int pending_optimizations_ = 0;
  std::map<std::uint64_t, Job> jobs_;
  std::uint64_t next_job_ = 1;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::function<void()>> queue_;
  bool busy_ = false;
  bool shutting_down_ = false;
  std::thread worker_;

  httplib::Server server_;
  int bound_port_ = 0;
};

Service::Service(SceneDescription scene, SearchSpace space,
                 std::optional<ShootingParameters> params, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(scene), std::move(space), std::move(params),
                                   std::move(options))) {}

Service::~Service() = default;

int Service::Bind() { return impl_->Bind(); }
void Service::Run() { impl_->Run(); }
void Service::Stop() { impl_->Stop(); }
void Service::WaitForJobs() { impl_->WaitForJobs(); }

}  // namespace chronolapse
