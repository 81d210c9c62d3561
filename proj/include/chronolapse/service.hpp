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

// Single-session HTTP service: one scene, one current parameter set, and a
// queue of background jobs (optimization and time-lapse generation).
//
//   GET  /api/scene                     scene summary for map drawing
//   GET  /api/params                    current parameters (ETag = version)
//   PUT  /api/params                    replace parameters atomically
//   GET  /api/preview?time=&w=&h=       PNG at the pose for `time`
//   POST /api/optimize?stages=ivt&seed= start an optimization job
//   POST /api/timelapse                 start a render + deflicker job
//   GET  /api/jobs/{id}                 job state
//   GET  /api/score                     probe assessment of current params
//   GET  /api/export/robotplan?lat0=&lon0=&alt0=&heading=&waypoints=
//
// Errors are JSON {"error": message, "field": name?}: 400 for invalid
// input, 404 for unknown jobs, 409 when a PUT races an optimization job or
// carries a stale If-Match version.

#ifndef CHRONOLAPSE_SERVICE_HPP_
#define CHRONOLAPSE_SERVICE_HPP_

#include <memory>
#include <optional>
#include <string>

#include "chronolapse/optimize.hpp"
#include "chronolapse/params.hpp"
#include "chronolapse/scene.hpp"

namespace chronolapse {

inline constexpr int kMaxPreviewWidth = 320;
inline constexpr int kMaxPreviewHeight = 180;

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;            // 0 picks a free port
  std::string static_dir;     // served at / when set
  std::string output_dir = "chronolapse_jobs";
  int timelapse_width = kFinalWidth;
  int timelapse_height = kFinalHeight;
};

class Service {
 public:
  // Without initial params the session starts from RandomParams(seed 0).
  Service(SceneDescription scene, SearchSpace space,
          std::optional<ShootingParameters> params, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the listening socket; returns the bound port. Throws IoError.
  int Bind();
  // Serves until Stop(). Binds first if needed.
  void Run();
  void Stop();
  // Blocks until every queued job has finished.
  void WaitForJobs();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace chronolapse

#endif  // CHRONOLAPSE_SERVICE_HPP_
