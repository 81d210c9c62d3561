/* Copyright 2026 The Chronolapse Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the chronolapse library.
 *
 * Objects are opaque handles released with their *_free function. Every
 * call returns a clp_status; on failure clp_last_error() describes the
 * problem (thread-local, valid until the next call on the same thread) and
 * clp_last_error_field() names the offending field for validation errors.
 * Strings returned through char** are owned by the caller and released with
 * clp_string_free(). Output handles are left untouched on failure.
 */

#ifndef CHRONOLAPSE_CHRONOLAPSE_H_
#define CHRONOLAPSE_CHRONOLAPSE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CLP_API __declspec(dllexport)
#else
#define CLP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clp_status {
  CLP_OK = 0,
  CLP_ERR_INVALID_ARGUMENT = 1, /* null handle or malformed argument */
  CLP_ERR_PARSE = 2,            /* malformed document */
  CLP_ERR_VALIDATION = 3,       /* invariant violated; see clp_last_error_field */
  CLP_ERR_IO = 4,
  CLP_ERR_NOT_FOUND = 5,
  CLP_ERR_INTERNAL = 6
} clp_status;

typedef struct clp_scene clp_scene;
typedef struct clp_space clp_space;
typedef struct clp_params clp_params;
typedef struct clp_sequence clp_sequence;
typedef struct clp_service clp_service;

typedef struct clp_georef {
  double lat0;
  double lon0;
  double alt0;
  double heading_deg;
} clp_georef;

typedef struct clp_render_settings {
  int width;
  int height;
  int auto_exposure;   /* nonzero: auto exposure with jitter_sigma */
  double jitter_sigma; /* [0, 0.2] */
  double gain;         /* manual exposure gain, > 0 */
  int shadows;
  uint64_t seed;
  double vfov_deg;
  double fps;
} clp_render_settings;

typedef struct clp_service_options {
  const char* host;       /* NULL: 127.0.0.1 */
  int port;               /* 0: any free port */
  const char* static_dir; /* NULL or "": no static files */
  const char* output_dir; /* NULL: ./chronolapse_jobs */
} clp_service_options;

CLP_API const char* clp_version(void);
CLP_API const char* clp_status_string(clp_status status);
CLP_API const char* clp_last_error(void);
CLP_API const char* clp_last_error_field(void);
CLP_API void clp_string_free(char* s);

/* Scenes */
CLP_API clp_status clp_scene_load_file(const char* path, clp_scene** out);
CLP_API clp_status clp_scene_load_text(const char* text, clp_scene** out);
CLP_API clp_status clp_scene_to_json(const clp_scene* scene, char** out);
CLP_API clp_status clp_scene_georef(const clp_scene* scene, clp_georef* out);
CLP_API void clp_scene_free(clp_scene* scene);

/* Search spaces */
CLP_API clp_status clp_space_load_file(const char* path, clp_space** out);
CLP_API clp_status clp_space_load_text(const char* text, clp_space** out);
CLP_API void clp_space_free(clp_space* space);

/* Shooting parameters */
CLP_API clp_status clp_params_load_file(const char* path, clp_params** out);
CLP_API clp_status clp_params_from_json(const char* text, clp_params** out);
CLP_API clp_status clp_params_to_json(const clp_params* params, char** out);
CLP_API clp_status clp_params_validate(const clp_scene* scene, const clp_params* params);
CLP_API void clp_params_free(clp_params* params);

/* Staged optimization. `stages` is any subset of "ivt" (NULL = "ivt");
 * disabled stages are drawn at random from `seed`. report_out may be NULL. */
CLP_API clp_status clp_plan(const clp_scene* scene, const clp_space* space, uint64_t seed,
                            const char* stages, clp_params** params_out, char** report_out);

/* Stage ablation over scene files; returns the JSON summary. */
CLP_API clp_status clp_ablate(const char* const* scene_paths, size_t scene_count,
                              const clp_space* space, int seeds, uint64_t base_seed,
                              char** report_out);

/* Rendering */
CLP_API void clp_render_settings_default(clp_render_settings* settings);
CLP_API clp_status clp_render(const clp_scene* scene, const clp_params* params,
                              const clp_render_settings* settings, clp_sequence** out);

/* Sequences on disk: frame_%06d.png + manifest.json. `scene` may be NULL;
 * when given it is embedded in the manifest, and with_score attaches an
 * assessment report. */
CLP_API clp_status clp_sequence_write(const clp_sequence* seq, const char* directory,
                                      const clp_scene* scene, int with_score);
CLP_API clp_status clp_sequence_read(const char* directory, clp_sequence** out);
CLP_API clp_status clp_sequence_frame_count(const clp_sequence* seq, size_t* out);
CLP_API clp_status clp_sequence_mean_luminance(const clp_sequence* seq, size_t index,
                                               double* out);
/* The scene embedded in a sequence read from disk; CLP_ERR_NOT_FOUND if none. */
CLP_API clp_status clp_sequence_scene(const clp_sequence* seq, clp_scene** out);
CLP_API void clp_sequence_free(clp_sequence* seq);

/* Post-processing. method: "gain_match", "histeq" or "both". */
CLP_API clp_status clp_deflicker(const clp_sequence* seq, const char* method, int window,
                                 clp_sequence** out);
CLP_API clp_status clp_flicker_index(const clp_sequence* seq, int window, double* out);

/* Full score report as JSON. */
CLP_API clp_status clp_assess(const clp_sequence* seq, const clp_scene* scene, char** out);

/* Robot plan JSON. georef NULL uses the scene's own. */
CLP_API clp_status clp_export_plan(const clp_scene* scene, const clp_params* params,
                                   const clp_georef* georef, int waypoints,
                                   double playback_fps, char** out);

/* HTTP service. params may be NULL. */
CLP_API clp_status clp_service_create(const clp_scene* scene, const clp_space* space,
                                      const clp_params* params,
                                      const clp_service_options* options, clp_service** out);
CLP_API clp_status clp_service_bind(clp_service* service, int* port_out);
/* Blocks until clp_service_stop() is called from another thread. */
CLP_API clp_status clp_service_run(clp_service* service);
CLP_API clp_status clp_service_stop(clp_service* service);
CLP_API void clp_service_free(clp_service* service);

#ifdef __cplusplus
}
#endif

#endif /* CHRONOLAPSE_CHRONOLAPSE_H_ */
