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

// JSON object forms of the shared value types, for embedding in larger
// documents (manifests, reports, HTTP bodies).

#ifndef CHRONOLAPSE_SRC_CORE_FORMATS_HPP_
#define CHRONOLAPSE_SRC_CORE_FORMATS_HPP_

#include <string>

#include "chronolapse/aesthetics.hpp"
#include "chronolapse/camera.hpp"
#include "chronolapse/params.hpp"
#include "json_util.hpp"

namespace chronolapse::formats {

using jsonutil::Json;

Json ParamsToJson(const ShootingParameters& p);
ShootingParameters ParamsFromJson(const Json& j, const std::string& path = "");

Json PoseToJson(const CameraPose& pose);
CameraPose PoseFromJson(const Json& j, const std::string& path);

Json GeoRefToJson(const GeoReference& g);
GeoReference GeoRefFromJson(const Json& j, const std::string& path);

Json ScoreToJson(const QualityScore& s);
QualityScore ScoreFromJson(const Json& j, const std::string& path);
Json ScoreReportToJson(const ScoreReport& report);
ScoreReport ScoreReportFromJson(const Json& j, const std::string& path);

}  // namespace chronolapse::formats

#endif  // CHRONOLAPSE_SRC_CORE_FORMATS_HPP_
