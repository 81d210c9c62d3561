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

#include "chronolapse/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "rng.hpp"

namespace chronolapse {

using jsonutil::Json;

namespace {

bool InUnit(const Rgb& c) {
  auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  return ok(c.r) && ok(c.g) && ok(c.b);
}

bool Finite(double v) { return std::isfinite(v); }

void Check(bool cond, const std::string& field, const std::string& message) {
  if (!cond) throw ValidationError(field, message);
}

Rect RectOf(const Json& j, const std::string& path) {
  auto a = jsonutil::Numbers<4>(j, path);
  return {a[0], a[1], a[2], a[3]};
}

Json RectJson(const Rect& r) { return Json::array({r.xmin, r.ymin, r.xmax, r.ymax}); }

AgentKind AgentKindOf(const std::string& s, const std::string& path) {
  if (s == "person") return AgentKind::kPerson;
  if (s == "vehicle") return AgentKind::kVehicle;
  throw ParseError(path + ": expected 'person' or 'vehicle'");
}

Ground GroundOf(const Json& j) {
  const std::string path = "ground";
  jsonutil::RequireObject(j, path);
  std::string type = jsonutil::StringField(j, "type", path);
  if (type == "flat") {
    jsonutil::RejectUnknownKeys(j, path, {"type", "albedo", "bounds"});
    FlatGround g;
    g.albedo = jsonutil::RgbOf(jsonutil::Field(j, "albedo", path), "ground.albedo");
    g.bounds = RectOf(jsonutil::Field(j, "bounds", path), "ground.bounds");
    return g;
  }
  if (type == "heightfield") {
    jsonutil::RejectUnknownKeys(
        j, path, {"type", "albedo", "origin", "cell_size", "heights"});
    Heightfield h;
    h.albedo = jsonutil::RgbOf(jsonutil::Field(j, "albedo", path), "ground.albedo");
    auto o = jsonutil::Numbers<2>(jsonutil::Field(j, "origin", path), "ground.origin");
    h.origin = {o[0], o[1]};
    h.cell_size = jsonutil::NumberField(j, "cell_size", path);
    const Json& rows = jsonutil::ArrayField(j, "heights", path);
    h.rows = static_cast<int>(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::string rp = "ground.heights[" + std::to_string(r) + "]";
      if (!rows[r].is_array()) throw ParseError(rp + ": expected an array");
      if (r == 0) h.cols = static_cast<int>(rows[r].size());
      if (static_cast<int>(rows[r].size()) != h.cols) {
        throw ValidationError("heights", "heightfield rows differ in length");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        h.heights.push_back(
            jsonutil::Number(rows[r][c], rp + "[" + std::to_string(c) + "]"));
      }
    }
    return h;
  }
  throw ParseError("ground.type: expected 'flat' or 'heightfield'");
}

Json GroundJson(const Ground& ground) {
  if (const auto* flat = std::get_if<FlatGround>(&ground)) {
    return Json{{"type", "flat"},
                {"albedo", jsonutil::ToJson(flat->albedo)},
                {"bounds", RectJson(flat->bounds)}};
  }
  const auto& h = std::get<Heightfield>(ground);
  Json rows = Json::array();
  for (int r = 0; r < h.rows; ++r) {
    Json row = Json::array();
    for (int c = 0; c < h.cols; ++c) row.push_back(h.heights[r * h.cols + c]);
    rows.push_back(std::move(row));
  }
  return Json{{"type", "heightfield"},
              {"albedo", jsonutil::ToJson(h.albedo)},
              {"origin", Json::array({h.origin.x, h.origin.y})},
              {"cell_size", h.cell_size},
              {"heights", std::move(rows)}};
}

}  // namespace

double Heightfield::HeightAt(double x, double y) const {
  double fx = std::clamp((x - origin.x) / cell_size, 0.0, cols - 1.0);
  double fy = std::clamp((y - origin.y) / cell_size, 0.0, rows - 1.0);
  int c0 = std::min(static_cast<int>(fx), cols - 2);
  int r0 = std::min(static_cast<int>(fy), rows - 2);
  double tx = fx - c0;
  double ty = fy - r0;
  auto at = [&](int r, int c) { return heights[r * cols + c]; };
  double a = at(r0, c0) * (1 - tx) + at(r0, c0 + 1) * tx;
  double b = at(r0 + 1, c0) * (1 - tx) + at(r0 + 1, c0 + 1) * tx;
  return a * (1 - ty) + b * ty;
}

Rect Heightfield::Footprint() const {
  return {origin.x, origin.y, origin.x + (cols - 1) * cell_size,
          origin.y + (rows - 1) * cell_size};
}

double AgentRoute::Length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    len += std::hypot(polyline[i].x - polyline[i - 1].x,
                      polyline[i].y - polyline[i - 1].y);
  }
  return len;
}

bool AgentRoute::operator==(const AgentRoute& o) const {
  if (kind != o.kind || speed != o.speed || count != o.count ||
      phase_spread != o.phase_spread || polyline.size() != o.polyline.size()) {
    return false;
  }
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    if (polyline[i].x != o.polyline[i].x || polyline[i].y != o.polyline[i].y) {
      return false;
    }
  }
  return true;
}

Rect SceneDescription::HorizontalBounds() const {
  if (const auto* flat = std::get_if<FlatGround>(&ground)) return flat->bounds;
  return std::get<Heightfield>(ground).Footprint();
}

double SceneDescription::Diagonal() const {
  Rect b = HorizontalBounds();
  return std::hypot(b.xmax - b.xmin, b.ymax - b.ymin);
}

double SceneDescription::GroundHeight(double x, double y) const {
  if (std::holds_alternative<FlatGround>(ground)) return 0.0;
  return std::get<Heightfield>(ground).HeightAt(x, y);
}

const Rgb& SceneDescription::GroundAlbedo() const {
  if (const auto* flat = std::get_if<FlatGround>(&ground)) return flat->albedo;
  return std::get<Heightfield>(ground).albedo;
}

std::optional<std::size_t> SceneDescription::PrimaryLandmark() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < solids.size(); ++i) {
    if (!solids[i].landmark) continue;
    if (!best || *solids[i].landmark > *solids[*best].landmark) best = i;
  }
  return best;
}

const char* AgentKindName(AgentKind kind) {
  return kind == AgentKind::kPerson ? "person" : "vehicle";
}

void ValidateScene(const SceneDescription& s) {
  const GeoReference& g = s.georef;
  Check(Finite(g.lat0) && g.lat0 >= -90.0 && g.lat0 <= 90.0, "lat0",
        "must be in [-90, 90]");
  Check(Finite(g.lon0) && g.lon0 >= -180.0 && g.lon0 <= 180.0, "lon0",
        "must be in [-180, 180]");
  Check(Finite(g.alt0), "alt0", "must be finite");
  Check(Finite(g.heading_deg) && g.heading_deg >= 0.0 && g.heading_deg < 360.0,
        "heading_deg", "must be in [0, 360)");

  Check(InUnit(s.GroundAlbedo()), "albedo", "ground albedo outside [0, 1]");
  if (const auto* flat = std::get_if<FlatGround>(&s.ground)) {
    Check(flat->bounds.xmax > flat->bounds.xmin &&
              flat->bounds.ymax > flat->bounds.ymin,
          "bounds", "ground bounds must have positive area");
  } else {
    const auto& h = std::get<Heightfield>(s.ground);
    Check(h.rows >= 2 && h.cols >= 2, "heights",
          "heightfield needs at least 2x2 samples");
    Check(static_cast<int>(h.heights.size()) == h.rows * h.cols, "heights",
          "heightfield must be rectangular");
    Check(Finite(h.cell_size) && h.cell_size > 0.0, "cell_size",
          "must be positive");
  }

  for (const Solid& solid : s.solids) {
    Check(solid.size.x > 0.0 && solid.size.y > 0.0 && solid.size.z > 0.0,
          "size", "solid extents must be positive");
    Check(InUnit(solid.albedo), "albedo", "solid albedo outside [0, 1]");
    if (solid.landmark) {
      Check(*solid.landmark > 0.0 && *solid.landmark <= 1.0, "landmark",
            "saliency weight must be in (0, 1]");
    }
  }

  const ReachableRegion& reach = s.reachable;
  Check(reach.min_height <= reach.max_height, "height_range",
        "min must not exceed max");
  bool any_area = false;
  Rect bounds = s.HorizontalBounds();
  for (const Rect& r : reach.rects) {
    Check(r.xmin <= r.xmax && r.ymin <= r.ymax, "rects",
          "rectangle min corner exceeds max corner");
    Check(bounds.Contains(r.xmin, r.ymin) && bounds.Contains(r.xmax, r.ymax),
          "rects", "reachable rectangle outside scene bounds");
    any_area = any_area || r.Area() > 0.0;
  }
  Check(any_area, "rects", "need at least one rectangle with positive area");

  for (const AgentRoute& a : s.agents) {
    Check(a.polyline.size() >= 2, "polyline", "needs at least 2 points");
    Check(a.Length() > 0.0, "polyline", "length must be positive");
    Check(Finite(a.speed) && a.speed > 0.0, "speed", "must be positive");
    Check(a.count >= 1, "count", "must be a positive integer");
    Check(a.phase_spread >= 0.0 && a.phase_spread <= 1.0, "phase_spread",
          "must be in [0, 1]");
  }

  Check(InUnit(s.sky.day_zenith), "day_zenith", "color outside [0, 1]");
  Check(InUnit(s.sky.night_zenith), "night_zenith", "color outside [0, 1]");
  Check(s.sky.haze >= 0.0 && s.sky.haze <= 1.0, "haze", "must be in [0, 1]");
}

SceneDescription LoadScene(std::string_view text) {
  Json root = jsonutil::ParseText(text);
  jsonutil::RejectUnknownKeys(root, "", {"name", "georef", "ground", "solids",
                                         "reachable", "agents", "sky"});
  SceneDescription s;
  s.name = jsonutil::StringField(root, "name", "");

  const Json& g = jsonutil::Field(root, "georef", "");
  jsonutil::RejectUnknownKeys(g, "georef", {"lat0", "lon0", "alt0", "heading_deg"});
  s.georef.lat0 = jsonutil::NumberField(g, "lat0", "georef");
  s.georef.lon0 = jsonutil::NumberField(g, "lon0", "georef");
  s.georef.alt0 = jsonutil::NumberField(g, "alt0", "georef");
  s.georef.heading_deg = jsonutil::NumberField(g, "heading_deg", "georef");

  s.ground = GroundOf(jsonutil::Field(root, "ground", ""));

  const Json& solids = jsonutil::ArrayField(root, "solids", "");
  for (std::size_t i = 0; i < solids.size(); ++i) {
    std::string p = "solids[" + std::to_string(i) + "]";
    jsonutil::RejectUnknownKeys(solids[i], p, {"center", "size", "albedo", "landmark"});
    Solid solid;
    solid.center = jsonutil::Vec3Of(jsonutil::Field(solids[i], "center", p), p + ".center");
    solid.size = jsonutil::Vec3Of(jsonutil::Field(solids[i], "size", p), p + ".size");
    solid.albedo = jsonutil::RgbOf(jsonutil::Field(solids[i], "albedo", p), p + ".albedo");
    if (solids[i].contains("landmark")) {
      solid.landmark = jsonutil::NumberField(solids[i], "landmark", p);
    }
    s.solids.push_back(solid);
  }

  const Json& reach = jsonutil::Field(root, "reachable", "");
  jsonutil::RejectUnknownKeys(reach, "reachable", {"rects", "height_range"});
  const Json& rects = jsonutil::ArrayField(reach, "rects", "reachable");
  for (std::size_t i = 0; i < rects.size(); ++i) {
    s.reachable.rects.push_back(
        RectOf(rects[i], "reachable.rects[" + std::to_string(i) + "]"));
  }
  auto hr = jsonutil::Numbers<2>(jsonutil::Field(reach, "height_range", "reachable"),
                                 "reachable.height_range");
  s.reachable.min_height = hr[0];
  s.reachable.max_height = hr[1];

  const Json& agents = jsonutil::ArrayField(root, "agents", "");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::string p = "agents[" + std::to_string(i) + "]";
    jsonutil::RejectUnknownKeys(agents[i], p,
                                {"kind", "polyline", "speed", "count", "phase_spread"});
    AgentRoute a;
    a.kind = AgentKindOf(jsonutil::StringField(agents[i], "kind", p), p + ".kind");
    const Json& poly = jsonutil::ArrayField(agents[i], "polyline", p);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      auto xy = jsonutil::Numbers<2>(poly[k], p + ".polyline[" + std::to_string(k) + "]");
      a.polyline.push_back({xy[0], xy[1]});
    }
    a.speed = jsonutil::NumberField(agents[i], "speed", p);
    a.count = static_cast<int>(jsonutil::IntegerField(agents[i], "count", p));
    a.phase_spread = jsonutil::NumberField(agents[i], "phase_spread", p);
    s.agents.push_back(std::move(a));
  }

  const Json& sky = jsonutil::Field(root, "sky", "");
  jsonutil::RejectUnknownKeys(sky, "sky", {"day_zenith", "night_zenith", "haze"});
  s.sky.day_zenith = jsonutil::RgbOf(jsonutil::Field(sky, "day_zenith", "sky"), "sky.day_zenith");
  s.sky.night_zenith =
      jsonutil::RgbOf(jsonutil::Field(sky, "night_zenith", "sky"), "sky.night_zenith");
  s.sky.haze = jsonutil::NumberField(sky, "haze", "sky");

  ValidateScene(s);
  return s;
}

SceneDescription LoadSceneFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return LoadScene(buf.str());
}

std::string SerializeScene(const SceneDescription& s) {
  Json solids = Json::array();
  for (const Solid& solid : s.solids) {
    Json j{{"center", jsonutil::ToJson(solid.center)},
           {"size", jsonutil::ToJson(solid.size)},
           {"albedo", jsonutil::ToJson(solid.albedo)}};
    if (solid.landmark) j["landmark"] = *solid.landmark;
    solids.push_back(std::move(j));
  }
  Json rects = Json::array();
  for (const Rect& r : s.reachable.rects) rects.push_back(RectJson(r));
  Json agents = Json::array();
  for (const AgentRoute& a : s.agents) {
    Json poly = Json::array();
    for (const Vec2& p : a.polyline) poly.push_back(Json::array({p.x, p.y}));
    agents.push_back(Json{{"kind", AgentKindName(a.kind)},
                          {"polyline", std::move(poly)},
                          {"speed", a.speed},
                          {"count", a.count},
                          {"phase_spread", a.phase_spread}});
  }
  Json root{
      {"name", s.name},
      {"georef",
       {{"lat0", s.georef.lat0},
        {"lon0", s.georef.lon0},
        {"alt0", s.georef.alt0},
        {"heading_deg", s.georef.heading_deg}}},
      {"ground", GroundJson(s.ground)},
      {"solids", std::move(solids)},
      {"reachable",
       {{"rects", std::move(rects)},
        {"height_range", Json::array({s.reachable.min_height, s.reachable.max_height})}}},
      {"agents", std::move(agents)},
      {"sky",
       {{"day_zenith", jsonutil::ToJson(s.sky.day_zenith)},
        {"night_zenith", jsonutil::ToJson(s.sky.night_zenith)},
        {"haze", s.sky.haze}}},
  };
  return root.dump(2) + "\n";
}

double SolarHour(const GeoReference& georef, Timestamp t) {
  double h = UtcHourOfDay(t) + georef.lon0 / 15.0;
  h = std::fmod(h, 24.0);
  return h < 0.0 ? h + 24.0 : h;
}

Timestamp SolarHourToUtc(const GeoReference& georef, Timestamp date,
                         double solar_hour) {
  return StartOfUtcDay(date).PlusSeconds((solar_hour - georef.lon0 / 15.0) * 3600.0);
}

namespace {

double DeclinationDeg(int day_of_year) {
  return 23.44 * std::sin(2.0 * kPi * (284.0 + day_of_year) / 365.0);
}

}  // namespace

SunState ComputeSunState(const GeoReference& georef, Timestamp t) {
  const double decl = DegToRad(DeclinationDeg(DayOfYear(t)));
  const double lat = DegToRad(georef.lat0);
  // Hour angle from the raw (unwrapped) solar clock so the sign tracks
  // morning/afternoon even when longitude shifts the UTC date.
  double solar = UtcHourOfDay(t) + georef.lon0 / 15.0;
  const double hour_angle_deg = Wrap180(15.0 * (solar - 12.0));
  const double hour_angle = DegToRad(hour_angle_deg);

  double sin_el = std::sin(lat) * std::sin(decl) +
                  std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  sin_el = std::clamp(sin_el, -1.0, 1.0);
  const double el = std::asin(sin_el);

  // East/north components of the unit sun vector; atan2 resolves the
  // morning/afternoon ambiguity that the sign of the hour angle carries.
  const double east = -std::cos(decl) * std::sin(hour_angle);
  const double north = std::sin(decl) * std::cos(lat) -
                       std::cos(decl) * std::sin(lat) * std::cos(hour_angle);

  SunState sun;
  sun.elevation_deg = RadToDeg(el);
  sun.azimuth_deg = Wrap360(RadToDeg(std::atan2(east, north)));
  // Compass bearing b maps to scene yaw (heading - b).
  const double phi = DegToRad(georef.heading_deg - sun.azimuth_deg);
  const double horizontal = std::hypot(east, north);
  sun.direction = Vec3{horizontal * std::cos(phi), horizontal * std::sin(phi), sin_el}
                      .Normalized();

  const double direct = Clamp01(sin_el);
  const double twilight = Clamp01((sun.elevation_deg + 6.0) / 6.0);
  sun.irradiance = direct + 0.08 * twilight * (1.0 - direct);
  sun.warmth = sun.elevation_deg >= 0.0 ? Clamp01(1.0 - sun.elevation_deg / 30.0) : 0.0;
  return sun;
}

std::pair<double, double> DaylightSolarHours(const GeoReference& georef,
                                             Timestamp date) {
  const double decl = DegToRad(DeclinationDeg(DayOfYear(date)));
  const double lat = DegToRad(georef.lat0);
  const double cos_h0 = -std::tan(lat) * std::tan(decl);
  if (cos_h0 <= -1.0) return {0.0, 24.0};
  if (cos_h0 >= 1.0) return {6.0, 18.0};
  const double h0_hours = RadToDeg(std::acos(cos_h0)) / 15.0;
  return {12.0 - h0_hours, 12.0 + h0_hours};
}

std::vector<AgentSample> AgentPositions(const SceneDescription& scene,
                                        Timestamp t, std::uint64_t seed) {
  std::vector<AgentSample> out;
  const double elapsed = t.Seconds();
  for (std::size_t r = 0; r < scene.agents.size(); ++r) {
    const AgentRoute& route = scene.agents[r];
    const double length = route.Length();
    for (int i = 0; i < route.count; ++i) {
      double u = UnitFromHash(seed, r, static_cast<std::uint64_t>(i));
      double offset = route.phase_spread * length * ((i + u) / route.count);
      double s = std::fmod(offset + route.speed * elapsed, length);
      if (s < 0.0) s += length;

      AgentSample sample;
      sample.kind = route.kind;
      for (std::size_t k = 1; k < route.polyline.size(); ++k) {
        const Vec2& a = route.polyline[k - 1];
        const Vec2& b = route.polyline[k];
        double seg = std::hypot(b.x - a.x, b.y - a.y);
        bool last = k + 1 == route.polyline.size();
        if (seg <= 0.0 && !last) continue;
        if (s <= seg || last) {
          double f = seg > 0.0 ? std::min(s / seg, 1.0) : 0.0;
          sample.position = {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
          sample.heading_deg = RadToDeg(std::atan2(b.y - a.y, b.x - a.x));
          break;
        }
        s -= seg;
      }
      out.push_back(sample);
    }
  }
  return out;
}

bool IsReachable(const ReachableRegion& region, const Vec3& p) {
  if (p.z < region.min_height || p.z > region.max_height) return false;
  return std::any_of(region.rects.begin(), region.rects.end(),
                     [&](const Rect& r) { return r.Contains(p.x, p.y); });
}

}  // namespace chronolapse
