#include "triplegear/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "triplegear/error.hpp"

namespace tg {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) {
  return "[" + fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z) + "]";
}

using json = nlohmann::json;

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(ErrorCode::Parse, std::string("config: missing or non-numeric \"") + key + "\"");
  return j[key].get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw Error(ErrorCode::Parse, std::string("config: missing or non-integer \"") + key + "\"");
  return j[key].get<int>();
}

Vec3 vec3(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3)
    throw Error(ErrorCode::Parse, std::string("config: \"") + key + "\" is not a 3-vector");
  return {j[key][0].get<double>(), j[key][1].get<double>(), j[key][2].get<double>()};
}

}  // namespace

std::string config_to_json(const ProjectConfig& cfg) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"schema_version\": " << cfg.schema_version << ",\n";
  o << "  \"params\": {\"r\": " << fmt(cfg.design.params.r)
    << ", \"phi\": " << fmt(cfg.design.params.phi)
    << ", \"theta\": " << fmt(cfg.design.params.theta) << "},\n";
  o << "  \"thickness\": " << fmt(cfg.design.thickness) << ",\n";
  o << "  \"objective\": " << fmt(cfg.design.objective) << ",\n";
  o << "  \"circles\": [\n";
  for (int i = 0; i < 3; ++i) {
    const Circle3& c = cfg.design.circles[size_t(i)];
    o << "    {\"center\": " << fmt(c.center) << ", \"u_axis\": " << fmt(c.u_axis)
      << ", \"v_axis\": " << fmt(c.v_axis) << ", \"radius\": " << fmt(c.radius) << "}"
      << (i + 1 < 3 ? ",\n" : "\n");
  }
  o << "  ],\n";
  o << "  \"contacts\": [";
  for (size_t i = 0; i < cfg.design.contacts.size(); ++i)
    o << (i ? ", " : "") << "{\"alpha\": " << fmt(cfg.design.contacts[i].alpha)
      << ", \"beta\": " << fmt(cfg.design.contacts[i].beta) << "}";
  o << "],\n";
  o << "  \"link\": {\"all_linked\": " << (cfg.design.link.all_linked ? "true" : "false")
    << ", \"pairwise\": [";
  for (size_t i = 0; i < cfg.design.link.pairwise.size(); ++i) {
    o << (i ? ", [" : "[");
    const auto& row = cfg.design.link.pairwise[i];
    for (size_t j = 0; j < row.size(); ++j) o << (j ? ", " : "") << row[j];
    o << "]";
  }
  o << "], \"residual\": [";
  for (size_t i = 0; i < cfg.design.link.residual.size(); ++i) {
    o << (i ? ", [" : "[");
    const auto& row = cfg.design.link.residual[i];
    for (size_t j = 0; j < row.size(); ++j) o << (j ? ", " : "") << fmt(row[j]);
    o << "]";
  }
  o << "]},\n";
  const GearDesign& g = cfg.gear;
  o << "  \"gear\": {\n";
  o << "    \"tooth_count\": " << g.tooth_count << ",\n";
  o << "    \"addendum_fraction\": " << fmt(g.addendum_fraction) << ",\n";
  o << "    \"dedendum_fraction\": " << fmt(g.dedendum_fraction) << ",\n";
  o << "    \"fill\": " << fmt(g.fill) << ",\n";
  o << "    \"top_land_fraction\": " << fmt(g.top_land_fraction) << ",\n";
  o << "    \"clearance_gap\": " << fmt(g.clearance_gap) << ",\n";
  o << "    \"inner_band_halfwidth\": " << fmt(g.inner_band_halfwidth) << ",\n";
  o << "    \"outer_band_halfwidth\": " << fmt(g.outer_band_halfwidth) << ",\n";
  o << "    \"inner_flank_slope\": " << fmt(g.inner_flank_slope) << ",\n";
  o << "    \"hollow_fraction\": " << fmt(g.hollow_fraction) << ",\n";
  o << "    \"field_alpha\": " << g.field_alpha << ",\n";
  o << "    \"field_beta\": " << g.field_beta << ",\n";
  o << "    \"tool_alpha\": " << g.tool_alpha << ",\n";
  o << "    \"sweep_steps\": " << g.sweep_steps << ",\n";
  o << "    \"detect_steps\": " << g.detect_steps << "\n";
  o << "  },\n";
  const AxleSpec& a = cfg.axle;
  o << "  \"axle\": {\n";
  o << "    \"pitch\": " << fmt(a.pitch) << ",\n";
  o << "    \"outer_radius\": " << fmt(a.outer_radius) << ",\n";
  o << "    \"length\": " << fmt(a.length) << ",\n";
  o << "    \"starts\": " << a.starts << ",\n";
  o << "    \"cross_section\": [";
  for (size_t i = 0; i < a.cross_section.size(); ++i)
    o << (i ? ", [" : "[") << fmt(a.cross_section[i][0]) << ", " << fmt(a.cross_section[i][1])
      << "]";
  o << "]\n";
  o << "  }\n";
  o << "}\n";
  return o.str();
}

ProjectConfig config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::Parse, "config: not valid JSON");
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config: top level is not an object");
  ProjectConfig cfg;
  cfg.schema_version = integer(j, "schema_version");
  if (cfg.schema_version != 1)
    throw Error(ErrorCode::Parse,
                "config: unsupported schema_version " + std::to_string(cfg.schema_version));
  if (!j.contains("params") || !j["params"].is_object())
    throw Error(ErrorCode::Parse, "config: missing \"params\"");
  cfg.design.params.r = num(j["params"], "r");
  cfg.design.params.phi = num(j["params"], "phi");
  cfg.design.params.theta = num(j["params"], "theta");
  cfg.design.thickness = num(j, "thickness");
  cfg.design.objective = num(j, "objective");
  if (!j.contains("circles") || !j["circles"].is_array() || j["circles"].size() != 3)
    throw Error(ErrorCode::Parse, "config: expected exactly 3 circles");
  for (int i = 0; i < 3; ++i) {
    const json& cj = j["circles"][size_t(i)];
    Circle3& c = cfg.design.circles[size_t(i)];
    c.center = vec3(cj, "center");
    c.u_axis = vec3(cj, "u_axis");
    c.v_axis = vec3(cj, "v_axis");
    c.radius = num(cj, "radius");
  }
  if (j.contains("contacts")) {
    if (!j["contacts"].is_array()) throw Error(ErrorCode::Parse, "config: \"contacts\" not a list");
    for (const json& cj : j["contacts"])
      cfg.design.contacts.push_back({num(cj, "alpha"), num(cj, "beta")});
  }
  if (j.contains("link")) {
    const json& lj = j["link"];
    cfg.design.link.all_linked = lj.value("all_linked", false);
    for (const json& row : lj.value("pairwise", json::array()))
      cfg.design.link.pairwise.push_back(row.get<std::vector<int>>());
    for (const json& row : lj.value("residual", json::array()))
      cfg.design.link.residual.push_back(row.get<std::vector<double>>());
  }
  if (j.contains("gear")) {
    const json& gj = j["gear"];
    GearDesign& g = cfg.gear;
    g.tooth_count = integer(gj, "tooth_count");
    g.addendum_fraction = num(gj, "addendum_fraction");
    g.dedendum_fraction = num(gj, "dedendum_fraction");
    g.fill = num(gj, "fill");
    g.top_land_fraction = num(gj, "top_land_fraction");
    g.clearance_gap = num(gj, "clearance_gap");
    g.inner_band_halfwidth = num(gj, "inner_band_halfwidth");
    g.outer_band_halfwidth = num(gj, "outer_band_halfwidth");
    g.inner_flank_slope = num(gj, "inner_flank_slope");
    g.hollow_fraction = num(gj, "hollow_fraction");
    g.field_alpha = integer(gj, "field_alpha");
    g.field_beta = integer(gj, "field_beta");
    g.tool_alpha = integer(gj, "tool_alpha");
    g.sweep_steps = integer(gj, "sweep_steps");
    g.detect_steps = integer(gj, "detect_steps");
  }
  if (j.contains("axle")) {
    const json& aj = j["axle"];
    cfg.axle.pitch = num(aj, "pitch");
    cfg.axle.outer_radius = num(aj, "outer_radius");
    cfg.axle.length = num(aj, "length");
    cfg.axle.starts = integer(aj, "starts");
    for (const json& p : aj.value("cross_section", json::array())) {
      if (!p.is_array() || p.size() != 2)
        throw Error(ErrorCode::Parse, "config: cross_section entries must be 2-vectors");
      cfg.axle.cross_section.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  return cfg;
}

void save_config(const std::string& path, const ProjectConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot open for writing: " + path);
  out << config_to_json(cfg);
}

ProjectConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace tg
