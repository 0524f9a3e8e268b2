#pragma once

#include <string>

#include "triplegear/axle.hpp"
#include "triplegear/carve.hpp"
#include "triplegear/optimizer.hpp"

namespace tg {

// Everything needed to rebuild the assembly.
struct ProjectConfig {
  int schema_version = 1;
  DesignConfig design;
  GearDesign gear;
  AxleSpec axle;
};

// Doubles carry 17 significant digits, so save-load-save is byte-identical
// and load-save of a saved file reproduces every value bit for bit.
std::string config_to_json(const ProjectConfig& cfg);
ProjectConfig config_from_json(const std::string& text);

void save_config(const std::string& path, const ProjectConfig& cfg);
ProjectConfig load_config(const std::string& path);

}  // namespace tg
