#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace lossfluid {

/// Everything one CLI run needs: the model plus solver and harness controls.
struct RunConfig {
  ModelConfig model;
  double step;                    // fluid mesh step; default T / 4000
  std::optional<double> mollifier;
  double tol_pin;                 // default 10 * step
  std::vector<int> n_list;        // default {20, 200}
  int reps = 50;
  std::uint64_t base_seed = 1;
  std::size_t grid_points = 400;  // overlay / path export grid
  int residual_reps = 200;
  std::size_t residual_points = 40;
  std::string output_dir;         // empty: decided by the caller
  std::filesystem::path source;   // file the config was read from, if any
};

// Reads a YAML config. Unknown keys are rejected; errors name the offending
// field together with file and line.
RunConfig parse_config(const std::filesystem::path& file);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin = "<config>");

}  // namespace lossfluid
