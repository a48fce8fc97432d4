#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace lossfluid {

enum class Subcommand {
  Simulate,
  Fluid,
  Compare,
  Blocked,
};

std::optional<Subcommand> parse_subcommand(std::string_view name);

struct RunOptions {
  std::filesystem::path output_dir;
  bool emit_plot_data = false;
  unsigned threads = 0;
};

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::string summary;  // short human-readable digest
};

// Executes one subcommand and writes its CSV artifacts under options.output_dir
// (created if needed). Simulation work runs in parallel; files are written
// afterwards from the calling thread.
RunReport run(Subcommand command, const RunConfig& config, const RunOptions& options);

}  // namespace lossfluid
