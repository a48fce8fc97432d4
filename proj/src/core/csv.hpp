#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fluid.hpp"
#include "harness.hpp"
#include "observables.hpp"
#include "simulator.hpp"

namespace lossfluid {

// Shortest round-trip decimal form; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, std::span<const std::string_view> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::string_view v);
  void end_row();

 private:
  void separator();

  std::filesystem::path file_;
  std::ofstream out_;
  bool row_started_ = false;
};

void write_events_csv(const std::filesystem::path& file, const SimPath& path);
void write_path_csv(const std::filesystem::path& file, const SimPath& path, std::span<const double> grid);
void write_fluid_csv(const std::filesystem::path& file, const FluidSolution& sol);
void write_regimes_csv(const std::filesystem::path& file, const RegimeIntervals& reg);
void write_overlay_csv(const std::filesystem::path& file, const OverlaySeries& series);
void write_error_table_csv(const std::filesystem::path& file, const ErrorTable& table);
void write_error_summary_csv(const std::filesystem::path& file, const ErrorTable& table);
void write_residual_csv(const std::filesystem::path& file, const ResidualTable& table);
void write_blocked_csv(const std::filesystem::path& file, const SimPath& path, const FluidSolution& sol,
                       std::span<const double> grid);
void write_fluid_blocked_csv(const std::filesystem::path& file, const FluidSolution& sol, std::span<const double> grid);

// Two whitespace-separated columns with a '#' comment line, readable by gnuplot.
void write_plot_data(const std::filesystem::path& file, std::string_view label, std::span<const double> x,
                     std::span<const double> y);

}  // namespace lossfluid
