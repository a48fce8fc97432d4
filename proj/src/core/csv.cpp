#include "csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace lossfluid {

namespace {

template <std::size_t N>
std::span<const std::string_view> columns(const std::array<std::string_view, N>& names) {
  return {names.data(), names.size()};
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& file, std::span<const std::string_view> header)
    : file_(file), out_(file) {
  if (!out_) throw IoError("cannot write " + file.string());
  for (std::string_view name : header) cell(name);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  out_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw IoError("write failed: " + file_.string());
}

void write_events_csv(const std::filesystem::path& file, const SimPath& path) {
  static constexpr std::array<std::string_view, 4> header{"time", "kind", "job_id", "occupied_count"};
  CsvWriter csv(file, columns(header));
  for (const Event& e : path.events()) {
    csv.cell(e.time).cell(to_string(e.kind)).cell(static_cast<long long>(e.job_id)).cell(static_cast<long long>(e.occupied));
    csv.end_row();
  }
}

void write_path_csv(const std::filesystem::path& file, const SimPath& path, std::span<const double> grid) {
  static constexpr std::array<std::string_view, 4> header{"time", "rho_n", "theta_n", "b_n"};
  CsvWriter csv(file, columns(header));
  for (double t : grid) {
    csv.cell(t).cell(path.occupancy_at(t)).cell(path.integrated(t)).cell(path.blocked_fraction(t));
    csv.end_row();
  }
}

void write_fluid_csv(const std::filesystem::path& file, const FluidSolution& sol) {
  static constexpr std::array<std::string_view, 5> header{"time", "rho", "w", "theta", "b"};
  CsvWriter csv(file, columns(header));
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    csv.cell(sol.times[k]).cell(sol.rho[k]).cell(sol.w[k]).cell(sol.theta[k]).cell(sol.blocked[k]);
    csv.end_row();
  }
}

void write_regimes_csv(const std::filesystem::path& file, const RegimeIntervals& reg) {
  static constexpr std::array<std::string_view, 3> header{"k", "tau_k", "sigma_k"};
  CsvWriter csv(file, columns(header));
  // Row 0 carries sigma_0 (tau_0 = 0 by convention).
  csv.cell(0LL).cell(0.0).cell(reg.sigma0());
  csv.end_row();
  const auto taus = reg.hitting_times();
  const auto sigmas = reg.exit_times();
  for (std::size_t k = 0; k < taus.size(); ++k) {
    csv.cell(static_cast<long long>(k + 1)).cell(taus[k]).cell(sigmas[k]);
    csv.end_row();
  }
}

void write_overlay_csv(const std::filesystem::path& file, const OverlaySeries& s) {
  static constexpr std::array<std::string_view, 8> header{"time", "rho_n", "rho", "theta_n",
                                                          "theta", "b_n", "b", "congestion_ratio"};
  CsvWriter csv(file, columns(header));
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    csv.cell(s.time[i]).cell(s.rho_n[i]).cell(s.rho[i]).cell(s.theta_n[i]).cell(s.theta[i]).cell(s.b_n[i]).cell(s.b[i]);
    csv.cell(s.congestion_ratio[i]);
    csv.end_row();
  }
}

void write_error_table_csv(const std::filesystem::path& file, const ErrorTable& table) {
  static constexpr std::array<std::string_view, 6> header{"n",           "seed",          "sup_err_rho",
                                                          "sup_err_theta", "sup_err_b", "max_residual_sq_over_bound"};
  CsvWriter csv(file, columns(header));
  for (const ErrorRow& r : table.rows) {
    csv.cell(static_cast<long long>(r.n)).cell(static_cast<long long>(r.seed));
    csv.cell(r.sup_err_rho).cell(r.sup_err_theta).cell(r.sup_err_b).cell(r.max_residual_sq_over_bound);
    csv.end_row();
  }
}

void write_error_summary_csv(const std::filesystem::path& file, const ErrorTable& table) {
  static constexpr std::array<std::string_view, 6> header{"n", "reps", "metric", "q1", "median", "q3"};
  CsvWriter csv(file, columns(header));
  for (const ErrorSummary& s : table.summaries) {
    const std::pair<std::string_view, const Quartiles*> metrics[] = {
        {"sup_err_rho", &s.rho}, {"sup_err_theta", &s.theta}, {"sup_err_b", &s.b},
        {"max_residual_sq_over_bound", &s.residual}};
    for (const auto& [name, q] : metrics) {
      csv.cell(static_cast<long long>(s.n)).cell(static_cast<long long>(s.reps)).cell(name);
      csv.cell(q->q1).cell(q->median).cell(q->q3);
      csv.end_row();
    }
  }
}

void write_residual_csv(const std::filesystem::path& file, const ResidualTable& table) {
  static constexpr std::array<std::string_view, 4> header{"time", "mean_sq_residual", "bound", "ratio"};
  CsvWriter csv(file, columns(header));
  for (const ResidualRow& r : table.rows) {
    csv.cell(r.time).cell(r.mean_sq).cell(r.bound).cell(r.ratio);
    csv.end_row();
  }
}

void write_blocked_csv(const std::filesystem::path& file, const SimPath& path, const FluidSolution& sol,
                       std::span<const double> grid) {
  check_compatible(path, sol);
  static constexpr std::array<std::string_view, 5> header{"time", "b_n", "b", "congestion_ratio_n",
                                                          "congestion_ratio"};
  const Intensity& intensity = sol.config.intensity();
  CsvWriter csv(file, columns(header));
  for (double t : grid) {
    const double offered = intensity.cumulative(t);
    const double bn = path.blocked_fraction(t);
    const double b = fluid_blocked(sol, t);
    csv.cell(t).cell(bn).cell(b);
    csv.cell(offered > 0.0 ? bn / offered : nan());
    csv.cell(offered > 0.0 ? congestion_ratio(sol, intensity, t) : nan());
    csv.end_row();
  }
}

void write_fluid_blocked_csv(const std::filesystem::path& file, const FluidSolution& sol,
                             std::span<const double> grid) {
  static constexpr std::array<std::string_view, 3> header{"time", "b", "congestion_ratio"};
  const Intensity& intensity = sol.config.intensity();
  CsvWriter csv(file, columns(header));
  for (double t : grid) {
    csv.cell(t).cell(fluid_blocked(sol, t));
    csv.cell(intensity.cumulative(t) > 0.0 ? congestion_ratio(sol, intensity, t) : nan());
    csv.end_row();
  }
}

void write_plot_data(const std::filesystem::path& file, std::string_view label, std::span<const double> x,
                     std::span<const double> y) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "# time " << label << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out << format_number(x[i]) << ' ' << format_number(y[i]) << '\n';
  if (!out) throw IoError("write failed: " + file.string());
}

}  // namespace lossfluid
