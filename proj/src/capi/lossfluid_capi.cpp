#include "lossfluid/lossfluid.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "config.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "fluid.hpp"
#include "harness.hpp"
#include "observables.hpp"
#include "runner.hpp"
#include "simulator.hpp"

struct lf_config {
  lossfluid::RunConfig run;
};

struct lf_path {
  lossfluid::SimPath path;
  lossfluid::ModelConfig model;
};

struct lf_fluid {
  lossfluid::FluidSolution sol;
  double tol_pin;
};

struct lf_regimes {
  lossfluid::RegimeIntervals reg;
  lossfluid::ModelConfig model;
};

namespace {

thread_local std::string last_error;

lf_status fail(lf_status status, const char* what) {
  last_error = what;
  return status;
}

// Maps the core exception hierarchy onto status codes.
template <typename Fn>
lf_status guard(Fn&& fn) {
  try {
    fn();
    return LF_OK;
  } catch (const lossfluid::UndefinedRatio& e) {
    return fail(LF_ERR_UNDEFINED_RATIO, e.what());
  } catch (const lossfluid::DomainError& e) {
    return fail(LF_ERR_DOMAIN, e.what());
  } catch (const lossfluid::ValidationError& e) {
    return fail(LF_ERR_VALIDATION, e.what());
  } catch (const lossfluid::ParseError& e) {
    return fail(LF_ERR_PARSE, e.what());
  } catch (const lossfluid::UnsupportedConfiguration& e) {
    return fail(LF_ERR_UNSUPPORTED, e.what());
  } catch (const lossfluid::IoError& e) {
    return fail(LF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LF_ERR_INTERNAL, "unknown error");
  }
}

#define LF_REQUIRE(ptr) \
  if ((ptr) == nullptr) return fail(LF_ERR_NULL_ARGUMENT, #ptr " is NULL")

template <typename Handle, typename Fn>
lf_status query(const Handle* h, double* out, Fn&& fn) {
  LF_REQUIRE(h);
  LF_REQUIRE(out);
  return guard([&] { *out = fn(*h); });
}

}  // namespace

extern "C" {

const char* lf_version(void) { return "1.0.0"; }

const char* lf_status_name(lf_status status) {
  switch (status) {
    case LF_OK:
      return "ok";
    case LF_ERR_DOMAIN:
      return "domain error";
    case LF_ERR_VALIDATION:
      return "validation error";
    case LF_ERR_PARSE:
      return "parse error";
    case LF_ERR_UNSUPPORTED:
      return "unsupported configuration";
    case LF_ERR_UNDEFINED_RATIO:
      return "undefined ratio";
    case LF_ERR_IO:
      return "i/o error";
    case LF_ERR_NULL_ARGUMENT:
      return "null argument";
    case LF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* lf_last_error(void) { return last_error.c_str(); }

lf_status lf_config_load(const char* file, lf_config** out) {
  LF_REQUIRE(file);
  LF_REQUIRE(out);
  return guard([&] { *out = new lf_config{lossfluid::parse_config(file)}; });
}

lf_status lf_config_parse(const char* yaml_text, lf_config** out) {
  LF_REQUIRE(yaml_text);
  LF_REQUIRE(out);
  return guard([&] { *out = new lf_config{lossfluid::parse_config_text(yaml_text)}; });
}

void lf_config_free(lf_config* config) { delete config; }

lf_status lf_config_horizon(const lf_config* config, double* out) {
  return query(config, out, [](const lf_config& c) { return c.run.model.horizon(); });
}

lf_status lf_config_step(const lf_config* config, double* out) {
  return query(config, out, [](const lf_config& c) { return c.run.step; });
}

lf_status lf_config_tol_pin(const lf_config* config, double* out) {
  return query(config, out, [](const lf_config& c) { return c.run.tol_pin; });
}

lf_status lf_config_output_dir(const lf_config* config, const char** out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  *out = config->run.output_dir.c_str();
  return LF_OK;
}

lf_status lf_config_capacity_count(const lf_config* config, size_t* out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  *out = config->run.n_list.size();
  return LF_OK;
}

lf_status lf_config_capacity(const lf_config* config, size_t index, int* out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  if (index >= config->run.n_list.size()) return fail(LF_ERR_DOMAIN, "capacity index out of range");
  *out = config->run.n_list[index];
  return LF_OK;
}

lf_status lf_simulate(const lf_config* config, int capacity, uint64_t seed, lf_path** out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  return guard([&] {
    auto model = config->run.model.with_capacity(capacity);
    auto path = lossfluid::simulate(model, seed);
    *out = new lf_path{std::move(path), std::move(model)};
  });
}

void lf_path_free(lf_path* path) { delete path; }

lf_status lf_path_event_count(const lf_path* path, size_t* out) {
  LF_REQUIRE(path);
  LF_REQUIRE(out);
  *out = path->path.events().size();
  return LF_OK;
}

lf_status lf_path_blocked_count(const lf_path* path, size_t* out) {
  LF_REQUIRE(path);
  LF_REQUIRE(out);
  *out = path->path.blocked_count();
  return LF_OK;
}

lf_status lf_path_occupancy(const lf_path* path, double t, double* out) {
  return query(path, out, [t](const lf_path& p) { return p.path.occupancy_at(t); });
}

lf_status lf_path_integrated(const lf_path* path, double t, double* out) {
  return query(path, out, [t](const lf_path& p) { return p.path.integrated(t); });
}

lf_status lf_path_blocked(const lf_path* path, double t, double* out) {
  return query(path, out, [t](const lf_path& p) { return p.path.blocked_fraction(t); });
}

lf_status lf_path_idleness(const lf_path* path, double t, double* out) {
  return query(path, out, [t](const lf_path& p) { return lossfluid::idleness(p.path, t); });
}

lf_status lf_path_residual(const lf_path* path, double t, double* out) {
  return query(path, out, [t](const lf_path& p) { return lossfluid::martingale_residual(p.path, p.model, t); });
}

lf_status lf_path_write_events(const lf_path* path, const char* file) {
  LF_REQUIRE(path);
  LF_REQUIRE(file);
  return guard([&] { lossfluid::write_events_csv(file, path->path); });
}

lf_status lf_fluid_solve(const lf_config* config, double step, lf_fluid** out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  return guard([&] {
    const double h = step > 0.0 ? step : config->run.step;
    *out = new lf_fluid{lossfluid::solve(config->run.model, h), config->run.tol_pin};
  });
}

lf_status lf_fluid_solve_mollified(const lf_config* config, double step, double width, lf_fluid** out) {
  LF_REQUIRE(config);
  LF_REQUIRE(out);
  return guard([&] {
    const double h = step > 0.0 ? step : config->run.step;
    *out = new lf_fluid{lossfluid::solve_mollified(config->run.model, h, width), config->run.tol_pin};
  });
}

void lf_fluid_free(lf_fluid* fluid) { delete fluid; }

lf_status lf_fluid_mesh_size(const lf_fluid* fluid, size_t* out) {
  LF_REQUIRE(fluid);
  LF_REQUIRE(out);
  *out = fluid->sol.times.size();
  return LF_OK;
}

lf_status lf_fluid_rho(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out, [t](const lf_fluid& f) { return f.sol.rho_at(t); });
}

lf_status lf_fluid_integrated(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out, [t](const lf_fluid& f) { return lossfluid::fluid_integrated(f.sol, t); });
}

lf_status lf_fluid_integrated_explicit(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out, [t](const lf_fluid& f) { return lossfluid::fluid_integrated_explicit(f.sol, t); });
}

lf_status lf_fluid_blocked(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out, [t](const lf_fluid& f) { return lossfluid::fluid_blocked(f.sol, t); });
}

lf_status lf_fluid_congestion_ratio(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out,
               [t](const lf_fluid& f) { return lossfluid::congestion_ratio(f.sol, f.sol.config.intensity(), t); });
}

lf_status lf_fluid_idleness(const lf_fluid* fluid, double t, double* out) {
  return query(fluid, out, [t](const lf_fluid& f) { return lossfluid::idleness(f.sol, t); });
}

lf_status lf_fluid_write_csv(const lf_fluid* fluid, const char* file) {
  LF_REQUIRE(fluid);
  LF_REQUIRE(file);
  return guard([&] { lossfluid::write_fluid_csv(file, fluid->sol); });
}

lf_status lf_sup_error(const lf_path* path, const lf_fluid* fluid, double* out) {
  LF_REQUIRE(path);
  LF_REQUIRE(fluid);
  LF_REQUIRE(out);
  return guard([&] { *out = lossfluid::sup_error(path->path, fluid->sol, {}); });
}

lf_status lf_regimes_compute(const lf_fluid* fluid, double tol_pin, lf_regimes** out) {
  LF_REQUIRE(fluid);
  LF_REQUIRE(out);
  return guard([&] {
    const double tol = tol_pin > 0.0 ? tol_pin : fluid->tol_pin;
    *out = new lf_regimes{lossfluid::regimes(fluid->sol, tol), fluid->sol.config};
  });
}

void lf_regimes_free(lf_regimes* regimes) { delete regimes; }

lf_status lf_regimes_sigma0(const lf_regimes* regimes, double* out) {
  return query(regimes, out, [](const lf_regimes& r) { return r.reg.sigma0(); });
}

lf_status lf_regimes_count(const lf_regimes* regimes, size_t* out) {
  LF_REQUIRE(regimes);
  LF_REQUIRE(out);
  *out = regimes->reg.hitting_times().size();
  return LF_OK;
}

lf_status lf_regimes_get(const lf_regimes* regimes, size_t k, double* tau, double* sigma) {
  LF_REQUIRE(regimes);
  LF_REQUIRE(tau);
  LF_REQUIRE(sigma);
  const auto taus = regimes->reg.hitting_times();
  if (k == 0 || k > taus.size()) return fail(LF_ERR_DOMAIN, "regime index out of range");
  *tau = taus[k - 1];
  *sigma = regimes->reg.exit_times()[k - 1];
  return LF_OK;
}

lf_status lf_regimes_reconstruct(const lf_regimes* regimes, double t, double* out) {
  return query(regimes, out,
               [t](const lf_regimes& r) { return lossfluid::reconstruct_from_regimes(r.reg, r.model, t); });
}

lf_status lf_regimes_write_csv(const lf_regimes* regimes, const char* file) {
  LF_REQUIRE(regimes);
  LF_REQUIRE(file);
  return guard([&] { lossfluid::write_regimes_csv(file, regimes->reg); });
}

lf_status lf_run(const lf_config* config, lf_subcommand command, const char* output_dir, int emit_plot_data,
                 char** summary) {
  LF_REQUIRE(config);
  LF_REQUIRE(output_dir);
  if (command < LF_CMD_SIMULATE || command > LF_CMD_BLOCKED) return fail(LF_ERR_DOMAIN, "unknown subcommand");
  return guard([&] {
    lossfluid::RunOptions options;
    options.output_dir = output_dir;
    options.emit_plot_data = emit_plot_data != 0;
    const auto report = lossfluid::run(static_cast<lossfluid::Subcommand>(command), config->run, options);
    if (summary != nullptr) {
      auto* text = static_cast<char*>(std::malloc(report.summary.size() + 1));
      if (text == nullptr) throw std::bad_alloc();
      std::memcpy(text, report.summary.c_str(), report.summary.size() + 1);
      *summary = text;
    }
  });
}

void lf_string_free(char* text) { std::free(text); }

}  // extern "C"
