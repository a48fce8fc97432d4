#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "errors.hpp"
#include "fluid.hpp"

namespace lossfluid {

namespace {

class Reader {
 public:
  explicit Reader(std::filesystem::path origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) const {
    throw ParseError(locate(node, field, what));
  }

  // Well-formed value that violates a model constraint.
  [[noreturn]] void invalid(const YAML::Node& node, const std::string& field, const std::string& what) const {
    throw ValidationError(locate(node, field, what));
  }

  [[nodiscard]] std::string locate(const YAML::Node& node, const std::string& field, const std::string& what) const {
    std::ostringstream msg;
    msg << origin_.string();
    if (node.IsDefined() && node.Mark().line >= 0) msg << ":" << node.Mark().line + 1;
    msg << ": field '" << field << "': " << what;
    return msg.str();
  }

  void only_keys(const YAML::Node& map, const std::string& path, std::set<std::string> allowed) const {
    if (!map.IsMap()) fail(map, path.empty() ? "<root>" : path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail(kv.first, join(path, key), "unknown key");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  // Plain numbers, or fractions such as 2/3.
  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined() || node.IsNull()) fail(node, field, "missing");
    if (!node.IsScalar()) fail(node, field, "expected a number");
    const std::string text = node.Scalar();
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return parse_double(text);
      const double num = parse_double(text.substr(0, slash));
      const double den = parse_double(text.substr(slash + 1));
      if (den == 0.0) fail(node, field, "zero denominator");
      return num / den;
    } catch (const std::logic_error&) {
      fail(node, field, "'" + text + "' is not a number");
    }
  }

  double number_or(const YAML::Node& map, const std::string& key, const std::string& path, double fallback) const {
    const YAML::Node node = map[key];
    return node.IsDefined() ? number(node, join(path, key)) : fallback;
  }

  long long integer(const YAML::Node& node, const std::string& field) const {
    const double v = number(node, field);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail(node, field, "expected an integer");
    return static_cast<long long>(v);
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined()) fail(node, field, "missing");
    if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined() || !node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  Intensity intensity(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined()) fail(node, field, "missing");
    if (!node.IsMap()) fail(node, field, "expected a mapping with 'kind'");
    const std::string kind = text(node["kind"], join(field, "kind"));
    return guarded(node, field, [&] {
      if (kind == "constant") {
        only_keys(node, field, {"kind", "rate"});
        return Intensity::constant(number(node["rate"], join(field, "rate")));
      }
      if (kind == "sinusoidal") {
        only_keys(node, field, {"kind", "base", "amplitude", "period"});
        return Intensity::sinusoidal(number(node["base"], join(field, "base")),
                                     number(node["amplitude"], join(field, "amplitude")),
                                     number(node["period"], join(field, "period")));
      }
      if (kind == "piecewise") {
        only_keys(node, field, {"kind", "breakpoints", "rates"});
        return Intensity::piecewise(numbers(node["breakpoints"], join(field, "breakpoints")),
                                    numbers(node["rates"], join(field, "rates")));
      }
      if (kind == "table") {
        only_keys(node, field, {"kind", "times", "rates"});
        return Intensity::table(numbers(node["times"], join(field, "times")),
                                numbers(node["rates"], join(field, "rates")));
      }
      fail(node["kind"], join(field, "kind"), "unknown intensity kind '" + kind + "'");
    });
  }

  Lifetime lifetime(const YAML::Node& node, const std::string& field) const {
    if (!node.IsDefined()) fail(node, field, "missing");
    if (!node.IsMap()) fail(node, field, "expected a mapping with 'kind'");
    const std::string kind = text(node["kind"], join(field, "kind"));
    return guarded(node, field, [&] {
      if (kind == "exponential") {
        only_keys(node, field, {"kind", "rate"});
        return Lifetime::exponential(number(node["rate"], join(field, "rate")));
      }
      if (kind == "deterministic") {
        only_keys(node, field, {"kind", "value"});
        return Lifetime::deterministic(number(node["value"], join(field, "value")));
      }
      if (kind == "lognormal") {
        only_keys(node, field, {"kind", "location", "scale"});
        return Lifetime::lognormal(number(node["location"], join(field, "location")),
                                   number(node["scale"], join(field, "scale")));
      }
      if (kind == "weibull") {
        only_keys(node, field, {"kind", "shape", "scale"});
        return Lifetime::weibull(number(node["shape"], join(field, "shape")),
                                 number(node["scale"], join(field, "scale")));
      }
      if (kind == "empirical") {
        only_keys(node, field, {"kind", "file", "samples"});
        if (node["samples"].IsDefined()) return Lifetime::empirical(numbers(node["samples"], join(field, "samples")));
        std::filesystem::path file = text(node["file"], join(field, "file"));
        if (file.is_relative() && origin_.has_parent_path()) file = origin_.parent_path() / file;
        return Lifetime::empirical_from_file(file);
      }
      fail(node["kind"], join(field, "kind"), "unknown lifetime kind '" + kind + "'");
    });
  }

  // Re-throws model validation failures with the field and location attached.
  template <typename Build>
  std::invoke_result_t<Build> guarded(const YAML::Node& node, const std::string& field, Build&& build) const {
    try {
      return build();
    } catch (const ValidationError& e) {
      throw ValidationError(locate(node, field, e.what()));
    }
  }

  [[nodiscard]] const std::filesystem::path& origin() const { return origin_; }

 private:
  static double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  }

  std::filesystem::path origin_;
};

RunConfig build(const YAML::Node& root, const std::filesystem::path& origin) {
  Reader in(origin);
  in.only_keys(root, "", {"horizon", "r0", "intensity", "service", "initial_service", "solver", "harness",
                          "output_dir"});

  const double horizon = in.number(root["horizon"], "horizon");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) in.invalid(root["horizon"], "horizon", "must be > 0");
  const double r0 = in.number_or(root, "r0", "", 0.0);
  if (!(r0 >= 0.0 && r0 <= 1.0)) in.invalid(root["r0"], "r0", "must lie in [0, 1]");

  Intensity intensity = in.intensity(root["intensity"], "intensity");
  Lifetime service = in.lifetime(root["service"], "service");
  std::optional<Lifetime> initial;
  if (root["initial_service"].IsDefined()) initial = in.lifetime(root["initial_service"], "initial_service");

  std::vector<int> n_list{20, 200};
  int reps = 50;
  std::uint64_t base_seed = 1;
  std::size_t grid_points = 400;
  int residual_reps = 200;
  std::size_t residual_points = 40;
  if (const YAML::Node h = root["harness"]; h.IsDefined()) {
    in.only_keys(h, "harness", {"n_list", "reps", "base_seed", "grid_points", "residual_reps", "residual_points"});
    if (h["n_list"].IsDefined()) {
      n_list.clear();
      const auto values = in.numbers(h["n_list"], "harness.n_list");
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (v != std::floor(v) || v <= 0.0 || v > 1e9) {
          throw ValidationError(origin.string() + ": field 'harness.n_list': capacities must be positive integers");
        }
        if (!n_list.empty() && v <= n_list.back()) {
          throw ValidationError(origin.string() + ": field 'harness.n_list': must be increasing");
        }
        n_list.push_back(static_cast<int>(v));
      }
      if (n_list.empty()) throw ValidationError(origin.string() + ": field 'harness.n_list': empty");
    }
    if (h["reps"].IsDefined()) reps = static_cast<int>(in.integer(h["reps"], "harness.reps"));
    if (h["base_seed"].IsDefined()) base_seed = static_cast<std::uint64_t>(in.integer(h["base_seed"], "harness.base_seed"));
    if (h["grid_points"].IsDefined()) grid_points = static_cast<std::size_t>(in.integer(h["grid_points"], "harness.grid_points"));
    if (h["residual_reps"].IsDefined()) residual_reps = static_cast<int>(in.integer(h["residual_reps"], "harness.residual_reps"));
    if (h["residual_points"].IsDefined()) {
      residual_points = static_cast<std::size_t>(in.integer(h["residual_points"], "harness.residual_points"));
    }
    if (reps < 1) throw ValidationError(origin.string() + ": field 'harness.reps': must be >= 1");
    if (grid_points < 1) throw ValidationError(origin.string() + ": field 'harness.grid_points': must be >= 1");
    if (residual_points < 1) throw ValidationError(origin.string() + ": field 'harness.residual_points': must be >= 1");
  }

  ModelConfig model = in.guarded(root, "model", [&] {
    return ModelConfig::make(std::move(intensity), std::move(service), std::move(initial), r0, horizon, n_list.front());
  });

  double step = horizon / kDefaultMeshDivisions;
  std::optional<double> mollifier;
  std::optional<double> tol_pin;
  if (const YAML::Node s = root["solver"]; s.IsDefined()) {
    in.only_keys(s, "solver", {"step", "mollifier", "tol_pin"});
    if (s["step"].IsDefined()) {
      step = in.number(s["step"], "solver.step");
      if (!(step > 0.0) || step > horizon / 10.0) in.invalid(s["step"], "solver.step", "must lie in (0, T/10]");
    }
    if (s["mollifier"].IsDefined()) {
      mollifier = in.number(s["mollifier"], "solver.mollifier");
      if (!(*mollifier > 0.0 && *mollifier < 1.0)) in.invalid(s["mollifier"], "solver.mollifier", "must lie in (0, 1)");
    }
    if (s["tol_pin"].IsDefined()) {
      tol_pin = in.number(s["tol_pin"], "solver.tol_pin");
      if (!(*tol_pin > 0.0 && *tol_pin <= 0.1)) in.invalid(s["tol_pin"], "solver.tol_pin", "must lie in (0, 0.1]");
    }
  }

  std::string output_dir;
  if (root["output_dir"].IsDefined()) output_dir = in.text(root["output_dir"], "output_dir");

  return RunConfig{std::move(model), step, mollifier, tol_pin.value_or(std::min(0.1, 10.0 * step)), std::move(n_list),
                   reps, base_seed, grid_points, residual_reps, residual_points, std::move(output_dir), origin};
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(origin.string() + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsDefined() || root.IsNull()) throw ParseError(origin.string() + ": empty config");
  try {
    return build(root, origin);
  } catch (const YAML::Exception& e) {
    throw ParseError(origin.string() + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), file);
}

}  // namespace lossfluid
