#include "fqc/app/config.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <tomlplusplus/toml.hpp>

namespace fqc::app {

namespace {

constexpr std::array<const char*, 8> kTaskNames = {"spectrum", "solve",  "continue", "diagnose",
                                                   "flatness", "degree", "verify",   "certify"};

/// Table reader that remembers which keys were consumed so leftovers can be rejected.
class Section {
 public:
  Section(const toml::table* t, std::string name) : t_(t), name_(std::move(name)) {}

  template <class T>
  void get(const char* key, T& out) {
    const toml::node* node = find(key);
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
      auto v = node->value_exact<bool>();
      if (!v) fail(key, "a boolean");
      out = *v;
    } else if constexpr (std::is_integral_v<T>) {
      auto v = node->value_exact<std::int64_t>();
      if (!v) fail(key, "an integer");
      out = static_cast<T>(*v);
    } else if constexpr (std::is_floating_point_v<T>) {
      auto v = node->value<double>();
      if (!v || node->is_boolean()) fail(key, "a number");
      out = *v;
    } else if constexpr (std::is_same_v<T, std::string>) {
      auto v = node->value_exact<std::string>();
      if (!v) fail(key, "a string");
      out = *v;
    } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
      auto v = node->value_exact<std::string>();
      if (!v) fail(key, "a path string");
      out = *v;
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      const toml::array* arr = node->as_array();
      if (!arr) fail(key, "an array of numbers");
      out.clear();
      for (const toml::node& e : *arr) {
        auto v = e.value<double>();
        if (!v || e.is_boolean()) fail(key, "an array of numbers");
        out.push_back(*v);
      }
    }
  }

  const toml::array* array(const char* key) {
    const toml::node* node = find(key);
    if (!node) return nullptr;
    const toml::array* arr = node->as_array();
    if (!arr) fail(key, "an array");
    return arr;
  }

  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_) {
      if (!used_.count(std::string(k.str())))
        throw ConfigError(fmt::format("unknown key '{}' in [{}]", k.str(), name_));
    }
  }

 private:
  const toml::node* find(const char* key) {
    if (!t_) return nullptr;
    used_.insert(key);
    return t_->get(key);
  }
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError(fmt::format("[{}] {} must be {}", name_, key, what));
  }

  const toml::table* t_;
  std::string name_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

std::string to_string(Task t) { return kTaskNames[static_cast<int>(t)]; }

Task task_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i)
    if (name == kTaskNames[i]) return static_cast<Task>(i);
  throw ConfigError("unknown task '" + name + "'");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("config parse error at line {}: {}", e.source().begin.line,
                                  e.description()));
  }
  static const std::set<std::string> tables = {"run",     "problem", "curvature",   "solve",
                                               "continue", "diagnostics", "degree", "flatness",
                                               "spectrum", "output"};
  for (const auto& [k, v] : root) {
    if (!tables.count(std::string(k.str())))
      throw ConfigError(fmt::format("unknown table [{}]", k.str()));
    if (!v.is_table()) throw ConfigError(fmt::format("[{}] must be a table", k.str()));
  }
  auto table = [&](const char* name) { return root[name].as_table(); };

  RunConfig cfg;
  {
    Section s(table("run"), "run");
    std::string task;
    s.get("task", task);
    if (!task.empty()) cfg.task = task_from_string(task);
    std::int64_t seed = 0;
    s.get("seed", seed);
    if (seed < 0) throw ConfigError("[run] seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    s.get("threads", cfg.threads);
    s.finish();
  }
  {
    Section s(table("problem"), "problem");
    s.get("n", cfg.n);
    s.get("sigma", cfg.sigma);
    s.get("resolution", cfg.resolution);
    s.get("degree", cfg.degree);
    s.get("kernel_degree", cfg.kernel_degree);
    s.finish();
  }
  {
    CurvatureConfig& c = cfg.curvature;
    Section s(table("curvature"), "curvature");
    s.get("builtin", c.builtin);
    s.get("value", c.value);
    s.get("epsilon", c.epsilon);
    s.get("axis", c.axis);
    s.get("amplitude", c.amplitude);
    s.get("beta", c.beta);
    s.get("r0", c.r0);
    s.get("file", c.file);
    c.file = resolve(c.file, base_dir);
    if (const toml::array* pts = s.array("points")) {
      for (const toml::node& e : *pts) {
        const toml::table* pt = e.as_table();
        if (!pt) throw ConfigError("[[curvature.points]] entries must be tables");
        Section ps(pt, "curvature.points");
        CurvaturePoint cp;
        ps.get("pole", cp.pole);
        ps.get("beta", cp.beta);
        ps.get("a", cp.a);
        ps.finish();
        c.points.push_back(std::move(cp));
      }
    }
    s.finish();
  }
  {
    SolveConfig& c = cfg.solve;
    Section s(table("solve"), "solve");
    s.get("tau", c.tau);
    s.get("tol", c.tol);
    s.get("max_iters", c.max_iters);
    s.get("damping", c.damping);
    s.get("normalization", c.normalization);
    s.get("init", c.init);
    s.get("init_pole", c.init_pole);
    s.get("init_t", c.init_t);
    s.get("init_file", c.init_file);
    c.init_file = resolve(c.init_file, base_dir);
    s.finish();
  }
  {
    Section s(table("continue"), "continue");
    s.get("schedule", cfg.cont.schedule);
    s.get("pohozaev", cfg.cont.pohozaev);
    s.finish();
  }
  {
    DiagnosticsConfig& c = cfg.diag;
    Section s(table("diagnostics"), "diagnostics");
    s.get("R_fit", c.R_fit);
    s.get("harnack_r", c.harnack_r);
    s.get("pohozaev_R", c.pohozaev_R);
    s.get("pair_radii", c.pair_radii);
    s.get("pair_min_m", c.pair_min_m);
    s.get("field", c.field);
    c.field = resolve(c.field, base_dir);
    s.finish();
  }
  {
    DegreeConfig& c = cfg.degree_opts;
    Section s(table("degree"), "degree");
    s.get("t_star", c.t_star);
    s.get("t_sweep", c.t_sweep);
    s.get("seeds", c.seeds);
    s.get("boundary_lat", c.boundary_lat);
    s.get("boundary_lon", c.boundary_lon);
    s.get("sample_resolution", c.sample_resolution);
    s.finish();
  }
  {
    FlatnessConfig& c = cfg.flatness;
    Section s(table("flatness"), "flatness");
    s.get("radial", c.radial);
    s.get("angular", c.angular);
    s.get("tol", c.tol);
    s.get("max_refinements", c.max_refinements);
    s.get("extent", c.extent);
    s.get("per_axis", c.per_axis);
    s.finish();
  }
  {
    Section s(table("spectrum"), "spectrum");
    s.get("k_max", cfg.k_max);
    s.finish();
  }
  {
    Section s(table("output"), "output");
    s.get("dir", cfg.out_dir);
    cfg.out_dir = resolve(cfg.out_dir, base_dir);
    s.finish();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void validate(const RunConfig& cfg) {
  (void)cfg.params();  // admissible (n, σ)
  if (cfg.n != 2 && cfg.n != 3) throw ConfigError("n must be 2 or 3");
  if (cfg.resolution < 4) throw ConfigError("[problem] resolution must be at least 4");
  if (cfg.degree >= cfg.resolution)
    throw ConfigError("[problem] degree must be below the resolution");
  if (cfg.kernel_degree >= 2 * cfg.resolution)
    throw ConfigError("[problem] kernel_degree must be below 2·resolution");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.k_max < 0) throw ConfigError("[spectrum] k_max must be non-negative");

  static const std::set<std::string> builtins = {"constant",      "linear-x",   "quadratic-poly",
                                                 "flatness-demo", "morse-demo", "grid"};
  const CurvatureConfig& c = cfg.curvature;
  if (!builtins.count(c.builtin)) throw ConfigError("unknown curvature builtin '" + c.builtin + "'");
  if (c.builtin == "constant" && !(c.value > 0.0))
    throw ConfigError("[curvature] value must be positive");
  if (c.builtin == "morse-demo" && cfg.n != 2) throw ConfigError("morse-demo requires n = 2");
  if (c.builtin == "flatness-demo") {
    if (c.points.empty()) throw ConfigError("flatness-demo needs [[curvature.points]]");
    for (const CurvaturePoint& p : c.points) {
      if (static_cast<int>(p.pole.size()) != cfg.n + 1)
        throw ConfigError("curvature point pole must have n+1 coordinates");
      if (static_cast<int>(p.a.size()) != cfg.n)
        throw ConfigError("curvature point coefficients a must have n entries");
      const double b = p.beta < 0.0 ? c.beta : p.beta;
      if (!(b >= cfg.n - 2.0 * cfg.sigma - 1e-12 && b < cfg.n))
        throw ConfigError("flatness-demo beta must lie in [n−2σ, n)");
    }
  }
  if (c.builtin == "linear-x" && (c.axis < -1 || c.axis > cfg.n))
    throw ConfigError("[curvature] axis out of range");
  if (c.builtin == "grid" && !std::filesystem::exists(c.file))
    throw ConfigError("curvature file not found: " + c.file.string());

  const SolveConfig& s = cfg.solve;
  if (!(s.tol > 0.0)) throw ConfigError("[solve] tol must be positive");
  if (!(s.damping > 0.0 && s.damping <= 1.0)) throw ConfigError("[solve] damping must be in (0, 1]");
  if (s.max_iters < 1) throw ConfigError("[solve] max_iters must be positive");
  if (s.normalization != "max-one" && s.normalization != "energy")
    throw ConfigError("[solve] normalization must be max-one or energy");
  if (s.init != "constant" && s.init != "bubble" && s.init != "file")
    throw ConfigError("[solve] init must be constant, bubble or file");
  if (s.init == "bubble" && !s.init_pole.empty() && static_cast<int>(s.init_pole.size()) != cfg.n + 1)
    throw ConfigError("[solve] init_pole must have n+1 coordinates");
  if (s.init == "bubble" && !(s.init_t > 0.0)) throw ConfigError("[solve] init_t must be positive");
  if (s.init == "file" && !std::filesystem::exists(s.init_file))
    throw ConfigError("initial field file not found: " + s.init_file.string());
  if (!(s.tau >= 0.0 && s.tau < cfg.params().critical_exponent() - 1.0))
    throw ConfigError("[solve] tau must satisfy 0 ≤ tau < p_c − 1");

  if (cfg.cont.schedule.empty()) throw ConfigError("[continue] schedule is empty");
  if (!cfg.diag.field.empty() && !std::filesystem::exists(cfg.diag.field))
    throw ConfigError("diagnostics field not found: " + cfg.diag.field.string());
  if (!(cfg.diag.R_fit > 0.0 && cfg.diag.harnack_r > 0.0 && cfg.diag.pohozaev_R > 0.0))
    throw ConfigError("[diagnostics] radii must be positive");

  const DegreeConfig& d = cfg.degree_opts;
  if (!(d.t_star > 1.0)) throw ConfigError("[degree] t_star must exceed 1");
  for (double t : d.t_sweep)
    if (!(t > 1.0)) throw ConfigError("[degree] t_sweep entries must exceed 1");
  if (d.seeds < 2 || d.boundary_lat < 4 || d.boundary_lon < 8 || d.sample_resolution < 4)
    throw ConfigError("[degree] sampling sizes too small");

  const FlatnessConfig& f = cfg.flatness;
  if (f.radial < 4 || f.angular < 4 || !(f.tol > 0.0) || f.max_refinements < 0 || !(f.extent > 0.0) || f.per_axis < 1)
    throw ConfigError("[flatness] invalid quadrature settings");
}

std::string canonical_text(const RunConfig& cfg) {
  using nlohmann::json;
  json j;
  j["task"] = to_string(cfg.task);
  j["problem"] = {{"n", cfg.n},
                  {"sigma", cfg.sigma},
                  {"resolution", cfg.resolution},
                  {"degree", cfg.degree},
                  {"kernel_degree", cfg.kernel_degree}};
  const CurvatureConfig& c = cfg.curvature;
  json pts = json::array();
  for (const CurvaturePoint& p : c.points) pts.push_back({{"pole", p.pole}, {"beta", p.beta}, {"a", p.a}});
  j["curvature"] = {{"builtin", c.builtin}, {"value", c.value},         {"epsilon", c.epsilon},
                    {"axis", c.axis},       {"amplitude", c.amplitude}, {"beta", c.beta},
                    {"r0", c.r0},           {"points", pts},            {"file", c.file.string()}};
  const SolveConfig& s = cfg.solve;
  j["solve"] = {{"tau", s.tau},
                {"tol", s.tol},
                {"max_iters", s.max_iters},
                {"damping", s.damping},
                {"normalization", s.normalization},
                {"init", s.init},
                {"init_pole", s.init_pole},
                {"init_t", s.init_t},
                {"init_file", s.init_file.string()}};
  j["continue"] = {{"schedule", cfg.cont.schedule}, {"pohozaev", cfg.cont.pohozaev}};
  j["diagnostics"] = {{"R_fit", cfg.diag.R_fit},
                      {"harnack_r", cfg.diag.harnack_r},
                      {"pohozaev_R", cfg.diag.pohozaev_R},
                      {"pair_radii", cfg.diag.pair_radii},
                      {"pair_min_m", cfg.diag.pair_min_m},
                      {"field", cfg.diag.field.string()}};
  const DegreeConfig& d = cfg.degree_opts;
  j["degree"] = {{"t_star", d.t_star},
                 {"t_sweep", d.t_sweep},
                 {"seeds", d.seeds},
                 {"boundary_lat", d.boundary_lat},
                 {"boundary_lon", d.boundary_lon},
                 {"sample_resolution", d.sample_resolution}};
  const FlatnessConfig& f = cfg.flatness;
  j["flatness"] = {{"radial", f.radial},
                   {"angular", f.angular},
                   {"tol", f.tol},
                   {"max_refinements", f.max_refinements},
                   {"extent", f.extent},
                   {"per_axis", f.per_axis}};
  j["spectrum"] = {{"k_max", cfg.k_max}};
  j["seed"] = cfg.seed;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace fqc::app
