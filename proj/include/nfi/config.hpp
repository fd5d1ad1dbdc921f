#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfi/scenarios.hpp"

namespace nfi {

using json = nlohmann::json;

/// Schema violation; `path` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(ErrorKind::configuration, path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ScattererBlock {
  double chi0_nm3 = 13.0;
  double a0_nm = 0;
  double resonance_nm = 100;
  std::array<double, 3> position_nm{0, 0, 0};
};

struct PulseBlock {
  double lambda_nm = 1030;
  double tau_fs = 24;
  std::string fluence_mode = "nsc_target";  ///< phi_per_um2 | nsc_target
  double fluence_value = 1;
};

struct DetectorBlock {
  std::string type = "planar";  ///< planar | hemisphere
  double distance_um = 0;       ///< planar detector distance; 0 sweeps the run range
  double radius_um = 0;         ///< hemisphere radius; 0 sweeps the run range
  double solid_angle_over_pi = 1.97;
  int refinement = 1;
};

struct GridBlock {
  double d_over_k0 = 2.5e-3;
  double delta = 3.8e-2;
  double kmax_over_k0 = 1.1e3;
  int band_nodes = 2001;
};

struct RunBlock {
  std::string out_dir;
  std::vector<std::string> gauges{"pzw", "coulomb"};
  bool corrections = false;
  // crb-scan
  double d_min_over_lambda = 0.02;
  double d_max_over_lambda = 10;
  int points_per_decade = 40;
  double finite_a0_nm = 35;
  // qfi-time
  double t_min_over_tau = -3;
  double t_max_over_tau = 5;
  int samples_per_period = 8;
  double lambda2_nm = 0;  ///< second wavelength at fluence scaled by lambda2/lambda; 0 disables
  bool normalize = true;
  // size-scan
  double lambda_over_a0_min = 20;
  double lambda_over_a0_max = 120;
  int sizes = 8;
  // validate
  std::string level = "quick";
};

struct RunConfig {
  std::string preset;
  ScattererBlock scatterer;
  PulseBlock pulse;
  DetectorBlock detector;
  GridBlock grid;
  RunBlock run;
};

namespace detail {

inline json preset_json(const std::string& name) {
  if (name.empty() || name == "fig2") return json::object();
  if (name == "fig3")
    return {{"scatterer", {{"a0_nm", 35.0}}},
            {"pulse", {{"tau_fs", 24.0}, {"lambda_nm", 1030.0}}},
            {"run", {{"lambda2_nm", 4500.0}}}};
  throw ConfigError("preset", "unknown preset '" + name + "' (expected fig2 or fig3)");
}

inline void merge(json& base, const json& patch) {
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object())
      merge(base[it.key()], *it);
    else
      base[it.key()] = *it;
  }
}

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key, "wrong type");
    }
  }

  Reader child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Reader(j_.contains(key) ? j_.at(key) : empty, path_ + "." + key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(path_ + "." + it.key(), "unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

/// Parses "a.b.c=value"; the value is read as JSON when possible and as a string otherwise.
inline void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key.path=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
    if (!node->is_object()) throw ConfigError(key, "cannot descend into a non-object");
  }
  (*node)[parts.back()] = value;
}

}  // namespace detail

inline RunConfig parse_config(const json& input) {
  std::string preset;
  if (input.contains("preset")) {
    if (!input["preset"].is_string()) throw ConfigError("preset", "wrong type");
    preset = input["preset"].get<std::string>();
  }
  json merged = detail::preset_json(preset);
  detail::merge(merged, input);

  RunConfig c;
  c.preset = preset.empty() ? "fig2" : preset;
  detail::Reader root(merged, "config");
  root.get("preset", c.preset);
  {
    auto r = root.child("scatterer");
    auto& b = c.scatterer;
    r.get("chi0_nm3", b.chi0_nm3);
    r.get("a0_nm", b.a0_nm);
    r.get("resonance_nm", b.resonance_nm);
    r.get("position_nm", b.position_nm);
    r.finish();
    detail::require(b.chi0_nm3 > 0, r.path() + ".chi0_nm3", "must be positive");
    detail::require(b.a0_nm >= 0, r.path() + ".a0_nm", "must be non-negative");
    detail::require(b.resonance_nm > 0, r.path() + ".resonance_nm", "must be positive");
  }
  {
    auto r = root.child("pulse");
    auto& b = c.pulse;
    r.get("lambda_nm", b.lambda_nm);
    r.get("tau_fs", b.tau_fs);
    r.get("fluence_mode", b.fluence_mode);
    r.get("fluence_value", b.fluence_value);
    r.finish();
    detail::require(b.lambda_nm > 0, r.path() + ".lambda_nm", "must be positive");
    detail::require(b.tau_fs > 0, r.path() + ".tau_fs", "must be positive");
    detail::require(b.fluence_mode == "phi_per_um2" || b.fluence_mode == "nsc_target", r.path() + ".fluence_mode",
                    "must be phi_per_um2 or nsc_target");
    detail::require(b.fluence_value > 0, r.path() + ".fluence_value", "must be positive");
  }
  {
    auto r = root.child("detector");
    auto& b = c.detector;
    r.get("type", b.type);
    r.get("distance_um", b.distance_um);
    r.get("radius_um", b.radius_um);
    r.get("solid_angle_over_pi", b.solid_angle_over_pi);
    r.get("refinement", b.refinement);
    r.finish();
    detail::require(b.type == "planar" || b.type == "hemisphere", r.path() + ".type", "must be planar or hemisphere");
    const double hi = b.type == "planar" ? 2.0 : 2.0 + 1e-12;
    detail::require(b.solid_angle_over_pi > 0 && b.solid_angle_over_pi < hi, r.path() + ".solid_angle_over_pi",
                    b.type == "planar" ? "must lie in (0, 2)" : "must lie in (0, 2]");
    detail::require(b.distance_um >= 0, r.path() + ".distance_um", "must be non-negative");
    detail::require(b.radius_um >= 0, r.path() + ".radius_um", "must be non-negative");
    detail::require(b.type == "planar" || b.distance_um == 0, r.path() + ".distance_um", "only valid for a planar detector");
    detail::require(b.type == "hemisphere" || b.radius_um == 0, r.path() + ".radius_um", "only valid for a hemisphere");
    detail::require(b.refinement >= 1 && b.refinement <= 64, r.path() + ".refinement", "must lie in [1, 64]");
  }
  {
    auto r = root.child("grid");
    auto& b = c.grid;
    r.get("d_over_k0", b.d_over_k0);
    r.get("delta", b.delta);
    r.get("kmax_over_k0", b.kmax_over_k0);
    r.get("band_nodes", b.band_nodes);
    r.finish();
    detail::require(b.d_over_k0 > 0, r.path() + ".d_over_k0", "must be positive");
    detail::require(b.delta > 0, r.path() + ".delta", "must be positive");
    detail::require(b.kmax_over_k0 > 1, r.path() + ".kmax_over_k0", "must exceed 1");
    detail::require(b.band_nodes >= 101, r.path() + ".band_nodes", "must be at least 101");
  }
  {
    auto r = root.child("run");
    auto& b = c.run;
    r.get("out_dir", b.out_dir);
    r.get("gauges", b.gauges);
    r.get("corrections", b.corrections);
    r.get("d_min_over_lambda", b.d_min_over_lambda);
    r.get("d_max_over_lambda", b.d_max_over_lambda);
    r.get("points_per_decade", b.points_per_decade);
    r.get("finite_a0_nm", b.finite_a0_nm);
    r.get("t_min_over_tau", b.t_min_over_tau);
    r.get("t_max_over_tau", b.t_max_over_tau);
    r.get("samples_per_period", b.samples_per_period);
    r.get("lambda2_nm", b.lambda2_nm);
    r.get("normalize", b.normalize);
    r.get("lambda_over_a0_min", b.lambda_over_a0_min);
    r.get("lambda_over_a0_max", b.lambda_over_a0_max);
    r.get("sizes", b.sizes);
    r.get("level", b.level);
    r.finish();
    for (const auto& g : b.gauges) detail::require(g == "pzw" || g == "coulomb", r.path() + ".gauges", "unknown gauge " + g);
    detail::require(!b.gauges.empty(), r.path() + ".gauges", "must not be empty");
    detail::require(b.d_min_over_lambda > 0 && b.d_max_over_lambda > b.d_min_over_lambda, r.path() + ".d_min_over_lambda",
                    "need 0 < d_min < d_max");
    detail::require(b.points_per_decade >= 1, r.path() + ".points_per_decade", "must be positive");
    detail::require(b.finite_a0_nm >= 0, r.path() + ".finite_a0_nm", "must be non-negative");
    detail::require(b.t_max_over_tau > b.t_min_over_tau, r.path() + ".t_max_over_tau", "must exceed t_min_over_tau");
    detail::require(b.samples_per_period >= 2, r.path() + ".samples_per_period", "must be at least 2");
    detail::require(b.lambda2_nm >= 0, r.path() + ".lambda2_nm", "must be non-negative");
    detail::require(b.lambda_over_a0_min >= 10 && b.lambda_over_a0_max <= 200 &&
                        b.lambda_over_a0_max > b.lambda_over_a0_min,
                    r.path() + ".lambda_over_a0_min", "sizes must lie within [lambda/200, lambda/10]");
    detail::require(b.sizes >= 2, r.path() + ".sizes", "must be at least 2");
    detail::require(b.level == "quick" || b.level == "full", r.path() + ".level", "must be quick or full");
  }
  root.finish();
  return c;
}

inline RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                             const std::string& preset = "") {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::resource, "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      try {
        j = json::parse(text);
      } catch (const json::exception& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
      }
    }
  }
  if (!preset.empty()) j["preset"] = preset;
  for (const auto& o : overrides) detail::apply_override(j, o);
  return parse_config(j);
}

inline json to_json(const RunConfig& c) {
  const auto& s = c.scatterer;
  const auto& p = c.pulse;
  const auto& d = c.detector;
  const auto& g = c.grid;
  const auto& r = c.run;
  return {{"preset", c.preset},
          {"scatterer",
           {{"chi0_nm3", s.chi0_nm3}, {"a0_nm", s.a0_nm}, {"resonance_nm", s.resonance_nm}, {"position_nm", s.position_nm}}},
          {"pulse",
           {{"lambda_nm", p.lambda_nm}, {"tau_fs", p.tau_fs}, {"fluence_mode", p.fluence_mode}, {"fluence_value", p.fluence_value}}},
          {"detector", {{"type", d.type}, {"distance_um", d.distance_um}, {"radius_um", d.radius_um}, {"solid_angle_over_pi", d.solid_angle_over_pi}, {"refinement", d.refinement}}},
          {"grid", {{"d_over_k0", g.d_over_k0}, {"delta", g.delta}, {"kmax_over_k0", g.kmax_over_k0}, {"band_nodes", g.band_nodes}}},
          {"run",
           {{"out_dir", r.out_dir},
            {"gauges", r.gauges},
            {"corrections", r.corrections},
            {"d_min_over_lambda", r.d_min_over_lambda},
            {"d_max_over_lambda", r.d_max_over_lambda},
            {"points_per_decade", r.points_per_decade},
            {"finite_a0_nm", r.finite_a0_nm},
            {"t_min_over_tau", r.t_min_over_tau},
            {"t_max_over_tau", r.t_max_over_tau},
            {"samples_per_period", r.samples_per_period},
            {"lambda2_nm", r.lambda2_nm},
            {"normalize", r.normalize},
            {"lambda_over_a0_min", r.lambda_over_a0_min},
            {"lambda_over_a0_max", r.lambda_over_a0_max},
            {"sizes", r.sizes},
            {"level", r.level}}}};
}

// ---------------------------------------------------------------------------------------------
// Conversion to internal units

struct PhysicalSetup {
  UnitSystem units;
  Scatterer scatterer;
  Pulse pulse;
  double time_unit_fs = 1;
};

/// Builds the internal-unit scatterer and pulse at wavelength `lambda_nm`; `phi_si` overrides
/// the fluence (photons per m^2) when positive.
inline PhysicalSetup physical_setup(const RunConfig& c, double lambda_nm, double phi_si = 0) {
  PhysicalSetup s;
  s.units = UnitSystem::from_wavelength(lambda_nm * 1e-9);
  const auto& u = s.units;
  s.scatterer.chi0 = u.to_internal(c.scatterer.chi0_nm3 * 1e-27, QuantityKind::polarizability);
  s.scatterer.a0 = u.to_internal(c.scatterer.a0_nm * 1e-9, QuantityKind::length);
  for (int i = 0; i < 3; ++i) s.scatterer.r0[i] = u.to_internal(c.scatterer.position_nm[i] * 1e-9, QuantityKind::length);
  s.scatterer.omega0 = u.to_internal(2 * pi * si::c / (c.scatterer.resonance_nm * 1e-9), QuantityKind::frequency);
  s.pulse.k_in = 1;
  s.pulse.tau = u.to_internal(c.pulse.tau_fs * 1e-15, QuantityKind::time);
  if (phi_si > 0) {
    s.pulse.phi = u.to_internal(phi_si, QuantityKind::fluence);
  } else if (c.pulse.fluence_mode == "phi_per_um2") {
    s.pulse.phi = u.to_internal(c.pulse.fluence_value * 1e12, QuantityKind::fluence);
  } else {
    s.pulse.phi = c.pulse.fluence_value / sigma_total(s.scatterer, Pulse{});
  }
  s.time_unit_fs = u.time_unit * 1e15;
  s.scatterer.validate();
  s.pulse.validate();
  return s;
}

inline QuadratureSettings quadrature_settings(const RunConfig& c) {
  QuadratureSettings q;
  q.d_over_k0 = c.grid.d_over_k0;
  q.delta = c.grid.delta;
  q.kmax_over_k0 = c.grid.kmax_over_k0;
  q.band_nodes = std::size_t(c.grid.band_nodes);
  return q;
}

inline std::vector<Gauge> gauges_of(const RunConfig& c) {
  std::vector<Gauge> g;
  for (const auto& name : c.run.gauges) g.push_back(name == "pzw" ? Gauge::pzw : Gauge::coulomb);
  return g;
}

inline CrbSweepConfig crb_sweep_config(const RunConfig& c) {
  const auto ps = physical_setup(c, c.pulse.lambda_nm);
  CrbSweepConfig k;
  k.scatterer = ps.scatterer;
  k.pulse = ps.pulse;
  k.detector = c.detector.type == "planar" ? GeometryKind::planar : GeometryKind::hemisphere;
  k.solid_angle = c.detector.solid_angle_over_pi * pi;
  k.refinement = c.detector.refinement;
  k.d_min = c.run.d_min_over_lambda;
  k.d_max = c.run.d_max_over_lambda;
  k.per_decade = c.run.points_per_decade;
  const double fixed_um = c.detector.type == "planar" ? c.detector.distance_um : c.detector.radius_um;
  if (fixed_um > 0) k.d_min = k.d_max = fixed_um * 1e3 / c.pulse.lambda_nm;
  k.finite_a0 = ps.units.to_internal(c.run.finite_a0_nm * 1e-9, QuantityKind::length);
  return k;
}

inline QfiTimeConfig qfi_time_config(const RunConfig& c) {
  QfiTimeConfig k;
  const auto p1 = physical_setup(c, c.pulse.lambda_nm);
  k.cases.push_back({"", p1.scatterer, p1.pulse, p1.time_unit_fs});
  if (c.run.lambda2_nm > 0) {
    const double phi1 = p1.units.from_internal(p1.pulse.phi, QuantityKind::fluence);
    const auto p2 = physical_setup(c, c.run.lambda2_nm, phi1 * c.run.lambda2_nm / c.pulse.lambda_nm);
    k.cases.push_back({"_l2", p2.scatterer, p2.pulse, p2.time_unit_fs});
  }
  k.quad = quadrature_settings(c);
  k.gauges = gauges_of(c);
  k.corrections = c.run.corrections;
  k.t_min_over_tau = c.run.t_min_over_tau;
  k.t_max_over_tau = c.run.t_max_over_tau;
  k.samples_per_period = c.run.samples_per_period;
  k.normalize = c.run.normalize;
  return k;
}

inline SizeScanConfig size_scan_config(const RunConfig& c) {
  const auto ps = physical_setup(c, c.pulse.lambda_nm);
  SizeScanConfig k;
  k.scatterer = ps.scatterer;
  k.pulse = ps.pulse;
  k.quad = quadrature_settings(c);
  k.gauges = gauges_of(c);
  k.lambda_over_a0_min = c.run.lambda_over_a0_min;
  k.lambda_over_a0_max = c.run.lambda_over_a0_max;
  k.sizes = c.run.sizes;
  return k;
}

}  // namespace nfi
