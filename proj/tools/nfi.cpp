#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "nfi/config.hpp"
#include "nfi/output.hpp"

namespace {

enum Exit { ok = 0, validation_failed = 1, config_error = 2, physics_error = 3, resource_error = 4 };

int exit_code(nfi::ErrorKind kind) {
  switch (kind) {
    case nfi::ErrorKind::configuration:
    case nfi::ErrorKind::geometry: return config_error;
    case nfi::ErrorKind::physics:
    case nfi::ErrorKind::accuracy:
    case nfi::ErrorKind::degeneracy: return physics_error;
    case nfi::ErrorKind::resource: return resource_error;
  }
  return physics_error;
}

struct Options {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string out;
  std::string level;
};

std::filesystem::path out_dir(const Options& o, const nfi::RunConfig& c, const std::string& sub) {
  if (!o.out.empty()) return o.out;
  if (!c.run.out_dir.empty()) return c.run.out_dir;
  return "nfi-" + sub;
}

void print_fits(const nfi::SweepResult& r) {
  for (const auto& f : r.fits)
    std::printf("fit %-22s exponent %+.4f  residual %.2e  points %zu%s\n", f.name.c_str(), f.exponent, f.residual,
                f.points, f.excluded_largest ? " (two largest sizes excluded)" : "");
}

void print_metadata(const nfi::SweepResult& r) {
  for (const auto& [k, v] : r.metadata) std::printf("%-40s %s\n", k.c_str(), v.c_str());
}

nfi::SweepResult farfield_result(const nfi::RunConfig& c) {
  const auto ps = nfi::physical_setup(c, c.pulse.lambda_nm);
  const auto ff = nfi::farfield_qfi(ps.scatterer, ps.pulse);
  nfi::SweepResult r;
  r.axis = {"lambda_nm", {c.pulse.lambda_nm}};
  const char* names[4] = {"qcrb_chi_norm", "qcrb_x_norm", "qcrb_y_norm", "qcrb_z_norm"};
  for (int j = 0; j < 4; ++j) r.columns.push_back({names[j], {ff.normalized[j]}});
  for (int j = 0; j < 4; ++j)
    r.columns.push_back({nfi::entry_name(j, j) + "_internal", {ff.matrix.entries(j, j)}});
  r.columns.push_back({"nsc", {nfi::n_scattered(ps.scatterer, ps.pulse)}});
  return r;
}

int run(const std::string& sub, const Options& o) {
  const auto c = nfi::load_config(o.config_path, o.overrides, o.preset);
  nfi::SweepResult r;
  int code = ok;

  if (sub == "crb-scan") {
    r = nfi::crb_distance_sweep(nfi::crb_sweep_config(c));
    print_metadata(r);
  } else if (sub == "qfi-time") {
    r = nfi::qfi_time_sweep(nfi::qfi_time_config(c));
    print_metadata(r);
  } else if (sub == "size-scan") {
    r = nfi::size_scaling_sweep(nfi::size_scan_config(c));
    print_fits(r);
  } else if (sub == "farfield") {
    r = farfield_result(c);
    std::printf("sqrt(N) dchi0/chi0 = %.6f\n", r.column("qcrb_chi_norm").values[0]);
    std::printf("sqrt(N) dx0/lambda = %.6f\n", r.column("qcrb_x_norm").values[0]);
    std::printf("sqrt(N) dy0/lambda = %.6f\n", r.column("qcrb_y_norm").values[0]);
    std::printf("sqrt(N) dz0/lambda = %.6f\n", r.column("qcrb_z_norm").values[0]);
  } else if (sub == "validate") {
    const std::string level = o.level.empty() ? c.run.level : o.level;
    if (level != "quick" && level != "full") throw nfi::ConfigError("level", "must be quick or full");
    const auto checks =
        nfi::validate_suite(level == "full" ? nfi::ValidationLevel::full : nfi::ValidationLevel::quick);
    r.axis.name = "check_index";
    r.columns = {{"error", {}}, {"tolerance", {}}, {"passed", {}}};
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto& k = checks[i];
      std::printf("%s %-28s error %.3e  tolerance %.1e\n", k.passed ? "PASS" : "FAIL", k.name.c_str(), k.value,
                  k.tolerance);
      r.axis.values.push_back(double(i));
      r.columns[0].values.push_back(k.value);
      r.columns[1].values.push_back(k.tolerance);
      r.columns[2].values.push_back(k.passed ? 1 : 0);
      r.metadata["check." + k.name] = nfi::format_number(k.value);
      if (!k.passed) code = validation_failed;
    }
  }

  auto resolved = nfi::to_json(c);
  const auto dir = out_dir(o, c, sub);
  resolved["run"]["out_dir"] = dir.string();
  nfi::emit_outputs(r, resolved, sub, dir);
  std::printf("wrote %s\n", (dir / "data.csv").string().c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field information bounds for a dipole scatterer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nfi::version);
  Options o;

  const std::vector<std::pair<const char*, const char*>> subs{
      {"crb-scan", "classical CRB versus detector distance"},
      {"qfi-time", "time-resolved quantum Fisher information"},
      {"size-scan", "peak QFI versus regularization size with power-law fits"},
      {"farfield", "far-field QCRB constants"},
      {"validate", "run the numerical oracle suite"}};
  for (const auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--config", o.config_path, "JSON configuration file");
    s->add_option("--preset", o.preset, "parameter preset (fig2 or fig3)");
    s->add_option("--set", o.overrides, "override a config field, e.g. pulse.tau_fs=48")->allow_extra_args(false);
    s->add_option("--out", o.out, "output directory");
    if (std::string(name) == "validate") s->add_option("--level", o.level, "quick or full");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, o);
  } catch (const nfi::ConfigError& e) {
    std::fprintf(stderr, "configuration error at %s\n", e.what());
    return config_error;
  } catch (const nfi::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return resource_error;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "error: out of memory\n");
    return resource_error;
  }
}
