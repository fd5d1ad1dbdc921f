#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include "nfi/scenarios.hpp"

namespace nfi {

inline constexpr const char* version = "1.0.0";

/// Shortest round-trip text is not used; every value is printed with 17 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string csv_text(const SweepResult& r) {
  r.check_shape();
  std::string out = r.axis.name;
  for (const auto& c : r.columns) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < r.axis.values.size(); ++i) {
    out += format_number(r.axis.values[i]);
    for (const auto& c : r.columns) out += "," + format_number(c.values[i]);
    out += "\n";
  }
  return out;
}

/// Reads back a CSV written by csv_text.
inline SweepResult parse_csv(const std::string& text) {
  SweepResult r;
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::configuration, "empty CSV");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  r.axis.name = names.at(0);
  for (std::size_t i = 1; i < names.size(); ++i) r.columns.push_back({names[i], {}});
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::stod(cell);
      if (k == 0)
        r.axis.values.push_back(v);
      else
        r.columns.at(k - 1).values.push_back(v);
      ++k;
    }
  }
  return r;
}

inline nlohmann::json versions_json() {
  return {{"nfi", version},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                        std::to_string(BOOST_VERSION % 100)},
          {"compiler", __VERSION__}};
}

/// Gnuplot script plotting every data column against the axis on log axes where sensible.
inline std::string plot_script(const SweepResult& r, const std::string& title) {
  const bool logx = r.axis.name != "t_fs";
  std::string s = "set datafile separator ','\n";
  s += "set key autotitle columnhead outside\n";
  s += "set title '" + title + "'\n";
  s += "set xlabel '" + r.axis.name + "'\n";
  if (logx) s += "set logscale x\n";
  s += "set logscale y\n";
  s += "set terminal pngcairo size 1200,800\n";
  s += "set output 'plot.png'\n";
  s += "plot \\\n";
  bool first = true;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    const auto& name = r.columns[i].name;
    if (name.rfind("cond_", 0) == 0 || name == "finite_extrapolated" || name == "t_over_tau") continue;
    if (!first) s += ", \\\n";
    s += "  'data.csv' using 1:(abs(column('" + name + "'))) with lines title '" + name + "'";
    first = false;
  }
  s += "\n";
  return s;
}

/// Writes data.csv, config.resolved.json and plot.script into `dir`.
inline void emit_outputs(const SweepResult& r, const nlohmann::json& resolved_config, const std::string& subcommand,
                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::resource, "cannot create output directory " + dir.string());
  const auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::resource, std::string("cannot write ") + (dir / name).string());
  };
  write("data.csv", csv_text(r));
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits)
    fits.push_back({{"column", f.name},
                    {"exponent", f.exponent},
                    {"intercept", f.intercept},
                    {"residual", f.residual},
                    {"points", f.points},
                    {"excluded_two_largest", f.excluded_largest}});
  const nlohmann::json doc = {{"subcommand", subcommand},
                              {"config", resolved_config},
                              {"versions", versions_json()},
                              {"metadata", meta},
                              {"fits", fits}};
  write("config.resolved.json", doc.dump(2) + "\n");
  write("plot.script", plot_script(r, subcommand));
}

}  // namespace nfi
