// Copyright 2026 The qcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: option and config-file parsing, the command
// runners, CSV/SVG output, and the exit-status contract
// (0 success, 1 I/O, 2 usage, 3 numerical failure).

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qcool/error.hpp"
#include "qcool/scenarios.hpp"

namespace qcool::cli {

enum class Command { steady, evolve, sweep_fidelity, sweep_rate, fig5a, fig5b, fig6 };
enum class Format { csv, svg };

inline constexpr std::string_view command_name(Command c) {
  switch (c) {
    case Command::steady: return "steady";
    case Command::evolve: return "evolve";
    case Command::sweep_fidelity: return "sweep-fidelity";
    case Command::sweep_rate: return "sweep-rate";
    case Command::fig5a: return "fig5a";
    case Command::fig5b: return "fig5b";
    case Command::fig6: return "fig6";
  }
  return "?";
}

inline constexpr const char* kOutputDirVariable = "QCOOL_OUTPUT_DIR";

struct RunConfig {
  Command command = Command::steady;
  ScenarioConfig scenario;
  std::vector<double> omegas;  // sweeps
  std::vector<double> deltas;  // fidelity sweeps
  std::filesystem::path out;
  Format format = Format::csv;
  unsigned jobs = 1;
  std::size_t samples = 2000;  // stored points for time evolutions
};

/// Thrown by parse_config for --help; carries the rendered help text.
struct HelpRequested {
  std::string text;
};

// ---------------------------------------------------------------- numbers

inline std::optional<double> parse_finite(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// Comma-separated finite reals, or "start:stop:count" for an evenly spaced grid.
inline std::vector<double> parse_grid(std::string_view text, std::string_view what) {
  auto fail = [&]() -> std::vector<double> {
    throw Error(ErrorKind::UsageError, std::string(what) + ": bad value list '" + std::string(text) + "'");
  };
  std::vector<std::string_view> parts;
  const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
  for (std::size_t pos = 0;;) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  std::vector<double> values;
  if (sep == ':') {
    if (parts.size() != 3) return fail();
    const auto a = parse_finite(parts[0]), b = parse_finite(parts[1]);
    std::size_t count = 0;
    const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (!a || !b || ec != std::errc() || ptr != parts[2].data() + parts[2].size() || count == 0) return fail();
    for (std::size_t i = 0; i < count; ++i)
      values.push_back(count == 1 ? *a : *a + (*b - *a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return values;
  }
  for (auto p : parts) {
    const auto v = parse_finite(p);
    if (!v) return fail();
    values.push_back(*v);
  }
  return values;
}

/// 12 significant digits, '.' decimal, no negative zero.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ---------------------------------------------------------------- parsing

namespace detail {

struct RawOptions {
  std::optional<std::string> scenario, model, initial, omegas, deltas, format, out;
  std::optional<double> omega, gamma, delta_lambda, coupling_j, t_max, dt;
  std::optional<unsigned> jobs;
  std::optional<std::size_t> samples;
  std::optional<std::string> config;
};

inline const CLI::Validator& finite_number() {
  static const CLI::Validator v(
      [](std::string& s) { return parse_finite(s) ? std::string() : "'" + s + "' is not a finite number"; },
      "FINITE");
  return v;
}

inline void register_options(CLI::App& app, RawOptions& raw) {
  auto pol = CLI::MultiOptionPolicy::TakeLast;
  app.add_option("--config", raw.config, "flat key = value file; flags override its values");
  app.add_option("--scenario", raw.scenario, "one-qubit | two-qubit")
      ->check(CLI::IsMember({"one-qubit", "two-qubit"}))->multi_option_policy(pol);
  app.add_option("--model", raw.model, "two-qubit model: truncated | full")
      ->check(CLI::IsMember({"truncated", "full"}))->multi_option_policy(pol);
  app.add_option("--omega", raw.omega, "Rabi frequency (units of Gamma)")->check(finite_number())->multi_option_policy(pol);
  app.add_option("--gamma", raw.gamma, "per-channel decay rate")->check(finite_number())->multi_option_policy(pol);
  app.add_option("--delta-lambda", raw.delta_lambda, "one-qubit level splitting lambda_1 - lambda_0")
      ->check(finite_number())->multi_option_policy(pol);
  app.add_option("--coupling-j", raw.coupling_j, "Heisenberg coupling J")->check(finite_number())->multi_option_policy(pol);
  app.add_option("--t-max", raw.t_max, "evolution time")->check(finite_number())->multi_option_policy(pol);
  app.add_option("--dt", raw.dt, "RK4 step, 0 = automatic")->check(finite_number())->multi_option_policy(pol);
  app.add_option("--initial", raw.initial, "mixed | singlet | ground_lambda1 | lambda:<n> | product:<n>")
      ->multi_option_policy(pol);
  app.add_option("--omegas", raw.omegas, "sweep values: a,b,c or start:stop:count")->multi_option_policy(pol);
  app.add_option("--deltas", raw.deltas, "detuning sweep values: a,b,c or start:stop:count")->multi_option_policy(pol);
  app.add_option("--jobs", raw.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 256u))->multi_option_policy(pol);
  app.add_option("--samples", raw.samples, "stored time points for evolutions")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))->multi_option_policy(pol);
  app.add_option("--out", raw.out, "output CSV path")->multi_option_policy(pol);
  app.add_option("--format", raw.format, "csv | svg (svg also writes the CSV)")
      ->check(CLI::IsMember({"csv", "svg"}))->multi_option_policy(pol);
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Reads "key = value" lines; '#' starts a comment. Returns flag/value pairs.
inline std::vector<std::string> read_config_file(const std::filesystem::path& path, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot read config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::UsageError, where + "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const std::string flag = "--" + key;
    if (key.empty() || key == "config" || app.get_option_no_throw(flag) == nullptr)
      throw Error(ErrorKind::UsageError, where + "unknown key '" + key + "'");
    if (value.empty()) throw Error(ErrorKind::UsageError, where + "missing value for '" + key + "'");
    static const std::vector<std::string_view> numeric{"omega", "gamma", "delta-lambda", "coupling-j", "t-max", "dt"};
    if (std::find(numeric.begin(), numeric.end(), key) != numeric.end() && !parse_finite(value))
      throw Error(ErrorKind::UsageError, where + key + ": '" + value + "' is not a finite number");
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace detail

/// Parses argv (argv[0] is the program name). Values from --config come
/// first, so any flag given on the command line wins.
inline RunConfig parse_config(const std::vector<std::string>& argv) {
  CLI::App app("Dissipative cooling of atomic qubits into an interaction ground state", "qcool");
  app.require_subcommand(1);
  app.fallthrough();
  detail::RawOptions raw;
  detail::register_options(app, raw);
  std::map<std::string, Command> by_name;
  for (Command c : {Command::steady, Command::evolve, Command::sweep_fidelity, Command::sweep_rate, Command::fig5a,
                    Command::fig5b, Command::fig6}) {
    app.add_subcommand(std::string(command_name(c)));
    by_name.emplace(std::string(command_name(c)), c);
  }
  app.get_subcommand("steady")->description("stationary state of one scenario");
  app.get_subcommand("evolve")->description("fidelity and excited population against time");
  app.get_subcommand("sweep-fidelity")->description("one-qubit steady fidelity over (omega, delta_lambda)");
  app.get_subcommand("sweep-rate")->description("one-qubit cooling rate against omega");
  app.get_subcommand("fig5a")->description("sweep-fidelity on the default grid");
  app.get_subcommand("fig5b")->description("sweep-rate on the default grid");
  app.get_subcommand("fig6")->description("two-qubit singlet fidelity against time");

  auto parse = [&](std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
      throw Error(ErrorKind::UsageError, e.what());
    }
  };
  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  parse(args);
  if (raw.config) {
    std::vector<std::string> merged = detail::read_config_file(*raw.config, app);
    merged.insert(merged.end(), args.begin(), args.end());
    raw = {};
    app.clear();
    parse(merged);
  }

  RunConfig cfg;
  for (auto* sub : app.get_subcommands()) cfg.command = by_name.at(sub->get_name());
  ScenarioConfig& sc = cfg.scenario;

  const bool two_qubit_default = cfg.command == Command::fig6;
  const std::string scenario = raw.scenario.value_or(two_qubit_default ? "two-qubit" : "one-qubit");
  sc.kind = scenario == "two-qubit" ? ScenarioKind::two_qubit_heisenberg : ScenarioKind::one_qubit;
  const bool one = sc.kind == ScenarioKind::one_qubit;
  switch (cfg.command) {
    case Command::sweep_fidelity:
    case Command::sweep_rate:
    case Command::fig5a:
    case Command::fig5b:
      if (!one) throw Error(ErrorKind::UsageError, std::string(command_name(cfg.command)) + " is one-qubit only");
      break;
    case Command::fig6:
      if (one) throw Error(ErrorKind::UsageError, "fig6 is two-qubit only");
      break;
    default:
      break;
  }

  sc.omega = raw.omega.value_or(one ? 1.0 : 0.2);
  sc.gamma = raw.gamma.value_or(1.0);
  sc.delta_lambda = raw.delta_lambda.value_or(cfg.command == Command::fig5b ? 20.0 : 10.0);
  sc.coupling_j = raw.coupling_j.value_or(5.0);
  sc.truncate = raw.model.value_or("truncated") == "truncated";
  sc.t_max = raw.t_max.value_or(cfg.command == Command::fig6 ? 500.0 : 100.0);
  sc.dt = raw.dt.value_or(0.0);
  try {
    sc.initial = parse_initial_state(raw.initial.value_or("mixed"));
    validate(sc);
  } catch (const Error& e) {
    throw Error(ErrorKind::UsageError, e.what());
  }

  const bool fig5a = cfg.command == Command::fig5a;
  cfg.omegas = raw.omegas ? parse_grid(*raw.omegas, "--omegas")
               : fig5a    ? std::vector<double>{0.25, 0.5, 1.0, 2.0}
               : cfg.command == Command::fig5b ? parse_grid("0.1:2:20", "--omegas")
                                               : std::vector<double>{sc.omega};
  cfg.deltas = raw.deltas ? parse_grid(*raw.deltas, "--deltas") : fig5a ? parse_grid("0:50:101", "--deltas")
                                                                        : std::vector<double>{sc.delta_lambda};
  for (double w : cfg.omegas)
    if (w < 0.0) throw Error(ErrorKind::UsageError, "--omegas: values must be >= 0");

  cfg.jobs = raw.jobs.value_or(1);
  cfg.samples = raw.samples.value_or(2000);
  cfg.format = raw.format.value_or("csv") == "svg" ? Format::svg : Format::csv;
  if (raw.out) {
    cfg.out = *raw.out;
  } else {
    const char* dir = std::getenv(kOutputDirVariable);
    cfg.out = std::filesystem::path(dir && *dir ? dir : ".") / (std::string(command_name(cfg.command)) + ".csv");
  }
  const auto parent = cfg.out.has_parent_path() ? cfg.out.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  if (!std::filesystem::is_directory(parent, ec))
    throw Error(ErrorKind::UsageError, "output directory does not exist: " + parent.string());
  return cfg;
}

inline RunConfig parse_config(int argc, const char* const* argv) {
  return parse_config(std::vector<std::string>(argv, argv + argc));
}

// ---------------------------------------------------------------- output

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw Error(ErrorKind::DimensionMismatch, "ragged CSV row");
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

/// Writes through a sibling temporary and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Static line plot: axes, tick labels, one polyline per series, a legend.
inline std::string render_svg(const std::vector<Series>& series, const std::string& xlabel, const std::string& ylabel) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
    }
  if (!(x0 < x1)) throw std::runtime_error("nothing to plot");
  if (!(y0 < y1)) y0 -= 0.5, y1 += 0.5;
  const double w = 640, h = 420, left = 70, right = 20, top = 20, bottom = 50;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<path d=\"M" << left << ' ' << top << " V" << h - bottom << " H" << w - right
    << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">"
      << format_number(xv) << "</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_number(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n"
    << "<text transform=\"translate(16," << (top + h - bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* c = colors[k % 6];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      o << (i ? " " : "") << px(series[k].x[i]) << ',' << py(series[k].y[i]);
    o << "\"/>\n<text x=\"" << w - right - 150 << "\" y=\"" << top + 16 * (k + 1) << "\" fill=\"" << c << "\">"
      << series[k].name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------- commands

namespace detail {

inline Table from_sweep(const SweepTable& s) { return {s.columns, s.rows}; }

inline Table from_trajectory(const Trajectory& traj, const std::vector<std::string>& observables) {
  Table t;
  t.columns.push_back("t");
  for (const auto& name : observables) t.columns.push_back(name);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (const auto& name : observables) row.push_back(traj.observable(name)[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Series for the SVG view: group by the first column when the table has two
// axes, otherwise plot every non-axis column against the first.
inline std::vector<Series> plot_series(const Command c, const Table& t, std::string& xlabel, std::string& ylabel) {
  std::vector<Series> out;
  switch (c) {
    case Command::sweep_fidelity:
    case Command::fig5a: {
      xlabel = "delta_lambda / Gamma", ylabel = "steady fidelity";
      for (const auto& r : t.rows) {
        const std::string name = "omega = " + format_number(r[0]);
        if (out.empty() || out.back().name != name) out.push_back({name, {}, {}});
        out.back().x.push_back(r[1]);
        out.back().y.push_back(r[3]);
      }
      return out;
    }
    case Command::steady:
      throw std::runtime_error("steady output has no plot");
    default:
      xlabel = t.columns[0];
      ylabel = c == Command::sweep_rate || c == Command::fig5b ? "cooling rate / Gamma" : "value";
      for (std::size_t k = 1; k < t.columns.size(); ++k) {
        Series s{t.columns[k], {}, {}};
        for (const auto& r : t.rows) s.x.push_back(r[0]), s.y.push_back(r[k]);
        out.push_back(std::move(s));
      }
      return out;
  }
}

inline Table run_steady(const RunConfig& cfg, std::ostream& log) {
  const CoolingModel model = build_scenario(cfg.scenario);
  const SteadyResult ss = steady_state(model.liouvillian());
  const double f = fidelity(ss.rho, model.target);
  const double excited =
      std::clamp(1.0 - (model.ground_projector() * ss.rho.matrix()).trace().real(), 0.0, 1.0);
  log << "steady fidelity " << format_number(f) << '\n';
  return {{"fidelity", "excited_population", "residual", "gap_indicator"},
          {{f, excited, ss.residual, ss.gap_indicator}}};
}

}  // namespace detail

/// Computes the command's table without touching the filesystem.
inline Table compute(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.command) {
    case Command::steady:
      return detail::run_steady(cfg, log);
    case Command::evolve: {
      const CoolingModel model = build_scenario(cfg.scenario);
      const Trajectory traj = simulate(model, cfg.scenario, {cfg.samples, false});
      return detail::from_trajectory(traj, {"fidelity", "excited_population"});
    }
    case Command::fig6: {
      const Trajectory traj = fidelity_vs_time(cfg.scenario, {cfg.samples, false});
      return detail::from_trajectory(traj, {"fidelity"});
    }
    case Command::sweep_fidelity:
    case Command::fig5a:
      return detail::from_sweep(
          sweep_fidelity_vs_detuning(cfg.omegas, cfg.deltas, cfg.scenario.gamma, cfg.jobs));
    case Command::sweep_rate:
    case Command::fig5b:
      return detail::from_sweep(
          sweep_rate_vs_omega(cfg.omegas, cfg.scenario.delta_lambda, cfg.scenario.gamma, cfg.jobs));
  }
  throw Error(ErrorKind::UsageError, "unknown command");
}

/// Runs a parsed configuration; returns the process exit status.
inline int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  Table table;
  try {
    table = compute(cfg, log);
  } catch (const Error& e) {
    err << "qcool: " << e.what() << '\n';
    return e.is_numerical() ? 3 : 2;
  }
  try {
    write_atomically(cfg.out, to_csv(table));
  } catch (const std::exception& e) {
    err << "qcool: " << e.what() << '\n';
    return 1;
  }
  log << "wrote " << cfg.out.string() << '\n';
  if (cfg.format == Format::svg) {
    auto svg = cfg.out;
    svg.replace_extension(".svg");
    try {
      std::string xlabel, ylabel;
      write_atomically(svg, render_svg(detail::plot_series(cfg.command, table, xlabel, ylabel), xlabel, ylabel));
      log << "wrote " << svg.string() << '\n';
    } catch (const std::exception& e) {
      err << "qcool: warning: no plot written (" << e.what() << ")\n";
    }
  }
  return 0;
}

inline int main(int argc, const char* const* argv, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    log << h.text;
    return 0;
  } catch (const Error& e) {
    err << "qcool: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, log, err);
}

}  // namespace qcool::cli
