// phonon-stats: steady-state phonon statistics from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 solver error, 3 validation failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phonon_stats/phonon_stats.h"
#include "sweep.hpp"

namespace {

using phonon::cli::PointParams;
using phonon::cli::SolveSettings;
using phonon::cli::SweepRecord;
using phonon::cli::SweepSpec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;

struct Flags {
  double two_omega = 25.0;
  double detuning_ratio = -0.7;
  double kappa = 5e-3;
  double nbar = 0.04;
  double temperature = -1.0;
  double gamma_rate = 1e9;
  double g = 15.0;
  double omega_ph = 35.0;
  double gamma_c = 0.1;
  std::string mode = "both";
  double tol = 1e-8;
  int n_start = 8;
  int n_cap = 4096;
  bool iterative = false;
  std::string out;
  bool svg = false;
  int jobs = 0;
};

struct Options {
  CLI::Option* two_omega = nullptr;
  CLI::Option* detuning_ratio = nullptr;
  CLI::Option* kappa = nullptr;
  CLI::Option* nbar = nullptr;
  CLI::Option* temperature = nullptr;
  CLI::Option* g = nullptr;
  CLI::Option* omega_ph = nullptr;
  CLI::Option* gamma_c = nullptr;
  CLI::Option* mode = nullptr;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void error_line(const std::string& code, const std::string& message) {
  std::cerr << "error: code=" << code << " message=\"" << message << "\"\n";
}

std::vector<ps_mode> parse_modes(const std::string& mode) {
  if (mode == "secular") return {PS_MODE_SECULAR};
  if (mode == "beyond") return {PS_MODE_BEYOND_SECULAR};
  return {PS_MODE_SECULAR, PS_MODE_BEYOND_SECULAR};
}

PointParams point_from(const Flags& f, const Options& o) {
  PointParams p;
  p.two_omega = f.two_omega;
  p.detuning_ratio = f.detuning_ratio;
  p.kappa = f.kappa;
  p.nbar = f.nbar;
  p.g = f.g;
  p.omega_ph = f.omega_ph;
  p.gamma_c = f.gamma_c;
  p.gamma_rate = f.gamma_rate;
  if (o.temperature->count() > 0) {
    if (o.nbar->count() > 0) {
      std::cerr << "warning: both --nbar and --temperature given; using --nbar\n";
    } else {
      p.temperature = f.temperature;
    }
  }
  return p;
}

// Recipe values stay as captioned unless a flag was passed explicitly.
void override_explicit(PointParams& p, const Flags& f, const Options& o) {
  if (o.two_omega->count()) p.two_omega = f.two_omega;
  if (o.detuning_ratio->count()) p.detuning_ratio = f.detuning_ratio;
  if (o.kappa->count()) p.kappa = f.kappa;
  if (o.g->count()) p.g = f.g;
  if (o.omega_ph->count()) p.omega_ph = f.omega_ph;
  if (o.gamma_c->count()) p.gamma_c = f.gamma_c;
  if (o.nbar->count()) {
    p.nbar = f.nbar;
    p.temperature = -1.0;
  } else if (o.temperature->count()) {
    p.temperature = f.temperature;
    p.gamma_rate = f.gamma_rate;
  }
}

SolveSettings solve_from(const Flags& f) {
  return SolveSettings{f.tol, f.n_start, f.n_cap, f.iterative};
}

void warn_secular(const std::vector<SweepRecord>& records) {
  std::size_t count = 0;
  for (const auto& r : records) count += r.secular_warning ? 1 : 0;
  if (count > 0) {
    std::cerr << "warning: " << count
              << " point(s) have 2*Omega_bar < 10 gamma; the dressed-state dissipator "
                 "assumes 2*Omega_bar >> gamma\n";
  }
}

std::string svg_path_for(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + ".svg";
  }
  return out + ".svg";
}

int emit(const SweepSpec& spec, const std::vector<SweepRecord>& records, const Flags& f) {
  if (f.out.empty()) {
    phonon::cli::write_csv(std::cout, records);
  } else {
    std::ofstream os(f.out);
    if (!os) {
      error_line("IoError", "cannot open " + f.out);
      return kExitUsage;
    }
    phonon::cli::write_csv(os, records);
    std::cerr << "wrote " << records.size() << " records to " << f.out << '\n';
  }
  if (f.svg) {
    const std::string path = svg_path_for(f.out);
    std::ofstream os(path);
    if (!os) {
      error_line("IoError", "cannot open " + path);
      return kExitUsage;
    }
    phonon::cli::write_svg(os, spec, records);
    std::cerr << "wrote " << path << '\n';
  }
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok() ? 0 : 1;
  if (failed > 0) std::cerr << "warning: " << failed << " grid point(s) failed; see status column\n";
  warn_secular(records);
  return kExitOk;
}

int run_steady(const Flags& f, const Options& o) {
  const PointParams p = point_from(f, o);
  std::vector<SweepRecord> records;
  for (ps_mode m : parse_modes(f.mode)) records.push_back(phonon::cli::run_point(p, m, solve_from(f)));
  warn_secular(records);
  phonon::cli::write_csv(std::cout, records);
  for (const auto& r : records) {
    if (!r.ok()) {
      error_line(r.status, r.message);
      return r.status == "InvalidArgument" ? kExitUsage : kExitSolver;
    }
  }
  return kExitOk;
}

int run_oracle_check(const Flags& f, const Options& o, int n_max, double tolerance,
                     int max_dim, bool corrupt) {
  const PointParams p = point_from(f, o);
  double nbar = p.nbar;
  if (p.temperature >= 0.0 &&
      ps_thermal_occupation(p.omega_ph, p.temperature, p.gamma_rate, &nbar) != PS_OK) {
    error_line(ps_status_name(PS_ERR_INVALID_ARGUMENT), ps_last_error());
    return kExitUsage;
  }
  ps_params* raw = nullptr;
  if (ps_params_from_ratios(p.two_omega, p.detuning_ratio, p.kappa, nbar, p.g, p.omega_ph,
                            p.gamma_c, &raw) != PS_OK) {
    error_line(ps_status_name(PS_ERR_INVALID_ARGUMENT), ps_last_error());
    return kExitUsage;
  }
  std::unique_ptr<ps_params, void (*)(ps_params*)> params(raw, ps_params_destroy);

  ps_oracle_options opts;
  ps_oracle_options_default(&opts);
  opts.n_max = n_max;
  opts.tolerance = tolerance;
  opts.max_dimension = max_dim;
  opts.corrupt_generator = corrupt ? 1 : 0;

  bool all_passed = true;
  for (ps_mode m : parse_modes(f.mode)) {
    ps_oracle_report r{};
    const ps_status st = ps_oracle_check(params.get(), m, &opts, &r);
    if (st != PS_OK) {
      error_line(ps_status_name(st), ps_last_error());
      return st == PS_ERR_INVALID_ARGUMENT || st == PS_ERR_DIMENSION_OVERFLOW ? kExitUsage
                                                                             : kExitSolver;
    }
    std::printf(
        "mode=%s n_max=%d max_deviation=%.3e projected_residual=%.3e "
        "hierarchy_residual=%.3e oracle_residual=%.3e kernel_gap=%.3e\n"
        "  n_mean hierarchy=%.15g oracle=%.15g rel_delta=%.3e\n"
        "  g2     hierarchy=%.15g oracle=%.15g rel_delta=%.3e\n"
        "  %s (tolerance %.1e)\n",
        ps_mode_name(m), r.n_max, r.max_deviation, r.projected_residual, r.hierarchy_residual,
        r.oracle_residual, r.kernel_gap, r.n_mean_hierarchy, r.n_mean_oracle, r.n_mean_rel_delta,
        r.g2_hierarchy, r.g2_oracle, r.g2_rel_delta, r.passed ? "PASS" : "FAIL", tolerance);
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state phonon statistics of a laser-driven quantum dot in an acoustic "
               "nanocavity. Inputs are ratios to the spontaneous emission rate gamma."};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file mirroring flag names; flags win");

  Flags f;
  Options o;
  o.two_omega = app.add_option("--two-omega", f.two_omega, "2 Omega / gamma")->capture_default_str();
  o.detuning_ratio =
      app.add_option("--detuning-ratio", f.detuning_ratio, "Delta / (2 Omega)")->capture_default_str();
  o.kappa = app.add_option("--kappa", f.kappa, "kappa / gamma")->capture_default_str();
  o.nbar = app.add_option("--nbar", f.nbar, "Thermal phonon number")->capture_default_str();
  o.temperature = app.add_option("--temperature", f.temperature,
                                 "Bath temperature [K]; sets nbar unless --nbar is given");
  app.add_option("--gamma-rate", f.gamma_rate, "gamma in rad/s, converts omega_ph for --temperature")
      ->capture_default_str();
  o.g = app.add_option("--g", f.g, "g / gamma")->capture_default_str();
  o.omega_ph = app.add_option("--omega-ph", f.omega_ph, "omega_ph / gamma")->capture_default_str();
  o.gamma_c = app.add_option("--gamma-c", f.gamma_c, "gamma_c / gamma")->capture_default_str();
  o.mode = app.add_option("--mode", f.mode, "secular, beyond or both")
               ->check(CLI::IsMember({"secular", "beyond", "both"}))
               ->capture_default_str();
  app.add_option("--tol", f.tol, "Relative truncation tolerance")->capture_default_str();
  app.add_option("--n-start", f.n_start, "First Fock cutoff")->capture_default_str();
  app.add_option("--n-cap", f.n_cap, "Largest Fock cutoff")->capture_default_str();
  app.add_flag("--iterative", f.iterative, "Use BiCGSTAB instead of sparse LU");
  app.add_option("--out", f.out, "CSV output path (default stdout)");
  app.add_flag("--svg", f.svg, "Also write an SVG plot next to --out");
  app.add_option("--jobs", f.jobs, "Worker threads (fallback: PHONON_STATS_JOBS, then cores)");

  auto* steady = app.add_subcommand("steady", "Solve one parameter point");

  auto* sweep = app.add_subcommand("sweep", "Sweep one or two parameters");
  std::string axis_text;
  std::string axis2_text;
  sweep->add_option("--axis", axis_text,
                    "name:linear|log10:start:stop:count or name:list:v1,v2,...")
      ->required();
  sweep->add_option("--axis2", axis2_text, "Optional second axis, same syntax");

  auto* figure = app.add_subcommand("figure", "Built-in figure recipe");
  std::string figure_name;
  std::string range_text;
  std::string range2_text;
  figure->add_option("name", figure_name, "fig1a | fig1b | fig1c | fig2")
      ->required()
      ->check(CLI::IsMember(phonon::cli::figure_names()));
  figure->add_option("--range", range_text,
                     "start:stop:count override of the first continuous axis. Defaults "
                     "are a plotting choice: fig1a Delta/(2 Omega) -1.5:1.5:301; fig1b, "
                     "fig2 kappa 1e-3:1e2:61 (log); fig1c kappa 1e-3:1e2:31 (log)");
  figure->add_option("--range2", range2_text,
                     "start:stop:count override of fig1c's 2 Omega/gamma axis (default 5:50:19)");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the hierarchy with the full Lindblad oracle");
  int n_max = 10;
  double oracle_tol = 1e-8;
  int max_dim = 64;
  bool corrupt = false;
  oracle->add_option("--n-max", n_max, "Fock cutoff for both routes")->capture_default_str();
  oracle->add_option("--oracle-tol", oracle_tol, "Componentwise tolerance")->capture_default_str();
  oracle->add_option("--max-dim", max_dim, "Cap on 2 (n_max + 1)")->capture_default_str();
  oracle->add_flag("--corrupt-generator", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (steady->parsed()) return run_steady(f, o);
    if (oracle->parsed()) return run_oracle_check(f, o, n_max, oracle_tol, max_dim, corrupt);

    if (f.svg && f.out.empty()) throw UsageError("--svg needs --out");
    SweepSpec spec;
    if (sweep->parsed()) {
      spec.name = "sweep";
      spec.fixed = point_from(f, o);
      spec.axis1 = phonon::cli::Axis::parse(axis_text);
      if (!axis2_text.empty()) spec.axis2 = phonon::cli::Axis::parse(axis2_text);
      spec.modes = parse_modes(f.mode);
    } else {
      spec = phonon::cli::figure_recipe(figure_name);
      override_explicit(spec.fixed, f, o);
      if (o.mode->count()) spec.modes = parse_modes(f.mode);
      const auto apply_range = [](phonon::cli::Axis& a, const std::string& text) {
        const auto parsed = phonon::cli::Axis::parse(
            a.name + (a.scale == phonon::cli::AxisScale::Log10 ? ":log10:" : ":linear:") + text);
        a = parsed;
      };
      if (!range_text.empty()) {
        apply_range(spec.axis1.scale == phonon::cli::AxisScale::List ? *spec.axis2 : spec.axis1,
                    range_text);
      }
      if (!range2_text.empty()) {
        if (!spec.axis2 || spec.axis1.scale == phonon::cli::AxisScale::List) {
          throw UsageError("--range2 only applies to fig1c");
        }
        apply_range(*spec.axis2, range2_text);
      }
      std::cerr << spec.name << ": " << spec.caption << '\n';
    }
    spec.solve = solve_from(f);
    spec.validate();
    const auto records = phonon::cli::run_sweep(spec, phonon::cli::resolve_jobs(f.jobs));
    return emit(spec, records, f);
  } catch (const UsageError& e) {
    error_line("UsageError", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    error_line("UsageError", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    error_line("Internal", e.what());
    return kExitSolver;
  }
}
