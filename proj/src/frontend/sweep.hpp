#pragma once

// Parameter points, sweeps and figure recipes on top of the C API.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonon_stats/phonon_stats.h"

namespace phonon::cli {

enum class AxisScale { Linear, Log10, List };

struct Axis {
  std::string name;
  AxisScale scale = AxisScale::Linear;
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  std::vector<double> values;  // AxisScale::List only

  /// "name:linear:start:stop:count", "name:log10:start:stop:count" or
  /// "name:list:v1,v2,...". Throws std::invalid_argument.
  static Axis parse(std::string_view text);

  void validate() const;
  std::vector<double> points() const;
};

/// One point in the dimensionless variables of the figure captions.
struct PointParams {
  double two_omega = 25.0;        // 2 Omega / gamma
  double detuning_ratio = -0.7;   // Delta / (2 Omega)
  double kappa = 5e-3;            // kappa / gamma
  double nbar = 0.04;
  double g = 15.0;                // g / gamma
  double omega_ph = 35.0;         // omega_ph / gamma
  double gamma_c = 0.1;           // gamma_c / gamma
  /// When >= 0, nbar is derived per point from this temperature [K].
  double temperature = -1.0;
  double gamma_rate = 1e9;        // gamma in rad/s, used with temperature
};

/// Documented sweepable names: delta_over_2omega, two_omega_over_gamma,
/// kappa_over_gamma, nbar, g_over_gamma, omega_ph_over_gamma,
/// gamma_c_over_gamma.
const std::vector<std::string>& parameter_names();
void set_parameter(PointParams& p, std::string_view name, double value);
double get_parameter(const PointParams& p, std::string_view name);

struct SolveSettings {
  double tol = 1e-8;
  int n_start = 8;
  int n_cap = 4096;
  bool iterative = false;
};

struct SweepSpec {
  std::string name;
  std::string caption;
  Axis axis1;
  std::optional<Axis> axis2;
  PointParams fixed;
  std::vector<ps_mode> modes{PS_MODE_SECULAR, PS_MODE_BEYOND_SECULAR};
  SolveSettings solve;

  void validate() const;
};

struct SweepRecord {
  ps_mode mode = PS_MODE_BEYOND_SECULAR;
  PointParams params;
  double n_mean = 0.0;
  double g2 = 0.0;
  int n_max_used = 0;
  double residual = 0.0;
  std::string status = "ok";
  std::string message;
  bool secular_warning = false;
  double wall_time_ms = 0.0;

  bool ok() const { return status == "ok"; }
};

SweepRecord run_point(const PointParams& params, ps_mode mode, const SolveSettings& solve);

/// Row-major over (axis1, axis2, mode). Runs on `jobs` workers; output order
/// does not depend on scheduling.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int jobs);

/// Flag value when > 0, else PHONON_STATS_JOBS, else hardware concurrency.
int resolve_jobs(int flag_value);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records,
               bool include_header = true);

void write_svg(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRecord>& records);

/// fig1a, fig1b, fig1c or fig2. Throws std::invalid_argument.
SweepSpec figure_recipe(std::string_view name);
const std::vector<std::string>& figure_names();

}  // namespace phonon::cli
