#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace phonon::cli {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    out.emplace_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

struct ParamsDeleter {
  void operator()(ps_params* p) const { ps_params_destroy(p); }
};
struct SolutionDeleter {
  void operator()(ps_solution* s) const { ps_solution_destroy(s); }
};

}  // namespace

Axis Axis::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() < 3) throw std::invalid_argument("axis needs name:scale:...");
  Axis a;
  a.name = parts[0];
  const std::string& scale = parts[1];
  if (scale == "list") {
    if (parts.size() != 3) throw std::invalid_argument("list axis is name:list:v1,v2,...");
    a.scale = AxisScale::List;
    for (const auto& v : split(parts[2], ',')) a.values.push_back(parse_number(v));
    a.count = static_cast<int>(a.values.size());
  } else {
    if (parts.size() != 5) throw std::invalid_argument("axis is name:scale:start:stop:count");
    if (scale == "linear") {
      a.scale = AxisScale::Linear;
    } else if (scale == "log10" || scale == "log") {
      a.scale = AxisScale::Log10;
    } else {
      throw std::invalid_argument("axis scale must be linear, log10 or list");
    }
    a.start = parse_number(parts[2]);
    a.stop = parse_number(parts[3]);
    const double count = parse_number(parts[4]);
    if (count != std::floor(count)) throw std::invalid_argument("axis count must be an integer");
    a.count = static_cast<int>(count);
  }
  a.validate();
  return a;
}

void Axis::validate() const {
  const auto& names = parameter_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  }
  if (scale == AxisScale::List) {
    if (values.empty()) throw std::invalid_argument("list axis needs at least one value");
    return;
  }
  if (count < 2) throw std::invalid_argument("axis count must be >= 2");
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw std::invalid_argument("axis endpoints must be finite");
  }
  if (scale == AxisScale::Log10 && !(start > 0.0 && stop > 0.0)) {
    throw std::invalid_argument("log10 axis needs positive endpoints");
  }
}

std::vector<double> Axis::points() const {
  if (scale == AxisScale::List) return values;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / (count - 1);
    if (scale == AxisScale::Linear) {
      out[k] = start + t * (stop - start);
    } else {
      const double a = std::log10(start);
      const double b = std::log10(stop);
      out[k] = std::pow(10.0, a + t * (b - a));
    }
  }
  out.back() = stop;
  return out;
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{
      "delta_over_2omega", "two_omega_over_gamma", "kappa_over_gamma", "nbar",
      "g_over_gamma",      "omega_ph_over_gamma",  "gamma_c_over_gamma"};
  return names;
}

void set_parameter(PointParams& p, std::string_view name, double value) {
  if (name == "delta_over_2omega") p.detuning_ratio = value;
  else if (name == "two_omega_over_gamma") p.two_omega = value;
  else if (name == "kappa_over_gamma") p.kappa = value;
  else if (name == "nbar") { p.nbar = value; p.temperature = -1.0; }
  else if (name == "g_over_gamma") p.g = value;
  else if (name == "omega_ph_over_gamma") p.omega_ph = value;
  else if (name == "gamma_c_over_gamma") p.gamma_c = value;
  else throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

double get_parameter(const PointParams& p, std::string_view name) {
  if (name == "delta_over_2omega") return p.detuning_ratio;
  if (name == "two_omega_over_gamma") return p.two_omega;
  if (name == "kappa_over_gamma") return p.kappa;
  if (name == "nbar") return p.nbar;
  if (name == "g_over_gamma") return p.g;
  if (name == "omega_ph_over_gamma") return p.omega_ph;
  if (name == "gamma_c_over_gamma") return p.gamma_c;
  throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  axis1.validate();
  if (axis2) {
    axis2->validate();
    if (axis2->name == axis1.name) throw std::invalid_argument("both axes sweep the same parameter");
  }
  if (modes.empty()) throw std::invalid_argument("at least one mode is required");
  if (!(solve.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (solve.n_start < 1 || solve.n_cap < solve.n_start) {
    throw std::invalid_argument("need 1 <= n_start <= n_cap");
  }
}

SweepRecord run_point(const PointParams& params, ps_mode mode, const SolveSettings& solve) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.mode = mode;
  rec.params = params;

  const auto failed = [&rec](ps_status status) {
    rec.status = ps_status_name(status);
    rec.message = ps_last_error();
    rec.n_mean = rec.g2 = rec.residual = std::nan("");
    rec.n_max_used = 0;
  };

  ps_status st = PS_OK;
  if (params.temperature >= 0.0) {
    st = ps_thermal_occupation(params.omega_ph, params.temperature, params.gamma_rate,
                               &rec.params.nbar);
  }
  ps_params* raw = nullptr;
  if (st == PS_OK) {
    st = ps_params_from_ratios(rec.params.two_omega, rec.params.detuning_ratio,
                               rec.params.kappa, rec.params.nbar, rec.params.g,
                               rec.params.omega_ph, rec.params.gamma_c, &raw);
  }
  std::unique_ptr<ps_params, ParamsDeleter> handle(raw);

  ps_dressed_frame frame{};
  if (st == PS_OK) st = ps_dress(handle.get(), mode, &frame);
  rec.secular_warning = st == PS_OK && !frame.secular_regime_ok;

  ps_solution* sol_raw = nullptr;
  if (st == PS_OK) {
    const ps_solver_options opts{solve.tol, solve.n_start, solve.n_cap, solve.iterative ? 1 : 0};
    st = ps_solve(handle.get(), mode, &opts, &sol_raw);
  }
  std::unique_ptr<ps_solution, SolutionDeleter> solution(sol_raw);

  ps_observables obs{};
  if (st == PS_OK) st = ps_solution_observables(solution.get(), &obs);

  if (st == PS_OK) {
    rec.n_mean = obs.n_mean;
    rec.g2 = obs.g2;
    rec.n_max_used = obs.n_max_used;
    rec.residual = obs.residual;
  } else {
    failed(st);
  }
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  struct Task {
    PointParams params;
    ps_mode mode;
  };
  std::vector<Task> tasks;
  const std::vector<double> outer = spec.axis1.points();
  const std::vector<double> inner =
      spec.axis2 ? spec.axis2->points() : std::vector<double>{std::nan("")};
  for (double a : outer) {
    for (double b : inner) {
      PointParams p = spec.fixed;
      set_parameter(p, spec.axis1.name, a);
      if (spec.axis2) set_parameter(p, spec.axis2->name, b);
      for (ps_mode m : spec.modes) tasks.push_back({p, m});
    }
  }

  std::vector<SweepRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      records[k] = run_point(tasks[k].params, tasks[k].mode, spec.solve);
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("PHONON_STATS_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace phonon::cli
