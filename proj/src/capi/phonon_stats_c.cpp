#include "phonon_stats/phonon_stats.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "error.hpp"
#include "hierarchy.hpp"
#include "model.hpp"
#include "oracle.hpp"

struct ps_params {
  phonon::SystemParams value;
};

struct ps_solution {
  phonon::HierarchyState state;
};

namespace {

thread_local std::string last_error;

ps_status to_status(phonon::ErrorCode code) {
  using phonon::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return PS_ERR_INVALID_ARGUMENT;
    case ErrorCode::SingularSystem: return PS_ERR_SINGULAR_SYSTEM;
    case ErrorCode::ZeroMeanPhonon: return PS_ERR_ZERO_MEAN_PHONON;
    case ErrorCode::TruncationDiverged: return PS_ERR_TRUNCATION_DIVERGED;
    case ErrorCode::DimensionOverflow: return PS_ERR_DIMENSION_OVERFLOW;
    case ErrorCode::DegenerateKernel: return PS_ERR_DEGENERATE_KERNEL;
    case ErrorCode::IntegratorFailure: return PS_ERR_INTEGRATOR_FAILURE;
  }
  return PS_ERR_INTERNAL;
}

ps_status fail(ps_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
ps_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return PS_OK;
  } catch (const phonon::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PS_ERR_INTERNAL, e.what());
  }
}

phonon::Mode to_mode(ps_mode mode) {
  switch (mode) {
    case PS_MODE_SECULAR: return phonon::Mode::Secular;
    case PS_MODE_BEYOND_SECULAR: return phonon::Mode::BeyondSecular;
  }
  throw phonon::Error(phonon::ErrorCode::InvalidArgument, "unknown mode");
}

void require_pointer(const void* p, const char* name) {
  if (p == nullptr) {
    throw phonon::Error(phonon::ErrorCode::InvalidArgument, std::string(name) + " is NULL");
  }
}

double relative_delta(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

}  // namespace

extern "C" {

const char* ps_version(void) { return "1.0.0"; }

const char* ps_status_name(ps_status status) {
  switch (status) {
    case PS_OK: return "Ok";
    case PS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case PS_ERR_SINGULAR_SYSTEM: return "SingularSystem";
    case PS_ERR_ZERO_MEAN_PHONON: return "ZeroMeanPhonon";
    case PS_ERR_TRUNCATION_DIVERGED: return "TruncationDiverged";
    case PS_ERR_DIMENSION_OVERFLOW: return "DimensionOverflow";
    case PS_ERR_DEGENERATE_KERNEL: return "DegenerateKernel";
    case PS_ERR_INTEGRATOR_FAILURE: return "IntegratorFailure";
    case PS_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* ps_last_error(void) { return last_error.c_str(); }

const char* ps_mode_name(ps_mode mode) {
  return mode == PS_MODE_SECULAR ? "secular" : "beyond";
}

ps_status ps_params_create(const ps_param_values* values, ps_params** out) {
  return guarded([&] {
    require_pointer(values, "values");
    require_pointer(out, "out");
    phonon::ParamInput in;
    in.rabi = values->rabi;
    in.detuning = values->detuning;
    in.omega_ph = values->omega_ph;
    in.g = values->g;
    in.gamma = values->gamma;
    in.gamma_c = values->gamma_c;
    in.kappa = values->kappa;
    in.nbar = values->nbar;
    *out = new ps_params{phonon::SystemParams(in)};
  });
}

ps_status ps_params_from_ratios(double two_omega, double detuning_ratio, double kappa,
                                double nbar, double g, double omega_ph, double gamma_c,
                                ps_params** out) {
  return guarded([&] {
    require_pointer(out, "out");
    *out = new ps_params{phonon::SystemParams::from_ratios(two_omega, detuning_ratio, kappa,
                                                           nbar, g, omega_ph, gamma_c)};
  });
}

void ps_params_destroy(ps_params* params) { delete params; }

ps_status ps_params_values(const ps_params* params, ps_param_values* out) {
  return guarded([&] {
    require_pointer(params, "params");
    require_pointer(out, "out");
    const phonon::SystemParams& p = params->value;
    *out = ps_param_values{p.rabi(),  p.detuning(), p.omega_ph(), p.g(),
                           p.gamma(), p.gamma_c(),  p.kappa(),    p.nbar()};
  });
}

ps_status ps_dress(const ps_params* params, ps_mode mode, ps_dressed_frame* out) {
  return guarded([&] {
    require_pointer(params, "params");
    require_pointer(out, "out");
    const phonon::DressedFrame f = phonon::dress(params->value, to_mode(mode));
    *out = ps_dressed_frame{f.theta,      f.sin_2theta,  f.cos_2theta, f.omega_bar,
                            f.delta_bar,  f.beta,        f.delta_eff,  f.gamma_plus,
                            f.gamma_minus, f.gamma_zero, f.secular_regime_ok ? 1 : 0};
  });
}

ps_status ps_thermal_occupation(double omega_ph, double temperature, double unit_scale,
                                double* out) {
  return guarded([&] {
    require_pointer(out, "out");
    *out = phonon::thermal_occupation(omega_ph, temperature, unit_scale);
  });
}

ps_status ps_kappa_from_quality(double omega_ph, double quality, double* out) {
  return guarded([&] {
    require_pointer(out, "out");
    *out = phonon::kappa_from_quality(omega_ph, quality);
  });
}

void ps_solver_options_default(ps_solver_options* options) {
  if (options == nullptr) return;
  const phonon::TruncationOptions d;
  *options = ps_solver_options{d.tol, d.n_start, d.n_cap, 0};
}

ps_status ps_solve(const ps_params* params, ps_mode mode, const ps_solver_options* options,
                   ps_solution** out) {
  return guarded([&] {
    require_pointer(params, "params");
    require_pointer(out, "out");
    phonon::TruncationOptions opts;
    if (options != nullptr) {
      opts.tol = options->tol;
      opts.n_start = options->n_start;
      opts.n_cap = options->n_cap;
      opts.solver = options->iterative ? phonon::LinearSolver::Iterative
                                       : phonon::LinearSolver::DirectLU;
    }
    const phonon::DressedFrame frame = phonon::dress(params->value, to_mode(mode));
    phonon::Solution s = phonon::auto_truncate(frame, params->value, opts);
    *out = new ps_solution{std::move(s.state)};
  });
}

ps_status ps_solve_fixed(const ps_params* params, ps_mode mode, int n_max, ps_solution** out) {
  return guarded([&] {
    require_pointer(params, "params");
    require_pointer(out, "out");
    const phonon::DressedFrame frame = phonon::dress(params->value, to_mode(mode));
    const auto g = phonon::assemble_generator(frame, params->value, n_max);
    *out = new ps_solution{phonon::solve_steady_state(g)};
  });
}

void ps_solution_destroy(ps_solution* solution) { delete solution; }

int ps_solution_n_max(const ps_solution* solution) {
  return solution == nullptr ? -1 : solution->state.n_max();
}

ps_status ps_solution_observables(const ps_solution* solution, ps_observables* out) {
  return guarded([&] {
    require_pointer(solution, "solution");
    require_pointer(out, "out");
    const phonon::Observables o = phonon::observables(solution->state);
    *out = ps_observables{o.n_mean, o.g2, o.n_max_used, o.residual};
  });
}

ps_status ps_solution_component(const ps_solution* solution, int family, int n, double* re,
                                double* im) {
  return guarded([&] {
    require_pointer(solution, "solution");
    require_pointer(re, "re");
    require_pointer(im, "im");
    if (family < 1 || family > phonon::kFamilies || n < 0 || n > solution->state.n_max()) {
      throw phonon::Error(phonon::ErrorCode::InvalidArgument, "component index out of range");
    }
    const phonon::Complex v = solution->state(family, n);
    *re = v.real();
    *im = v.imag();
  });
}

ps_status ps_solution_reality_violation(const ps_solution* solution, double* out) {
  return guarded([&] {
    require_pointer(solution, "solution");
    require_pointer(out, "out");
    *out = phonon::reality_violation(solution->state);
  });
}

void ps_oracle_options_default(ps_oracle_options* options) {
  if (options == nullptr) return;
  *options = ps_oracle_options{10, 1e-8, phonon::oracle::OracleOptions{}.max_dimension, 0};
}

ps_status ps_oracle_check(const ps_params* params, ps_mode mode,
                          const ps_oracle_options* options, ps_oracle_report* report) {
  return guarded([&] {
    require_pointer(params, "params");
    require_pointer(report, "report");
    ps_oracle_options opts;
    ps_oracle_options_default(&opts);
    if (options != nullptr) opts = *options;
    if (!(opts.tolerance > 0.0)) {
      throw phonon::Error(phonon::ErrorCode::InvalidArgument, "tolerance must be > 0");
    }

    const phonon::SystemParams& p = params->value;
    const phonon::DressedFrame frame = phonon::dress(p, to_mode(mode));

    phonon::oracle::OracleOptions oracle_opts;
    oracle_opts.max_dimension = opts.max_dimension;
    const auto liouvillian = phonon::oracle::build_liouvillian(frame, p, opts.n_max, oracle_opts);
    const auto steady = phonon::oracle::steady_state_density(liouvillian);
    const phonon::HierarchyState projected =
        phonon::oracle::project_to_hierarchy(steady.state);

    phonon::GeneratorOptions gen_opts;
    gen_opts.corrupt_for_testing = opts.corrupt_generator != 0;
    const auto generator = phonon::assemble_generator(frame, p, opts.n_max, gen_opts);
    const phonon::HierarchyState hier = phonon::solve_steady_state(generator);

    ps_oracle_report r{};
    r.n_max = opts.n_max;
    r.max_deviation = (hier.values() - projected.values()).cwiseAbs().maxCoeff();
    r.projected_residual = phonon::residual_norm(generator, projected);
    r.hierarchy_residual = hier.residual;
    r.oracle_residual = steady.residual;
    r.kernel_gap = steady.second_singular / steady.largest_singular;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto moments = [](const phonon::HierarchyState& s, double& n_mean, double& g2) {
      double first = 0.0, second = 0.0;
      for (int n = 0; n <= s.n_max(); ++n) {
        first += n * s(1, n).real();
        second += static_cast<double>(n) * (n - 1) * s(1, n).real();
      }
      n_mean = first;
      g2 = first >= 1e-12 ? second / (first * first) : std::numeric_limits<double>::quiet_NaN();
    };
    moments(hier, r.n_mean_hierarchy, r.g2_hierarchy);
    moments(projected, r.n_mean_oracle, r.g2_oracle);
    r.n_mean_rel_delta = relative_delta(r.n_mean_hierarchy, r.n_mean_oracle);
    r.g2_rel_delta = std::isnan(r.g2_oracle) ? nan : relative_delta(r.g2_hierarchy, r.g2_oracle);
    r.passed = r.max_deviation < opts.tolerance ? 1 : 0;
    *report = r;
  });
}

}  // extern "C"
