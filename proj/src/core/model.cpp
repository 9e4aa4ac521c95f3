#include "model.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace phonon {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool finite(double x) { return std::isfinite(x); }

constexpr double kHbar = 1.054571817e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;   // J / K

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroMeanPhonon: return "ZeroMeanPhonon";
    case ErrorCode::TruncationDiverged: return "TruncationDiverged";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
  }
  return "Unknown";
}

const char* to_string(Mode mode) noexcept {
  return mode == Mode::Secular ? "secular" : "beyond";
}

SystemParams::SystemParams(const ParamInput& in) {
  require(finite(in.gamma) && in.gamma > 0.0, "gamma must be > 0");
  require(finite(in.rabi) && in.rabi > 0.0, "rabi frequency must be > 0");
  require(finite(in.detuning), "detuning must be finite");
  require(finite(in.omega_ph) && in.omega_ph > 0.0, "omega_ph must be > 0");
  require(finite(in.g) && in.g >= 0.0, "g must be >= 0");
  require(finite(in.gamma_c) && in.gamma_c >= 0.0, "gamma_c must be >= 0");
  require(finite(in.kappa) && in.kappa > 0.0, "kappa must be > 0");
  require(finite(in.nbar) && in.nbar >= 0.0, "nbar must be >= 0");

  const double s = 1.0 / in.gamma;
  rabi_ = in.rabi * s;
  detuning_ = in.detuning * s;
  omega_ph_ = in.omega_ph * s;
  g_ = in.g * s;
  gamma_c_ = in.gamma_c * s;
  kappa_ = in.kappa * s;
  nbar_ = in.nbar;
}

SystemParams SystemParams::from_ratios(double two_omega, double detuning_ratio,
                                       double kappa, double nbar, double g,
                                       double omega_ph, double gamma_c) {
  ParamInput in;
  in.rabi = 0.5 * two_omega;
  in.detuning = detuning_ratio * two_omega;
  in.kappa = kappa;
  in.nbar = nbar;
  in.g = g;
  in.omega_ph = omega_ph;
  in.gamma_c = gamma_c;
  return SystemParams(in);
}

double kappa_from_quality(double omega_ph, double quality) {
  require(omega_ph > 0.0 && quality > 0.0, "omega_ph and Q must be > 0");
  return omega_ph / quality;
}

DressedFrame dress(const SystemParams& p, Mode mode) {
  DressedFrame f;
  f.mode = mode;
  f.omega_bar = std::hypot(p.rabi(), 0.5 * p.detuning());
  // 2 theta in (0, pi): the +Omega_bar eigenvector of the rotating-frame
  // Hamiltonian is |+> for either sign of the detuning.
  const double two_theta = std::atan2(2.0 * p.rabi(), p.detuning());
  f.theta = 0.5 * two_theta;
  f.sin_2theta = p.rabi() / f.omega_bar;
  f.cos_2theta = 0.5 * p.detuning() / f.omega_bar;

  const double sin2 = f.sin_2theta * f.sin_2theta;
  const double c = std::cos(f.theta);
  const double s = std::sin(f.theta);
  f.gamma_plus = p.gamma() * c * c * c * c + 0.25 * p.gamma_c() * sin2;
  f.gamma_minus = p.gamma() * s * s * s * s + 0.25 * p.gamma_c() * sin2;
  f.gamma_zero = 0.25 * (p.gamma() * sin2 +
                         p.gamma_c() * f.cos_2theta * f.cos_2theta);

  const double upper = p.omega_ph() + 2.0 * f.omega_bar;
  if (upper == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "omega_ph + 2 omega_bar is zero");
  }
  if (mode == Mode::BeyondSecular) {
    const double g2 = p.g() * p.g();
    f.beta = g2 * sin2 / (4.0 * upper);
    f.delta_bar = 0.5 * g2 * (f.cos_2theta / p.omega_ph() - sin2 / (4.0 * upper));
  }
  f.delta_eff = p.omega_ph() - 2.0 * f.omega_bar + 2.0 * f.delta_bar;
  f.secular_regime_ok = 2.0 * f.omega_bar >= 10.0 * p.gamma();
  return f;
}

double thermal_occupation(double omega_ph, double temperature,
                          double unit_scale) {
  require(omega_ph > 0.0, "omega_ph must be > 0");
  require(temperature >= 0.0, "temperature must be >= 0");
  require(unit_scale > 0.0, "unit scale must be > 0");
  if (temperature == 0.0) return 0.0;
  const double x = kHbar * omega_ph * unit_scale / (kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

}  // namespace phonon
