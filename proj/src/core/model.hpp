#pragma once

// Laboratory parameters and the dressed-state frame of a driven two-level
// quantum dot coupled to one acoustic cavity mode. All rates and frequencies
// are stored in units of the spontaneous emission rate gamma.

namespace phonon {

enum class Mode { Secular, BeyondSecular };

const char* to_string(Mode mode) noexcept;

/// Raw inputs, in any common frequency unit. SystemParams normalizes them.
struct ParamInput {
  double rabi = 0.0;      // Omega, half Rabi frequency
  double detuning = 0.0;  // Delta = omega_qd - omega_L
  double omega_ph = 0.0;
  double g = 0.0;
  double gamma = 1.0;
  double gamma_c = 0.0;
  double kappa = 0.0;
  double nbar = 0.0;
};

class SystemParams {
 public:
  /// Validates sign constraints and rescales every rate by gamma.
  /// Throws Error(InvalidArgument) on violation.
  explicit SystemParams(const ParamInput& in);

  /// Builds parameters from the dimensionless ratios used on figure axes:
  /// 2*Omega/gamma, Delta/(2*Omega), kappa/gamma, nbar, g/gamma,
  /// omega_ph/gamma, gamma_c/gamma.
  static SystemParams from_ratios(double two_omega, double detuning_ratio,
                                  double kappa, double nbar, double g,
                                  double omega_ph, double gamma_c);

  double rabi() const noexcept { return rabi_; }
  double detuning() const noexcept { return detuning_; }
  double omega_ph() const noexcept { return omega_ph_; }
  double g() const noexcept { return g_; }
  double gamma() const noexcept { return 1.0; }
  double gamma_c() const noexcept { return gamma_c_; }
  double kappa() const noexcept { return kappa_; }
  double nbar() const noexcept { return nbar_; }

 private:
  double rabi_;
  double detuning_;
  double omega_ph_;
  double g_;
  double gamma_c_;
  double kappa_;
  double nbar_;
};

/// Cavity damping rate from the quality factor, kappa = omega_ph / Q.
double kappa_from_quality(double omega_ph, double quality);

struct DressedFrame {
  double theta = 0.0;
  double sin_2theta = 0.0;
  double cos_2theta = 0.0;
  double omega_bar = 0.0;   // generalized Rabi frequency
  double delta_bar = 0.0;   // fast-term level shift
  double beta = 0.0;        // fast-term dispersive coefficient
  double delta_eff = 0.0;   // omega_ph - 2 omega_bar + 2 delta_bar
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gamma_zero = 0.0;
  Mode mode = Mode::BeyondSecular;

  /// The dressed dissipator assumes 2*omega_bar >> gamma. False when
  /// 2*omega_bar < 10 gamma.
  bool secular_regime_ok = true;

  /// Slow-term coupling amplitude g*sin(2 theta)/2 (the hierarchy's "G").
  double coupling(double g) const noexcept { return 0.5 * g * sin_2theta; }
  /// Decay rate of the dressed coherences, gamma_+ + gamma_- + 4 gamma_0.
  double coherence_decay() const noexcept {
    return gamma_plus + gamma_minus + 4.0 * gamma_zero;
  }
};

DressedFrame dress(const SystemParams& params, Mode mode);

/// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1) of a mode whose
/// gamma-normalized frequency is omega_ph. unit_scale is gamma in rad/s and
/// temperature is in kelvin. Returns exactly 0 at T = 0.
double thermal_occupation(double omega_ph, double temperature,
                          double unit_scale);

}  // namespace phonon
