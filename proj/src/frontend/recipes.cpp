#include <stdexcept>
#include <string>

#include "sweep.hpp"

namespace phonon::cli {

namespace {

Axis continuous(std::string name, AxisScale scale, double start, double stop, int count) {
  Axis a;
  a.name = std::move(name);
  a.scale = scale;
  a.start = start;
  a.stop = stop;
  a.count = count;
  return a;
}

// Shared caption values: gamma_c/gamma = 0.1, g/gamma = 15, omega_ph/gamma = 35,
// 2 Omega/gamma = 25, Delta/(2 Omega) = -0.7, nbar = 0.04.
PointParams caption_defaults() { return PointParams{}; }

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1a", "fig1b", "fig1c", "fig2"};
  return names;
}

SweepSpec figure_recipe(std::string_view name) {
  SweepSpec s;
  s.name = std::string(name);
  s.fixed = caption_defaults();

  if (name == "fig1a") {
    s.caption =
        "g2(0) and <n> vs Delta/(2 Omega), secular and beyond-secular; nbar = 0.04, "
        "2 Omega/gamma = 25, kappa/gamma = 5e-3, gamma_c/gamma = 0.1, g/gamma = 15, "
        "omega_ph/gamma = 35";
    s.fixed.kappa = 5e-3;
    s.axis1 = continuous("delta_over_2omega", AxisScale::Linear, -1.5, 1.5, 301);
    s.modes = {PS_MODE_SECULAR, PS_MODE_BEYOND_SECULAR};
  } else if (name == "fig1b") {
    s.caption =
        "beyond-secular g2(0) vs kappa/gamma for nbar = 0.64, 0.16, 0.08, 0.04, 0.01; "
        "2 Omega/gamma = 25, Delta/(2 Omega) = -0.7, gamma_c/gamma = 0.1, g/gamma = 15, "
        "omega_ph/gamma = 35";
    s.axis1.name = "nbar";
    s.axis1.scale = AxisScale::List;
    s.axis1.values = {0.64, 0.16, 0.08, 0.04, 0.01};
    s.axis1.count = 5;
    s.axis2 = continuous("kappa_over_gamma", AxisScale::Log10, 1e-3, 1e2, 61);
    s.modes = {PS_MODE_BEYOND_SECULAR};
  } else if (name == "fig1c") {
    s.caption =
        "beyond-secular g2(0) and <n> over kappa/gamma x 2 Omega/gamma; nbar = 0.04, "
        "Delta/(2 Omega) = -0.7, gamma_c/gamma = 0.1, g/gamma = 15, omega_ph/gamma = 35";
    s.axis1 = continuous("kappa_over_gamma", AxisScale::Log10, 1e-3, 1e2, 31);
    s.axis2 = continuous("two_omega_over_gamma", AxisScale::Linear, 5.0, 50.0, 19);
    s.modes = {PS_MODE_BEYOND_SECULAR};
  } else if (name == "fig2") {
    s.caption =
        "g2(0) and <n> vs kappa/gamma, secular and beyond-secular; 2 Omega/gamma = 25, "
        "Delta/(2 Omega) = -0.7, nbar = 0.04, gamma_c/gamma = 0.1, g/gamma = 15, "
        "omega_ph/gamma = 35";
    s.axis1 = continuous("kappa_over_gamma", AxisScale::Log10, 1e-3, 1e2, 61);
    s.modes = {PS_MODE_SECULAR, PS_MODE_BEYOND_SECULAR};
  } else {
    throw std::invalid_argument("unknown figure '" + std::string(name) +
                                "' (expected fig1a, fig1b, fig1c or fig2)");
  }
  s.validate();
  return s;
}

}  // namespace phonon::cli
