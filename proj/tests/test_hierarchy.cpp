#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "error.hpp"
#include "hierarchy.hpp"
#include "model.hpp"

using namespace phonon;

namespace {

SystemParams fig1(double kappa = 5e-3, double g = 15.0, double nbar = 0.04,
                  double detuning_ratio = -0.7) {
  return SystemParams::from_ratios(25.0, detuning_ratio, kappa, nbar, g, 35.0, 0.1);
}

HierarchyState solve_at(const SystemParams& p, Mode m, int n_max) {
  return solve_steady_state(assemble_generator(dress(p, m), p, n_max));
}

ErrorCode error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected phonon::Error");
  return ErrorCode::InvalidArgument;
}

Complex entry(const SparseGenerator& g, int rf, int rn, int cf, int cn) {
  return g.matrix.coeff(g.index(rf, rn), g.index(cf, cn));
}

}  // namespace

TEST_CASE("generator structure") {
  const auto p = fig1();
  for (int n_max : {1, 2, 10, 57}) {
    const SparseGenerator g = assemble_generator(dress(p, Mode::BeyondSecular), p, n_max);
    CHECK(g.dimension() == 6 * (n_max + 1));
    for (Eigen::Index r = 0; r < g.matrix.outerSize(); ++r) {
      CHECK(g.matrix.innerVector(r).nonZeros() <= 13);
    }
  }
  CHECK(error_of([&] { assemble_generator(dress(p, Mode::Secular), p, 0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("zero coupling decouples the populations from the coherences") {
  const auto p = fig1(1.0, 0.0);
  const SparseGenerator g = assemble_generator(dress(p, Mode::BeyondSecular), p, 12);
  const double kd = p.kappa() * (1 + p.nbar());
  const double kp = p.kappa() * p.nbar();
  for (int n = 0; n <= 12; ++n) {
    for (int f : {3, 5}) {
      CHECK(entry(g, 1, n, f, n) == Complex{});
      CHECK(entry(g, 2, n, f, n) == Complex{});
    }
    // Thermal birth-death chain.
    if (n < 12) {
      CHECK(entry(g, 1, n, 1, n).real() == doctest::Approx(-2 * kd * n - 2 * kp * (n + 1)));
      CHECK(entry(g, 1, n, 1, n + 1).real() == doctest::Approx(2 * kd * (n + 1)));
    }
    if (n > 0) CHECK(entry(g, 1, n, 1, n - 1).real() == doctest::Approx(2 * kp * n));
  }
}

TEST_CASE("secular generator carries no number-dependent detuning") {
  const auto p = fig1(1.0);
  const DressedFrame f = dress(p, Mode::Secular);
  const SparseGenerator g = assemble_generator(f, p, 20);
  for (int n = 1; n <= 20; ++n) {
    CHECK(entry(g, 3, n, 4, n) == Complex(0.0, f.delta_eff));
    CHECK(entry(g, 4, n, 3, n) == Complex(0.0, f.delta_eff));
  }
  for (int n = 0; n < 20; ++n) {
    CHECK(entry(g, 5, n, 6, n) == Complex(0.0, f.delta_eff));
  }
  const DressedFrame b = dress(p, Mode::BeyondSecular);
  const SparseGenerator gb = assemble_generator(b, p, 20);
  CHECK(entry(gb, 5, 7, 6, 7) == -Complex(0.0, 1.0) * (b.beta * 15 - b.delta_eff));
}

TEST_CASE("population rows conserve the trace up to the coherent exchange") {
  // sum_n (G P)_{1,n} = i g sin(2 theta)/2 sum_n (P3_n - P5_n) for any vector P.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  const auto p = fig1(0.3);
  const DressedFrame f = dress(p, Mode::BeyondSecular);
  for (int n_max : {1, 5, 30}) {
    const SparseGenerator g = assemble_generator(f, p, n_max);
    HierarchyState x(n_max);
    for (Eigen::Index k = 0; k < x.values().size(); ++k) x.values()(k) = Complex(z(rng), z(rng));
    const Eigen::VectorXcd gx = g.matrix * x.values();
    Complex lhs = 0.0, exchange = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      lhs += gx(g.index(1, n));
      exchange += x(3, n) - x(5, n);
    }
    const Complex rhs = Complex(0.0, f.coupling(p.g())) * exchange;
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("zero coupling: thermal phonons and a decoupled qubit") {
  const auto p = fig1(5e-3, 0.0, 0.04);
  const DressedFrame f = dress(p, Mode::BeyondSecular);
  const HierarchyState s = solve_at(p, Mode::BeyondSecular, 30);
  const double r = 0.04 / 1.04;
  const double inversion = (f.gamma_minus - f.gamma_plus) / (f.gamma_plus + f.gamma_minus);
  for (int n = 0; n <= 30; ++n) {
    const double thermal = std::pow(r, n) / 1.04;
    CHECK(std::abs(s(1, n) - thermal) < 1e-12);
    CHECK(std::abs(s(2, n) - inversion * thermal) < 1e-12);
    for (int fam = 3; fam <= 6; ++fam) CHECK(std::abs(s(fam, n)) < 1e-14);
  }
  const Observables o = observables(s);
  CHECK(o.n_mean == doctest::Approx(0.04).epsilon(1e-10));
  CHECK(o.g2 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("overdamped cavity thermalizes") {
  const auto thermal = solve_at(fig1(1e3), Mode::BeyondSecular, 16);
  CHECK(std::abs(thermal(1, 0).real() - 1.0 / 1.04) < 1e-2);
  const auto p = fig1(1e3, 15.0, 0.0);
  const HierarchyState s = solve_at(p, Mode::BeyondSecular, 16);
  CHECK(s(1, 0).real() > 1.0 - 1e-2);
}

TEST_CASE("observables of known distributions") {
  SUBCASE("Fock state |2>") {
    HierarchyState s(5);
    s(1, 2) = 1.0;
    const Observables o = observables(s);
    CHECK(o.n_mean == 2.0);
    CHECK(o.g2 == 0.5);
  }
  SUBCASE("Poisson, lambda = 0.5") {
    HierarchyState s(40);
    double term = std::exp(-0.5);
    for (int n = 0; n <= 40; ++n) {
      s(1, n) = term;
      term *= 0.5 / (n + 1);
    }
    CHECK(std::abs(observables(s).g2 - 1.0) < 1e-10);
  }
  SUBCASE("thermal, nbar = 0.04") {
    HierarchyState s(60);
    for (int n = 0; n <= 60; ++n) s(1, n) = std::pow(0.04, n) / std::pow(1.04, n + 1);
    const Observables o = observables(s);
    CHECK(o.n_mean == doctest::Approx(0.04).epsilon(1e-13));
    CHECK(o.g2 == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("vacuum has no defined g2") {
    HierarchyState s(4);
    s(1, 0) = 1.0;
    CHECK(error_of([&] { observables(s); }) == ErrorCode::ZeroMeanPhonon);
  }
}

TEST_CASE("steady states satisfy the structural invariants") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double two_omega = 10.0 + 40.0 * u(rng);
    const auto p = SystemParams::from_ratios(two_omega, -1.5 + 3.0 * u(rng),
                                             std::pow(10.0, -1.0 + 2.0 * u(rng)), 0.01 + 0.5 * u(rng),
                                             20.0 * u(rng), 20.0 + 30.0 * u(rng), 0.5 * u(rng));
    const Mode m = trial % 2 ? Mode::Secular : Mode::BeyondSecular;
    const Solution sol = auto_truncate(dress(p, m), p);
    const HierarchyState& s = sol.state;
    CHECK(reality_violation(s) < 1e-9);
    CHECK(std::abs(s.populations().sum() - 1.0) < 1e-12);
    double peak = 0.0;
    for (int n = 0; n <= s.n_max(); ++n) {
      CHECK(s(1, n).real() >= -1e-10);
      CHECK(std::abs(s(2, n)) <= s(1, n).real() + 1e-10);
      peak = std::max(peak, s(1, n).real());
    }
    CHECK(s(1, s.n_max()).real() < 1e-3 * peak);
    CHECK(sol.observables.residual < 1e-9);
  }
}

TEST_CASE("adaptive truncation") {
  SUBCASE("thermal chain converges within two sizes") {
    const auto p = fig1(5e-3, 0.0, 0.04);
    const Solution s = auto_truncate(dress(p, Mode::BeyondSecular), p, {1e-8, 8, 4096});
    CHECK(s.observables.n_max_used <= 16);
    // Analytic tail of the geometric distribution beyond n_max / 2.
    const double r = 0.04 / 1.04;
    CHECK(std::pow(r, s.observables.n_max_used / 2 + 1) < 1e-8);
  }
  SUBCASE("large occupation needs a cutoff well above <n>") {
    const auto p = fig1(5e-3);
    const Solution s = auto_truncate(dress(p, Mode::BeyondSecular), p);
    CHECK(s.observables.n_mean > 10.0);
    CHECK(s.observables.n_max_used > 2.0 * s.observables.n_mean);
  }
  SUBCASE("tighter tolerance reproduces g2") {
    const auto p = fig1(1.0);
    const DressedFrame f = dress(p, Mode::BeyondSecular);
    const double a = auto_truncate(f, p, {1e-8, 8, 4096}).observables.g2;
    const double b = auto_truncate(f, p, {1e-10, 8, 4096}).observables.g2;
    CHECK(std::abs(a - b) / b < 5e-9);
  }
  SUBCASE("cap exceeded") {
    const auto p = fig1(5e-3);
    CHECK(error_of([&] { auto_truncate(dress(p, Mode::Secular), p, {1e-8, 8, 32}); }) ==
          ErrorCode::TruncationDiverged);
  }
  SUBCASE("bad options") {
    const auto p = fig1();
    CHECK(error_of([&] { auto_truncate(dress(p, Mode::Secular), p, {0.0, 8, 64}); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("weak coupling: secular and beyond-secular agree") {
  for (double kappa : {5e-3, 1.0, 5.0}) {
    const auto p = fig1(kappa, 0.1);
    const double gs = auto_truncate(dress(p, Mode::Secular), p).observables.g2;
    const double gb = auto_truncate(dress(p, Mode::BeyondSecular), p).observables.g2;
    CHECK(std::abs(gs - gb) < 1e-3);
  }
}

TEST_CASE("iterative solver agrees with sparse LU") {
  const auto p = fig1(1.0);
  const auto g = assemble_generator(dress(p, Mode::BeyondSecular), p, 24);
  const HierarchyState direct = solve_steady_state(g, LinearSolver::DirectLU);
  const HierarchyState iter = solve_steady_state(g, LinearSolver::Iterative);
  CHECK((direct.values() - iter.values()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("corruption hook changes the solution") {
  const auto p = fig1(1.0);
  const DressedFrame f = dress(p, Mode::BeyondSecular);
  const auto good = solve_steady_state(assemble_generator(f, p, 12));
  const auto bad = solve_steady_state(assemble_generator(f, p, 12, {true}));
  CHECK((good.values() - bad.values()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("single point at n_max = 200 solves quickly") {
  const auto p = fig1(5e-3);
  const auto t0 = std::chrono::steady_clock::now();
  const HierarchyState s = solve_at(p, Mode::BeyondSecular, 200);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s.residual < 1e-9);
  CHECK(seconds < 1.0);
}
