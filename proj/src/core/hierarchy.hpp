#pragma once

// Truncated six-family Fock hierarchy for the diagonal projections
//   P_n^(i) = <n| rho^(i) |n>,  i = 1..6,  n = 0..n_max
// of the dressed-state master equation, with its sparse generator,
// steady-state solver and phonon observables.

#include <complex>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "model.hpp"

namespace phonon {

using Complex = std::complex<double>;

inline constexpr int kFamilies = 6;

/// Flat layout: family-major, index = (family - 1) * (n_max + 1) + n.
class HierarchyState {
 public:
  HierarchyState() = default;
  explicit HierarchyState(int n_max);
  HierarchyState(int n_max, Eigen::VectorXcd values);

  int n_max() const noexcept { return n_max_; }
  int levels() const noexcept { return n_max_ + 1; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.size()); }

  Complex operator()(int family, int n) const { return p_(index(family, n)); }
  Complex& operator()(int family, int n) { return p_(index(family, n)); }

  const Eigen::VectorXcd& values() const noexcept { return p_; }
  Eigen::VectorXcd& values() noexcept { return p_; }

  /// Real parts of family 1, i.e. the phonon number distribution.
  Eigen::VectorXd populations() const;

  /// ||G P||_inf recorded by the solver; NaN when not produced by a solve.
  double residual = std::numeric_limits<double>::quiet_NaN();

  Eigen::Index index(int family, int n) const noexcept {
    return static_cast<Eigen::Index>(family - 1) * levels() + n;
  }

 private:
  int n_max_ = 0;
  Eigen::VectorXcd p_;
};

struct SparseGenerator {
  int n_max = 0;
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> matrix;

  Eigen::Index dimension() const noexcept { return matrix.rows(); }
  Eigen::Index index(int family, int n) const noexcept {
    return static_cast<Eigen::Index>(family - 1) * (n_max + 1) + n;
  }
};

struct GeneratorOptions {
  /// Test hook: flips the sign of the gamma_+ - gamma_- pumping term of
  /// family (2). The kernel survives but is wrong, so validation harnesses
  /// must notice.
  bool corrupt_for_testing = false;
};

SparseGenerator assemble_generator(const DressedFrame& frame,
                                   const SystemParams& params, int n_max,
                                   const GeneratorOptions& options = {});

enum class LinearSolver { DirectLU, Iterative };

/// Kernel vector of G normalized by sum_n P_n^(1) = 1. Throws
/// Error(SingularSystem) when the constrained system cannot be solved.
HierarchyState solve_steady_state(const SparseGenerator& generator,
                                  LinearSolver solver = LinearSolver::DirectLU);

/// ||G P||_inf.
double residual_norm(const SparseGenerator& generator, const HierarchyState& p);

struct Observables {
  double n_mean = 0.0;
  double g2 = 0.0;
  int n_max_used = 0;
  double residual = 0.0;
};

/// <n> and g2(0) from family 1. Throws Error(ZeroMeanPhonon) when <n> < 1e-12.
Observables observables(const HierarchyState& p);

/// Largest deviation from the steady-state reality pattern: families
/// 1, 2, 4, 6 real and 3, 5 purely imaginary.
double reality_violation(const HierarchyState& p);

/// Sum of P_n^(1) over n > n_max / 2.
double tail_mass(const HierarchyState& p);

struct TruncationOptions {
  double tol = 1e-8;
  int n_start = 8;
  int n_cap = 4096;
  LinearSolver solver = LinearSolver::DirectLU;
};

struct Solution {
  HierarchyState state;
  Observables observables;
};

/// Doubles n_max from n_start until <n> and g2 change by less than tol
/// (relative) between consecutive sizes and the upper-half tail of the
/// phonon distribution holds less than tol. Throws Error(TruncationDiverged)
/// past n_cap.
Solution auto_truncate(const DressedFrame& frame, const SystemParams& params,
                       const TruncationOptions& options = {});

}  // namespace phonon
