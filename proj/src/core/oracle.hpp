#pragma once

// Brute-force reference for the hierarchy: the full dressed-frame Lindblad
// master equation on the joint qubit (x) Fock space, dimension
// D = 2 (n_max + 1). Basis index = q * (n_max + 1) + n with q = 0 for |+>
// and q = 1 for |->.
//
// Superoperators act on vec(rho) with column stacking:
//   vec(A rho B) = (B^T (x) A) vec(rho).

#include <Eigen/Dense>

#include "hierarchy.hpp"
#include "model.hpp"

namespace phonon::oracle {

enum class OperatorLabel { RPlus, RMinus, RPlusPlus, RMinusMinus, RZ, B, BDagger, Hamiltonian };

struct OperatorMatrix {
  OperatorLabel label;
  Eigen::MatrixXcd matrix;
};

/// Dressed-qubit or (truncated) phonon ladder operator lifted to the joint
/// space. Hamiltonian is rejected here; use hamiltonian().
OperatorMatrix make_operator(OperatorLabel label, int n_max);

/// (omega_ph - 2 omega_bar) b^dag b - delta_bar R_z + beta b^dag b R_z
///   - g sin(2 theta)/2 (b^dag R^- + R^+ b)
OperatorMatrix hamiltonian(const DressedFrame& frame, const SystemParams& params,
                           int n_max);

struct OracleOptions {
  /// Largest admissible D = 2 (n_max + 1).
  int max_dimension = 64;
};

struct Superoperator {
  int n_max = 0;
  Eigen::MatrixXcd matrix;  // D^2 x D^2

  int hilbert_dimension() const noexcept { return 2 * (n_max + 1); }
};

Superoperator build_liouvillian(const DressedFrame& frame, const SystemParams& params,
                                int n_max, const OracleOptions& options = {});

struct DensityMatrix {
  int n_max = 0;
  Eigen::MatrixXcd rho;
};

Eigen::VectorXcd vec(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Eigen::Index dimension);

struct SteadyStateOptions {
  /// Singular-value check that the kernel of L is one-dimensional.
  bool check_kernel_gap = true;
  /// Relative gap required between the second-smallest singular value and ||L||.
  double gap_threshold = 1e-6;
};

struct SteadyStateReport {
  DensityMatrix state;
  double residual = 0.0;            // ||L vec(rho)||_inf
  double smallest_singular = 0.0;   // NaN when the gap check is skipped
  double second_singular = 0.0;
  double largest_singular = 0.0;
};

/// Unique trace-one fixed point of L, Hermitized. Throws
/// Error(DegenerateKernel) when more than one singular value sits below
/// gap_threshold * ||L||.
SteadyStateReport steady_state_density(const Superoperator& l,
                                       const SteadyStateOptions& options = {});

struct EvolveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 5'000'000;
};

/// rho(t_final) from rho0 under d vec(rho)/dt = L vec(rho). dt is the
/// initial step of the adaptive integrator. Throws Error(IntegratorFailure).
DensityMatrix evolve(const Superoperator& l, const DensityMatrix& rho0, double t_final,
                     double dt, const EvolveOptions& options = {});

/// |q> <q| (x) |n> <n| as a density matrix.
DensityMatrix basis_state(int n_max, int qubit, int fock);

/// Tr(rho O) for a joint-space operator.
Complex expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& op);

/// P_n^(i) = <n| rho^(i) |n> with
///   rho^(1,2) = rho_{++} +- rho_{--}
///   rho^(3,4) = b^dag rho_{+-} -+ rho_{-+} b
///   rho^(5,6) = rho_{+-} b^dag -+ b rho_{-+}
HierarchyState project_to_hierarchy(const DensityMatrix& rho);

}  // namespace phonon::oracle
