#include "oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <boost/numeric/odeint.hpp>

#include "error.hpp"

namespace phonon::oracle {

namespace {

using Matrix = Eigen::MatrixXcd;

Matrix fock_annihilation(int n_max) {
  Matrix b = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Matrix qubit_operator(OperatorLabel label) {
  Matrix q = Matrix::Zero(2, 2);
  switch (label) {
    case OperatorLabel::RPlus: q(0, 1) = 1.0; break;   // |+><-|
    case OperatorLabel::RMinus: q(1, 0) = 1.0; break;  // |-><+|
    case OperatorLabel::RPlusPlus: q(0, 0) = 1.0; break;
    case OperatorLabel::RMinusMinus: q(1, 1) = 1.0; break;
    case OperatorLabel::RZ: q(0, 0) = 1.0; q(1, 1) = -1.0; break;
    default: break;
  }
  return q;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out = Matrix::Zero(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != Complex{}) {
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
      }
    }
  }
  return out;
}

// l += c * (x (x) y), in place: D^4 temporaries are too large at the cap.
void add_kron(Matrix& l, Complex c, const Matrix& x, const Matrix& y) {
  const Eigen::Index ry = y.rows();
  const Eigen::Index cy = y.cols();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Complex xij = x(i, j);
      if (xij == Complex{}) continue;
      l.block(i * ry, j * cy, ry, cy) += (c * xij) * y;
    }
  }
}

// Superoperator of  rho -> -rate [A, B rho] + H.c.
//   = -rate (A B rho - B rho A + rho B^dag A^dag - A^dag rho B^dag)
void add_commutator_dissipator(Matrix& l, double rate, const Matrix& a, const Matrix& b) {
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix ad = a.adjoint();
  const Matrix bd = b.adjoint();
  add_kron(l, -rate, id, a * b);
  add_kron(l, rate, a.transpose(), b);
  add_kron(l, -rate, (bd * ad).transpose(), id);
  add_kron(l, rate, bd.transpose(), ad);
}

}  // namespace

OperatorMatrix make_operator(OperatorLabel label, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  const Matrix id_fock = Matrix::Identity(n_max + 1, n_max + 1);
  switch (label) {
    case OperatorLabel::B:
      return {label, kron(Matrix::Identity(2, 2), fock_annihilation(n_max))};
    case OperatorLabel::BDagger:
      return {label, kron(Matrix::Identity(2, 2), fock_annihilation(n_max).adjoint())};
    case OperatorLabel::Hamiltonian:
      throw Error(ErrorCode::InvalidArgument, "use hamiltonian() for the Hamiltonian");
    default:
      return {label, kron(qubit_operator(label), id_fock)};
  }
}

OperatorMatrix hamiltonian(const DressedFrame& frame, const SystemParams& params, int n_max) {
  const Matrix b = make_operator(OperatorLabel::B, n_max).matrix;
  const Matrix bd = make_operator(OperatorLabel::BDagger, n_max).matrix;
  const Matrix rz = make_operator(OperatorLabel::RZ, n_max).matrix;
  const Matrix rp = make_operator(OperatorLabel::RPlus, n_max).matrix;
  const Matrix rm = make_operator(OperatorLabel::RMinus, n_max).matrix;
  const Matrix number = bd * b;

  Matrix h = (params.omega_ph() - 2.0 * frame.omega_bar) * number - frame.delta_bar * rz +
             frame.beta * number * rz -
             (0.5 * params.g() * frame.sin_2theta) * (bd * rm + rp * b);
  return {OperatorLabel::Hamiltonian, std::move(h)};
}

Superoperator build_liouvillian(const DressedFrame& frame, const SystemParams& params,
                                int n_max, const OracleOptions& options) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  const int dim = 2 * (n_max + 1);
  if (dim > options.max_dimension) {
    std::ostringstream os;
    os << "oracle dimension " << dim << " exceeds cap " << options.max_dimension;
    throw Error(ErrorCode::DimensionOverflow, os.str());
  }

  const Matrix h = hamiltonian(frame, params, n_max).matrix;
  const Matrix b = make_operator(OperatorLabel::B, n_max).matrix;
  const Matrix bd = make_operator(OperatorLabel::BDagger, n_max).matrix;
  const Matrix rp = make_operator(OperatorLabel::RPlus, n_max).matrix;
  const Matrix rm = make_operator(OperatorLabel::RMinus, n_max).matrix;
  const Matrix rz = make_operator(OperatorLabel::RZ, n_max).matrix;
  const Matrix id = Matrix::Identity(dim, dim);
  const Complex i{0.0, 1.0};

  Superoperator out;
  out.n_max = n_max;
  out.matrix = Matrix::Zero(static_cast<Eigen::Index>(dim) * dim,
                            static_cast<Eigen::Index>(dim) * dim);
  Matrix& l = out.matrix;

  // -i [H, rho]
  add_kron(l, -i, id, h);
  add_kron(l, i, h.transpose(), id);

  add_commutator_dissipator(l, frame.gamma_plus, rp, rm);
  add_commutator_dissipator(l, frame.gamma_minus, rm, rp);
  add_commutator_dissipator(l, frame.gamma_zero, rz, rz);

  add_commutator_dissipator(l, params.kappa() * (1.0 + params.nbar()), bd, b);
  add_commutator_dissipator(l, params.kappa() * params.nbar(), b, bd);
  return out;
}

Eigen::VectorXcd vec(const Matrix& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Matrix unvec(const Eigen::VectorXcd& v, Eigen::Index dimension) {
  return Eigen::Map<const Matrix>(v.data(), dimension, dimension);
}

SteadyStateReport steady_state_density(const Superoperator& l,
                                       const SteadyStateOptions& options) {
  const Eigen::Index dim = l.hilbert_dimension();
  const Eigen::Index size = dim * dim;
  if (l.matrix.rows() != size || l.matrix.cols() != size) {
    throw Error(ErrorCode::InvalidArgument, "superoperator has wrong shape");
  }

  SteadyStateReport report;
  report.smallest_singular = std::numeric_limits<double>::quiet_NaN();
  report.second_singular = std::numeric_limits<double>::quiet_NaN();
  report.largest_singular = std::numeric_limits<double>::quiet_NaN();
  if (options.check_kernel_gap) {
    Eigen::BDCSVD<Matrix> svd(l.matrix);
    const Eigen::VectorXd& s = svd.singularValues();
    report.largest_singular = s(0);
    report.smallest_singular = s(size - 1);
    report.second_singular = s(size - 2);
    if (report.second_singular < options.gap_threshold * report.largest_singular) {
      std::ostringstream os;
      os << "Liouvillian kernel is degenerate: second-smallest singular value "
         << report.second_singular << " vs norm " << report.largest_singular;
      throw Error(ErrorCode::DegenerateKernel, os.str());
    }
  }

  // Tr(L rho) = 0 makes the rho_00 equation redundant; replace it by Tr rho = 1.
  Matrix a = l.matrix;
  a.row(0).setZero();
  for (Eigen::Index k = 0; k < dim; ++k) a(0, k * dim + k) = 1.0;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size);
  rhs(0) = 1.0;

  Eigen::PartialPivLU<Matrix> lu(a);
  const Eigen::VectorXcd x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw Error(ErrorCode::DegenerateKernel, "trace-constrained Liouvillian is singular");
  }

  Matrix rho = unvec(x, dim);
  rho /= rho.trace();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  report.state = DensityMatrix{l.n_max, rho};
  report.residual = (l.matrix * vec(rho)).cwiseAbs().maxCoeff();
  return report;
}

DensityMatrix evolve(const Superoperator& l, const DensityMatrix& rho0, double t_final,
                     double dt, const EvolveOptions& options) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;

  const Eigen::Index dim = l.hilbert_dimension();
  if (rho0.n_max != l.n_max || rho0.rho.rows() != dim || rho0.rho.cols() != dim) {
    throw Error(ErrorCode::InvalidArgument, "initial state does not match superoperator");
  }
  if (!(t_final >= 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need t_final >= 0 and dt > 0");
  }

  State x(rho0.rho.data(), rho0.rho.data() + rho0.rho.size());
  const auto rhs = [&l](const State& in, State& out, double /*t*/) {
    out.resize(in.size());
    Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size())).noalias() =
        l.matrix * Eigen::Map<const Eigen::VectorXcd>(in.data(), static_cast<Eigen::Index>(in.size()));
  };

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(options.abs_tol,
                                                                           options.rel_tol);
  double t = 0.0;
  double step = dt;
  std::size_t attempts = 0;
  const double min_step = 1e-14 * std::max(1.0, t_final);
  while (t < t_final) {
    if (++attempts > options.max_steps) {
      throw Error(ErrorCode::IntegratorFailure, "step budget exhausted before t_final");
    }
    step = std::min(step, t_final - t);
    if (stepper.try_step(rhs, x, t, step) == odeint::fail && step < min_step) {
      std::ostringstream os;
      os << "step size underflow at t = " << t << " (dt = " << step << ")";
      throw Error(ErrorCode::IntegratorFailure, os.str());
    }
  }

  DensityMatrix out{l.n_max, Eigen::Map<const Matrix>(x.data(), dim, dim)};
  return out;
}

DensityMatrix basis_state(int n_max, int qubit, int fock) {
  if (n_max < 1 || qubit < 0 || qubit > 1 || fock < 0 || fock > n_max) {
    throw Error(ErrorCode::InvalidArgument, "basis state out of range");
  }
  const int dim = 2 * (n_max + 1);
  DensityMatrix out{n_max, Matrix::Zero(dim, dim)};
  const int k = qubit * (n_max + 1) + fock;
  out.rho(k, k) = 1.0;
  return out;
}

Complex expectation(const DensityMatrix& rho, const Matrix& op) {
  return (rho.rho * op).trace();
}

HierarchyState project_to_hierarchy(const DensityMatrix& rho) {
  const int levels = rho.n_max + 1;
  if (rho.rho.rows() != 2 * levels || rho.rho.cols() != 2 * levels) {
    throw Error(ErrorCode::InvalidArgument, "density matrix has wrong dimension");
  }
  const Matrix pp = rho.rho.block(0, 0, levels, levels);
  const Matrix pm = rho.rho.block(0, levels, levels, levels);
  const Matrix mp = rho.rho.block(levels, 0, levels, levels);
  const Matrix mm = rho.rho.block(levels, levels, levels, levels);
  const Matrix b = fock_annihilation(rho.n_max);
  const Matrix bd = b.adjoint();

  const Matrix families[kFamilies] = {
      pp + mm,          pp - mm,          bd * pm - mp * b,
      bd * pm + mp * b, pm * bd - b * mp, pm * bd + b * mp,
  };
  HierarchyState out(rho.n_max);
  for (int f = 1; f <= kFamilies; ++f) {
    for (int n = 0; n < levels; ++n) out(f, n) = families[f - 1](n, n);
  }
  return out;
}

}  // namespace phonon::oracle
