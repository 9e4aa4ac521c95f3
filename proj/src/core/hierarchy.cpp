#include "hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "error.hpp"

namespace phonon {

HierarchyState::HierarchyState(int n_max)
    : n_max_(n_max),
      p_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kFamilies) * (n_max + 1))) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
}

HierarchyState::HierarchyState(int n_max, Eigen::VectorXcd values)
    : n_max_(n_max), p_(std::move(values)) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  if (p_.size() != static_cast<Eigen::Index>(kFamilies) * (n_max + 1)) {
    throw Error(ErrorCode::InvalidArgument, "hierarchy vector has wrong length");
  }
}

Eigen::VectorXd HierarchyState::populations() const {
  return p_.head(levels()).real();
}

namespace {

class TripletSink {
 public:
  explicit TripletSink(int n_max) : n_max_(n_max) {
    triplets_.reserve(static_cast<std::size_t>(kFamilies) * (n_max + 1) * 10);
  }

  // Column levels outside [0, n_max] do not exist in the truncated space.
  void add(int row_family, int row_n, int col_family, int col_n, Complex v) {
    if (col_n < 0 || col_n > n_max_ || v == Complex{}) return;
    triplets_.emplace_back(index(row_family, row_n), index(col_family, col_n), v);
  }

  std::vector<Eigen::Triplet<Complex>>& triplets() { return triplets_; }

 private:
  Eigen::Index index(int family, int n) const {
    return static_cast<Eigen::Index>(family - 1) * (n_max_ + 1) + n;
  }

  int n_max_;
  std::vector<Eigen::Triplet<Complex>> triplets_;
};

double relative_change(double now, double before) {
  const double scale = std::max(std::abs(now), std::numeric_limits<double>::min());
  return std::abs(now - before) / scale;
}

}  // namespace

SparseGenerator assemble_generator(const DressedFrame& frame,
                                   const SystemParams& params, int n_max,
                                   const GeneratorOptions& options) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");

  const Complex i{0.0, 1.0};
  const int top = n_max;
  const double G = frame.coupling(params.g());
  const double coherence = frame.coherence_decay();
  const double damp = params.kappa() * (1.0 + params.nbar());  // kappa (1 + nbar)
  const double pump = params.kappa() * params.nbar();          // kappa nbar
  const double gp = frame.gamma_plus;
  const double gm = frame.gamma_minus;
  const double beta = frame.beta;
  const double delta = frame.delta_eff;

  // <n| b b^dagger |n> for the truncated ladder (b^dagger |n_max> = 0).
  const auto bbdag = [top](int n) { return n < top ? n + 1.0 : 0.0; };

  TripletSink t(n_max);
  for (int n = 0; n <= top; ++n) {
    const double dn = n;

    t.add(1, n, 3, n, i * G);
    t.add(1, n, 5, n, -i * G);

    t.add(2, n, 3, n, -i * G);
    t.add(2, n, 5, n, -i * G);
    t.add(2, n, 1, n, (options.corrupt_for_testing ? 2.0 : -2.0) * (gp - gm));
    t.add(2, n, 2, n, -2.0 * (gp + gm));

    for (int f : {1, 2}) {
      t.add(f, n, f, n, -2.0 * damp * dn - 2.0 * pump * bbdag(n));
      t.add(f, n, f, n + 1, 2.0 * damp * (dn + 1.0));
      t.add(f, n, f, n - 1, 2.0 * pump * dn);
    }

    // Families 3/4 carry <n-1|rho_{+-}|n>, absent at n = 0.
    if (n == 0) {
      t.add(3, 0, 3, 0, -coherence);
      t.add(4, 0, 4, 0, -coherence);
    } else {
      t.add(3, n, 1, n, i * G * dn);
      t.add(3, n, 2, n, -i * G * dn);
      t.add(3, n, 1, n - 1, -i * G * dn);
      t.add(3, n, 2, n - 1, -i * G * dn);
      const double detune = beta * (2.0 * dn - 1.0) - delta;
      for (auto [f, partner] : {std::pair{3, 4}, std::pair{4, 3}}) {
        t.add(f, n, partner, n, -i * detune);
        t.add(f, n, f, n,
              -coherence - damp * (2.0 * dn - 1.0) - pump * (dn + bbdag(n)));
        t.add(f, n, f, n + 1, 2.0 * damp * (dn + 1.0));
        t.add(f, n, f + 2, n, -2.0 * damp);
        t.add(f, n, f, n - 1, 2.0 * pump * dn);
      }
    }

    // Families 5/6 carry <n|rho_{+-}|n+1>, absent at n = n_max.
    if (n == top) {
      t.add(5, top, 5, top, -coherence);
      t.add(6, top, 6, top, -coherence);
    } else {
      const double m = dn + 1.0;
      t.add(5, n, 1, n, -i * G * m);
      t.add(5, n, 2, n, -i * G * m);
      t.add(5, n, 1, n + 1, i * G * m);
      t.add(5, n, 2, n + 1, -i * G * m);
      const double detune = beta * (2.0 * dn + 1.0) - delta;
      for (auto [f, partner] : {std::pair{5, 6}, std::pair{6, 5}}) {
        t.add(f, n, partner, n, -i * detune);
        t.add(f, n, f, n,
              -coherence - damp * (2.0 * dn + 1.0) - pump * (bbdag(n) + bbdag(n + 1)));
        t.add(f, n, f, n + 1, 2.0 * damp * m);
        t.add(f, n, f, n - 1, 2.0 * pump * dn);
        t.add(f, n, f - 2, n, 2.0 * pump);
      }
    }
  }

  SparseGenerator out;
  out.n_max = n_max;
  const Eigen::Index dim = static_cast<Eigen::Index>(kFamilies) * (n_max + 1);
  out.matrix.resize(dim, dim);
  out.matrix.setFromTriplets(t.triplets().begin(), t.triplets().end());
  out.matrix.makeCompressed();
  return out;
}

HierarchyState solve_steady_state(const SparseGenerator& generator,
                                  LinearSolver solver) {
  using ColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
  const int levels = generator.n_max + 1;
  const Eigen::Index dim = generator.dimension();
  const Eigen::Index trace_row = generator.index(1, 0);

  // G is singular; trade the n = 0 row of family 1 for sum_n P_n^(1) = 1.
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(generator.matrix.nonZeros()) + levels);
  for (Eigen::Index r = 0; r < generator.matrix.outerSize(); ++r) {
    if (r == trace_row) continue;
    for (decltype(generator.matrix)::InnerIterator it(generator.matrix, r); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int n = 0; n < levels; ++n) {
    triplets.emplace_back(trace_row, generator.index(1, n), Complex{1.0, 0.0});
  }
  ColMatrix a(dim, dim);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
  rhs(trace_row) = 1.0;

  Eigen::VectorXcd x;
  if (solver == LinearSolver::DirectLU) {
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularSystem,
                  "sparse LU failed on constrained hierarchy: " + lu.lastErrorMessage());
    }
    x = lu.solve(rhs);
  } else {
    Eigen::BiCGSTAB<ColMatrix, Eigen::IncompleteLUT<Complex>> it;
    it.preconditioner().setDroptol(1e-12);
    it.preconditioner().setFillfactor(20);
    it.setTolerance(1e-14);
    it.setMaxIterations(static_cast<Eigen::Index>(20 * dim));
    it.compute(a);
    x = it.solve(rhs);
    if (it.info() != Eigen::Success) {
      std::ostringstream os;
      os << "BiCGSTAB did not converge (iterations " << it.iterations()
         << ", error estimate " << it.error() << ")";
      throw Error(ErrorCode::SingularSystem, os.str());
    }
  }

  HierarchyState state(generator.n_max, std::move(x));
  state.residual = residual_norm(generator, state);

  const double growth = state.values().cwiseAbs().maxCoeff();
  if (!std::isfinite(state.residual) || !std::isfinite(growth) ||
      state.residual > 1e-6 * std::max(1.0, growth)) {
    std::ostringstream os;
    os << "constrained hierarchy is numerically rank-deficient (residual "
       << state.residual << ", solution norm " << growth << ")";
    throw Error(ErrorCode::SingularSystem, os.str());
  }
  return state;
}

double residual_norm(const SparseGenerator& generator, const HierarchyState& p) {
  if (p.values().size() != generator.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "state and generator sizes differ");
  }
  const Eigen::VectorXcd r = generator.matrix * p.values();
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

Observables observables(const HierarchyState& p) {
  double first = 0.0;
  double second = 0.0;
  for (int n = 0; n <= p.n_max(); ++n) {
    const double pn = p(1, n).real();
    first += n * pn;
    second += static_cast<double>(n) * (n - 1) * pn;
  }
  if (!(first >= 1e-12)) {
    std::ostringstream os;
    os << "mean phonon number " << first << " is below 1e-12; g2 undefined";
    throw Error(ErrorCode::ZeroMeanPhonon, os.str());
  }
  Observables out;
  out.n_mean = first;
  out.g2 = second / (first * first);
  out.n_max_used = p.n_max();
  out.residual = p.residual;
  return out;
}

double reality_violation(const HierarchyState& p) {
  double worst = 0.0;
  for (int f = 1; f <= kFamilies; ++f) {
    const bool imaginary = (f == 3 || f == 5);
    for (int n = 0; n <= p.n_max(); ++n) {
      const Complex v = p(f, n);
      worst = std::max(worst, std::abs(imaginary ? v.real() : v.imag()));
    }
  }
  return worst;
}

double tail_mass(const HierarchyState& p) {
  double tail = 0.0;
  for (int n = p.n_max() / 2 + 1; n <= p.n_max(); ++n) tail += p(1, n).real();
  return tail;
}

Solution auto_truncate(const DressedFrame& frame, const SystemParams& params,
                       const TruncationOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (options.n_start < 1) throw Error(ErrorCode::InvalidArgument, "n_start must be >= 1");

  Observables previous;
  bool have_previous = false;
  for (int n_max = options.n_start; n_max <= options.n_cap; n_max *= 2) {
    const SparseGenerator g = assemble_generator(frame, params, n_max);
    HierarchyState state = solve_steady_state(g, options.solver);
    const Observables now = observables(state);
    if (have_previous && relative_change(now.n_mean, previous.n_mean) < options.tol &&
        relative_change(now.g2, previous.g2) < options.tol &&
        tail_mass(state) < options.tol) {
      return Solution{std::move(state), now};
    }
    previous = now;
    have_previous = true;
  }
  std::ostringstream os;
  os << "no convergence to tol " << options.tol << " up to n_max cap " << options.n_cap;
  if (have_previous) os << " (last <n> = " << previous.n_mean << ", g2 = " << previous.g2 << ")";
  throw Error(ErrorCode::TruncationDiverged, os.str());
}

}  // namespace phonon
