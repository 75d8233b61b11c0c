// Dense complex linear algebra and quantum-state primitives on small
// Hilbert spaces: Hermitian eigendecomposition, Gibbs states, entropy,
// Kronecker products and exact unitary propagation of time-dependent
// Hamiltonians. Energies are dimensionless (E2 = 1, hbar = kB = 1).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>

namespace qotto {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double unitary = 1e-10;
inline constexpr double trace_one = 1e-12;
inline constexpr double psd_floor = -1e-12;
inline constexpr double commutator = 1e-10;
inline constexpr double diagonal_state = 1e-10;
inline constexpr double population_convergence = 1e-9;
inline constexpr double entropy_clamp = 1e-9;
}  // namespace tol

/// Raised when step doubling fails to stabilize populations.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double max_abs(const Matrix& m);
double hermiticity_error(const Matrix& m);   // max |M - M^dag|
double unitarity_error(const Matrix& u);     // max |U^dag U - 1|
bool is_diagonal(const Matrix& m);           // exact zeros off the diagonal

/// Kronecker product, left factor most significant (row-major index
/// convention). Dense products above dimension 1e4 are refused.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Matrix kronecker_power(const Matrix& a, int n);

struct Spectrum {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, same order
};

/// Hermitian eigendecomposition with deterministic ordering: ascending
/// eigenvalues, degenerate clusters ordered by the row index of each
/// eigenvector's dominant component.
Spectrum eig_hermitian(const Matrix& h);

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  static DensityMatrix from_matrix(Matrix m);
  /// Trusted constructor for matrices produced by unitary conjugation or
  /// spectral synthesis; skips the eigenvalue check.
  static DensityMatrix unchecked(Matrix m);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix diagonal(const RealVector& populations);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  RealVector populations() const { return mat_.diagonal().real(); }

 private:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

/// exp(-beta H) / Tr exp(-beta H), computed in the eigenbasis with the
/// spectrum shifted by its minimum so large beta cannot overflow.
/// beta = +infinity yields the uniform mixture over the ground space.
DensityMatrix gibbs_state(const Matrix& h, double beta);

/// -Tr[rho ln rho] with eigenvalues clamped to [0,1]; a clamp beyond
/// 1e-9 is treated as an invalid state.
double von_neumann_entropy(const DensityMatrix& rho);

/// Re Tr[op rho]
double expectation_value(const Matrix& op, const DensityMatrix& rho);

using TimeHamiltonian = std::function<Matrix(double)>;

struct PropagationResult {
  DensityMatrix state;
  Matrix propagator;        // accumulated time-ordered U
  int steps_used;
  double population_delta;  // max population change in the last doubling
  bool converged;
};

/// Solves the von Neumann equation: rho(t1) = U rho(t0) U^dag with U the
/// ordered product of per-step propagators exp(-i H(t_mid) dt), each an
/// exact exponential via eigendecomposition of the midpoint Hamiltonian.
/// Steps are doubled until no population moves by more than 1e-9; the
/// result of the finest pass is returned.
PropagationResult propagate(const DensityMatrix& rho, const TimeHamiltonian& h,
                            double t0, double t1, int steps,
                            int max_doublings = 8);

}  // namespace qotto
