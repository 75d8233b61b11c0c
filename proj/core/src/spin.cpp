#include "qotto/spin.hpp"

#include <fmt/format.h>

#include <cmath>
#include <vector>

namespace qotto {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix pauli_plus() {  // |up><down|, raises m by one
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

// op acting on qubit `site` of an n-qubit register, identity elsewhere
Matrix embed(const Matrix& op, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k)
    out = tensor_product(out, k == site ? op : Matrix::Identity(2, 2));
  return out;
}

long binomial(int n, int k) {
  long double out = 1.0L;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return static_cast<long>(std::llround(static_cast<double>(out)));
}

}  // namespace

Matrix symmetric_isometry(int n_qubits) {
  const long dim = 1L << n_qubits;
  Matrix v = Matrix::Zero(dim, n_qubits + 1);
  // column c has Jz eigenvalue m = c - n/2, i.e. (n - c) set bits
  for (int c = 0; c <= n_qubits; ++c) {
    const int ones = n_qubits - c;
    const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n_qubits, ones)));
    for (long idx = 0; idx < dim; ++idx) {
      int count = 0;
      for (int b = 0; b < n_qubits; ++b) count += (idx >> b) & 1;
      if (count == ones) v(idx, c) = amp;
    }
  }
  return v;
}

SpinOperators build_spin_ops(int n_qubits, bool project_symmetric) {
  if (n_qubits < 1)
    throw std::invalid_argument("build_spin_ops: need at least one qubit");
  if (n_qubits > 10)
    throw std::invalid_argument(fmt::format(
        "build_spin_ops: {} qubits exceeds the dense guard (10)", n_qubits));
  const long dim = 1L << n_qubits;
  Matrix jz = Matrix::Zero(dim, dim);
  Matrix jplus = Matrix::Zero(dim, dim);
  for (int site = 0; site < n_qubits; ++site) {
    jz += 0.5 * embed(pauli_z(), site, n_qubits);
    jplus += embed(pauli_plus(), site, n_qubits);
  }
  SpinOperators ops;
  ops.n_qubits = n_qubits;
  ops.projected = project_symmetric;
  if (project_symmetric) {
    const Matrix v = symmetric_isometry(n_qubits);
    ops.jz = v.adjoint() * jz * v;
    ops.jplus = v.adjoint() * jplus * v;
  } else {
    ops.jz = std::move(jz);
    ops.jplus = std::move(jplus);
  }
  ops.jminus = ops.jplus.adjoint();
  return ops;
}

Matrix quench_hamiltonian(const SpinOperators& ops, double omega, double b) {
  const Matrix identity = Matrix::Identity(ops.dim(), ops.dim());
  return omega * (ops.jz + b * (ops.jz * ops.jz - identity));
}

Matrix quench_hamiltonian_pair(const SpinOperators& ops, double omega,
                               double b) {
  const Matrix h0 = quench_hamiltonian(ops, omega, b);
  const Matrix identity = Matrix::Identity(ops.dim(), ops.dim());
  return tensor_product(h0, identity) + tensor_product(identity, h0);
}

Matrix swap_unitary(const SpinOperators& ops) {
  const Matrix identity = Matrix::Identity(ops.dim(), ops.dim());
  const Matrix jz2 = ops.jz * ops.jz;
  const Matrix p0 = identity - jz2;  // projector on m = 0 for spin 1
  const Matrix h_sw =
      0.25 * tensor_product(ops.jminus * p0, ops.jplus * p0) +
      0.25 * tensor_product(p0 * ops.jplus, p0 * ops.jminus) -
      0.5 * tensor_product(p0, p0) -
      0.125 * tensor_product(jz2 - ops.jz, jz2 + ops.jz);
  const Spectrum sp = eig_hermitian(h_sw);
  Vector phases(sp.eigenvalues.size());
  for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k)
    phases[k] = std::polar(1.0, -kPi * sp.eigenvalues[k]);
  Matrix s = sp.eigenvectors * phases.asDiagonal() * sp.eigenvectors.adjoint();
  const double uerr = unitarity_error(s);
  if (uerr > tol::unitary)
    throw std::runtime_error(
        fmt::format("swap_unitary: unitarity error {:.3e}", uerr));
  return s;
}

double off_sector_action(const Matrix& s, const Matrix& isometry_pair) {
  const Matrix projector = isometry_pair * isometry_pair.adjoint();
  const Matrix identity = Matrix::Identity(s.rows(), s.cols());
  return max_abs((identity - projector) * s * projector);
}

}  // namespace qotto
