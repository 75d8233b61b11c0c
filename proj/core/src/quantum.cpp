#include "qotto/quantum.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace qotto {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_error(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  const auto rows = a.rows() * b.rows();
  const auto cols = a.cols() * b.cols();
  if (static_cast<double>(rows) * static_cast<double>(cols) > 1e8 ||
      rows > 10000 || cols > 10000) {
    throw std::invalid_argument(fmt::format(
        "tensor_product: dense result {}x{} exceeds the dimension guard "
        "(10000); use the diagonal fast path",
        rows, cols));
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kronecker_power(const Matrix& a, int n) {
  if (n < 1) throw std::invalid_argument("kronecker_power: n must be >= 1");
  Matrix out = a;
  for (int k = 1; k < n; ++k) out = tensor_product(out, a);
  return out;
}

namespace {

// Order each degenerate cluster by the row index of the dominant component
// so repeated runs are bit-stable.
void canonicalize_degenerate(Spectrum& sp) {
  const Eigen::Index n = sp.eigenvalues.size();
  if (n < 2) return;
  const double scale =
      std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-12 * scale;
  auto dominant_row = [&](Eigen::Index col) {
    Eigen::Index row = 0;
    sp.eigenvectors.col(col).cwiseAbs().maxCoeff(&row);
    return row;
  };
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n &&
           sp.eigenvalues[end] - sp.eigenvalues[end - 1] <= cluster_tol)
      ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return dominant_row(a) < dominant_row(b);
                       });
      Matrix cols(sp.eigenvectors.rows(), end - start);
      RealVector vals(end - start);
      for (Eigen::Index k = 0; k < end - start; ++k) {
        cols.col(k) = sp.eigenvectors.col(idx[k]);
        vals[k] = sp.eigenvalues[idx[k]];
      }
      sp.eigenvectors.middleCols(start, end - start) = cols;
      sp.eigenvalues.segment(start, end - start) = vals;
    }
    start = end;
  }
}

// Exactly diagonal input: sort the diagonal, eigenvectors are basis vectors.
Spectrum diagonal_spectrum(const Matrix& h) {
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return h(a, a).real() < h(b, b).real();
  });
  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.eigenvectors = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sp.eigenvalues[k] = h(idx[k], idx[k]).real();
    sp.eigenvectors(idx[k], k) = 1.0;
  }
  return sp;
}

}  // namespace

Spectrum eig_hermitian(const Matrix& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  const double herm = hermiticity_error(h);
  if (herm > tol::hermitian * std::max(1.0, max_abs(h))) {
    throw std::invalid_argument(fmt::format(
        "eig_hermitian: non-Hermitian input, max|H - H^dag| = {:.3e}", herm));
  }
  if (is_diagonal(h)) return diagonal_spectrum(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed");
  Spectrum sp{solver.eigenvalues(), solver.eigenvectors()};
  canonicalize_degenerate(sp);
  return sp;
}

DensityMatrix DensityMatrix::from_matrix(Matrix m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  const double herm = hermiticity_error(m);
  if (herm > tol::hermitian)
    throw std::invalid_argument(fmt::format(
        "DensityMatrix: non-Hermitian, max|M - M^dag| = {:.3e}", herm));
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > tol::trace_one)
    throw std::invalid_argument(
        fmt::format("DensityMatrix: |trace - 1| = {:.3e}", tr_err));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const double min_ev = solver.eigenvalues().minCoeff();
  if (min_ev < tol::psd_floor)
    throw std::invalid_argument(fmt::format(
        "DensityMatrix: negative eigenvalue {:.3e}", min_ev));
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::unchecked(Matrix m) {
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument(
        fmt::format("DensityMatrix::pure: |psi| = {} is not 1", norm));
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations) {
  const double sum = populations.sum();
  if (std::abs(sum - 1.0) > tol::trace_one)
    throw std::invalid_argument(
        fmt::format("DensityMatrix::diagonal: populations sum to {}", sum));
  if (populations.minCoeff() < tol::psd_floor)
    throw std::invalid_argument("DensityMatrix::diagonal: negative population");
  Matrix m = Matrix::Zero(populations.size(), populations.size());
  m.diagonal() = populations.cast<Complex>();
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix gibbs_state(const Matrix& h, double beta) {
  if (std::isnan(beta) || beta < 0.0)
    throw std::invalid_argument(
        fmt::format("gibbs_state: beta = {} must be >= 0", beta));
  const Spectrum sp = eig_hermitian(h);
  const Eigen::Index n = sp.eigenvalues.size();
  const double e0 = sp.eigenvalues.minCoeff();
  RealVector pops(n);
  if (std::isinf(beta)) {
    const double scale = std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < n; ++k)
      pops[k] = (sp.eigenvalues[k] - e0 <= 1e-12 * scale) ? 1.0 : 0.0;
  } else {
    for (Eigen::Index k = 0; k < n; ++k)
      pops[k] = std::exp(-beta * (sp.eigenvalues[k] - e0));
  }
  pops /= pops.sum();
  Matrix rho =
      sp.eigenvectors * pops.cast<Complex>().asDiagonal() * sp.eigenvectors.adjoint();
  // a diagonal Hamiltonian must give an exactly diagonal state
  if (is_diagonal(h)) {
    Matrix d = Matrix::Zero(n, n);
    d.diagonal() = rho.diagonal();
    rho = std::move(d);
  }
  return DensityMatrix::unchecked(std::move(rho));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
  double clamp = 0.0;
  double s = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    double p = solver.eigenvalues()[k];
    if (p < 0.0) {
      clamp = std::max(clamp, -p);
      p = 0.0;
    } else if (p > 1.0) {
      clamp = std::max(clamp, p - 1.0);
      p = 1.0;
    }
    if (p > 0.0) s -= p * std::log(p);
  }
  if (clamp > tol::entropy_clamp)
    throw std::domain_error(fmt::format(
        "von_neumann_entropy: eigenvalue clamp {:.3e} exceeds 1e-9", clamp));
  return s;
}

double expectation_value(const Matrix& op, const DensityMatrix& rho) {
  return (op * rho.matrix()).trace().real();
}

namespace {

struct StepProduct {
  Matrix u;
  bool all_diagonal;
};

// Exactly one Hermitian off-diagonal pair? Returns {i, j} with i < j.
bool single_coupling_pair(const Matrix& m, Eigen::Index& pi, Eigen::Index& pj) {
  bool found = false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (m(i, j) == Complex(0.0, 0.0)) continue;
      if (found) return false;
      pi = i;
      pj = j;
      found = true;
    }
  }
  return found;
}

// U <- exp(-i H dt) U for H = diagonal plus one coupling pair: every row
// picks up its diagonal phase and the coupled rows mix through the exact
// 2x2 exponential.
void apply_pair_step(const Matrix& hm, Eigen::Index i, Eigen::Index j,
                     double dt, Matrix& u) {
  const double a = hm(i, i).real();
  const double b = hm(j, j).real();
  const Complex c = hm(i, j);
  const double mean = 0.5 * (a + b);
  const double detune = 0.5 * (a - b);
  const double rabi = std::sqrt(detune * detune + std::norm(c));
  const Complex envelope = std::polar(1.0, -mean * dt);
  Complex uii, uij, uji, ujj;
  if (rabi == 0.0) {
    uii = ujj = envelope;
    uij = uji = Complex(0.0, 0.0);
  } else {
    const double cosr = std::cos(rabi * dt);
    const Complex mix = Complex(0.0, -1.0) * (std::sin(rabi * dt) / rabi);
    uii = envelope * (cosr + mix * detune);
    ujj = envelope * (cosr - mix * detune);
    uij = envelope * mix * c;
    uji = envelope * mix * std::conj(c);
  }
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    if (k == i || k == j) continue;
    u.row(k) *= std::polar(1.0, -hm(k, k).real() * dt);
  }
  const Eigen::RowVectorXcd row_i = u.row(i);
  const Eigen::RowVectorXcd row_j = u.row(j);
  u.row(i) = uii * row_i + uij * row_j;
  u.row(j) = uji * row_i + ujj * row_j;
}

StepProduct accumulate_propagator(const TimeHamiltonian& h, double t0,
                                  double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  Matrix u;
  bool first = true;
  bool all_diagonal = true;
  for (int k = 0; k < steps; ++k) {
    const double t_mid = t0 + (k + 0.5) * dt;
    const Matrix hm = h(t_mid);
    if (first) {
      u = Matrix::Identity(hm.rows(), hm.cols());
      first = false;
    }
    Eigen::Index pi = 0, pj = 0;
    if (is_diagonal(hm)) {
      for (Eigen::Index i = 0; i < hm.rows(); ++i)
        u.row(i) *= std::polar(1.0, -hm(i, i).real() * dt);
    } else if (single_coupling_pair(hm, pi, pj)) {
      all_diagonal = false;
      apply_pair_step(hm, pi, pj, dt, u);
    } else {
      all_diagonal = false;
      const Spectrum sp = eig_hermitian(hm);
      Vector phases(sp.eigenvalues.size());
      for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
        phases[i] = std::polar(1.0, -sp.eigenvalues[i] * dt);
      u = sp.eigenvectors * phases.asDiagonal() * sp.eigenvectors.adjoint() * u;
    }
  }
  return {std::move(u), all_diagonal};
}

RealVector evolved_populations(const Matrix& u, const Matrix& rho) {
  return (u * rho * u.adjoint()).diagonal().real();
}

}  // namespace

PropagationResult propagate(const DensityMatrix& rho, const TimeHamiltonian& h,
                            double t0, double t1, int steps,
                            int max_doublings) {
  if (!(t1 > t0))
    throw std::invalid_argument(
        fmt::format("propagate: need t1 > t0, got [{}, {}]", t0, t1));
  if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");

  StepProduct coarse = accumulate_propagator(h, t0, t1, steps);
  RealVector pops = evolved_populations(coarse.u, rho.matrix());
  int n = steps;
  double delta = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int d = 0; d < max_doublings; ++d) {
    StepProduct fine = accumulate_propagator(h, t0, t1, 2 * n);
    RealVector fine_pops = evolved_populations(fine.u, rho.matrix());
    delta = (fine_pops - pops).cwiseAbs().maxCoeff();
    coarse = std::move(fine);
    pops = std::move(fine_pops);
    n *= 2;
    if (delta <= tol::population_convergence) {
      converged = true;
      break;
    }
  }

  Matrix final_rho;
  if (coarse.all_diagonal && is_diagonal(rho.matrix())) {
    // diagonal propagator, diagonal state: conjugation is the identity
    final_rho = rho.matrix();
  } else {
    final_rho = coarse.u * rho.matrix() * coarse.u.adjoint();
    final_rho = 0.5 * (final_rho + final_rho.adjoint().eval());
  }
  return PropagationResult{DensityMatrix::unchecked(std::move(final_rho)),
                           std::move(coarse.u), n, delta, converged};
}

}  // namespace qotto
