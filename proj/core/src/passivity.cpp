#include "qotto/passivity.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qotto {

namespace {

double off_diagonal_norm(const Matrix& m) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

}  // namespace

PassivizationResult make_passive(const DensityMatrix& rho, const Matrix& h) {
  const Spectrum sp = eig_hermitian(h);
  const Matrix in_basis =
      sp.eigenvectors.adjoint() * rho.matrix() * sp.eigenvectors;
  const double off = off_diagonal_norm(in_basis);
  if (off > tol::diagonal_state)
    throw std::invalid_argument(fmt::format(
        "make_passive: state has off-diagonal weight {:.3e} in the energy "
        "eigenbasis (limit 1e-10)",
        off));
  const RealVector pops = in_basis.diagonal().real();
  const Eigen::Index n = pops.size();

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
    return pops[a] > pops[b];
  });

  RealVector passive_pops(n);
  double energy_before = 0.0, energy_after = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    passive_pops[k] = pops[perm[k]];
    energy_before += sp.eigenvalues[k] * pops[k];
    energy_after += sp.eigenvalues[k] * passive_pops[k];
  }
  Matrix passive = sp.eigenvectors *
                   passive_pops.cast<Complex>().asDiagonal() *
                   sp.eigenvectors.adjoint();
  if (is_diagonal(h)) {
    Matrix d = Matrix::Zero(n, n);
    d.diagonal() = passive.diagonal();
    passive = std::move(d);
  }
  return PassivizationResult{DensityMatrix::unchecked(std::move(passive)),
                             std::move(perm), energy_before - energy_after};
}

bool is_passive(const DensityMatrix& rho, const Matrix& h, double tolerance) {
  const Matrix comm = rho.matrix() * h - h * rho.matrix();
  if (max_abs(comm) > tolerance) return false;
  const Spectrum sp = eig_hermitian(h);
  const Eigen::Index n = sp.eigenvalues.size();
  RealVector pops(n);
  for (Eigen::Index k = 0; k < n; ++k)
    pops[k] = (sp.eigenvectors.col(k).adjoint() * rho.matrix() *
               sp.eigenvectors.col(k))(0, 0).real();

  const double scale = std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
  const double shell_tol = 1e-10 * scale;
  // walk degenerate shells; every later (higher) shell must not exceed the
  // minimum population of any earlier shell by more than the slack
  double running_min = std::numeric_limits<double>::infinity();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && sp.eigenvalues[end] - sp.eigenvalues[end - 1] <= shell_tol)
      ++end;
    double shell_max = -std::numeric_limits<double>::infinity();
    double shell_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = start; k < end; ++k) {
      shell_max = std::max(shell_max, pops[k]);
      shell_min = std::min(shell_min, pops[k]);
    }
    if (shell_max > running_min + tolerance) return false;
    running_min = std::min(running_min, shell_min);
    start = end;
  }
  return true;
}

ThermalReference reference_temperature(const Matrix& h, double entropy_target,
                                       std::string hamiltonian_tag) {
  const Spectrum sp = eig_hermitian(h);
  const Eigen::Index n = sp.eigenvalues.size();
  const double e0 = sp.eigenvalues.minCoeff();
  const double scale = std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
  Eigen::Index ground_degeneracy = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (sp.eigenvalues[k] - e0 <= 1e-12 * scale) ++ground_degeneracy;
  const double s_min = std::log(static_cast<double>(ground_degeneracy));
  const double s_max = std::log(static_cast<double>(n));

  auto pops_at = [&](double beta) {
    RealVector p(n);
    for (Eigen::Index k = 0; k < n; ++k)
      p[k] = std::exp(-beta * (sp.eigenvalues[k] - e0));
    p /= p.sum();
    return p;
  };
  auto entropy_at = [&](double beta) {
    const RealVector p = pops_at(beta);
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      if (p[k] > 0.0) s -= p[k] * std::log(p[k]);
    return s;
  };
  auto build = [&](double beta) {
    Matrix omega = sp.eigenvectors * pops_at(beta).cast<Complex>().asDiagonal() *
                   sp.eigenvectors.adjoint();
    if (is_diagonal(h)) {
      Matrix d = Matrix::Zero(n, n);
      d.diagonal() = omega.diagonal();
      omega = std::move(d);
    }
    return ThermalReference{beta, DensityMatrix::unchecked(std::move(omega)),
                            std::move(hamiltonian_tag)};
  };

  if (entropy_target > s_max + 1e-12)
    throw std::invalid_argument(fmt::format(
        "reference_temperature: entropy target {:.12g} outside the "
        "attainable range ({:.12g}, {:.12g}]",
        entropy_target, s_min, s_max));
  if (entropy_target >= s_max - 1e-12) return build(0.0);
  if (entropy_target < s_min + 1e-12)
    throw std::invalid_argument(fmt::format(
        "reference_temperature: entropy target {:.12g} outside the "
        "attainable range ({:.12g}, {:.12g}]",
        entropy_target, s_min, s_max));

  double lo = 0.0, hi = 1.0;
  int expansions = 0;
  while (entropy_at(hi) > entropy_target) {
    hi *= 2.0;
    if (++expansions > 400)
      throw std::invalid_argument(fmt::format(
          "reference_temperature: entropy target {:.12g} not enclosed below "
          "beta = {:.3e}",
          entropy_target, hi));
  }
  // bisect essentially to machine width; downstream identities need the
  // entropy match far tighter than the documented 1e-9
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (entropy_at(mid) > entropy_target)
      lo = mid;
    else
      hi = mid;
  }
  const double beta = 0.5 * (lo + hi);
  const double residual = std::abs(entropy_at(beta) - entropy_target);
  if (residual > 1e-9)
    throw std::runtime_error(fmt::format(
        "reference_temperature: entropy residual {:.3e} after bisection",
        residual));
  return build(beta);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& omega) {
  if (rho.dim() != omega.dim())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> rho_solver(rho.matrix());
  double tr_rho_ln_rho = 0.0;
  for (Eigen::Index k = 0; k < rho.dim(); ++k) {
    const double p = std::clamp(rho_solver.eigenvalues()[k], 0.0, 1.0);
    if (p > 0.0) tr_rho_ln_rho += p * std::log(p);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> omega_solver(omega.matrix());
  double tr_rho_ln_omega = 0.0;
  for (Eigen::Index k = 0; k < omega.dim(); ++k) {
    const double q = std::clamp(omega_solver.eigenvalues()[k], 0.0, 1.0);
    const double weight = (omega_solver.eigenvectors().col(k).adjoint() *
                           rho.matrix() * omega_solver.eigenvectors().col(k))(0, 0)
                              .real();
    if (q <= 0.0) {
      if (weight > 1e-12)
        return std::numeric_limits<double>::infinity();  // support violation
      continue;
    }
    tr_rho_ln_omega += weight * std::log(q);
  }
  return tr_rho_ln_rho - tr_rho_ln_omega;
}

}  // namespace qotto
