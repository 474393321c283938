#ifndef WG_SOLVER_HPP
#define WG_SOLVER_HPP

#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <vector>

#include "wg/assembly.hpp"

namespace wg {

enum class SolveMethod { krylov_minres, direct };
enum class Preconditioner { none, diag_A_pressure_mass };

struct SolveOptions {
  SolveMethod method = SolveMethod::krylov_minres;
  double tolerance = 1e-10;  // relative residual, unpreconditioned
  int max_iterations = 200000;
  Preconditioner preconditioner = Preconditioner::diag_A_pressure_mass;

  void validate() const {
    if (!(tolerance > 0.0) || !(tolerance < 1.0))
      throw std::invalid_argument("SolveOptions: tolerance must lie in (0, 1)");
    if (max_iterations < 1)
      throw std::invalid_argument("SolveOptions: max_iterations must be at least 1");
  }
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double wall_seconds = 0.0;
  double divergence_residual = 0.0;  // max over pressure basis of |b(u_h, q)|
  /// Per-iteration residual estimates of the Krylov solve, normalized to the
  /// initial residual and continued across restarts; non-increasing within
  /// rounding.  Empty for the direct method.
  std::vector<double> residual_history;
};

struct SolveResult {
  WgVelocity velocity;
  PressureField pressure;
  SolveReport report;
};

namespace detail {

/// Preconditioned MINRES on the saddle operator with restarts.  Restarts
/// recompute the true residual and solve for a correction, which enforces the
/// unpreconditioned stopping contract and limits rounding drift.
inline Eigen::VectorXd minres(const SaddleSystem& system, const Eigen::VectorXd& rhs,
                              const Eigen::VectorXd& inv_precond, double tolerance,
                              int max_iterations, SolveReport& report) {
  const int n = system.total_dim();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    report.relative_residual = 0.0;
    return x;
  }
  const double target = tolerance * rhs_norm;

  int total_iterations = 0;
  double history_scale = 1.0;  // continues the recorded curve across restarts
  double best_residual = rhs_norm;
  int stagnant_sweeps = 0;

  while (true) {
    const Eigen::VectorXd r0 = rhs - system.apply(x);
    const double r0_norm = r0.norm();
    if (r0_norm <= target) {
      report.relative_residual = r0_norm / rhs_norm;
      report.iterations = total_iterations;
      return x;
    }
    if (total_iterations >= max_iterations) {
      throw SolveFailure("iterative solve exhausted its iteration budget",
                         best_residual / rhs_norm, total_iterations);
    }
    if (r0_norm < best_residual * (1.0 - 1e-12)) {
      best_residual = r0_norm;
      stagnant_sweeps = 0;
    } else if (++stagnant_sweeps >= 2) {
      throw SolveFailure("iterative solve stagnated before reaching the tolerance",
                         best_residual / rhs_norm, total_iterations);
    }

    // One MINRES sweep for the correction K d = r0 (Paige-Saunders recurrence).
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r1 = r0;
    Eigen::VectorXd r2 = r0;
    Eigen::VectorXd y = inv_precond.cwiseProduct(r0);
    const double beta1_sq = r0.dot(y);
    if (!(beta1_sq > 0.0)) throw InternalError("preconditioner is not positive definite");
    const double beta1 = std::sqrt(beta1_sq);

    // Aim below the remaining Euclidean reduction; the true-residual check at
    // the next restart decides whether the contract is actually met.
    const double sweep_target = 0.5 * beta1 * (target / r0_norm);
    const int sweep_limit = std::min(max_iterations - total_iterations, 2500);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
    double phibar = beta1, cs = -1.0, sn = 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
    int sweep_iterations = 0;

    while (sweep_iterations < sweep_limit) {
      ++sweep_iterations;
      ++total_iterations;

      const Eigen::VectorXd v = y / beta;
      y = system.apply(v);
      if (sweep_iterations >= 2) y -= (beta / oldb) * r1;
      const double alfa = v.dot(y);
      y -= (alfa / beta) * r2;
      r1 = r2;
      r2 = y;
      y = inv_precond.cwiseProduct(r2);
      oldb = beta;
      const double beta_sq = r2.dot(y);
      if (beta_sq < 0.0) throw InternalError("preconditioner is not positive definite");
      beta = std::sqrt(beta_sq);

      const double oldeps = epsln;
      const double delta = cs * dbar + sn * alfa;
      const double gbar = sn * dbar - cs * alfa;
      epsln = sn * beta;
      dbar = -cs * beta;
      double gamma = std::hypot(gbar, beta);
      if (gamma == 0.0) gamma = 1e-300;
      cs = gbar / gamma;
      sn = beta / gamma;
      const double phi = cs * phibar;
      phibar = sn * phibar;

      const Eigen::VectorXd w1 = w2;
      w2 = w;
      w = (v - oldeps * w1 - delta * w2) / gamma;
      d += phi * w;

      report.residual_history.push_back(history_scale * (phibar / beta1));
      if (phibar <= sweep_target) break;
    }

    history_scale *= phibar / beta1;
    x += d;
  }
}

}  // namespace detail

/// Diagonal of the block preconditioner: diag(A) on the velocity block, the
/// pressure mass matrix scaled by 1/mu on the pressure block, and mu on the
/// multiplier (which balances the constraint row against the pressure scale).
inline Eigen::VectorXd preconditioner_diagonal(const SaddleSystem& system) {
  const int nv = system.n_velocity_reduced();
  const int np = system.dofs.p_total();
  Eigen::VectorXd diag(system.total_dim());
  diag.segment(0, nv) = system.A.diagonal();
  diag.segment(nv, np) = system.pressure_mass_diag / system.mu;
  diag[nv + np] = system.mu;
  if (!(diag.minCoeff() > 0.0))
    throw InternalError("block preconditioner has a non-positive diagonal entry");
  return diag;
}

/// Solves the saddle system and returns the velocity (with boundary traces
/// restored), the mean-zero pressure, and a report.  The relative residual of
/// an accepted solve is at most the requested tolerance.
inline SolveResult solve(const SaddleSystem& system, const SolveOptions& options = {}) {
  options.validate();
  const auto start = std::chrono::steady_clock::now();

  const Eigen::VectorXd rhs = system.full_rhs();
  Eigen::VectorXd x;
  SolveReport report;

  if (options.method == SolveMethod::krylov_minres) {
    Eigen::VectorXd inv_precond;
    if (options.preconditioner == Preconditioner::diag_A_pressure_mass) {
      inv_precond = preconditioner_diagonal(system).cwiseInverse();
    } else {
      inv_precond = Eigen::VectorXd::Ones(system.total_dim());
    }
    x = detail::minres(system, rhs, inv_precond, options.tolerance, options.max_iterations,
                       report);
  } else {
    Eigen::SparseMatrix<double> K = system.assemble_full();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success) throw SingularSystem("direct factorization failed");
    x = lu.solve(rhs);
    // One step of iterative refinement tightens the residual when needed.
    const Eigen::VectorXd residual = rhs - system.apply(x);
    if (rhs.norm() > 0.0 && residual.norm() > options.tolerance * rhs.norm()) {
      x += lu.solve(residual);
    }
    const double rel = rhs.norm() > 0.0 ? (rhs - system.apply(x)).norm() / rhs.norm() : 0.0;
    if (rel > options.tolerance)
      throw SolveFailure("direct solve did not reach the residual tolerance", rel, 0);
    report.relative_residual = rel;
    report.iterations = 0;
  }

  const int nv = system.n_velocity_reduced();
  const int np = system.dofs.p_total();

  SolveResult result;
  result.velocity = system.expand_velocity(x.segment(0, nv));
  result.pressure = PressureField::zero(system.dofs);
  result.pressure.coeffs = x.segment(nv, np);

  // Shift to the mean-zero representative; the constant monomial is the first
  // coefficient of every element block.
  const double mean = system.c.dot(result.pressure.coeffs) / system.domain_area;
  for (int t = 0; t < system.dofs.n_elements; ++t) {
    result.pressure.coeffs[system.dofs.p_offset(t)] -= mean;
  }

  report.divergence_residual =
      (system.B * x.segment(0, nv) + system.rhs_pressure).cwiseAbs().maxCoeff();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.report = report;
  return result;
}

}  // namespace wg

#endif
