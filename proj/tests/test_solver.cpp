#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "wg/analysis.hpp"
#include "wg/assembly.hpp"
#include "wg/solver.hpp"
#include "wg/testcases.hpp"

using wg::BrinkmanProblem;
using wg::FeSpace;
using wg::Mesh;
using wg::SolveOptions;
using wg::Vec2;

namespace {

BrinkmanProblem poiseuille_like_problem() {
  // Smooth data with a nonzero source and inflow; no manufactured solution
  // needed, only consistent right-hand sides.
  BrinkmanProblem problem;
  problem.mu = 0.7;
  problem.permeability = wg::PermeabilityField::constant(2.5);
  problem.f = [](const Vec2& p, double) { return Vec2(std::sin(p.y()), p.x()); };
  problem.g = [](const Vec2& p) { return Vec2(p.y() * (1.0 - p.y()), 0.0); };
  return problem;
}

}  // namespace

TEST_CASE("direct solve matches a dense full-pivot oracle", "[solver]") {
  const Mesh mesh = wg::build_structured(2);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  SolveOptions options;
  options.method = wg::SolveMethod::direct;
  const wg::SolveResult result = wg::solve(system, options);

  const Eigen::MatrixXd dense = Eigen::MatrixXd(system.assemble_full());
  const Eigen::VectorXd x = oracle::dense_solve(dense, system.full_rhs());
  const int nv = system.n_velocity_reduced();
  const int np = space.dofs().p_total();

  const wg::WgVelocity u_oracle = system.expand_velocity(x.segment(0, nv));
  CHECK((result.velocity.v0 - u_oracle.v0).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((result.velocity.vb - u_oracle.vb).cwiseAbs().maxCoeff() <= 1e-9);

  // The multiplier pins the weighted pressure mean, so the dense pressure is
  // already mean-zero up to rounding.
  Eigen::VectorXd p_oracle = x.segment(nv, np);
  p_oracle.array() -= system.c.dot(p_oracle) / system.domain_area;
  CHECK((result.pressure.coeffs - p_oracle).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("iterative and direct solutions agree", "[solver]") {
  const Mesh mesh = wg::build_structured(8);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  SolveOptions direct;
  direct.method = wg::SolveMethod::direct;
  SolveOptions krylov;
  krylov.method = wg::SolveMethod::krylov_minres;
  krylov.tolerance = 1e-12;

  const wg::SolveResult d = wg::solve(system, direct);
  const wg::SolveResult k = wg::solve(system, krylov);

  CHECK(k.report.relative_residual <= 1e-12);
  CHECK(k.report.iterations > 0);
  const double scale = d.velocity.vb.cwiseAbs().maxCoeff();
  CHECK((d.velocity.v0 - k.velocity.v0).cwiseAbs().maxCoeff() <= 1e-7 * scale);
  CHECK((d.velocity.vb - k.velocity.vb).cwiseAbs().maxCoeff() <= 1e-7 * scale);
  CHECK((d.pressure.coeffs - k.pressure.coeffs).cwiseAbs().maxCoeff() <=
        1e-6 * d.pressure.coeffs.cwiseAbs().maxCoeff());
}

TEST_CASE("solve reports honor their contracts", "[solver]") {
  const Mesh mesh = wg::build_structured(6);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  const wg::SolveResult result = wg::solve(system);  // default MINRES

  SECTION("relative residual meets the tolerance and is truthful") {
    CHECK(result.report.relative_residual <= 1e-10);
    const Eigen::VectorXd rhs = system.full_rhs();
    // Recompute the unpreconditioned residual from the returned fields.
    const int nv = system.n_velocity_reduced();
    const int nv0 = system.dofs.v0_total();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(system.total_dim());
    for (int r = 0; r < nv; ++r) {
      const int full = system.reduced_to_full[r];
      x[r] = full < nv0 ? result.velocity.v0[full] : result.velocity.vb[full - nv0];
    }
    x.segment(nv, system.dofs.p_total()) = result.pressure.coeffs;
    const double true_residual = (rhs - system.apply(x)).norm() / rhs.norm();
    CHECK(true_residual <= 5e-10);  // multiplier omitted; pressure shift absorbs it
  }

  SECTION("residual history is normalized and non-increasing") {
    const auto& history = result.report.residual_history;
    REQUIRE_FALSE(history.empty());
    CHECK(history.front() <= 1.0 + 1e-12);
    for (size_t i = 1; i < history.size(); ++i) {
      CHECK(history[i] <= history[i - 1] * (1.0 + 1e-9));
    }
    CHECK(static_cast<int>(history.size()) >= result.report.iterations);
  }

  SECTION("pressure is mean zero and divergence residual is reported") {
    CHECK(std::abs(system.c.dot(result.pressure.coeffs)) <=
          1e-10 * result.pressure.coeffs.cwiseAbs().maxCoeff());
    CHECK(result.report.divergence_residual ==
          Catch::Approx(system.divergence_residual(result.velocity)).margin(1e-15));
    CHECK(result.report.divergence_residual <= 1e-8);
    CHECK(result.report.wall_seconds > 0.0);
  }

  SECTION("boundary traces carry the prescribed data") {
    for (int e : wg::boundary_edges(mesh)) {
      const Eigen::VectorXd expected = wg::project_trace_edge(space, e, problem.g);
      const int offset = space.dofs().vb_offset(e) - space.dofs().v0_total();
      CHECK((result.velocity.vb.segment(offset, 4) - expected).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("an exhausted iteration budget raises a solver failure", "[solver]") {
  const Mesh mesh = wg::build_structured(6);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  SolveOptions options;
  options.max_iterations = 4;
  options.tolerance = 1e-13;
  try {
    wg::solve(system, options);
    FAIL("expected SolveFailure");
  } catch (const wg::SolveFailure& failure) {
    CHECK(failure.best_residual > 1e-13);
    CHECK(failure.iterations >= 1);
    CHECK(failure.iterations <= 8);
    CHECK(std::string(failure.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("solve options are validated", "[solver]") {
  const Mesh mesh = wg::build_structured(2);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  SolveOptions bad_tol;
  bad_tol.tolerance = 0.0;
  CHECK_THROWS_AS(wg::solve(system, bad_tol), std::invalid_argument);
  bad_tol.tolerance = 1.5;
  CHECK_THROWS_AS(wg::solve(system, bad_tol), std::invalid_argument);

  SolveOptions bad_iters;
  bad_iters.max_iterations = 0;
  CHECK_THROWS_AS(wg::solve(system, bad_iters), std::invalid_argument);
}

TEST_CASE("unpreconditioned MINRES also converges on a small system", "[solver]") {
  const Mesh mesh = wg::build_structured(4);
  const FeSpace space(mesh, 1);
  const BrinkmanProblem problem = poiseuille_like_problem();
  const wg::SaddleSystem system = wg::assemble(space, problem);

  SolveOptions plain;
  plain.preconditioner = wg::Preconditioner::none;
  plain.tolerance = 1e-10;
  const wg::SolveResult result = wg::solve(system, plain);
  CHECK(result.report.relative_residual <= 1e-10);

  SolveOptions preconditioned;
  const wg::SolveResult fast = wg::solve(system, preconditioned);
  // The diagonal preconditioner should not be slower on this contrast-free
  // problem by more than a small factor, and both must agree.
  CHECK((result.velocity.vb - fast.velocity.vb).cwiseAbs().maxCoeff() <=
        1e-7 * fast.velocity.vb.cwiseAbs().maxCoeff());
}
