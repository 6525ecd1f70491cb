#include "oracles.hpp"
#include "smx/errors.hpp"
#include "smx/poisson.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace smx {
namespace {

constexpr double pi = std::numbers::pi;

TEST(SolveDirichletPoisson, InvertsEigenfunction) {
    const DomainGrid g = build_grid(8);
    const ScalarField e1 = first_eigenfunction(g);
    const PoissonSolution sol = solve_dirichlet_poisson(first_eigenvalue(g) * e1);
    EXPECT_LE(lp_norm(sol.w - e1, 2.0), 1e-10 * lp_norm(e1, 2.0));
}

TEST(SolveDirichletPoisson, ZeroRightHandSide) {
    const PoissonSolution sol = solve_dirichlet_poisson(ScalarField(build_grid(6)));
    EXPECT_TRUE(sol.w.is_zero());
    EXPECT_EQ(sol.iterations, 0);
}

TEST(SolveDirichletPoisson, ResidualMeetsTolerance) {
    const DomainGrid g = build_grid(9);
    const ScalarField f = oracle::random_field(g, 3);
    const LinearSolveOptions opts{1e-9, {}};
    const PoissonSolution sol = solve_dirichlet_poisson(f, opts);
    const double res = lp_norm(apply_laplacian(sol.w) - f, 2.0);
    EXPECT_LE(res, opts.rel_tol * lp_norm(f, 2.0));
    EXPECT_NEAR(sol.final_residual, res, 1e-6 * res + 1e-300);
}

TEST(SolveDirichletPoisson, MatchesDenseSolve) {
    const DomainGrid g = build_grid(4);
    const ScalarField f = oracle::random_field(g, 8);
    const ScalarField ref = oracle::dense_poisson(f);
    EXPECT_LE(lp_norm(solve_dirichlet_poisson(f).w - ref, 2.0), 1e-10 * lp_norm(ref, 2.0));
}

TEST(SolveDirichletPoisson, ManufacturedSolutionIsSecondOrder) {
    auto error = [](int n) {
        const DomainGrid g = build_grid(n);
        const ScalarField exact = first_eigenfunction(g);
        const ScalarField w = solve_dirichlet_poisson(3.0 * pi * pi * exact).w;
        return lp_norm(w - exact, 2.0) / lp_norm(exact, 2.0);
    };
    const double e8 = error(8), e16 = error(16), e32 = error(32);
    EXPECT_NEAR(e8 / e16, 4.0, 0.15);
    EXPECT_NEAR(e16 / e32, 4.0, 0.15);
}

TEST(SolveDirichletPoisson, FailureCarriesResidualHistory) {
    const DomainGrid g = build_grid(10);
    const ScalarField f = oracle::random_field(g, 4);
    try {
        solve_dirichlet_poisson(f, LinearSolveOptions{1e-12, 2});
        FAIL() << "expected SolverFailureError";
    } catch (const SolverFailureError& e) {
        EXPECT_EQ(e.residual_history().size(), 3u);
        EXPECT_GT(e.residual_history().back(), 0.0);
    }
}

TEST(SolveDirichletPoisson, RejectsBadOptions) {
    const ScalarField f = ScalarField::constant(build_grid(4), 1.0);
    EXPECT_THROW(solve_dirichlet_poisson(f, LinearSolveOptions{0.0, {}}), Error);
    EXPECT_THROW(solve_dirichlet_poisson(f, LinearSolveOptions{1e-8, 0}), Error);
}

TEST(SolveDirichletPoisson, LinearInRightHandSide) {
    const DomainGrid g = build_grid(7);
    const ScalarField f = oracle::random_field(g, 21);
    const ScalarField q = oracle::random_field(g, 22);
    const double a = 1.7, b = -0.3;
    const LinearSolveOptions opts{1e-12, {}};
    ScalarField combined = solve_dirichlet_poisson(a * f + b * q, opts).w;
    combined.axpy(-a, solve_dirichlet_poisson(f, opts).w);
    combined.axpy(-b, solve_dirichlet_poisson(q, opts).w);
    EXPECT_LE(lp_norm(combined, 2.0), 1e-9 * lp_norm(solve_dirichlet_poisson(a * f + b * q, opts).w, 2.0));
}

TEST(ComputePhi, ZeroCoefficient) {
    const DomainGrid g = build_grid(5);
    EXPECT_TRUE(compute_phi(oracle::random_field(g, 1), ScalarField(g)).is_zero());
}

TEST(ComputePhi, QuadraticScaling) {
    const DomainGrid g = build_grid(8);
    const ScalarField K = ScalarField::constant(g, 1.0);
    const ScalarField u = oracle::random_field(g, 31);
    ScalarField diff = compute_phi(2.0 * u, K);
    const ScalarField phi = compute_phi(u, K);
    diff.axpy(-4.0, phi);
    EXPECT_LE(lp_norm(diff, 2.0), 1e-10 * lp_norm(phi, 2.0));
}

TEST(ComputePhi, MatchesDenseSolveOnSmallGrid) {
    const DomainGrid g = build_grid(4);
    const ScalarField K = ScalarField::constant(g, 1.0);
    const ScalarField e1 = first_eigenfunction(g);
    const ScalarField ref = oracle::dense_poisson(hadamard(e1, e1));
    EXPECT_LE(lp_norm(compute_phi(e1, K) - ref, 2.0), 1e-10 * lp_norm(ref, 2.0));
}

TEST(ComputePhi, RejectsNegativeCoefficient) {
    const DomainGrid g = build_grid(4);
    std::vector<double> k(g.interior_count(), 1.0);
    k[5] = -0.1;
    EXPECT_THROW(compute_phi(ScalarField::constant(g, 1.0), ScalarField(g, k)), AssumptionViolationError);
}

// Discrete maximum principle: phi_u >= 0 up to solver slack for every u.
TEST(ComputePhi, NonnegativeProperty) {
    const DomainGrid g = build_grid(8);
    const LinearSolveOptions opts;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const ScalarField K = oracle::random_field(g, 500 + seed, 0.0, 3.0);
        const ScalarField phi = compute_phi(oracle::random_field(g, seed), K, opts);
        EXPECT_GE(phi.min(), -10.0 * opts.rel_tol * phi.max_abs());
    }
}

// ||phi_u|| <= C ||u||^2 with C stable across random u (H^1 seminorm).
TEST(ComputePhi, QuadraticBoundProperty) {
    const DomainGrid g = build_grid(8);
    const ScalarField K = ScalarField::constant(g, 1.0);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const ScalarField u = (0.01 + seed) * oracle::random_field(g, 900 + seed);
        const double ratio = grad_l2_norm(compute_phi(u, K)) / std::pow(grad_l2_norm(u), 2);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
}

}  // namespace
}  // namespace smx
