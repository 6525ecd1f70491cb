#include "oracles.hpp"
#include "smx/energy.hpp"
#include "smx/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace smx {
namespace {

ProblemSpec unit_problem(int n, double p, double forcing = 1.0, double rel_tol = 1e-10) {
    const DomainGrid g = build_grid(n);
    return ProblemSpec::create(p, ScalarField::constant(g, 1.0), ScalarField::constant(g, forcing),
                               LinearSolveOptions{rel_tol, {}});
}

TEST(ProblemSpec, EnforcesAssumptions) {
    const DomainGrid g = build_grid(4);
    const ScalarField one = ScalarField::constant(g, 1.0);
    EXPECT_THROW(ProblemSpec::create(1.0, one, one), AssumptionViolationError);
    EXPECT_THROW(ProblemSpec::create(3.0, -1.0 * one, one), AssumptionViolationError);
    EXPECT_THROW(ProblemSpec::create(3.0, one, ScalarField(g)), AssumptionViolationError);
    EXPECT_NO_THROW(ProblemSpec::diagnostic(3.0, one, ScalarField(g)));
    EXPECT_THROW(ProblemSpec::diagnostic(3.0, one, -1.0 * one), AssumptionViolationError);
    EXPECT_THROW(ProblemSpec::create(3.0, one, ScalarField::constant(build_grid(5), 1.0)), GridMismatchError);
}

TEST(Energy, ZeroField) {
    const ProblemSpec spec = unit_problem(5, 3.0);
    const EnergyBreakdown e = energy(ScalarField(spec.grid()), spec);
    EXPECT_EQ(e.kinetic, 0.0);
    EXPECT_EQ(e.nonlocal, 0.0);
    EXPECT_EQ(e.power, 0.0);
    EXPECT_EQ(e.forcing, 0.0);
    EXPECT_EQ(e.total, 0.0);
}

TEST(Energy, NegativeAlongSmallMultiplesOfPositiveField) {
    const ProblemSpec spec = unit_problem(8, 7.0, 0.5);
    const ScalarField e = first_eigenfunction(spec.grid());
    for (double t : {1e-6, 1e-4, 1e-3, 1e-2}) EXPECT_LT(energy(t * e, spec).total, 0.0) << "t=" << t;
}

TEST(Energy, MatchesDenseOracle) {
    const ProblemSpec spec = unit_problem(4, 7.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ScalarField u = oracle::random_field(spec.grid(), seed);
        const double ref = oracle::energy_dense(u, spec.K(), spec.h(), spec.p());
        EXPECT_LE(oracle::rel_diff(energy(u, spec).total, ref), 1e-9);
    }
}

TEST(Energy, BreakdownIdentity) {
    const ProblemSpec spec = unit_problem(6, 2.5);
    const ScalarField u = oracle::random_field(spec.grid(), 12);
    const EnergyBreakdown e = energy(u, spec);
    EXPECT_LE(oracle::rel_diff(e.total, e.kinetic + e.nonlocal - e.power - e.forcing), 1e-13);
    EXPECT_GE(e.nonlocal, 0.0);
}

TEST(EnergySplit, ZeroAndIdentity) {
    const ProblemSpec spec = unit_problem(5, 3.0);
    const EnergySplit zero = energy_split(ScalarField(spec.grid()), spec);
    EXPECT_EQ(zero.psi, 0.0);
    EXPECT_EQ(zero.phi_part, 0.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ScalarField u = oracle::random_field(spec.grid(), seed);
        const EnergySplit s = energy_split(u, spec);
        EXPECT_GE(s.psi, 0.0);
        EXPECT_LE(oracle::rel_diff(s.psi - s.phi_part, energy(u, spec).total), 1e-13);
    }
}

TEST(EnergySplit, PsiConvexAlongSegments) {
    const ProblemSpec spec = unit_problem(5, 3.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField u = oracle::random_field(spec.grid(), 40 + trial);
        const ScalarField v = oracle::random_field(spec.grid(), 80 + trial);
        const double a = alpha_dist(rng);
        const double mix = energy_split(a * u + (1.0 - a) * v, spec).psi;
        EXPECT_LE(mix, a * energy_split(u, spec).psi + (1.0 - a) * energy_split(v, spec).psi + 1e-12);
    }
}

TEST(IK, InfiniteOutsideBallAndEnergyInside) {
    const ProblemSpec spec = unit_problem(6, 3.0);
    const ScalarField u = oracle::random_field(spec.grid(), 9);
    const double norm = w2n_norm(u);
    EXPECT_EQ(i_k(u, norm / 1.5, spec), std::numeric_limits<double>::infinity());
    EXPECT_EQ(i_k(ScalarField(spec.grid()), 0.3, spec), 0.0);

    const double on_boundary = i_k(u, norm, spec);
    EXPECT_TRUE(std::isfinite(on_boundary));
    EXPECT_EQ(on_boundary, energy(u, spec).total);

    for (double factor : {0.5, 0.99, 1.01, 3.0}) {
        const double value = i_k(u, norm * factor, spec);
        if (factor < 1.0) {
            EXPECT_TRUE(std::isinf(value));
        } else {
            EXPECT_EQ(value, energy(u, spec).total);
        }
    }
}

TEST(DirectionalDerivative, AtZeroOnlyForcingSurvives) {
    const ProblemSpec spec = unit_problem(5, 3.0, 2.0);
    const ScalarField v = oracle::random_field(spec.grid(), 6);
    EXPECT_LE(oracle::rel_diff(directional_derivative(ScalarField(spec.grid()), v, spec), -inner(spec.h(), v)),
              1e-14);
}

// Best-over-epsilon central differences of the energy, p in {2, 3, 7}.
TEST(DirectionalDerivative, MatchesFiniteDifferences) {
    for (double p : {2.0, 3.0, 7.0}) {
        const ProblemSpec spec = unit_problem(4, p, 1.0, 1e-14);
        for (std::uint64_t pair = 0; pair < 20; ++pair) {
            const ScalarField u = oracle::random_field(spec.grid(), 3000 + pair);
            const ScalarField v = oracle::random_field(spec.grid(), 4000 + pair);
            const double analytic = directional_derivative(u, v, spec);
            double best = 1e300;
            for (double eps : {1e-4, 1e-5, 1e-6}) {
                const double fd = (energy(u + eps * v, spec).total - energy(u - eps * v, spec).total) / (2.0 * eps);
                best = std::min(best, oracle::rel_diff(fd, analytic));
            }
            EXPECT_LE(best, 1e-6) << "p=" << p << " pair=" << pair;
        }
    }
}

TEST(GradientField, L2RepresentativeAtZeroIsMinusForcing) {
    const ProblemSpec spec = unit_problem(5, 3.0, 0.7);
    const ScalarField g = gradient_field(ScalarField(spec.grid()), spec, GradientMetric::l2);
    EXPECT_EQ(g, -1.0 * spec.h());
}

TEST(GradientField, RepresentsDirectionalDerivative) {
    const ProblemSpec spec = unit_problem(6, 3.0, 1.0, 1e-13);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ScalarField u = oracle::random_field(spec.grid(), 60 + seed);
        const ScalarField v = oracle::random_field(spec.grid(), 70 + seed);
        const double dd = directional_derivative(u, v, spec);
        EXPECT_LE(oracle::rel_diff(inner(gradient_field(u, spec, GradientMetric::l2), v), dd), 1e-11);
        EXPECT_LE(oracle::rel_diff(grad_inner(gradient_field(u, spec, GradientMetric::sobolev), v), dd), 1e-9);
    }
}

}  // namespace
}  // namespace smx
