#pragma once

#include "smx/grid.hpp"

#include <optional>

namespace smx {

struct LinearSolveOptions {
    /// Relative residual target, ||-Delta_h w - f|| <= rel_tol ||f||.
    double rel_tol = 1e-10;
    /// Iteration cap; unset means 10 n^3.
    std::optional<int> max_iters;

    int resolved_max_iters(const DomainGrid& grid) const;
    /// Throws Error when rel_tol is outside (0,1) or max_iters < 1.
    void validate() const;
};

struct PoissonSolution {
    ScalarField w;
    int iterations = 0;
    /// True residual ||-Delta_h w - f||_{L^2} at exit.
    double final_residual = 0.0;
};

/// Solves -Delta_h w = f with homogeneous Dirichlet data by unpreconditioned
/// conjugate gradients. Throws SolverFailureError (with the residual history)
/// when max_iters is exhausted.
PoissonSolution solve_dirichlet_poisson(const ScalarField& f, const LinearSolveOptions& opts = {});

/// phi_u solving -Delta_h phi = K u^2. Throws AssumptionViolationError when K
/// has a negative node.
ScalarField compute_phi(const ScalarField& u, const ScalarField& K, const LinearSolveOptions& opts = {});

}  // namespace smx
