#pragma once

#include "smx/ball.hpp"
#include "smx/energy.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace smx {

struct MinimizeOptions {
    int max_iters = 5000;
    /// Stop when the H^1_0 displacement of an accepted step drops below this.
    double grad_tol = 1e-8;
    /// Stop when |E_k - E_{k+1}| / |E_k| drops below this.
    double energy_tol = 1e-12;
    double backtrack_factor = 0.5;
    double initial_step = 1.0;
    /// Halvings tried before the line search is declared stalled.
    int max_backtracks = 60;
    GradientMetric metric = GradientMetric::sobolev;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TraceEntry {
    int iteration = 0;
    double energy = 0.0;
    double step = 0.0;
    double displacement = 0.0;
};

enum class StopReason { displacement, energy_change, max_iters, line_search_stalled };

std::string_view to_string(StopReason reason);

struct MinimizeResult {
    ScalarField u1;
    double beta = 0.0;
    int iterations = 0;
    std::vector<TraceEntry> trace;
    bool converged = false;
    bool on_boundary = false;
    StopReason stop_reason = StopReason::max_iters;
};

/// u if w2n_norm(u) <= r, otherwise the radial rescaling onto the sphere.
ScalarField retract_to_ball(const ScalarField& u, double r);

/// t* e, with e the positive eigenfunction scaled onto the sphere of radius
/// r1 and t* the smallest minimiser of energy(t e) over a fixed grid in [0,1].
/// Throws InitializationFailureError if no grid point has negative energy.
ScalarField initial_guess(const ProblemSpec& spec, double r1);

/// Retracted Sobolev-gradient descent with backtracking for inf I_K over
/// K(r1), started from initial_guess. Throws ForcingTooLargeError when
/// ||h||_{L^3} > ball.m.
MinimizeResult minimize(const ProblemSpec& spec, const BallSpec& ball, const MinimizeOptions& opts = {});

/// Same descent from an explicit starting point (retracted into the ball first).
MinimizeResult minimize_from(const ProblemSpec& spec, const BallSpec& ball, const ScalarField& start,
                             const MinimizeOptions& opts = {});

}  // namespace smx
