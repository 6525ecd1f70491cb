#include "smx/minimizer.hpp"

#include "smx/errors.hpp"
#include "smx/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace smx {

void MinimizeOptions::validate() const {
    if (max_iters < 1 || !(grad_tol > 0.0) || !(energy_tol > 0.0) || !(initial_step > 0.0) || max_backtracks < 1) {
        throw Error("minimize options must be positive");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
        throw Error("backtrack_factor must lie in (0,1), got " + std::to_string(backtrack_factor));
    }
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::displacement: return "displacement";
        case StopReason::energy_change: return "energy_change";
        case StopReason::max_iters: return "max_iters";
        case StopReason::line_search_stalled: return "line_search_stalled";
    }
    return "unknown";
}

ScalarField retract_to_ball(const ScalarField& u, double r) {
    if (!(r > 0.0)) throw Error("ball radius must be positive, got " + std::to_string(r));
    const double norm = w2n_norm(u);
    if (norm <= r) return u;
    ScalarField out = (r / norm) * u;
    // Rounding can leave the rescaled field a few ulps outside.
    while (w2n_norm(out) > r) out *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    return out;
}

namespace {

std::vector<double> t_search_grid() {
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(i / 200.0);
    for (int i = -16 * 20; i < 0; ++i) ts.push_back(std::pow(10.0, i / 20.0));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

void check_forcing(const ProblemSpec& spec, const BallSpec& ball) {
    const double norm = lp_norm(spec.h(), 3.0);
    if (norm > ball.m * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "forcing too large: ||h||_L3 = " << norm << " exceeds the admissible bound m = " << ball.m;
        throw ForcingTooLargeError(msg.str(), norm, ball.m);
    }
}

}  // namespace

ScalarField initial_guess(const ProblemSpec& spec, double r1) {
    const ScalarField e = retract_to_ball(scale_to_w2n(first_eigenfunction(spec.grid()), 2.0 * r1), r1);
    const EnergyBreakdown parts = energy(e, spec);

    // phi_{te} = t^2 phi_e, so energy(t e) is a polynomial-like function of t.
    auto energy_at = [&](double t) {
        return t * t * parts.kinetic + std::pow(t, 4) * parts.nonlocal - std::pow(t, spec.p() + 1.0) * parts.power -
               t * parts.forcing;
    };
    double best_t = 0.0;
    double best_energy = 0.0;
    for (double t : t_search_grid()) {
        const double value = energy_at(t);
        if (value < best_energy) {
            best_energy = value;
            best_t = t;
        }
    }
    if (best_t > 0.0) {
        ScalarField guess = best_t * e;
        if (i_k(guess, r1, spec) < 0.0) return guess;
    }
    throw InitializationFailureError("no t in [0,1] gives negative energy along the eigenfunction ray");
}

MinimizeResult minimize(const ProblemSpec& spec, const BallSpec& ball, const MinimizeOptions& opts) {
    check_forcing(spec, ball);
    return minimize_from(spec, ball, initial_guess(spec, ball.r1), opts);
}

MinimizeResult minimize_from(const ProblemSpec& spec, const BallSpec& ball, const ScalarField& start,
                             const MinimizeOptions& opts) {
    opts.validate();
    check_forcing(spec, ball);
    if (!(start.grid() == spec.grid())) throw GridMismatchError("start field grid differs from problem grid");

    const double r1 = ball.r1;
    ScalarField u = retract_to_ball(start, r1);
    double current = energy(u, spec).total;

    MinimizeResult result{u, current, 0, {}, false, false, StopReason::max_iters};
    result.trace.push_back({0, current, 0.0, 0.0});

    int it = 0;
    while (true) {
        if (it >= opts.max_iters) {
            result.stop_reason = StopReason::max_iters;
            break;
        }
        const ScalarField direction = gradient_field(u, spec, opts.metric);

        double step = opts.initial_step;
        bool accepted = false;
        ScalarField candidate = u;
        double candidate_energy = current;
        for (int b = 0; b <= opts.max_backtracks; ++b) {
            ScalarField trial = u;
            trial.axpy(-step, direction);
            candidate = retract_to_ball(trial, r1);
            candidate_energy = energy(candidate, spec).total;
            if (candidate_energy <= current) {
                accepted = true;
                break;
            }
            step *= opts.backtrack_factor;
        }
        if (!accepted) {
            result.stop_reason = StopReason::line_search_stalled;
            break;
        }

        ++it;
        const double displacement = grad_l2_norm(candidate - u);
        const double relative_change =
            std::abs(current - candidate_energy) / std::max(std::abs(current), std::numeric_limits<double>::min());
        u = std::move(candidate);
        current = candidate_energy;
        result.trace.push_back({it, current, step, displacement});

        if (displacement < opts.grad_tol) {
            result.stop_reason = StopReason::displacement;
            result.converged = true;
            break;
        }
        if (relative_change < opts.energy_tol) {
            result.stop_reason = StopReason::energy_change;
            result.converged = true;
            break;
        }
    }

    result.iterations = it;
    result.beta = current;
    result.on_boundary = std::abs(w2n_norm(u) - r1) <= 1e-8 * std::max(1.0, r1);
    result.u1 = std::move(u);
    return result;
}

}  // namespace smx
