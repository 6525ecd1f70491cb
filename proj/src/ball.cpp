#include "smx/ball.hpp"

#include "smx/errors.hpp"
#include "smx/random_fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace smx {

double BallSpec::nonlinear_bound() const { return c1 * r1 * r1 * r1 + c2 * std::pow(r1, p); }

double nonlocal_ratio(const ScalarField& u, const ProblemSpec& spec) {
    const double norm = w2n_norm(u);
    if (norm == 0.0) return 0.0;
    const ScalarField phi = compute_phi(u, spec.K(), spec.linear());
    return lp_norm(hadamard(hadamard(spec.K(), phi), u), 3.0) / (norm * norm * norm);
}

double power_ratio(const ScalarField& u, const ProblemSpec& spec) {
    const double norm = w2n_norm(u);
    if (norm == 0.0) return 0.0;
    return lp_norm(sign_power(u, spec.p()), 3.0) / std::pow(norm, spec.p());
}

ConstantEstimate estimate_constants(const ProblemSpec& spec, int samples, std::uint64_t seed, double safety) {
    if (samples < 1) throw Error("estimate_constants needs at least one sample");
    if (!(safety >= 1.0)) throw Error("safety factor must be >= 1, got " + std::to_string(safety));

    // Draw the whole sample list first so the reduction does not depend on order.
    constexpr std::array<double, 3> amplitudes{1e-2, 1.0, 1e2};
    FieldSampler sampler(spec.grid(), seed);
    std::vector<ScalarField> fields;
    fields.reserve(static_cast<std::size_t>(samples));
    fields.push_back(first_eigenfunction(spec.grid()));
    for (int s = 1; s < samples; ++s) {
        fields.push_back(amplitudes[static_cast<std::size_t>(s) % amplitudes.size()] * sampler.next());
    }

    ConstantEstimate est;
    for (const ScalarField& u : fields) {
        if (w2n_norm(u) == 0.0) {
            ++est.skipped;
            continue;
        }
        ++est.used;
        est.max_ratio1 = std::max(est.max_ratio1, nonlocal_ratio(u, spec));
        est.max_ratio2 = std::max(est.max_ratio2, power_ratio(u, spec));
    }
    if (est.used == 0) throw EstimationFailureError("every sampled field had zero w2n norm");

    est.c1 = std::max(safety * est.max_ratio1, kConstantFloor);
    est.c2 = std::max(safety * est.max_ratio2, kConstantFloor);
    return est;
}

double compute_r1(double c1, double c2, double p) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error("compute_r1 needs positive constants");
    if (!(p > 1.0)) throw Error("compute_r1 needs p > 1");

    // g is strictly increasing on (0, inf) with g(0) = -1/2.
    auto g = [&](double r) { return c1 * r * r + c2 * std::pow(r, p - 1.0) - 0.5; };
    double lo = 0.0;
    double hi = 1.0;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    while (g(lo) >= 0.0) {
        hi = lo;
        lo /= 2.0;
    }
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return lo;
}

double admissible_h_bound(double r1) {
    if (!(r1 > 0.0)) throw Error("admissible_h_bound needs r1 > 0");
    return r1 / 2.0;
}

BallSpec make_ball(double c1, double c2, double p, int sample_count, std::uint64_t seed) {
    BallSpec ball;
    ball.c1 = c1;
    ball.c2 = c2;
    ball.p = p;
    ball.r1 = compute_r1(c1, c2, p);
    ball.m = admissible_h_bound(ball.r1);
    ball.sample_count = sample_count;
    ball.seed = seed;
    return ball;
}

LemmaKCheck check_lemma_k(const ScalarField& u, const BallSpec& ball, const ProblemSpec& spec) {
    const double norm = w2n_norm(u);
    if (norm > ball.r1 * (1.0 + 1e-12)) {
        throw OutsideBallError("field has w2n norm " + std::to_string(norm) + " > r1 = " + std::to_string(ball.r1));
    }
    LemmaKCheck out;
    out.lhs = lp_norm(nonlinear_source(u, spec), 3.0);
    out.rhs = ball.nonlinear_bound() + lp_norm(spec.h(), 3.0);
    out.holds = out.lhs <= out.rhs + 1e-10;
    return out;
}

}  // namespace smx
