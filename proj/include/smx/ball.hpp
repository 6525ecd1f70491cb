#pragma once

#include "smx/energy.hpp"
#include "smx/grid.hpp"

#include <cstdint>

namespace smx {

/// Constants and radius of the constraint ball.
///   c1 bounds ||K phi_u u||_{L^3} / ||u||^3 and c2 bounds ||u|^p||_{L^3} / ||u||^p
///   (||.|| = w2n_norm); r1 solves c1 r^3 + c2 r^p = r/2; m = r1/2.
/// These are empirical, grid-dependent constants, not proven bounds.
struct BallSpec {
    double c1 = 0.0;
    double c2 = 0.0;
    double r1 = 0.0;
    double m = 0.0;
    double p = 0.0;
    int sample_count = 0;
    std::uint64_t seed = 0;

    /// c1 r1^3 + c2 r1^p (the nonlinear bound at the ball radius).
    double nonlinear_bound() const;
};

struct ConstantEstimate {
    double c1 = 0.0;
    double c2 = 0.0;
    /// Largest sampled ratios before the safety factor.
    double max_ratio1 = 0.0;
    double max_ratio2 = 0.0;
    int used = 0;
    int skipped = 0;
};

/// Floor applied to an estimate that is identically zero (e.g. K = 0).
inline constexpr double kConstantFloor = 1e-30;

/// Ratio ||K phi_u u||_{L^3} / w2n_norm(u)^3 for a single field.
double nonlocal_ratio(const ScalarField& u, const ProblemSpec& spec);
/// Ratio ||sign(u)|u|^p||_{L^3} / w2n_norm(u)^p for a single field.
double power_ratio(const ScalarField& u, const ProblemSpec& spec);

/// Max of both ratios over `samples` fields (the first eigenfunction followed
/// by FieldSampler draws at amplitudes cycling through 1e-2, 1, 1e2), times
/// `safety`. Fields with w2n_norm 0 are skipped; EstimationFailureError when
/// all are.
ConstantEstimate estimate_constants(const ProblemSpec& spec, int samples, std::uint64_t seed, double safety = 2.0);

/// Root of c1 r^2 + c2 r^{p-1} = 1/2 by bisection. Returns the lower end of the
/// final bracket so c1 r^3 + c2 r^p <= r/2 holds at the returned value.
double compute_r1(double c1, double c2, double p);

double admissible_h_bound(double r1);

BallSpec make_ball(double c1, double c2, double p, int sample_count = 0, std::uint64_t seed = 0);

struct LemmaKCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// lhs = ||-K phi_u u + sign(u)|u|^p + h||_{L^3}, rhs = c1 r1^3 + c2 r1^p + ||h||_{L^3}.
/// Throws OutsideBallError when w2n_norm(u) > r1.
LemmaKCheck check_lemma_k(const ScalarField& u, const BallSpec& ball, const ProblemSpec& spec);

}  // namespace smx
