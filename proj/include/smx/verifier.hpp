#pragma once

#include "smx/ball.hpp"
#include "smx/energy.hpp"

#include <cstdint>

namespace smx {

struct VerifyOptions {
    /// Threshold for ||grad(u2 - u1)|| / ||grad u1||.
    double fixed_point_tol = 1e-6;
    /// Threshold for the strong-form residual relative to ||h||_{L^3}.
    double pde_tol = 1e-5;
    int vi_samples = 200;
    std::uint64_t seed = 1;
    int phi_calibration_samples = 20;
    double phi_calibration_safety = 2.0;
    /// Scaling factor used for the phi_{tu} = t^2 phi_u audit.
    double phi_scaling_t = 2.0;
};

struct AuxiliarySolve {
    ScalarField u2;
    double w2n = 0.0;
    bool in_ball = false;
};

/// u2 solving -Delta_h u2 = -K phi_{u1} u1 + sign(u1)|u1|^p + h. Ball membership
/// (w2n_norm(u2) <= r1 + 1e-8) is reported, not enforced. Throws
/// OutsideBallError when u1 itself lies outside K(r1).
AuxiliarySolve auxiliary_solve(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball);

/// ||grad(u2 - u1)|| / max(||grad u1||, 1e-30).
double fixed_point_residual(const ScalarField& u1, const ScalarField& u2);

/// Counts sampled v in K(r1) that violate
///   1/2 int|grad v|^2 - 1/2 int|grad u1|^2 >= int F(u1) (v - u1),
/// F(u1) = -K phi u1 + sign(u1)|u1|^p + h, beyond slack 1e-8 (1 + |lhs| + |rhs|).
/// The samples always contain u1, the auxiliary solution, 0, u1/2 and 2 u1
/// (retracted); the rest are global draws in the ball and local perturbations of u1.
int variational_inequality_check(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball, int samples,
                                 std::uint64_t seed);

/// ||-Delta_h u1 + K phi u1 - sign(u1)|u1|^p - h||_{L^3} / ||h||_{L^3}.
double pde_residual(const ScalarField& u1, const ProblemSpec& spec);

struct PhiPropertyCheck {
    bool nonneg = false;
    bool scaling = false;
    bool bound = false;
};

/// Grid-specific constant C with ||phi_u||_{H^1} <= C ||u||^2_{H^1} over a
/// calibration batch of sampled fields, times `safety`.
double calibrate_phi_bound(const ProblemSpec& spec, int samples, std::uint64_t seed, double safety = 2.0);

PhiPropertyCheck phi_property_check(const ScalarField& u, const ProblemSpec& spec, double t, double bound_constant);

struct VerificationReport {
    double fixed_point_rel_residual = 0.0;
    double pde_rel_residual = 0.0;
    bool u2_in_ball = false;
    double u1_w2n = 0.0;
    double u2_w2n = 0.0;
    int vi_samples = 0;
    int vi_violations = 0;
    bool phi_nonneg_ok = false;
    bool phi_scaling_ok = false;
    bool phi_bound_ok = false;
    double phi_bound_constant = 0.0;
    /// Variational inequality at v = u2 (lhs - rhs); must be >= -slack.
    double vi_gap_at_u2 = 0.0;
    /// Convexity inequality of psi at (u1, u2); equals 1/2 ||grad(u1 - u2)||^2.
    double convexity_gap = 0.0;
    bool inequality_pair_ok = false;
    /// Grid constant C with pde_rel_residual <= C fixed_point_rel_residual + solver slack.
    double closure_constant = 0.0;
    bool closure_ok = false;
    /// ||u1||_{L^2}.
    double u1_l2 = 0.0;
    bool passed = false;
};

/// Recomputes every certificate from u1 alone.
VerificationReport verify(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball,
                          const VerifyOptions& opts = {});

}  // namespace smx
