#include "smx/verifier.hpp"

#include "smx/errors.hpp"
#include "smx/minimizer.hpp"
#include "smx/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace smx {

namespace {

void require_in_ball(const ScalarField& u1, const BallSpec& ball) {
    const double norm = w2n_norm(u1);
    if (norm > ball.r1 * (1.0 + 1e-12)) {
        throw OutsideBallError("u1 has w2n norm " + std::to_string(norm) + " > r1 = " + std::to_string(ball.r1));
    }
}

}  // namespace

AuxiliarySolve auxiliary_solve(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball) {
    require_in_ball(u1, ball);
    AuxiliarySolve out{solve_dirichlet_poisson(nonlinear_source(u1, spec), spec.linear()).w};
    out.w2n = w2n_norm(out.u2);
    out.in_ball = out.w2n <= ball.r1 + 1e-8;
    return out;
}

double fixed_point_residual(const ScalarField& u1, const ScalarField& u2) {
    return grad_l2_norm(u2 - u1) / std::max(grad_l2_norm(u1), 1e-30);
}

int variational_inequality_check(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball, int samples,
                                 std::uint64_t seed) {
    require_in_ball(u1, ball);
    const double r1 = ball.r1;
    const ScalarField source = nonlinear_source(u1, spec);
    const double psi_u1 = 0.5 * grad_inner(u1, u1);

    std::vector<ScalarField> tests;
    tests.push_back(u1);
    tests.push_back(retract_to_ball(auxiliary_solve(u1, spec, ball).u2, r1));
    tests.push_back(ScalarField(spec.grid()));
    tests.push_back(0.5 * u1);
    tests.push_back(retract_to_ball(2.0 * u1, r1));

    FieldSampler sampler(spec.grid(), seed);
    for (int s = static_cast<int>(tests.size()); s < samples; ++s) {
        if (s % 2 == 0) {
            tests.push_back(scale_to_w2n(sampler.next(), r1 * sampler.uniform()));
        } else {
            const double delta = r1 * std::pow(10.0, sampler.uniform(-6.0, -1.0));
            ScalarField v = u1;
            v += scale_to_w2n(sampler.next(), delta);
            tests.push_back(retract_to_ball(v, r1));
        }
    }

    int violations = 0;
    for (const ScalarField& v : tests) {
        const double lhs = 0.5 * grad_inner(v, v) - psi_u1;
        const double rhs = inner(source, v - u1);
        if (lhs < rhs - 1e-8 * (1.0 + std::abs(lhs) + std::abs(rhs))) ++violations;
    }
    return violations;
}

double pde_residual(const ScalarField& u1, const ProblemSpec& spec) {
    ScalarField residual = apply_laplacian(u1);
    residual -= nonlinear_source(u1, spec);
    return lp_norm(residual, 3.0) / std::max(lp_norm(spec.h(), 3.0), 1e-300);
}

double calibrate_phi_bound(const ProblemSpec& spec, int samples, std::uint64_t seed, double safety) {
    FieldSampler sampler(spec.grid(), seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const ScalarField u = sampler.next();
        const double denom = grad_inner(u, u);
        if (denom == 0.0) continue;
        const ScalarField phi = compute_phi(u, spec.K(), spec.linear());
        worst = std::max(worst, grad_l2_norm(phi) / denom);
    }
    return safety * worst;
}

PhiPropertyCheck phi_property_check(const ScalarField& u, const ProblemSpec& spec, double t, double bound_constant) {
    if (!(t >= 0.0)) throw Error("phi_property_check needs t >= 0");
    LinearSolveOptions tight = spec.linear();
    tight.rel_tol = std::min(tight.rel_tol, 1e-12);

    const ScalarField phi = compute_phi(u, spec.K(), tight);
    PhiPropertyCheck out;
    out.nonneg = phi.min() >= -1e-8 * std::max(1.0, phi.max_abs());

    const double phi_norm = lp_norm(phi, 2.0);
    if (phi_norm == 0.0) {
        out.scaling = true;
    } else {
        ScalarField diff = compute_phi(t * u, spec.K(), tight);
        diff.axpy(-t * t, phi);
        out.scaling = lp_norm(diff, 2.0) / phi_norm <= 1e-9;
    }

    const double u_h1 = grad_l2_norm(u);
    out.bound = grad_l2_norm(phi) <= bound_constant * u_h1 * u_h1 + 1e-300;
    return out;
}

VerificationReport verify(const ScalarField& u1, const ProblemSpec& spec, const BallSpec& ball,
                          const VerifyOptions& opts) {
    VerificationReport rep;
    rep.u1_w2n = w2n_norm(u1);
    rep.u1_l2 = lp_norm(u1, 2.0);

    const AuxiliarySolve aux = auxiliary_solve(u1, spec, ball);
    rep.u2_in_ball = aux.in_ball;
    rep.u2_w2n = aux.w2n;
    rep.fixed_point_rel_residual = fixed_point_residual(u1, aux.u2);
    rep.pde_rel_residual = pde_residual(u1, spec);

    rep.vi_samples = std::max(opts.vi_samples, 5);
    rep.vi_violations = variational_inequality_check(u1, spec, ball, opts.vi_samples, opts.seed);

    rep.phi_bound_constant =
        calibrate_phi_bound(spec, opts.phi_calibration_samples, opts.seed ^ 0x9e3779b97f4a7c15ULL,
                            opts.phi_calibration_safety);
    const PhiPropertyCheck phi = phi_property_check(u1, spec, opts.phi_scaling_t, rep.phi_bound_constant);
    rep.phi_nonneg_ok = phi.nonneg;
    rep.phi_scaling_ok = phi.scaling;
    rep.phi_bound_ok = phi.bound;

    // Variational inequality at v = u2 and convexity of psi between u1 and u2.
    const ScalarField source = nonlinear_source(u1, spec);
    const double psi1 = 0.5 * grad_inner(u1, u1);
    const double psi2 = 0.5 * grad_inner(aux.u2, aux.u2);
    rep.vi_gap_at_u2 = (psi2 - psi1) - inner(source, aux.u2 - u1);
    rep.convexity_gap = (psi1 - psi2) - grad_inner(aux.u2, u1 - aux.u2);
    const double pair_slack = 1e-8 * (1.0 + psi1);
    const double forced = 0.5 * grad_inner(aux.u2 - u1, aux.u2 - u1);
    rep.inequality_pair_ok =
        rep.vi_gap_at_u2 >= -pair_slack && rep.convexity_gap >= -pair_slack && forced <= pair_slack;

    // ||Delta w||_{L^3} <= ||Delta w||_inf <= h^{-3/2} sqrt(lambda_max) ||grad w||, lambda_max < 12/h^2.
    const double h = spec.grid().spacing();
    const double h_norm = std::max(lp_norm(spec.h(), 3.0), 1e-300);
    rep.closure_constant = std::sqrt(12.0) * std::pow(h, -2.5) * grad_l2_norm(u1) / h_norm;
    const double solver_slack = std::pow(h, -1.5) * spec.linear().rel_tol * lp_norm(source, 2.0) / h_norm;
    rep.closure_ok =
        rep.pde_rel_residual <= rep.closure_constant * rep.fixed_point_rel_residual + solver_slack + 1e-12;

    rep.passed = rep.fixed_point_rel_residual <= opts.fixed_point_tol && rep.pde_rel_residual <= opts.pde_tol &&
                 rep.u2_in_ball && rep.vi_violations == 0 && rep.phi_nonneg_ok && rep.phi_scaling_ok &&
                 rep.phi_bound_ok && rep.inequality_pair_ok && rep.closure_ok;
    return rep;
}

}  // namespace smx
