#include "smx/energy.hpp"

#include "smx/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace smx {

ProblemSpec::ProblemSpec(double p, ScalarField K, ScalarField h, LinearSolveOptions linear, bool strict)
    : p_(p), K_(std::move(K)), h_(std::move(h)), linear_(linear), strict_forcing_(strict) {
    if (!(p_ > 1.0) || !std::isfinite(p_)) {
        throw AssumptionViolationError("exponent p must be a finite number > 1, got " + std::to_string(p_));
    }
    if (!(K_.grid() == h_.grid())) throw GridMismatchError("K and h live on different grids");
    linear_.validate();
    for (std::size_t i = 0; i < K_.size(); ++i) {
        if (K_[i] < 0.0) {
            throw AssumptionViolationError("assumption (K) violated: K < 0 at node " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < h_.size(); ++i) {
        if (strict_forcing_ ? !(h_[i] > 0.0) : !(h_[i] >= 0.0)) {
            throw AssumptionViolationError(std::string("assumption (H) violated: h ") +
                                           (strict_forcing_ ? "<= 0" : "< 0") + " at node " + std::to_string(i));
        }
    }
}

ProblemSpec ProblemSpec::create(double p, ScalarField K, ScalarField h, LinearSolveOptions linear) {
    return ProblemSpec(p, std::move(K), std::move(h), linear, true);
}

ProblemSpec ProblemSpec::diagnostic(double p, ScalarField K, ScalarField h, LinearSolveOptions linear) {
    return ProblemSpec(p, std::move(K), std::move(h), linear, false);
}

ProblemSpec ProblemSpec::with_forcing(ScalarField h) const {
    return ProblemSpec(p_, K_, std::move(h), linear_, strict_forcing_);
}

ProblemSpec ProblemSpec::with_linear(LinearSolveOptions linear) const {
    return ProblemSpec(p_, K_, h_, linear, strict_forcing_);
}

// ---------------------------------------------------------------------------

namespace {

void check_grid(const ScalarField& u, const ProblemSpec& spec, const char* op) {
    if (!(u.grid() == spec.grid())) {
        throw GridMismatchError(std::string(op) + ": field grid differs from problem grid");
    }
}

double power_integral(const ScalarField& u, double exponent) {
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::abs(v), exponent);
    return sum * u.grid().cell_volume();
}

}  // namespace

EnergyBreakdown energy(const ScalarField& u, const ProblemSpec& spec) {
    check_grid(u, spec, "energy");
    const ScalarField phi = compute_phi(u, spec.K(), spec.linear());
    EnergyBreakdown e;
    e.kinetic = 0.5 * grad_inner(u, u);
    e.nonlocal = 0.25 * inner(hadamard(spec.K(), phi), hadamard(u, u));
    e.power = power_integral(u, spec.p() + 1.0) / (spec.p() + 1.0);
    e.forcing = inner(spec.h(), u);
    e.total = e.kinetic + e.nonlocal - e.power - e.forcing;
    return e;
}

EnergySplit energy_split(const ScalarField& u, const ProblemSpec& spec) {
    const EnergyBreakdown e = energy(u, spec);
    return EnergySplit{e.kinetic, -e.nonlocal + e.power + e.forcing};
}

double i_k(const ScalarField& u, double r, const ProblemSpec& spec) {
    if (!(r > 0.0)) throw Error("ball radius must be positive, got " + std::to_string(r));
    if (w2n_norm(u) > r) return std::numeric_limits<double>::infinity();
    return energy(u, spec).total;
}

ScalarField nonlinear_source(const ScalarField& u, const ScalarField& phi_u, const ProblemSpec& spec) {
    check_grid(u, spec, "nonlinear_source");
    ScalarField out = sign_power(u, spec.p());
    out -= hadamard(hadamard(spec.K(), phi_u), u);
    out += spec.h();
    return out;
}

ScalarField nonlinear_source(const ScalarField& u, const ProblemSpec& spec) {
    return nonlinear_source(u, compute_phi(u, spec.K(), spec.linear()), spec);
}

double directional_derivative(const ScalarField& u, const ScalarField& v, const ProblemSpec& spec) {
    check_grid(u, spec, "directional_derivative");
    check_grid(v, spec, "directional_derivative");
    const ScalarField phi = compute_phi(u, spec.K(), spec.linear());
    const double dirichlet = grad_inner(u, v);
    const double coupling = inner(hadamard(hadamard(spec.K(), phi), u), v);
    const double power = inner(sign_power(u, spec.p()), v);
    const double forcing = inner(spec.h(), v);
    return dirichlet + coupling - power - forcing;
}

ScalarField gradient_field(const ScalarField& u, const ProblemSpec& spec, GradientMetric metric) {
    check_grid(u, spec, "gradient_field");
    ScalarField g = apply_laplacian(u);
    g -= nonlinear_source(u, spec);
    if (metric == GradientMetric::l2) return g;
    return solve_dirichlet_poisson(g, spec.linear()).w;
}

}  // namespace smx
