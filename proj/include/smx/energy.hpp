#pragma once

#include "smx/grid.hpp"
#include "smx/poisson.hpp"

namespace smx {

/// Data of the coupled problem
///   -Delta u + K phi u = |u|^{p-1} u + h,   -Delta phi = K u^2,   u = phi = 0 on the boundary.
/// create() enforces p > 1, K >= 0 and h > 0 nodewise; diagnostic() relaxes the
/// last one to h >= 0 so the unforced problem can be studied.
class ProblemSpec {
public:
    static ProblemSpec create(double p, ScalarField K, ScalarField h, LinearSolveOptions linear = {});
    static ProblemSpec diagnostic(double p, ScalarField K, ScalarField h, LinearSolveOptions linear = {});

    double p() const noexcept { return p_; }
    const ScalarField& K() const noexcept { return K_; }
    const ScalarField& h() const noexcept { return h_; }
    const DomainGrid& grid() const noexcept { return K_.grid(); }
    const LinearSolveOptions& linear() const noexcept { return linear_; }
    bool strict_forcing() const noexcept { return strict_forcing_; }

    /// Same problem with a different forcing; re-validated under the same mode.
    ProblemSpec with_forcing(ScalarField h) const;
    ProblemSpec with_linear(LinearSolveOptions linear) const;

private:
    ProblemSpec(double p, ScalarField K, ScalarField h, LinearSolveOptions linear, bool strict);

    double p_;
    ScalarField K_;
    ScalarField h_;
    LinearSolveOptions linear_;
    bool strict_forcing_;
};

struct EnergyBreakdown {
    double kinetic = 0.0;   ///< 1/2 int |grad u|^2
    double nonlocal = 0.0;  ///< 1/4 int K phi_u u^2
    double power = 0.0;     ///< 1/(p+1) int |u|^{p+1}
    double forcing = 0.0;   ///< int h u
    double total = 0.0;     ///< kinetic + nonlocal - power - forcing
};

/// Convex part psi and the C^1 part of the split I = psi - phi.
struct EnergySplit {
    double psi = 0.0;
    double phi_part = 0.0;
};

EnergyBreakdown energy(const ScalarField& u, const ProblemSpec& spec);
EnergySplit energy_split(const ScalarField& u, const ProblemSpec& spec);

/// Energy restricted to the ball K(r) = {w2n_norm(u) <= r}: +infinity outside.
double i_k(const ScalarField& u, double r, const ProblemSpec& spec);

/// <I'(u), v> = int grad u . grad v + int K phi_u u v - int sign(u)|u|^p v - int h v.
double directional_derivative(const ScalarField& u, const ScalarField& v, const ProblemSpec& spec);

/// The nodewise map -K phi_u u + sign(u)|u|^p + h, i.e. the derivative of the
/// C^1 part phi of the energy split. Right-hand side of the auxiliary solve.
ScalarField nonlinear_source(const ScalarField& u, const ScalarField& phi_u, const ProblemSpec& spec);
ScalarField nonlinear_source(const ScalarField& u, const ProblemSpec& spec);

enum class GradientMetric { l2, sobolev };

/// l2: the nodewise representative -Delta_h u + K phi_u u - sign(u)|u|^p - h.
/// sobolev: its Riesz representative in the H^1_0 inner product (one Poisson solve).
ScalarField gradient_field(const ScalarField& u, const ProblemSpec& spec,
                           GradientMetric metric = GradientMetric::sobolev);

}  // namespace smx
