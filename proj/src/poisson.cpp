#include "smx/poisson.hpp"

#include "smx/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace smx {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

int LinearSolveOptions::resolved_max_iters(const DomainGrid& grid) const {
    if (max_iters) return *max_iters;
    const long long n = grid.n();
    return static_cast<int>(std::min<long long>(10 * n * n * n, 1'000'000'000LL));
}

void LinearSolveOptions::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw Error("linear rel_tol must lie in (0,1), got " + std::to_string(rel_tol));
    }
    if (max_iters && *max_iters < 1) {
        throw Error("linear max_iters must be >= 1, got " + std::to_string(*max_iters));
    }
}

PoissonSolution solve_dirichlet_poisson(const ScalarField& f, const LinearSolveOptions& opts) {
    opts.validate();
    const DomainGrid& grid = f.grid();
    const std::size_t n = f.size();
    const double h3 = grid.cell_volume();

    const double f_norm = std::sqrt(dot(f.values(), f.values()));
    if (f_norm == 0.0) return PoissonSolution{ScalarField(grid), 0, 0.0};

    const double target = opts.rel_tol * f_norm;
    const int max_iters = opts.resolved_max_iters(grid);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(f.values().begin(), f.values().end());
    std::vector<double> p = r;
    std::vector<double> ap(n);
    std::vector<double> history;
    history.push_back(f_norm * std::sqrt(h3));

    double rr = dot(r, r);
    int it = 0;
    while (it < max_iters) {
        detail::neg_laplacian(grid, p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        ++it;
        const double rr_next = dot(r, r);
        history.push_back(std::sqrt(rr_next * h3));

        if (std::sqrt(rr_next) <= target) {
            // Confirm against the true residual; the recurrence drifts slightly.
            detail::neg_laplacian(grid, x, ap);
            for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - ap[i];
            const double true_rr = dot(r, r);
            if (std::sqrt(true_rr) <= target) {
                return PoissonSolution{ScalarField(grid, std::move(x)), it, std::sqrt(true_rr * h3)};
            }
            p = r;
            rr = true_rr;
            continue;
        }
        const double beta = rr_next / rr;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }

    std::ostringstream msg;
    msg << "conjugate gradients did not converge in " << max_iters << " iterations (residual "
        << history.back() << ", target " << target * std::sqrt(h3) << ")";
    throw SolverFailureError(msg.str(), std::move(history));
}

ScalarField compute_phi(const ScalarField& u, const ScalarField& K, const LinearSolveOptions& opts) {
    if (!(u.grid() == K.grid())) throw GridMismatchError("compute_phi: u and K live on different grids");
    for (std::size_t i = 0; i < K.size(); ++i) {
        if (K[i] < 0.0) {
            throw AssumptionViolationError("coefficient K must be nonnegative; node " + std::to_string(i) +
                                           " has " + std::to_string(K[i]));
        }
    }
    return solve_dirichlet_poisson(hadamard(K, hadamard(u, u)), opts).w;
}

}  // namespace smx
