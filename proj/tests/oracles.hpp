#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the stencil, CG or quadrature code under test.

#include "smx/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace smx::oracle {

/// Dense matrix of -Delta_h built from node coordinates: two interior nodes
/// couple when their index distance is exactly one along a single axis.
inline Eigen::MatrixXd dense_neg_laplacian(const DomainGrid& grid) {
    const int m = grid.m();
    const int size = m * m * m;
    const double inv_h2 = static_cast<double>(grid.n()) * grid.n();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
    auto lin = [m](int i, int j, int k) { return (i - 1) + m * ((j - 1) + m * (k - 1)); };
    for (int k = 1; k <= m; ++k)
        for (int j = 1; j <= m; ++j)
            for (int i = 1; i <= m; ++i)
                for (int k2 = 1; k2 <= m; ++k2)
                    for (int j2 = 1; j2 <= m; ++j2)
                        for (int i2 = 1; i2 <= m; ++i2) {
                            const int dist = std::abs(i - i2) + std::abs(j - j2) + std::abs(k - k2);
                            if (dist == 0) A(lin(i, j, k), lin(i2, j2, k2)) = 6.0 * inv_h2;
                            if (dist == 1) A(lin(i, j, k), lin(i2, j2, k2)) = -inv_h2;
                        }
    return A;
}

inline Eigen::VectorXd to_vec(const ScalarField& u) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
    return v;
}

inline ScalarField from_vec(const DomainGrid& grid, const Eigen::VectorXd& v) {
    return ScalarField(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

/// Dense LU solve of -Delta_h w = f.
inline ScalarField dense_poisson(const ScalarField& f) {
    const Eigen::MatrixXd A = dense_neg_laplacian(f.grid());
    return from_vec(f.grid(), A.partialPivLu().solve(to_vec(f)));
}

/// Extended-precision (sum |u|^m h^3)^{1/m}.
inline double lp_norm_ld(const ScalarField& u, double m) {
    long double sum = 0.0L;
    for (double v : u.values()) sum += std::pow(std::fabs(static_cast<long double>(v)), static_cast<long double>(m));
    const long double h = 1.0L / u.grid().n();
    return static_cast<double>(std::pow(sum * h * h * h, 1.0L / static_cast<long double>(m)));
}

/// I(u) by direct summation with a dense Poisson solve for phi_u.
inline double energy_dense(const ScalarField& u, const ScalarField& K, const ScalarField& h, double p) {
    const DomainGrid& g = u.grid();
    const Eigen::MatrixXd A = dense_neg_laplacian(g);
    const Eigen::VectorXd uv = to_vec(u);
    const Eigen::VectorXd kv = to_vec(K);
    const Eigen::VectorXd rhs = kv.cwiseProduct(uv).cwiseProduct(uv);
    const Eigen::VectorXd phi = A.partialPivLu().solve(rhs);
    const double h3 = std::pow(1.0 / g.n(), 3);
    long double kinetic = 0.5L * static_cast<long double>(uv.dot(A * uv)) * h3;
    long double nonlocal = 0.0L, power = 0.0L, forcing = 0.0L;
    for (Eigen::Index i = 0; i < uv.size(); ++i) {
        nonlocal += 0.25L * kv(i) * phi(i) * uv(i) * uv(i) * h3;
        power += std::pow(std::fabs(static_cast<long double>(uv(i))), static_cast<long double>(p) + 1.0L) * h3;
        forcing += static_cast<long double>(h[static_cast<std::size_t>(i)]) * uv(i) * h3;
    }
    return static_cast<double>(kinetic + nonlocal - power / (p + 1.0) - forcing);
}

/// Uniform random nodal field in [lo, hi).
inline ScalarField random_field(const DomainGrid& grid, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(grid.interior_count());
    for (double& x : v) x = dist(rng);
    return ScalarField(grid, std::move(v));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace smx::oracle
