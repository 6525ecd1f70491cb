#include "smx/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace smx {

FieldSampler::FieldSampler(const DomainGrid& grid, std::uint64_t seed) : grid_(grid), engine_(seed) {}

double FieldSampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int FieldSampler::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

ScalarField FieldSampler::next() { return next(uniform() < 0.5 ? Kind::sine_sum : Kind::smoothed_noise); }

ScalarField FieldSampler::next(Kind kind) { return kind == Kind::sine_sum ? sine_sum() : smoothed_noise(); }

ScalarField FieldSampler::sine_sum() {
    constexpr double pi = std::numbers::pi;
    const int modes = uniform_int(1, 4);
    const double decay = uniform(0.5, 2.0);
    const int m = grid_.m();

    struct Mode {
        int a, b, c;
        double coef;
    };
    std::vector<Mode> terms;
    for (int c = 1; c <= modes; ++c) {
        for (int b = 1; b <= modes; ++b) {
            for (int a = 1; a <= modes; ++a) {
                const double weight = std::pow(static_cast<double>(a * a + b * b + c * c) / 3.0, -decay);
                terms.push_back({a, b, c, uniform(-1.0, 1.0) * weight});
            }
        }
    }

    // Tabulate the 1D sines once per mode index.
    std::vector<std::vector<double>> s(static_cast<std::size_t>(modes) + 1,
                                       std::vector<double>(static_cast<std::size_t>(m) + 1));
    for (int a = 1; a <= modes; ++a) {
        for (int i = 1; i <= m; ++i) s[a][i] = std::sin(pi * a * grid_.coordinate(i));
    }

    std::vector<double> values(grid_.interior_count(), 0.0);
    for (int k = 1; k <= m; ++k) {
        for (int j = 1; j <= m; ++j) {
            for (int i = 1; i <= m; ++i) {
                double v = 0.0;
                for (const Mode& t : terms) v += t.coef * s[t.a][i] * s[t.b][j] * s[t.c][k];
                values[grid_.index(i, j, k)] = v;
            }
        }
    }
    return ScalarField(grid_, std::move(values));
}

ScalarField FieldSampler::smoothed_noise() {
    const int passes = uniform_int(1, 6);
    std::vector<double> u(grid_.interior_count());
    for (double& v : u) v = uniform(-1.0, 1.0);

    // Damped Jacobi sweeps, u <- u - (h^2/12) (-Delta_h u), with zero boundary.
    std::vector<double> lap(u.size());
    const double weight = grid_.spacing() * grid_.spacing() / 12.0;
    for (int pass = 0; pass < passes; ++pass) {
        detail::neg_laplacian(grid_, u, lap);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= weight * lap[i];
    }
    return ScalarField(grid_, std::move(u));
}

ScalarField scale_to_w2n(const ScalarField& u, double radius) {
    const double norm = w2n_norm(u);
    if (norm == 0.0) return u;
    return (radius / norm) * u;
}

}  // namespace smx
