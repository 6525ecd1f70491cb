#pragma once

#include "smx/grid.hpp"

#include <cstdint>
#include <random>

namespace smx {

/// Deterministic generator of test fields: random partial sums of sine
/// products and smoothed nodal noise. Uses mt19937_64 bits directly so a seed
/// yields the same sequence on every standard library.
class FieldSampler {
public:
    enum class Kind { sine_sum, smoothed_noise };

    FieldSampler(const DomainGrid& grid, std::uint64_t seed);

    /// Next field from the mixed family (kind picked at random).
    ScalarField next();
    ScalarField next(Kind kind);

    /// Uniform in [0,1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi);

private:
    ScalarField sine_sum();
    ScalarField smoothed_noise();

    DomainGrid grid_;
    std::mt19937_64 engine_;
};

/// u scaled so that w2n_norm equals `radius`; zero fields are returned unchanged.
ScalarField scale_to_w2n(const ScalarField& u, double radius);

}  // namespace smx
