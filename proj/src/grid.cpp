#include "smx/grid.hpp"

#include "smx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace smx {

DomainGrid::DomainGrid(int n) : n_(n), spacing_(0.0) {
    if (n < 3) {
        throw InvalidGridError("grid needs at least 3 subdivisions per axis, got " + std::to_string(n));
    }
    spacing_ = 1.0 / static_cast<double>(n);
}

std::size_t DomainGrid::interior_count() const noexcept {
    const auto mm = static_cast<std::size_t>(n_ - 1);
    return mm * mm * mm;
}

DomainGrid build_grid(int n) { return DomainGrid(n); }

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const DomainGrid& grid) : grid_(grid), values_(grid.interior_count(), 0.0) {}

ScalarField::ScalarField(const DomainGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.interior_count()) {
        throw GridMismatchError("field has " + std::to_string(values_.size()) + " values, grid n=" +
                                std::to_string(grid_.n()) + " needs " +
                                std::to_string(grid_.interior_count()));
    }
    ensure_finite("construction");
}

ScalarField ScalarField::constant(const DomainGrid& grid, double value) {
    return ScalarField(grid, std::vector<double>(grid.interior_count(), value));
}

ScalarField ScalarField::from_function(const DomainGrid& grid,
                                       const std::function<double(double, double, double)>& f) {
    std::vector<double> values(grid.interior_count());
    const int m = grid.m();
    for (int k = 1; k <= m; ++k) {
        for (int j = 1; j <= m; ++j) {
            for (int i = 1; i <= m; ++i) {
                values[grid.index(i, j, k)] = f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(k));
            }
        }
    }
    return ScalarField(grid, std::move(values));
}

void ScalarField::check_same_grid(const ScalarField& other, const char* op) const {
    if (!(grid_ == other.grid_)) {
        throw GridMismatchError(std::string(op) + ": fields live on grids n=" + std::to_string(grid_.n()) +
                                " and n=" + std::to_string(other.grid_.n()));
    }
}

void ScalarField::ensure_finite(const char* op) const {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw NonFiniteError(std::string("non-finite value after ") + op);
        }
    }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    check_same_grid(other, "operator+");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    ensure_finite("operator+");
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    check_same_grid(other, "operator-");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    ensure_finite("operator-");
    return *this;
}

ScalarField& ScalarField::operator*=(double t) {
    for (double& v : values_) v *= t;
    ensure_finite("scaling");
    return *this;
}

ScalarField& ScalarField::axpy(double t, const ScalarField& x) {
    check_same_grid(x, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += t * x.values_[i];
    ensure_finite("axpy");
    return *this;
}

bool ScalarField::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const noexcept {
    double out = 0.0;
    for (double v : values_) out = std::max(out, std::abs(v));
    return out;
}

// ---------------------------------------------------------------------------

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw GridMismatchError("hadamard: fields live on different grids");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return ScalarField(a.grid(), std::move(out));
}

ScalarField sign_power(const ScalarField& u, double p) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = u[i];
        out[i] = v == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v), p), v);
    }
    return ScalarField(u.grid(), std::move(out));
}

double inner(const ScalarField& u, const ScalarField& v) {
    if (!(u.grid() == v.grid())) throw GridMismatchError("inner: fields live on different grids");
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
    return sum * u.grid().cell_volume();
}

double lp_norm(const ScalarField& u, double m) {
    if (!(m >= 1.0)) {
        throw InvalidExponentError("Lebesgue exponent must be >= 1, got " + std::to_string(m));
    }
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    // Normalise by max |u| so large exponents neither overflow nor underflow.
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::abs(v) / scale, m);
    return scale * std::pow(sum * u.grid().cell_volume(), 1.0 / m);
}

double grad_inner(const ScalarField& u, const ScalarField& v) {
    if (!(u.grid() == v.grid())) throw GridMismatchError("grad_inner: fields live on different grids");
    const DomainGrid& g = u.grid();
    const int m = g.m();
    auto value = [&](const ScalarField& f, int i, int j, int k) {
        if (i < 1 || j < 1 || k < 1 || i > m || j > m || k > m) return 0.0;
        return f.at(i, j, k);
    };
    // Faces between node c and c + e_axis, for c in [0, m] along the axis.
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j <= m; ++j) {
            for (int i = 0; i <= m; ++i) {
                const double uc = value(u, i, j, k);
                const double vc = value(v, i, j, k);
                if (j >= 1 && k >= 1) sum += (value(u, i + 1, j, k) - uc) * (value(v, i + 1, j, k) - vc);
                if (i >= 1 && k >= 1) sum += (value(u, i, j + 1, k) - uc) * (value(v, i, j + 1, k) - vc);
                if (i >= 1 && j >= 1) sum += (value(u, i, j, k + 1) - uc) * (value(v, i, j, k + 1) - vc);
            }
        }
    }
    const double h = g.spacing();
    return sum * g.cell_volume() / (h * h);
}

double grad_l2_norm(const ScalarField& u) { return std::sqrt(std::max(0.0, grad_inner(u, u))); }

namespace detail {

void neg_laplacian(const DomainGrid& grid, std::span<const double> in, std::span<double> out) {
    const int m = grid.m();
    const std::size_t sx = 1;
    const std::size_t sy = static_cast<std::size_t>(m);
    const std::size_t sz = sy * sy;
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    for (int k = 1; k <= m; ++k) {
        for (int j = 1; j <= m; ++j) {
            for (int i = 1; i <= m; ++i) {
                const std::size_t c = grid.index(i, j, k);
                double nb = 0.0;
                if (i > 1) nb += in[c - sx];
                if (i < m) nb += in[c + sx];
                if (j > 1) nb += in[c - sy];
                if (j < m) nb += in[c + sy];
                if (k > 1) nb += in[c - sz];
                if (k < m) nb += in[c + sz];
                out[c] = (6.0 * in[c] - nb) * inv_h2;
            }
        }
    }
}

}  // namespace detail

ScalarField apply_laplacian(const ScalarField& u) {
    std::vector<double> out(u.size());
    detail::neg_laplacian(u.grid(), u.values(), out);
    return ScalarField(u.grid(), std::move(out));
}

double w2n_norm(const ScalarField& u) { return lp_norm(apply_laplacian(u), 3.0); }

ScalarField first_eigenfunction(const DomainGrid& grid) {
    constexpr double pi = std::numbers::pi;
    return ScalarField::from_function(grid, [](double x, double y, double z) {
        return std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * z);
    });
}

double first_eigenvalue(const DomainGrid& grid) {
    const double h = grid.spacing();
    const double s = std::sin(std::numbers::pi * h / 2.0);
    return 12.0 * s * s / (h * h);
}

}  // namespace smx
