#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace smx {

/// Uniform tensor grid on the unit cube (0,1)^3 with homogeneous Dirichlet
/// boundary. Only interior nodes 1 <= i,j,k <= n-1 carry unknowns.
class DomainGrid {
public:
    static constexpr int dim = 3;

    /// Throws InvalidGridError when n < 3.
    explicit DomainGrid(int n);

    int n() const noexcept { return n_; }
    double spacing() const noexcept { return spacing_; }
    /// Nodes per axis in the interior, n - 1.
    int m() const noexcept { return n_ - 1; }
    std::size_t interior_count() const noexcept;
    /// Quadrature weight of one node, h^3.
    double cell_volume() const noexcept { return spacing_ * spacing_ * spacing_; }

    /// Linear index of interior node (i,j,k), each in [1, n-1]; i runs fastest.
    std::size_t index(int i, int j, int k) const noexcept {
        const auto mm = static_cast<std::size_t>(n_ - 1);
        return static_cast<std::size_t>(i - 1) +
               mm * (static_cast<std::size_t>(j - 1) + mm * static_cast<std::size_t>(k - 1));
    }

    double coordinate(int i) const noexcept { return static_cast<double>(i) / n_; }

    friend bool operator==(const DomainGrid& a, const DomainGrid& b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
    double spacing_;
};

DomainGrid build_grid(int n);

/// Real values on the interior nodes of a DomainGrid. Value semantics;
/// arithmetic between fields on different grids throws GridMismatchError and
/// every constructor and arithmetic result rejects NaN/Inf.
class ScalarField {
public:
    /// Zero field.
    explicit ScalarField(const DomainGrid& grid);
    ScalarField(const DomainGrid& grid, std::vector<double> values);

    static ScalarField constant(const DomainGrid& grid, double value);
    /// Samples f(x,y,z) at interior node coordinates.
    static ScalarField from_function(const DomainGrid& grid,
                                     const std::function<double(double, double, double)>& f);

    const DomainGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t idx) const noexcept { return values_[idx]; }
    double at(int i, int j, int k) const noexcept { return values_[grid_.index(i, j, k)]; }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double t);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double t, ScalarField a) { return a *= t; }
    friend ScalarField operator*(ScalarField a, double t) { return a *= t; }
    friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

    /// a += t * x
    ScalarField& axpy(double t, const ScalarField& x);

    bool is_zero() const noexcept;
    double min() const noexcept;
    double max_abs() const noexcept;

    friend bool operator==(const ScalarField& a, const ScalarField& b) noexcept {
        return a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    void check_same_grid(const ScalarField& other, const char* op) const;
    void ensure_finite(const char* op) const;

    DomainGrid grid_;
    std::vector<double> values_;
};

/// Nodewise product a*b.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// sign(u)|u|^p nodewise, the odd extension of |u|^{p-1} u.
ScalarField sign_power(const ScalarField& u, double p);

/// Discrete L^2 inner product, sum u_i v_i h^3.
double inner(const ScalarField& u, const ScalarField& v);

/// (sum |u_i|^m h^3)^{1/m}. Throws InvalidExponentError for m < 1.
double lp_norm(const ScalarField& u, double m);

/// Forward-difference H^1_0 inner product over every interior face, with
/// zero ghost values outside the interior.
double grad_inner(const ScalarField& u, const ScalarField& v);

/// Discrete H^1_0 seminorm, sqrt(grad_inner(u, u)).
double grad_l2_norm(const ScalarField& u);

/// -Delta_h u with the 7-point stencil (6u_c - sum of neighbours)/h^2.
ScalarField apply_laplacian(const ScalarField& u);

/// ||-Delta_h u||_{L^3}; the norm that defines the constraint ball K(r).
double w2n_norm(const ScalarField& u);

/// sin(pi x) sin(pi y) sin(pi z) at the nodes: the positive discrete eigenfunction.
ScalarField first_eigenfunction(const DomainGrid& grid);

/// Eigenvalue of -Delta_h belonging to first_eigenfunction, 12 sin^2(pi h/2)/h^2.
double first_eigenvalue(const DomainGrid& grid);

namespace detail {

/// out = -Delta_h in, on raw interior storage.
void neg_laplacian(const DomainGrid& grid, std::span<const double> in, std::span<double> out);

}  // namespace detail

}  // namespace smx
