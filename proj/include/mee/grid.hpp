#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mee/error.hpp"
#include "mee/summation.hpp"

namespace mee {

/// Uniform 1-D lattice x_min + i*delta, i = 0..n-1.
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double delta() const noexcept { return delta_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * delta_; }

    /// Fractional index of abscissa `x` (0 at x_min, n-1 at x_max).
    double position(double x) const noexcept { return (x - x_min_) / delta_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double delta_;
};

/// Non-negative samples of a real function on a Grid.
///
/// Non-finite values are representable (so that quadrature can report them)
/// but negative values are rejected at construction.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    template <class F>
    static GridFunction sample(const Grid& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Linear interpolation between neighbouring samples; 0 outside the support.
    double at(double x) const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Composite trapezoid rule of term(x_i, f_i) over the grid, summed exactly.
/// Throws NumericalError if any term is non-finite.
template <class Term>
double trapezoid(const GridFunction& f, Term&& term) {
    const Grid& g = f.grid();
    const std::size_t n = f.size();
    ExactSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = term(g.x(i), f[i]);
        if (!std::isfinite(t)) throw NumericalError("non-finite quadrature term");
        acc.add((i == 0 || i + 1 == n) ? 0.5 * t : t);
    }
    return g.delta() * acc.value();
}

/// Trapezoid approximation of the integral of f over [x_min, x_max].
double integrate(const GridFunction& f);

/// Trapezoid approximation of the integral of f^alpha, with 0^alpha = 0.
double power_integral(const GridFunction& f, double alpha);

/// g(x_i) = f(x_i + shift). Lattice multiples of delta are an exact index
/// shift; other shifts interpolate linearly. Mass leaving the support is lost.
GridFunction shift_resample(const GridFunction& f, double shift);

/// CSV `x,value`, one row per sample, shortest round-trip decimal.
void write_csv(std::ostream& out, const GridFunction& f);

/// Reads the `x,value` format. The grid is rebuilt from the first and last
/// abscissae; rows must be uniformly spaced.
GridFunction read_grid_function_csv(std::istream& in);

}  // namespace mee
