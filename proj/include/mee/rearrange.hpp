#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mee/grid.hpp"

namespace mee {

/// Decreasing rearrangement m^h sampled at 0, delta, 2*delta, ...
///
/// Each sample stands for a cell of measure delta (counting-measure
/// discretisation of Lebesgue measure), so integrals over [0, x0] are
/// partial sums of the top values.
class Rearranged {
public:
    /// Values must be non-negative and non-increasing.
    Rearranged(Grid source_grid, std::vector<double> values);

    const Grid& source_grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double delta() const noexcept { return grid_.delta(); }
    double abscissa(std::size_t k) const noexcept { return static_cast<double>(k) * grid_.delta(); }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    /// Integral of m over [0, infinity).
    double total() const noexcept { return grid_.delta() * prefix_.back(); }

    /// Correctly rounded sum of the first k values.
    double prefix(std::size_t k) const noexcept { return prefix_[k]; }
    std::span<const double> prefixes() const noexcept { return prefix_; }

private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<double> prefix_;
};

/// delta * #{ i : h_i >= z }.
double level_measure(const GridFunction& h, double z);

/// Samples sorted into non-increasing order (stable in source index).
Rearranged decreasing_rearrangement(const GridFunction& h);

/// Rearranging a rearrangement; returns an equal object.
Rearranged decreasing_rearrangement(const Rearranged& m);

struct EquimeasurePair {
    double lhs;  // sum_i h_i^alpha * delta
    double rhs;  // sum_k m_k^alpha * delta
};

/// Both sides are summed exactly, so they agree bit-for-bit.
EquimeasurePair equimeasure_check(const GridFunction& h, double alpha);

/// Integral of m over [0, x0], prorating the boundary cell linearly.
double head_integral(const Rearranged& m, double x0);

struct MajorizationReport {
    double total_0;
    double total_g;
    double max_violation;  // max over lattice x0 of head(mg) - head(m0)
    double worst_x0;
    bool pass;
};

/// Equal totals and head dominance of m0 over mg, both at tolerance 1e-9.
MajorizationReport majorization_check(const Rearranged& m0, const Rearranged& mg);

struct HolderReport {
    double alpha;
    double x0;
    int n;  // ceil(alpha) - 1, so that n < alpha <= n + 1
    double head_lhs;   // integral over [0, x0] of mg^(alpha-n) m0^(n+1-alpha)
    double head_rhs;   // integral over [0, x0] of m0
    double tail_lhs;   // same mixed power over [x0, infinity)
    double tail_rhs;   // integral over [x0, infinity) of mg
    double head_slack; // head_rhs - head_lhs
    double tail_slack; // tail_rhs - tail_lhs
    bool pass;         // both slacks >= -1e-9
};

HolderReport holder_chain_check(const Rearranged& m0, const Rearranged& mg, double alpha, double x0);

/// holder_chain_check for many x0 at the cost of one pass over the samples.
std::vector<HolderReport> holder_chain_profile(const Rearranged& m0, const Rearranged& mg, double alpha,
                                               std::span<const double> x0s);

/// CSV `x,m` with abscissae 0, delta, 2*delta, ...
void write_csv(std::ostream& out, const Rearranged& m);

}  // namespace mee
