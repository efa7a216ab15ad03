#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mee/densities.hpp"

namespace mee {

/// f_n(x) = n * integral over [x, x + 1/n] of min(n, p(z)) for x >= 0,
/// mirrored for x < 0, with component i recentred at 0. Analytic shapes use
/// their closed-form CDF and clip level; tabulated shapes integrate the
/// window on a sub-grid 16x finer than the family grid.
GridFunction smooth_truncate(const CsumFamily& family, std::size_t i, int n);

/// Point value of the recentred f_n at t (used by smooth_truncate).
double smoothed_value(const CsumFamily& family, std::size_t i, int n, double t);

/// f_n^g(x) = sum_i w_i f_n(x + g_i - location_i | y_i).
GridFunction smoothed_mixture(const CsumFamily& family, const ShiftAssignment& g, int n);

struct ConvergenceRow {
    int n;
    double l1_gap;                // integral |f_n^g - p^g|
    double v_alpha_fn;
    double v_alpha_p;
    double domination_violation;  // max(0, max over x >= 0 of f_n^g - p^g)
    bool pass;                    // domination and V ordering, both within 1e-9
};

struct ConvergenceReport {
    double alpha;
    std::vector<ConvergenceRow> rows;
    bool l1_monotone;        // non-increasing along n_list
    bool l1_below_threshold; // at the largest n
    bool pass;               // every row passes and both flags hold
};

/// Smoothing-sequence diagnostics for the shifted mixture. n_list must be
/// strictly increasing.
ConvergenceReport convergence_report(const CsumFamily& family, const ShiftAssignment& g, const std::vector<int>& n_list,
                                     double alpha, double l1_threshold);

/// CSV `n,l1_gap,v_alpha_fn,v_alpha_p,domination_violation,pass`.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace mee
