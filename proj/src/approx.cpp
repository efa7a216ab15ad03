#include "mee/approx.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mee/csv.hpp"
#include "mee/risks.hpp"

namespace mee {

namespace {

constexpr int kSubgrid = 16;
constexpr double kTol = 1e-9;

// Integral of min(cap, p(location + z)) over z in [a, a + w], a >= 0, w > 0.
double clipped_window(const CsumShape& shape, double cap, double a, double w, double delta) {
    const double b = a + w;
    if (shape.kind() != ShapeKind::Tabulated) {
        const double r = shape.level_radius(cap);
        // Clamp the flat length against w itself so a fully flat window is exactly cap * w.
        double total = cap * std::clamp(r - a, 0.0, w);
        const double lo = std::max(a, r);
        if (lo < b) total += shape.interval_mass(shape.location() + lo, shape.location() + b);
        return total;
    }
    const double h = delta / kSubgrid;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h)));
    const double dz = (b - a) / static_cast<double>(steps);
    ExactSum acc;
    for (std::size_t s = 0; s <= steps; ++s) {
        const double z = a + static_cast<double>(s) * dz;
        const double v = std::min(cap, shape.density(shape.location() + z));
        acc.add((s == 0 || s == steps) ? 0.5 * v : v);
    }
    return dz * acc.value();
}

void require_smoothable(const CsumFamily& family, std::size_t i, int n) {
    if (n <= 0) throw ParameterError("smoothing index n must be positive");
    if (!family.component(i).shape.is_csum())
        throw ParameterError("smoothing requires a symmetric unimodal component");
}

}  // namespace

double smoothed_value(const CsumFamily& family, std::size_t i, int n, double t) {
    require_smoothable(family, i, n);
    const auto& shape = family.component(i).shape;
    const double a = std::abs(t);
    const double width = 1.0 / n;
    return n * clipped_window(shape, static_cast<double>(n), a, width, family.grid().delta());
}

GridFunction smooth_truncate(const CsumFamily& family, std::size_t i, int n) {
    require_smoothable(family, i, n);
    return GridFunction::sample(family.grid(), [&](double x) { return smoothed_value(family, i, n, x); });
}

GridFunction smoothed_mixture(const CsumFamily& family, const ShiftAssignment& g, int n) {
    check_admissible(family, g);
    const Grid& grid = family.grid();
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < family.size(); ++i) {
        require_smoothable(family, i, n);
        const auto& c = family.component(i);
        const double offset = g[i] - c.shape.location();
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c.weight * smoothed_value(family, i, n, grid.x(j) + offset);
    }
    return GridFunction(grid, std::move(out));
}

ConvergenceReport convergence_report(const CsumFamily& family, const ShiftAssignment& g, const std::vector<int>& n_list,
                                     double alpha, double l1_threshold) {
    check_alpha(alpha);
    if (n_list.empty()) throw ParameterError("n_list must not be empty");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1]) throw ParameterError("n_list must be strictly increasing");

    const GridFunction p = mixture_error_pdf(family, g);
    const double v_p = information_potential(p, alpha);
    ConvergenceReport report{alpha, {}, true, false, true};
    for (int n : n_list) {
        const GridFunction f = smoothed_mixture(family, g, n);
        ConvergenceRow row{};
        row.n = n;
        std::vector<double> diff(f.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = std::abs(f[j] - p[j]);
        row.l1_gap = integrate(GridFunction(p.grid(), std::move(diff)));
        row.v_alpha_fn = information_potential(f, alpha);
        row.v_alpha_p = v_p;
        double worst = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j)
            if (p.grid().x(j) >= 0.0) worst = std::max(worst, f[j] - p[j]);
        row.domination_violation = worst;
        row.pass = worst <= kTol && row.v_alpha_fn <= v_p + kTol;
        if (!report.rows.empty() && row.l1_gap > report.rows.back().l1_gap) report.l1_monotone = false;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    report.l1_below_threshold = report.rows.back().l1_gap < l1_threshold;
    report.pass = report.pass && report.l1_monotone && report.l1_below_threshold;
    return report;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "n,l1_gap,v_alpha_fn,v_alpha_p,domination_violation,pass\n";
    for (const auto& r : report.rows)
        out << csv::join({std::to_string(r.n), csv::format(r.l1_gap), csv::format(r.v_alpha_fn), csv::format(r.v_alpha_p),
                          csv::format(r.domination_violation), r.pass ? "true" : "false"})
            << '\n';
}

}  // namespace mee
