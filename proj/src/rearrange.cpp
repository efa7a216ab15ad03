#include "mee/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "mee/csv.hpp"
#include "mee/risks.hpp"

namespace mee {

namespace {

constexpr double kTol = 1e-9;

std::vector<double> prefix_sums(std::span<const double> v) {
    std::vector<double> out(v.size() + 1, 0.0);
    ExactSum acc;
    for (std::size_t k = 0; k < v.size(); ++k) {
        acc.add(v[k]);
        out[k + 1] = acc.value();
    }
    return out;
}

// Integral over [0, x0] given the prefix sums of the samples.
double head_from_prefix(std::span<const double> values, std::span<const double> prefix, double delta, double x0) {
    if (!(x0 > 0.0)) return 0.0;
    const double cells = x0 / delta;
    if (cells >= static_cast<double>(values.size())) return delta * prefix.back();
    const auto k = static_cast<std::size_t>(cells);
    const double frac = cells - static_cast<double>(k);
    return delta * prefix[k] + frac * delta * values[k];
}

void require_same_length(const Rearranged& a, const Rearranged& b) {
    if (a.size() != b.size() || a.delta() != b.delta())
        throw ParameterError("rearrangements must share the same lattice");
}

}  // namespace

Rearranged::Rearranged(Grid source_grid, std::vector<double> values)
    : grid_(source_grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ParameterError("rearrangement length does not match its grid");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] >= 0.0) || !std::isfinite(values_[k]))
            throw ParameterError("rearrangement values must be finite and non-negative");
        if (k > 0 && values_[k] > values_[k - 1]) throw ParameterError("rearrangement values must be non-increasing");
    }
    prefix_ = prefix_sums(values_);
}

double level_measure(const GridFunction& h, double z) {
    if (!(z >= 0.0)) throw ParameterError("level must be >= 0");
    const auto count = std::count_if(h.values().begin(), h.values().end(), [z](double v) { return v >= z; });
    return h.grid().delta() * static_cast<double>(count);
}

Rearranged decreasing_rearrangement(const GridFunction& h) {
    std::vector<double> v(h.values().begin(), h.values().end());
    for (double x : v)
        if (!std::isfinite(x)) throw NumericalError("cannot rearrange non-finite samples");
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    return Rearranged(h.grid(), std::move(v));
}

Rearranged decreasing_rearrangement(const Rearranged& m) {
    std::vector<double> v(m.values().begin(), m.values().end());
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    return Rearranged(m.source_grid(), std::move(v));
}

EquimeasurePair equimeasure_check(const GridFunction& h, double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
    const Rearranged m = decreasing_rearrangement(h);
    auto power_sum = [alpha](std::span<const double> v) {
        ExactSum acc;
        for (double x : v) acc.add(x > 0.0 ? std::pow(x, alpha) : 0.0);
        return acc.value();
    };
    const double delta = h.grid().delta();
    return {delta * power_sum(h.values()), delta * power_sum(m.values())};
}

double head_integral(const Rearranged& m, double x0) {
    if (!(x0 >= 0.0)) throw ParameterError("x0 must be >= 0");
    return head_from_prefix(m.values(), m.prefixes(), m.delta(), x0);
}

MajorizationReport majorization_check(const Rearranged& m0, const Rearranged& mg) {
    require_same_length(m0, mg);
    MajorizationReport r{m0.total(), mg.total(), 0.0, 0.0, false};
    // Both heads are piecewise linear with the same breakpoints, so lattice
    // points suffice.
    for (std::size_t k = 1; k <= m0.size(); ++k) {
        const double diff = m0.delta() * mg.prefix(k) - m0.delta() * m0.prefix(k);
        if (diff > r.max_violation) {
            r.max_violation = diff;
            r.worst_x0 = m0.abscissa(k);
        }
    }
    r.pass = std::abs(r.total_0 - r.total_g) <= kTol && r.max_violation <= kTol;
    return r;
}

std::vector<HolderReport> holder_chain_profile(const Rearranged& m0, const Rearranged& mg, double alpha,
                                               std::span<const double> x0s) {
    require_same_length(m0, mg);
    check_alpha(alpha);
    const int n = static_cast<int>(std::ceil(alpha)) - 1;
    const double eg = alpha - n, e0 = n + 1 - alpha;
    std::vector<double> mixed(m0.size());
    for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] = std::pow(mg[k], eg) * std::pow(m0[k], e0);
    const auto mixed_prefix = prefix_sums(mixed);
    const double delta = m0.delta();
    const double mixed_total = delta * mixed_prefix.back();

    std::vector<HolderReport> out;
    out.reserve(x0s.size());
    for (double x0 : x0s) {
        if (!(x0 >= 0.0)) throw ParameterError("x0 must be >= 0");
        HolderReport r{};
        r.alpha = alpha;
        r.x0 = x0;
        r.n = n;
        r.head_lhs = head_from_prefix(mixed, mixed_prefix, delta, x0);
        r.head_rhs = head_from_prefix(m0.values(), m0.prefixes(), delta, x0);
        r.tail_lhs = mixed_total - r.head_lhs;
        r.tail_rhs = mg.total() - head_from_prefix(mg.values(), mg.prefixes(), delta, x0);
        r.head_slack = r.head_rhs - r.head_lhs;
        r.tail_slack = r.tail_rhs - r.tail_lhs;
        r.pass = r.head_slack >= -kTol && r.tail_slack >= -kTol;
        out.push_back(r);
    }
    return out;
}

HolderReport holder_chain_check(const Rearranged& m0, const Rearranged& mg, double alpha, double x0) {
    const double xs[] = {x0};
    return holder_chain_profile(m0, mg, alpha, xs).front();
}

void write_csv(std::ostream& out, const Rearranged& m) {
    out << "x,m\n";
    for (std::size_t k = 0; k < m.size(); ++k) out << csv::format(m.abscissa(k)) << ',' << csv::format(m[k]) << '\n';
}

}  // namespace mee
