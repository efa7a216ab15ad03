#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mee/approx.hpp"
#include "mee/error.hpp"
#include "mee/estimate.hpp"
#include "oracles.hpp"

using namespace mee;

namespace {

Grid dyadic() { return Grid(-4.0 + 1.0 / 128.0, 4.0 - 1.0 / 128.0, 512); }

Grid lattice(double length) {
    return Grid(-length / 2.0, length / 2.0, static_cast<std::size_t>(std::llround(length * 160.0)) + 1);
}

// n * integral over [|t|, |t| + 1/n] of min(n, p(location + z)), by Simpson on
// a fine partition with the kink of min(n, .) left to the adaptive rule.
double window_oracle(const CsumShape& s, int n, double t) {
    const double a = std::abs(t), b = a + 1.0 / n;
    auto f = [&](double z) { return std::min(static_cast<double>(n), s.density(s.location() + z)); };
    double total = 0.0;
    const int pieces = 64;
    for (int k = 0; k < pieces; ++k) total += oracle::simpson(f, a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces, 1e-15);
    return n * total;
}

}  // namespace

TEST_SUITE("approx") {

TEST_CASE("smooth_truncate of a unit-height uniform at n = 2 is a triangle") {
    const CsumFamily f(dyadic(), {{1.0, CsumShape::uniform(0.0, 1.0)}});
    const GridFunction s = smooth_truncate(f, 0, 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = f.grid().x(i);
        CHECK(s[i] == doctest::Approx(std::max(0.0, 1.0 - 2.0 * std::abs(x))).epsilon(1e-14));
    }
    CHECK(integrate(s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("smoothed value at the centre tends to the peak") {
    const CsumFamily f(lattice(25.6), {{1.0, CsumShape::gaussian(0.0, 1.0)}});
    const double peak = oracle::normal_pdf(0.0);
    double prev = INFINITY;
    for (int n : {4, 16, 64, 256, 1024}) {
        const double err = std::abs(smoothed_value(f, 0, n, 0.0) - peak);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-6);
    // n = 4: 4 * (Phi(1/4) - 1/2).
    CHECK(smoothed_value(f, 0, 4, 0.0) == doctest::Approx(4.0 * (oracle::normal_cdf(0.25) - 0.5)).epsilon(1e-13));
}

TEST_CASE("closed-form windows agree with direct quadrature") {
    const CsumFamily f(lattice(51.2), {{0.25, CsumShape::gaussian(0.5, 0.25)},
                                       {0.25, CsumShape::laplace(-1.0, 0.125)},
                                       {0.25, CsumShape::uniform(1.0, 0.25)},
                                       {0.25, CsumShape::triangular(0.0, 0.0625)}},
                       4.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (int n : {1, 2, 3, 8, 64})
            for (double t : {0.0, 0.01, 0.1, 0.4, 1.3}) {
                CAPTURE(i);
                CAPTURE(n);
                CAPTURE(t);
                CHECK(std::abs(smoothed_value(f, i, n, t) - window_oracle(f.component(i).shape, n, t)) < 1e-9);
            }
}

TEST_CASE("tabulated windows integrate the interpolant") {
    const Grid tg(-3.0, 3.0, 601);
    const auto table = GridFunction::sample(tg, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
    const CsumFamily f(lattice(12.8), {{1.0, CsumShape::tabulated(table)}});
    REQUIRE(f.component(0).shape.is_csum());
    for (int n : {1, 2, 8})
        for (double t : {0.0, 0.25, 0.9})
            CHECK(std::abs(smoothed_value(f, 0, n, t) - window_oracle(f.component(0).shape, n, t)) < 1e-6);
}

TEST_CASE("smoothed mixtures") {
    const CsumFamily pair(dyadic(), {{0.5, CsumShape::uniform(0.0, 1.0)}, {0.5, CsumShape::uniform(0.0, 1.0)}});
    const GridFunction fm = smoothed_mixture(pair, median_assignment(pair), 2);
    const CsumFamily single(dyadic(), {{1.0, CsumShape::uniform(0.0, 1.0)}});
    const GridFunction fs = smooth_truncate(single, 0, 2);
    for (std::size_t i = 0; i < fm.size(); ++i) CHECK(fm[i] == doctest::Approx(fs[i]).epsilon(1e-15));

    // Large n: f_n^g is within 2/n of p^g in sup norm for a Lipschitz-1 density.
    const CsumFamily g(lattice(32.0), {{0.5, CsumShape::gaussian(1.0, 1.0)}, {0.5, CsumShape::gaussian(-1.0, 1.0)}});
    const ShiftAssignment shifted{{1.25, -0.5}};
    const GridFunction p = mixture_error_pdf(g, shifted);
    const GridFunction f = smoothed_mixture(g, shifted, 512);
    double sup = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sup = std::max(sup, std::abs(p[i] - f[i]));
    CHECK(sup < 2.0 / 512);
}

TEST_CASE("smoothing preconditions") {
    const CsumFamily f(dyadic(), {{1.0, CsumShape::uniform(0.0, 1.0)}});
    CHECK_THROWS_AS(smooth_truncate(f, 0, 0), ParameterError);
    CHECK_THROWS_AS(smooth_truncate(f, 0, -3), ParameterError);
    CHECK_THROWS_AS(smooth_truncate(f, 1, 2), ParameterError);

    const Grid tg(-5.0, 5.0, 1001);
    const auto skewed = GridFunction::sample(tg, [](double x) { return x > 0 && x < 2 ? 2.0 - x : 0.0; });
    const CsumFamily nc(lattice(25.6), {{1.0, CsumShape::tabulated(skewed)}});
    CHECK_THROWS_AS(smooth_truncate(nc, 0, 4), ParameterError);
}

TEST_CASE("unit uniform L1 gap is 1/(2n)") {
    // Uniform on [-1, 1], height 1/2.
    const CsumFamily f(dyadic(), {{1.0, CsumShape::uniform(0.0, 2.0)}});
    const auto rep = convergence_report(f, median_assignment(f), {2, 4, 8}, 2.0, 0.05);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& r : rep.rows) CHECK(std::abs(r.l1_gap - 0.5 / r.n) < 1e-9);
    CHECK(rep.rows[0].l1_gap == doctest::Approx(0.25));
    CHECK(rep.l1_monotone);
    CHECK_FALSE(rep.l1_below_threshold);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("gaussian family converges below 5e-3 at n = 256") {
    const CsumFamily f(lattice(25.6), {{1.0, CsumShape::gaussian(0.0, 1.0)}});
    const auto rep = convergence_report(f, median_assignment(f), {256}, 2.0, 5e-3);
    CHECK(rep.rows[0].l1_gap < 5e-3);
    CHECK(rep.pass);
}

TEST_CASE("property: smoothed components satisfy the approximation conditions") {
    const CsumFamily f(lattice(51.2), {{0.25, CsumShape::gaussian(0.0, 0.5)},
                                       {0.25, CsumShape::laplace(0.0, 0.5)},
                                       {0.25, CsumShape::uniform(0.0, 1.5)},
                                       {0.25, CsumShape::triangular(0.0, 0.75)}},
                       4.0);
    const Grid& g = f.grid();
    const std::size_t c = (g.size() - 1) / 2;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (int n : {1, 2, 4, 16, 256}) {
            const GridFunction s = smooth_truncate(f, i, n);
            const auto p = component_samples(f, i, 0.0);
            for (std::size_t k = 0; k <= c; ++k) {
                CHECK(s[c + k] >= 0.0);
                CHECK(s[c + k] <= n);
                CHECK(s[c + k] == doctest::Approx(s[c - k]).epsilon(1e-14));
                // Plateaus and underflowing tails tie up to rounding.
                if (k > 0) CHECK(s[c + k] <= s[c + k - 1] * (1.0 + 1e-14) + 1e-300);
                CHECK(s[c + k] <= p[c + k] + 1e-9);
            }
            CHECK(std::isfinite(power_integral(s, 0.5)));
            CHECK(std::isfinite(power_integral(s, 3.0)));
        }
}

TEST_CASE("property: L1 gap decreases along doubling n and V ordering holds") {
    const CsumFamily f(lattice(40.0), {{0.3, CsumShape::laplace(0.0, 0.5)}, {0.7, CsumShape::triangular(1.0, 1.5)}});
    for (double a : {0.25, 0.75, 2.0, 3.0}) {
        const auto rep = convergence_report(f, median_assignment(f), {2, 4, 8, 16, 32, 64, 128, 256}, a, 5e-3);
        CHECK(rep.l1_monotone);
        for (const auto& r : rep.rows) {
            CHECK(r.domination_violation <= 1e-9);
            CHECK(r.v_alpha_fn <= r.v_alpha_p + 1e-9);
        }
        CHECK(rep.pass);
        // The V gap shrinks as n doubles.
        for (std::size_t k = 1; k < rep.rows.size(); ++k)
            CHECK(rep.rows[k].v_alpha_p - rep.rows[k].v_alpha_fn <= rep.rows[k - 1].v_alpha_p - rep.rows[k - 1].v_alpha_fn);
    }
}

TEST_CASE("convergence report validation and csv") {
    const CsumFamily f(dyadic(), {{1.0, CsumShape::uniform(0.0, 2.0)}});
    CHECK_THROWS_AS(convergence_report(f, median_assignment(f), {}, 2.0, 1.0), ParameterError);
    CHECK_THROWS_AS(convergence_report(f, median_assignment(f), {4, 2}, 2.0, 1.0), ParameterError);
    CHECK_THROWS_AS(convergence_report(f, median_assignment(f), {2}, 1.0, 1.0), ParameterError);
    std::ostringstream out;
    write_convergence_csv(out, convergence_report(f, median_assignment(f), {2}, 2.0, 1.0));
    CHECK(out.str().rfind("n,l1_gap,v_alpha_fn,v_alpha_p,domination_violation,pass\n2,0.25,", 0) == 0);
}

}
