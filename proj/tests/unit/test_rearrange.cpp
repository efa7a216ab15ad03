#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mee/densities.hpp"
#include "mee/estimate.hpp"
#include "mee/rearrange.hpp"
#include "oracles.hpp"

using namespace mee;

namespace {

GridFunction triangle() {
    return GridFunction::sample(Grid(-1.0, 1.0, 2001), [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
}

// Cell-centred grid of spacing 1/64: {1 on length 0.5, 0.5 on length 1}.
GridFunction two_level() {
    return GridFunction::sample(Grid(-4.0 + 1.0 / 128, 4.0 - 1.0 / 128, 512), [](double x) {
        if (x > -0.5 && x < 0.0) return 1.0;
        return (x > -1.0 && x < 0.5) ? 0.5 : 0.0;
    });
}

GridFunction unit_plateau() {
    return GridFunction::sample(Grid(-4.0 + 1.0 / 128, 4.0 - 1.0 / 128, 512),
                                [](double x) { return std::abs(x) < 0.5 ? 1.0 : 0.0; });
}

GridFunction random_function(oracle::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.integer(0, 3) == 0 ? 0.0 : rng.uniform(0.0, 5.0);
    return GridFunction(Grid(-1.0, 1.0, n), v);
}

}  // namespace

TEST_SUITE("rearrange") {

TEST_CASE("level_measure examples") {
    const GridFunction t = triangle();
    const double d = t.grid().delta();
    // Samples exactly at the level may land on either side after rounding.
    CHECK(std::abs(level_measure(t, 0.5) - 1.0) <= d * (1.0 + 1e-9));
    CHECK(level_measure(t, 0.0) == doctest::Approx(t.size() * d));
    CHECK(level_measure(t, 1.0 + 1e-12) == 0.0);
}

TEST_CASE("decreasing_rearrangement examples") {
    const GridFunction mono =
        GridFunction::sample(Grid(0.0, 3.0, 31), [](double x) { return std::exp(-x); });
    const Rearranged m = decreasing_rearrangement(mono);
    CHECK(std::equal(m.values().begin(), m.values().end(), mono.values().begin(), mono.values().end()));

    const GridFunction t = triangle();
    const Rearranged mt = decreasing_rearrangement(t);
    const double d = t.grid().delta();
    CHECK(mt[0] == 1.0);
    for (std::size_t k = 0; k < mt.size(); ++k) {
        const double x = mt.abscissa(k);
        CHECK(std::abs(mt[k] - std::max(0.0, 1.0 - x / 2.0)) <= d);
    }

    const Rearranged ms = decreasing_rearrangement(two_level());
    const double h = 1.0 / 64.0;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        const double x = k * h;
        CHECK(ms[k] == (x < 0.5 ? 1.0 : (x < 1.5 ? 0.5 : 0.0)));
    }
}

TEST_CASE("rearrangement starts at the supremum and decays to zero") {
    oracle::Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction h = random_function(rng, 301);
        const Rearranged m = decreasing_rearrangement(h);
        CHECK(m[0] == *std::max_element(h.values().begin(), h.values().end()));
        CHECK(m[m.size() - 1] <= m[0]);
    }
    const Rearranged mt = decreasing_rearrangement(triangle());
    CHECK(mt[mt.size() - 1] == 0.0);
}

TEST_CASE("rearrangement agrees with the level-set definition") {
    // m(x_k) = sup{z : O(z) > x_k}, realised as the k-th largest sample.
    oracle::Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const GridFunction h = random_function(rng, 120);
        const Rearranged m = decreasing_rearrangement(h);
        const std::vector<double> v(h.values().begin(), h.values().end());
        for (std::size_t k = 0; k < m.size(); ++k) CHECK(m[k] == oracle::kth_largest(v, k));
    }
}

TEST_CASE("equimeasure_check examples") {
    oracle::Rng rng(1);
    const GridFunction h = random_function(rng, 500);
    const auto p1 = equimeasure_check(h, 1.0);
    CHECK(p1.lhs == p1.rhs);
    CHECK(p1.lhs == exact_sum(h.values()) * h.grid().delta());

    const auto pt = equimeasure_check(triangle(), 2.0);
    CHECK(pt.lhs == pt.rhs);
    CHECK(std::abs(pt.lhs - 2.0 / 3.0) < 1e-6);

    const auto ps = equimeasure_check(two_level(), 2.0);
    CHECK(ps.lhs == ps.rhs);
    CHECK(ps.lhs == 0.75);
}

TEST_CASE("head_integral examples") {
    const Rearranged m = decreasing_rearrangement(two_level());
    CHECK(head_integral(m, 0.0) == 0.0);
    CHECK(head_integral(m, 100.0) == m.total());
    CHECK(m.total() == 1.0);
    CHECK(head_integral(m, 1.0) == 0.75);
    // Linear proration inside a cell keeps the head continuous.
    const double d = m.delta();
    CHECK(head_integral(m, 0.25 * d) == doctest::Approx(0.25 * d));
    CHECK(head_integral(m, 0.5 + 0.5 * d) == doctest::Approx(0.5 + 0.25 * d));
}

TEST_CASE("property: head integral is the best subset mass") {
    oracle::Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction h = random_function(rng, 80);
        const Rearranged m = decreasing_rearrangement(h);
        const std::vector<double> v(h.values().begin(), h.values().end());
        for (std::size_t k : {0u, 1u, 7u, 40u, 80u}) {
            const double brute = oracle::top_k_sum(v, k) * m.delta();
            CHECK(head_integral(m, k * m.delta()) == doctest::Approx(brute).epsilon(1e-14));
        }
    }
}

TEST_CASE("majorization_check examples") {
    const Rearranged m0 = decreasing_rearrangement(unit_plateau());
    const Rearranged mg = decreasing_rearrangement(two_level());
    const auto same = majorization_check(m0, m0);
    CHECK(same.max_violation == 0.0);
    CHECK(same.pass);

    const auto r = majorization_check(m0, mg);
    CHECK(r.pass);
    CHECK(r.total_0 == 1.0);
    CHECK(r.total_g == 1.0);
    CHECK(head_integral(mg, 1.0) == 0.75);
    CHECK(head_integral(m0, 1.0) == 1.0);

    // Reversed roles: the spread-out mixture cannot dominate.
    CHECK_FALSE(majorization_check(mg, m0).pass);
}

TEST_CASE("holder_chain_check examples") {
    const Rearranged m0 = decreasing_rearrangement(unit_plateau());
    const Rearranged mg = decreasing_rearrangement(two_level());
    for (double a : {0.25, 0.5, 2.0, 3.7}) {
        for (double x0 : {0.0, 0.3, 1.0, 2.5}) {
            const auto r = holder_chain_check(m0, m0, a, x0);
            CHECK(r.pass);
            CHECK(std::abs(r.head_slack) < 1e-12);
            CHECK(std::abs(r.tail_slack) < 1e-12);
        }
    }
    const auto r2 = holder_chain_check(m0, mg, 2.0, 0.5);
    CHECK(r2.n == 1);
    CHECK(r2.head_lhs == 0.5);
    CHECK(r2.head_rhs == 0.5);
    CHECK(r2.pass);

    const auto rh = holder_chain_check(m0, mg, 0.5, 0.75);
    CHECK(rh.n == 0);
    CHECK(rh.head_lhs == doctest::Approx(0.5 + 0.25 * std::sqrt(0.5)).epsilon(1e-14));
    CHECK(rh.head_rhs == 0.75);
    CHECK(rh.pass);

    CHECK(holder_chain_check(m0, mg, 3.0, 0.5).n == 2);
    CHECK(holder_chain_check(m0, mg, 3.7, 0.5).n == 3);
}

TEST_CASE("property: rearrangement exact, idempotent, non-increasing") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const GridFunction h = random_function(rng, static_cast<std::size_t>(rng.integer(2, 2000)));
        const Rearranged m = decreasing_rearrangement(h);
        for (std::size_t k = 1; k < m.size(); ++k) CHECK(m[k] <= m[k - 1]);
        const Rearranged again = decreasing_rearrangement(m);
        CHECK(std::equal(again.values().begin(), again.values().end(), m.values().begin(), m.values().end()));
        for (double a : {0.5, 1.0, 2.0, 3.0, rng.uniform(0.1, 5.0)}) {
            const auto p = equimeasure_check(h, a);
            CHECK(p.lhs == p.rhs);
        }
    }
}

TEST_CASE("property: lemma checks hold for CSUM mixtures under lattice shifts") {
    oracle::Rng rng(31);
    const Grid g(-12.8, 12.8, 4097);
    const CsumFamily family(g, {{0.3, CsumShape::gaussian(0.5, 0.75)},
                                {0.3, CsumShape::triangular(-1.0, 1.25)},
                                {0.4, CsumShape::uniform(1.0, 1.5)}});
    const auto median = median_assignment(family);
    const Rearranged m0 = decreasing_rearrangement(mixture_error_pdf(family, median));
    std::vector<double> x0s;
    for (int j = 1; j <= 20; ++j) x0s.push_back(j * 40 * g.delta());
    for (int trial = 0; trial < 20; ++trial) {
        ShiftAssignment shifted = median;
        for (auto& s : shifted.shifts) s += rng.integer(-320, 320) * g.delta();
        const Rearranged mg = decreasing_rearrangement(mixture_error_pdf(family, shifted));
        CHECK(majorization_check(m0, mg).pass);
        for (double a : {0.25, 0.5, 0.75, 1.5, 2.0, 3.0, 3.7})
            for (const auto& r : holder_chain_profile(m0, mg, a, x0s)) {
                CHECK(r.head_slack >= -1e-9);
                CHECK(r.tail_slack >= -1e-9);
            }
    }
}

TEST_CASE("holder profile matches pointwise checks") {
    const Rearranged m0 = decreasing_rearrangement(unit_plateau());
    const Rearranged mg = decreasing_rearrangement(two_level());
    const std::vector<double> x0s{0.1, 0.5, 0.75, 1.2, 3.0};
    const auto prof = holder_chain_profile(m0, mg, 1.5, x0s);
    for (std::size_t i = 0; i < x0s.size(); ++i) {
        const auto r = holder_chain_check(m0, mg, 1.5, x0s[i]);
        CHECK(prof[i].head_lhs == doctest::Approx(r.head_lhs));
        CHECK(prof[i].tail_lhs == doctest::Approx(r.tail_lhs));
    }
}

TEST_CASE("rearranged csv export") {
    const Rearranged m = decreasing_rearrangement(
        GridFunction(Grid(0.0, 0.5, 3), std::vector<double>{0.5, 2.0, 1.0}));
    std::ostringstream out;
    write_csv(out, m);
    CHECK(out.str() == "x,m\n0,2\n0.25,1\n0.5,0.5\n");
}

}
