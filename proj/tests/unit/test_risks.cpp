#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mee/densities.hpp"
#include "mee/error.hpp"
#include "mee/risks.hpp"
#include "oracles.hpp"

using namespace mee;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction normal(double sigma = 1.0, double mean = 0.0, double half = 14.0, std::size_t n = 28001) {
    return GridFunction::sample(Grid(-half, half, n), [&](double x) { return oracle::normal_pdf(x - mean, sigma); });
}

// Cell-centred grid of spacing h on [-4, 4]: plateaus with dyadic edges are exact.
GridFunction plateau(double lo, double hi, double height, double h = 1.0 / 1024.0) {
    const auto n = static_cast<std::size_t>(std::llround(8.0 / h));
    const Grid g(-4.0 + h / 2.0, 4.0 - h / 2.0, n);
    return GridFunction::sample(g, [&](double x) { return x > lo && x < hi ? height : 0.0; });
}

GridFunction unit_interval_plateau() { return GridFunction(Grid(0.0, 1.0, 129), std::vector<double>(129, 1.0)); }

GridFunction half_height_plateau() { return GridFunction(Grid(0.0, 2.0, 257), std::vector<double>(257, 0.5)); }

}  // namespace

TEST_SUITE("risks") {

TEST_CASE("risk spec parsing and validation") {
    CHECK(RiskSpec::parse("mse") == RiskSpec::mse());
    CHECK(RiskSpec::parse("zero-one") == RiskSpec::zero_one());
    CHECK(RiskSpec::parse("renyi:2") == RiskSpec::renyi(2.0));
    CHECK(RiskSpec::parse("ip:0.5").alpha() == 0.5);
    for (const char* s : {"mse", "mad", "zero-one", "shannon", "renyi:0.25", "ip:3"})
        CHECK(RiskSpec::parse(s).to_string() == s);
    CHECK_THROWS_AS(RiskSpec::parse("renyi"), ConfigError);
    CHECK_THROWS_AS(RiskSpec::parse("renyi:1"), ConfigError);
    CHECK_THROWS_AS(RiskSpec::parse("ip:-2"), ConfigError);
    CHECK_THROWS_AS(RiskSpec::parse("ip:x"), ConfigError);
    CHECK_THROWS_AS(RiskSpec::parse("huber"), ConfigError);
    CHECK_THROWS_AS(RiskSpec::renyi(1.0 + 5e-7), ParameterError);
    CHECK_NOTHROW(RiskSpec::renyi(1.0 + 2e-6));
    CHECK(RiskSpec::ip(2.0).maximize());
    CHECK_FALSE(RiskSpec::ip(0.5).maximize());
    CHECK_FALSE(RiskSpec::renyi(2.0).maximize());
    CHECK(RiskSpec::shannon().translation_invariant());
    CHECK_FALSE(RiskSpec::mad().translation_invariant());
}

TEST_CASE("mse examples") {
    const double h = 1.0 / 1024.0;
    // Cell averages integrate x^2 by the midpoint rule: error h^2/12.
    CHECK(std::abs(mse_risk(plateau(-0.5, 0.5, 1.0, h)) - 1.0 / 12.0) <= h * h / 12.0 * 1.0001);
    CHECK(std::abs(mse_risk(normal()) - 1.0) < 1e-6);
    for (double m : {-1.5, 0.25, 2.0}) CHECK(std::abs(mse_risk(normal(1.0, m)) - (1.0 + m * m)) < 1e-6);
}

TEST_CASE("mad examples") {
    const double h = 1.0 / 1024.0;
    CHECK(std::abs(mad_risk(plateau(-0.5, 0.5, 1.0, h)) - 0.25) <= h * h);
    CHECK(std::abs(mad_risk(normal()) - std::sqrt(2.0 / kPi)) < 1e-6);

    // Symmetry split: twice the integral over the right half.
    const GridFunction p = normal(0.7);
    const Grid& g = p.grid();
    const std::size_t mid = (g.size() - 1) / 2;
    std::vector<double> right(p.values().begin() + static_cast<std::ptrdiff_t>(mid), p.values().end());
    const GridFunction half(Grid(0.0, g.x_max(), right.size()), right);
    const double split = 2.0 * trapezoid(half, [](double x, double v) { return x * v; });
    CHECK(std::abs(mad_risk(p) - split) < 1e-9);
}

TEST_CASE("zero-one examples") {
    CHECK(zero_one_risk(plateau(-0.5, 0.5, 1.0, 1.0 / 64)) == 0.0);
    CHECK(std::abs(zero_one_risk(normal()) - (1.0 - 1.0 / std::sqrt(2.0 * kPi))) < 1e-6);
    CHECK(zero_one_risk(plateau(0.25, 1.25, 1.0, 1.0 / 64)) == 1.0);
    // Origin outside the grid.
    CHECK(zero_one_risk(GridFunction(Grid(1.0, 2.0, 11), std::vector<double>(11, 1.0))) == 1.0);
}

TEST_CASE("shannon examples") {
    CHECK(shannon_ee(unit_interval_plateau()) == 0.0);
    CHECK(shannon_ee(half_height_plateau()) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::abs(shannon_ee(normal()) - 0.5 * std::log(2.0 * kPi * std::numbers::e)) < 1e-5);
}

TEST_CASE("information potential examples") {
    for (double a : {0.3, 2.0, 4.0}) CHECK(information_potential(unit_interval_plateau(), a) == 1.0);
    CHECK(information_potential(half_height_plateau(), 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(information_potential(normal(), 3.0) - 1.0 / (2.0 * kPi * std::sqrt(3.0))) < 1e-6);
    CHECK_THROWS_AS(information_potential(normal(), 1.0), ParameterError);
    CHECK_THROWS_AS(information_potential(normal(), 0.0), ParameterError);
}

TEST_CASE("renyi examples") {
    for (double a : {0.5, 2.0, 3.0}) {
        CHECK(renyi_ee(unit_interval_plateau(), a) == 0.0);
        CHECK(renyi_ee(half_height_plateau(), a) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    }
    CHECK(std::abs(renyi_ee(normal(), 2.0) - std::log(2.0 * std::sqrt(kPi))) < 1e-6);
    const GridFunction zero(Grid(0.0, 1.0, 5), std::vector<double>(5, 0.0));
    CHECK_THROWS_AS(renyi_ee(zero, 2.0), NumericalError);
    CHECK_THROWS_AS(renyi_ee(normal(), 1.0 - 1e-7), ParameterError);
}

TEST_CASE("evaluate dispatch") {
    CHECK(std::abs(evaluate(RiskSpec::mse(), normal()) - 1.0) < 1e-6);
    CHECK(evaluate(RiskSpec::ip(2.0), unit_interval_plateau()) == 1.0);
    CHECK(evaluate(RiskSpec::shannon(), unit_interval_plateau()) == 0.0);
    CHECK(evaluate(RiskSpec::renyi(0.5), half_height_plateau()) == renyi_ee(half_height_plateau(), 0.5));
    CHECK(evaluate(RiskSpec::mad(), normal()) == mad_risk(normal()));
    CHECK(evaluate(RiskSpec::zero_one(), normal()) == zero_one_risk(normal()));
}

TEST_CASE("property: renyi entropy tends to shannon entropy") {
    const Grid g(-30.0, 30.0, 60001);
    std::vector<GridFunction> densities;
    densities.push_back(normal(0.6));
    densities.push_back(GridFunction::sample(g, [](double x) { return std::exp(-std::abs(x) / 1.5) / 3.0; }));
    densities.push_back(GridFunction::sample(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); }));
    for (const auto& p : densities) {
        const double h = shannon_ee(p);
        CHECK(std::abs(renyi_ee(p, 1.0 - 1e-3) - h) < 1e-2);
        CHECK(std::abs(renyi_ee(p, 1.0 + 1e-3) - h) < 1e-2);
    }
}

TEST_CASE("property: renyi and information potential orderings agree") {
    oracle::Rng rng(17);
    const Grid g(-40.0, 40.0, 16001);
    std::vector<GridFunction> densities;
    for (int i = 0; i < 12; ++i) {
        const double s1 = rng.uniform(0.3, 3.0), s2 = rng.uniform(0.3, 3.0), d = rng.uniform(0.0, 4.0);
        const double w = rng.uniform(0.1, 0.9);
        densities.push_back(GridFunction::sample(
            g, [&](double x) { return w * oracle::normal_pdf(x, s1) + (1.0 - w) * oracle::normal_pdf(x - d, s2); }));
    }
    for (double a : {0.25, 0.5, 0.75, 1.5, 2.0, 3.0}) {
        for (std::size_t i = 0; i < densities.size(); ++i) {
            for (std::size_t j = i + 1; j < densities.size(); ++j) {
                const double dv = information_potential(densities[i], a) - information_potential(densities[j], a);
                const double dh = renyi_ee(densities[i], a) - renyi_ee(densities[j], a);
                if (std::abs(dv) < 1e-12) continue;
                if (a < 1.0)
                    CHECK((dh > 0) == (dv > 0));
                else
                    CHECK((dh > 0) == (dv < 0));
            }
        }
    }
}

TEST_CASE("property: scale law adds log c") {
    const Grid g(-40.0, 40.0, 32001);
    auto shape = [](double x) { return 0.5 * oracle::normal_pdf(x - 1.0, 0.7) + 0.5 * std::exp(-2.0 * std::abs(x)); };
    const GridFunction p = GridFunction::sample(g, shape);
    for (double c : {1.5, 2.0, 3.0}) {
        const GridFunction pc = GridFunction::sample(g, [&](double x) { return shape(x / c) / c; });
        for (double a : {0.5, 2.0, 3.0}) CHECK(std::abs(renyi_ee(pc, a) - renyi_ee(p, a) - std::log(c)) < 1e-4);
        CHECK(std::abs(shannon_ee(pc) - shannon_ee(p) - std::log(c)) < 1e-4);
    }
}

TEST_CASE("property: lattice translation leaves entropies unchanged, shifts MSE") {
    oracle::Rng rng(4);
    const Grid g(-20.0, 20.0, 4001);
    const GridFunction p = GridFunction::sample(g, [](double x) { return x > -2 && x < 3 ? 0.1 + 0.02 * x * x : 0.0; });
    for (int trial = 0; trial < 10; ++trial) {
        const int k = rng.integer(-1000, 1000);
        const GridFunction q = shift_resample(p, k * g.delta());
        CHECK(shannon_ee(q) == shannon_ee(p));
        CHECK(information_potential(q, 2.5) == information_potential(p, 2.5));
        CHECK(renyi_ee(q, 0.5) == renyi_ee(p, 0.5));
        // q(x) = p(x + c): mean moves by -c.
        const double c = k * g.delta();
        const double mass = integrate(p);
        const double mean = trapezoid(p, [](double x, double v) { return x * v; });
        const double expected = mse_risk(p) - 2.0 * c * mean + c * c * mass;
        CHECK(mse_risk(q) == doctest::Approx(expected).epsilon(1e-12));
    }
}

}
