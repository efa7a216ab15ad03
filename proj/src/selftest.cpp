#include "mee/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mee/approx.hpp"
#include "mee/csv.hpp"
#include "mee/estimate.hpp"
#include "mee/parallel.hpp"
#include "mee/rearrange.hpp"
#include "mee/risks.hpp"
#include "mee/runner.hpp"

namespace mee {

namespace {

const std::vector<double> kSweepAlphas{0.25, 0.5, 0.75, 1.5, 2.0, 3.0};
constexpr int kRandomCells = 8;
constexpr int kHolderPoints = 20;

std::string str(std::size_t v) { return std::to_string(v); }

std::string fmt(double v) { return csv::format(v); }

std::string shifts_field(const ShiftAssignment& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += ';';
        s += fmt(g[i]);
    }
    return s;
}

// Cell-centred grid on [-4, 4] with spacing 1/64: uniform edges at multiples
// of 1/64 fall on cell boundaries, so cell averages are exact plateaus.
Grid dyadic_grid() { return Grid(-4.0 + 1.0 / 128.0, 4.0 - 1.0 / 128.0, 512); }

struct Outcome {
    CriterionResult result;
    std::vector<std::pair<std::string, std::string>> artifacts;
};

// Criterion 1: median-aligned mixture extremizes V_alpha on every sweep cell.
Outcome theorem_sweep(const std::vector<CorpusFamily>& corpus, int jobs) {
    Outcome o{{1, "theorem sweep", true, {}}, {}};
    std::size_t cells = 0, violations = 0;
    double min_gap = INFINITY;
    for (const auto& cf : corpus) {
        const auto candidates = perturbation_grid(cf.family, {PerturbationMode::PerComponent, 0.1, 2.0});
        const auto reports = verify_theorem(cf.family, kSweepAlphas, candidates, jobs);
        for (const auto& r : reports) {
            ++cells;
            if (is_violation(r)) ++violations;
            if (r.gap != 0.0) min_gap = std::min(min_gap, std::abs(r.gap));
        }
        std::ostringstream out;
        write_theorem_csv(out, reports);
        o.artifacts.emplace_back("theorem_" + cf.name + ".csv", out.str());
    }
    o.result.pass = violations == 0;
    o.result.detail = str(corpus.size()) + " families, " + str(cells) + " cells, " + str(violations) +
                      " violations, smallest nonzero |gap| " + fmt(min_gap);
    return o;
}

// Criterion 2: two unit uniforms, one displaced by 0.5.
Outcome analytic_gap() {
    Outcome o{{2, "analytic gap", true, {}}, {}};
    const CsumFamily family(dyadic_grid(), {{0.5, CsumShape::uniform(0.0, 1.0)}, {0.5, CsumShape::uniform(0.0, 1.0)}});
    const double delta = 0.5;
    std::ostringstream out;
    out << "alpha,v_median,v_candidate,gap,oracle_gap\n";
    double worst = 0.0;
    for (double alpha : {2.0, 0.5}) {
        // Overlap of length 1 - delta at height 1, two flanks of length delta at height 1/2.
        const double oracle_v = (1.0 - delta) + 2.0 * delta * std::pow(0.5, alpha);
        const double oracle_gap = 1.0 - oracle_v;
        const auto r = theorem_gap(family, alpha, ShiftAssignment{{0.0, delta}});
        worst = std::max(worst, std::abs(r.gap - oracle_gap));
        out << csv::join({fmt(alpha), fmt(r.v_median), fmt(r.v_candidate), fmt(r.gap), fmt(oracle_gap)}) << '\n';
    }
    o.result.pass = worst <= 1e-9;
    o.result.detail = "max |gap - overlap oracle| " + fmt(worst);
    o.artifacts.emplace_back("analytic_gap.csv", out.str());
    return o;
}

// Criterion 3: Gaussian information potentials and Shannon entropy.
Outcome gaussian_oracles() {
    Outcome o{{3, "gaussian closed forms", true, {}}, {}};
    std::ostringstream out;
    out << "quantity,sigma,alpha,value,oracle,error\n";
    double worst_rel = 0.0;
    for (double sigma : {0.5, 1.0, 2.0}) {
        const CsumFamily family(lattice_grid(64.0), {{1.0, CsumShape::gaussian(0.0, sigma)}});
        const GridFunction p = mixture_error_pdf(family, median_assignment(family));
        for (double alpha : {0.5, 2.0, 3.0}) {
            const double v = information_potential(p, alpha);
            const double oracle =
                std::pow(2.0 * std::numbers::pi * sigma * sigma, (1.0 - alpha) / 2.0) / std::sqrt(alpha);
            const double rel = std::abs(v - oracle) / oracle;
            worst_rel = std::max(worst_rel, rel);
            out << csv::join({"ip", fmt(sigma), fmt(alpha), fmt(v), fmt(oracle), fmt(rel)}) << '\n';
        }
    }
    const CsumFamily unit(lattice_grid(64.0), {{1.0, CsumShape::gaussian(0.0, 1.0)}});
    const double h = shannon_ee(mixture_error_pdf(unit, median_assignment(unit)));
    const double h_oracle = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    const double h_err = std::abs(h - h_oracle);
    out << csv::join({"shannon", "1", "", fmt(h), fmt(h_oracle), fmt(h_err)}) << '\n';
    o.result.pass = worst_rel <= 1e-6 && h_err <= 1e-5;
    o.result.detail = "max relative IP error " + fmt(worst_rel) + ", Shannon error " + fmt(h_err);
    o.artifacts.emplace_back("gaussian_oracles.csv", out.str());
    return o;
}

// Criterion 4: Renyi entropy approaches Shannon entropy as alpha -> 1.
Outcome renyi_limit(const std::vector<CorpusFamily>& corpus) {
    Outcome o{{4, "renyi to shannon limit", true, {}}, {}};
    std::ostringstream out;
    out << "family,alpha,renyi,shannon,difference\n";
    double worst = 0.0;
    for (const auto& cf : corpus) {
        const GridFunction p = mixture_error_pdf(cf.family, median_assignment(cf.family));
        const double h = shannon_ee(p);
        for (double alpha : {1.0 - 1e-3, 1.0 + 1e-3}) {
            const double hr = renyi_ee(p, alpha);
            worst = std::max(worst, std::abs(hr - h));
            out << csv::join({cf.name, fmt(alpha), fmt(hr), fmt(h), fmt(hr - h)}) << '\n';
        }
    }
    o.result.pass = worst < 1e-2;
    o.result.detail = "max |H_alpha - H| " + fmt(worst);
    o.artifacts.emplace_back("renyi_limit.csv", out.str());
    return o;
}

// Shift assignments visited by the lemma suites: the sweep candidates plus
// seeded random joint lattice perturbations.
std::vector<ShiftAssignment> lemma_cells(const CsumFamily& family, std::uint64_t seed) {
    std::vector<ShiftAssignment> cells;
    for (auto& c : perturbation_grid(family, {PerturbationMode::PerComponent, 0.1, 2.0}))
        cells.push_back(std::move(c.shifts));
    std::mt19937_64 rng(seed);
    const ShiftAssignment median = median_assignment(family);
    for (int r = 0; r < kRandomCells; ++r) {
        ShiftAssignment g = median;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = static_cast<int>(rng() % 41) - 20;
            g.shifts[i] += k * 0.1 * family.component(i).shape.scale();
        }
        cells.push_back(std::move(g));
    }
    return cells;
}

std::vector<double> holder_points(const Rearranged& m0) {
    // Spread over the lattice up to where m0 has all but 1e-9 of its mass.
    const auto prefixes = m0.prefixes();
    const double target = prefixes.back() * (1.0 - 1e-9);
    const auto k = static_cast<std::size_t>(std::lower_bound(prefixes.begin(), prefixes.end(), target) - prefixes.begin());
    std::vector<double> x0s;
    for (int j = 1; j <= kHolderPoints; ++j) {
        const auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(k) * j / kHolderPoints));
        x0s.push_back(m0.abscissa(std::max<std::size_t>(idx, 1)));
    }
    return x0s;
}

struct LemmaCell {
    bool equimeasure = true;
    bool idempotent = true;
    bool monotone = true;
    double majorization = 0.0;
    std::vector<double> head_slack;  // per alpha, minimum over x0
    std::vector<double> tail_slack;
};

bool non_increasing(const Rearranged& m) {
    for (std::size_t k = 1; k < m.size(); ++k)
        if (m[k] > m[k - 1]) return false;
    return true;
}

LemmaCell lemma_cell(const CsumFamily& family, const Rearranged& m0, const std::vector<double>& x0s,
                     const ShiftAssignment& g) {
    LemmaCell c;
    const GridFunction p = mixture_error_pdf(family, g);
    const Rearranged mg = decreasing_rearrangement(p);
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const auto pair = equimeasure_check(p, a);
        c.equimeasure = c.equimeasure && pair.lhs == pair.rhs;
    }
    const Rearranged again = decreasing_rearrangement(mg);
    c.idempotent = std::equal(again.values().begin(), again.values().end(), mg.values().begin(), mg.values().end());
    c.monotone = non_increasing(mg);
    const auto maj = majorization_check(m0, mg);
    c.majorization = maj.pass ? maj.max_violation : INFINITY;
    for (double alpha : kSweepAlphas) {
        double head = INFINITY, tail = INFINITY;
        for (const auto& r : holder_chain_profile(m0, mg, alpha, x0s)) {
            head = std::min(head, r.head_slack);
            tail = std::min(tail, r.tail_slack);
        }
        c.head_slack.push_back(head);
        c.tail_slack.push_back(tail);
    }
    return c;
}

// Criteria 5 and 6 share the rearranged mixtures of every lemma cell.
std::pair<Outcome, Outcome> rearrangement_suites(const std::vector<CorpusFamily>& corpus, std::uint64_t seed, int jobs) {
    Outcome eq{{5, "rearrangement exactness", true, {}}, {}};
    Outcome lem{{6, "majorization and holder chain", true, {}}, {}};
    std::ostringstream eq_out, lem_out;
    eq_out << "family,function,alpha,lhs,rhs\n";
    lem_out << "family,alpha,cells,max_majorization_violation,min_head_slack,min_tail_slack,pass\n";
    std::size_t functions = 0, cells_total = 0, eq_fail = 0, lemma_fail = 0;
    double worst_head = INFINITY, worst_tail = INFINITY, worst_maj = 0.0;

    for (std::size_t f = 0; f < corpus.size(); ++f) {
        const auto& cf = corpus[f];
        const CsumFamily& family = cf.family;

        // Component densities and the median mixture, reported individually.
        std::vector<std::pair<std::string, GridFunction>> named;
        for (std::size_t i = 0; i < family.size(); ++i)
            named.emplace_back("component" + str(i),
                               GridFunction(family.grid(), component_samples(family, i, family.component(i).shape.location())));
        const GridFunction p0 = mixture_error_pdf(family, median_assignment(family));
        named.emplace_back("median_mixture", p0);
        for (const auto& [label, h] : named) {
            ++functions;
            const Rearranged m = decreasing_rearrangement(h);
            const Rearranged again = decreasing_rearrangement(m);
            bool ok = non_increasing(m) &&
                      std::equal(again.values().begin(), again.values().end(), m.values().begin(), m.values().end());
            for (double a : {0.5, 1.0, 2.0, 3.0}) {
                const auto pair = equimeasure_check(h, a);
                ok = ok && pair.lhs == pair.rhs;
                eq_out << csv::join({cf.name, label, fmt(a), fmt(pair.lhs), fmt(pair.rhs)}) << '\n';
            }
            if (!ok) ++eq_fail;
        }

        const Rearranged m0 = decreasing_rearrangement(p0);
        const auto x0s = holder_points(m0);
        const auto cells = lemma_cells(family, seed + f);
        std::vector<LemmaCell> results(cells.size());
        parallel_for(cells.size(), jobs, [&](std::size_t c) { results[c] = lemma_cell(family, m0, x0s, cells[c]); });

        double fam_maj = 0.0;
        for (const auto& r : results) {
            ++functions;
            ++cells_total;
            if (!(r.equimeasure && r.idempotent && r.monotone)) ++eq_fail;
            fam_maj = std::max(fam_maj, r.majorization);
        }
        worst_maj = std::max(worst_maj, fam_maj);
        for (std::size_t a = 0; a < kSweepAlphas.size(); ++a) {
            double head = INFINITY, tail = INFINITY;
            for (const auto& r : results) {
                head = std::min(head, r.head_slack[a]);
                tail = std::min(tail, r.tail_slack[a]);
            }
            const bool pass = fam_maj <= 1e-9 && head >= -1e-9 && tail >= -1e-9;
            if (!pass) ++lemma_fail;
            worst_head = std::min(worst_head, head);
            worst_tail = std::min(worst_tail, tail);
            lem_out << csv::join({cf.name, fmt(kSweepAlphas[a]), str(results.size()), fmt(fam_maj), fmt(head), fmt(tail),
                                  pass ? "true" : "false"})
                    << '\n';
        }
    }
    eq.result.pass = eq_fail == 0;
    eq.result.detail = str(functions) + " functions, " + str(eq_fail) + " failures";
    eq.artifacts.emplace_back("equimeasure.csv", eq_out.str());
    lem.result.pass = lemma_fail == 0;
    lem.result.detail = str(cells_total) + " cells x " + str(kSweepAlphas.size()) + " alphas x " + str(kHolderPoints) +
                        " x0, max majorization violation " + fmt(worst_maj) + ", min slacks " + fmt(worst_head) + " / " +
                        fmt(worst_tail);
    lem.artifacts.emplace_back("lemmas.csv", lem_out.str());
    return {std::move(eq), std::move(lem)};
}

// Criterion 7: smoothing sequence on the unit uniform and on the corpus.
Outcome approximation(const std::vector<CorpusFamily>& corpus, int jobs) {
    Outcome o{{7, "approximation sequence", true, {}}, {}};
    std::ostringstream out;
    out << "family,alpha,n,l1_gap,v_alpha_fn,v_alpha_p,domination_violation,pass\n";
    auto emit = [&](const std::string& name, const ConvergenceReport& rep) {
        for (const auto& r : rep.rows)
            out << csv::join({name, fmt(rep.alpha), std::to_string(r.n), fmt(r.l1_gap), fmt(r.v_alpha_fn),
                              fmt(r.v_alpha_p), fmt(r.domination_violation), r.pass ? "true" : "false"})
                << '\n';
    };

    // Uniform on [-1, 1]: f_n ramps down over [1 - 1/n, 1], so the L1 gap is 1/(2n).
    const CsumFamily unit(dyadic_grid(), {{1.0, CsumShape::uniform(0.0, 2.0)}});
    const auto unit_rep = convergence_report(unit, median_assignment(unit), {2, 4, 8}, 2.0, 1.0);
    double unit_err = 0.0;
    for (const auto& r : unit_rep.rows) unit_err = std::max(unit_err, std::abs(r.l1_gap - 0.5 / r.n));
    emit("unit_uniform", unit_rep);
    bool pass = unit_err <= 1e-9 && unit_rep.pass;

    const std::vector<int> n_list{2, 4, 8, 16, 32, 64, 128, 256};
    const std::size_t cells = corpus.size() * kSweepAlphas.size();
    std::vector<ConvergenceReport> reports(cells);
    parallel_for(cells, jobs, [&](std::size_t c) {
        const auto& cf = corpus[c / kSweepAlphas.size()];
        reports[c] = convergence_report(cf.family, median_assignment(cf.family), n_list, kSweepAlphas[c % kSweepAlphas.size()],
                                        cf.l1_threshold);
    });
    std::size_t failed = 0;
    double worst_dom = 0.0, worst_ordering = -INFINITY;
    for (std::size_t c = 0; c < cells; ++c) {
        const auto& rep = reports[c];
        emit(corpus[c / kSweepAlphas.size()].name, rep);
        if (!rep.pass) ++failed;
        for (const auto& r : rep.rows) {
            worst_dom = std::max(worst_dom, r.domination_violation);
            worst_ordering = std::max(worst_ordering, r.v_alpha_fn - r.v_alpha_p);
        }
    }
    pass = pass && failed == 0;
    o.result.pass = pass;
    o.result.detail = "unit uniform max |L1 - 1/(2n)| " + fmt(unit_err) + "; " + str(cells - failed) + "/" + str(cells) +
                      " corpus cells pass, max domination violation " + fmt(worst_dom) +
                      ", max V(f_n) - V(p) " + fmt(worst_ordering);
    o.artifacts.emplace_back("approximation.csv", out.str());
    return o;
}

// Criterion 8: Bayes and entropy risks are all optimized at the median.
Outcome optimizer_cross_check(const std::vector<CorpusFamily>& corpus, std::uint64_t seed, int jobs) {
    Outcome o{{8, "optimizer cross-checks", true, {}}, {}};
    const std::vector<RiskSpec> specs{RiskSpec::mse(),     RiskSpec::mad(),      RiskSpec::zero_one(),
                                      RiskSpec::shannon(), RiskSpec::renyi(2.0), RiskSpec::renyi(0.5)};
    SearchConfig search;
    search.seed = seed;
    std::ostringstream out;
    out << "family,risk,best_shifts,best_value,evaluations,max_offset,within_step\n";
    std::size_t runs = 0, off = 0;
    double worst = 0.0;
    for (const auto& cf : corpus) {
        const auto median = median_assignment(cf.family);
        for (const auto& spec : specs) {
            const auto res = optimize_shifts(cf.family, spec, search, jobs);
            double offset = 0.0;
            for (std::size_t i = 0; i < median.size(); ++i)
                offset = std::max(offset, std::abs(res.best_shifts[i] - median[i]));
            const bool ok = offset <= search.step * (1.0 + 1e-9);
            ++runs;
            if (!ok) ++off;
            worst = std::max(worst, offset);
            out << csv::join({cf.name, spec.to_string(), shifts_field(res.best_shifts), fmt(res.best_value),
                              str(res.evaluations), fmt(offset), ok ? "true" : "false"})
                << '\n';
        }
    }
    o.result.pass = off == 0;
    o.result.detail = str(runs) + " searches, max distance from median " + fmt(worst);
    o.artifacts.emplace_back("optimizers.csv", out.str());
    return o;
}

}  // namespace

Grid lattice_grid(double length) {
    const auto intervals = static_cast<std::size_t>(std::llround(length * 160.0));
    return Grid(-length / 2.0, length / 2.0, intervals + 1);
}

std::vector<CorpusFamily> csum_corpus() {
    using S = CsumShape;
    std::vector<CorpusFamily> c;
    c.push_back({"gaussian_pair",
                 CsumFamily(lattice_grid(32.0), {{0.4, S::gaussian(-1.0, 1.0)}, {0.6, S::gaussian(2.0, 0.5)}}), 5e-3});
    c.push_back({"laplace_gaussian",
                 CsumFamily(lattice_grid(51.2), {{0.5, S::laplace(0.5, 1.0)}, {0.5, S::gaussian(-1.5, 2.0)}}, 6.0),
                 5e-3});
    c.push_back({"uniform_triangular",
                 CsumFamily(lattice_grid(25.6), {{0.3, S::uniform(1.0, 1.0)}, {0.7, S::triangular(-2.0, 1.5)}}), 5e-3});
    c.push_back({"mixed_triple",
                 CsumFamily(lattice_grid(32.0), {{0.2, S::gaussian(0.0, 1.0)},
                                                 {0.3, S::uniform(3.0, 2.0)},
                                                 {0.5, S::triangular(-1.0, 0.75)}}),
                 5e-3});
    c.push_back({"laplace_triple",
                 CsumFamily(lattice_grid(72.0), {{0.25, S::laplace(-2.0, 0.5)},
                                                 {0.35, S::laplace(1.0, 1.5)},
                                                 {0.4, S::gaussian(0.25, 0.75)}},
                            5.0),
                 5e-3});
    c.push_back({"uniform_pair",
                 CsumFamily(lattice_grid(25.6), {{0.5, S::uniform(0.0, 1.0)}, {0.5, S::uniform(0.5, 2.0)}}), 5e-3});
    c.push_back({"triangular_triple",
                 CsumFamily(lattice_grid(25.6), {{0.3, S::triangular(0.0, 0.5)},
                                                 {0.3, S::triangular(1.5, 1.0)},
                                                 {0.4, S::triangular(-1.0, 2.0)}}),
                 5e-3});
    return c;
}

std::string format_criterion(const CriterionResult& r) {
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

std::vector<CriterionResult> run_self_test(const std::filesystem::path& out_dir, std::uint64_t seed, int jobs) {
    const auto corpus = csum_corpus();
    std::vector<Outcome> outcomes;
    outcomes.push_back(theorem_sweep(corpus, jobs));
    outcomes.push_back(analytic_gap());
    outcomes.push_back(gaussian_oracles());
    outcomes.push_back(renyi_limit(corpus));
    auto [eq, lem] = rearrangement_suites(corpus, seed, jobs);
    outcomes.push_back(std::move(eq));
    outcomes.push_back(std::move(lem));
    outcomes.push_back(approximation(corpus, jobs));
    outcomes.push_back(optimizer_cross_check(corpus, seed, jobs));

    std::vector<CriterionResult> results;
    std::ostringstream summary;
    summary << "criterion,name,pass\n";
    for (const auto& o : outcomes) {
        for (const auto& [name, content] : o.artifacts) write_artifact(out_dir, name, content);
        summary << o.result.id << ',' << o.result.name << ',' << (o.result.pass ? "true" : "false") << '\n';
        results.push_back(o.result);
    }
    write_artifact(out_dir, "summary.csv", summary.str());
    return results;
}

}  // namespace mee
