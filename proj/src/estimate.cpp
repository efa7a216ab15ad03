#include "mee/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "mee/csv.hpp"
#include "mee/parallel.hpp"

namespace mee {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::HoldsLower: return "holds-lower";
        case Verdict::HoldsUpper: return "holds-upper";
        case Verdict::Violation: return "violation";
    }
    return "?";
}

ShiftAssignment median_assignment(const CsumFamily& family) {
    ShiftAssignment g;
    for (const auto& c : family.components()) g.shifts.push_back(c.shape.median());
    return g;
}

namespace {

int lattice_radius(double half_width, double step) {
    if (!(step > 0.0) || !(half_width > 0.0) || step > half_width * (1.0 + 1e-12))
        throw ParameterError("lattice needs 0 < step <= half_width");
    return static_cast<int>(std::floor(half_width / step + 1e-9));
}

std::string join_offsets(const std::vector<double>& offsets) {
    std::string s;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (i) s += ';';
        s += csv::format(offsets[i]);
    }
    return s;
}

TheoremReport make_report(double alpha, const Candidate& cand, double v_med, double v_cand, bool csum) {
    TheoremReport r{};
    r.alpha = alpha;
    r.candidate = cand;
    r.v_median = v_med;
    r.v_candidate = v_cand;
    r.gap = v_med - v_cand;
    r.csum = csum;
    if (alpha < 1.0) r.verdict = r.gap <= kTheoremTolerance ? Verdict::HoldsLower : Verdict::Violation;
    else r.verdict = r.gap >= -kTheoremTolerance ? Verdict::HoldsUpper : Verdict::Violation;

    if (!(v_med > 0.0) || !(v_cand > 0.0)) throw NumericalError("zero information potential in theorem check", cand.shifts.shifts);
    r.h_median = std::log(v_med) / (1.0 - alpha);
    r.h_candidate = std::log(v_cand) / (1.0 - alpha);
    // First-order propagation of the V tolerance through log(.)/(1 - alpha).
    const double h_tol = kTheoremTolerance / (std::abs(1.0 - alpha) * std::min(v_med, v_cand));
    const bool renyi_holds = r.h_median <= r.h_candidate + h_tol;
    bool agree = true;
    if (std::abs(r.gap) > kTheoremTolerance) {
        const bool v_says_median_better = alpha > 1.0 ? r.gap > 0.0 : r.gap < 0.0;
        agree = v_says_median_better == (r.h_median < r.h_candidate);
    }
    r.renyi_consistent = renyi_holds && agree;
    return r;
}

}  // namespace

std::vector<Candidate> perturbation_grid(const CsumFamily& family, const PerturbationConfig& config) {
    const int K = lattice_radius(config.half_width, config.step);
    const ShiftAssignment base = median_assignment(family);
    std::vector<Candidate> out;
    if (config.mode == PerturbationMode::PerComponent) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            const double unit = config.step * family.component(i).shape.scale();
            for (int k = -K; k <= K; ++k) {
                Candidate c{std::to_string(i), csv::format(k * unit), base};
                c.shifts.shifts[i] += k * unit;
                out.push_back(std::move(c));
            }
        }
        return out;
    }
    if (family.size() != 2) throw ParameterError("joint perturbation sweeps require exactly 2 components");
    const double u0 = config.step * family.component(0).shape.scale();
    const double u1 = config.step * family.component(1).shape.scale();
    for (int a = -K; a <= K; ++a)
        for (int b = -K; b <= K; ++b) {
            Candidate c{"joint", join_offsets({a * u0, b * u1}), base};
            c.shifts.shifts[0] += a * u0;
            c.shifts.shifts[1] += b * u1;
            out.push_back(std::move(c));
        }
    return out;
}

TheoremReport theorem_gap(const CsumFamily& family, double alpha, const ShiftAssignment& candidate) {
    check_alpha(alpha);
    const GridFunction p0 = mixture_error_pdf(family, median_assignment(family));
    const GridFunction pg = mixture_error_pdf(family, candidate);
    return make_report(alpha, Candidate{"", "", candidate}, information_potential(p0, alpha),
                       information_potential(pg, alpha), family.is_csum());
}

std::vector<TheoremReport> verify_theorem(const CsumFamily& family, const std::vector<double>& alphas,
                                          const std::vector<Candidate>& candidates, int jobs) {
    for (double a : alphas) check_alpha(a);
    for (const auto& c : candidates) check_admissible(family, c.shifts);
    if (candidates.empty() || alphas.empty()) return {};

    const GridFunction p0 = mixture_error_pdf(family, median_assignment(family));
    std::vector<double> v_med(alphas.size());
    for (std::size_t a = 0; a < alphas.size(); ++a) v_med[a] = information_potential(p0, alphas[a]);

    // v[c][a]: each candidate mixture is built once and reused for every alpha.
    std::vector<std::vector<double>> v(candidates.size(), std::vector<double>(alphas.size()));
    parallel_for(candidates.size(), jobs, [&](std::size_t c) {
        const GridFunction pg = mixture_error_pdf(family, candidates[c].shifts);
        for (std::size_t a = 0; a < alphas.size(); ++a) v[c][a] = information_potential(pg, alphas[a]);
    });

    const bool csum = family.is_csum();
    std::vector<TheoremReport> out;
    out.reserve(alphas.size() * candidates.size());
    for (std::size_t a = 0; a < alphas.size(); ++a)
        for (std::size_t c = 0; c < candidates.size(); ++c)
            out.push_back(make_report(alphas[a], candidates[c], v_med[a], v[c][a], csum));
    return out;
}

bool is_violation(const TheoremReport& r) { return r.verdict == Verdict::Violation || !r.renyi_consistent; }

void write_theorem_csv(std::ostream& out, const std::vector<TheoremReport>& reports) {
    out << "alpha,component,perturbation,v_median,v_candidate,gap,verdict,csum\n";
    for (const auto& r : reports)
        out << csv::join({csv::format(r.alpha), r.candidate.component, r.candidate.perturbation, csv::format(r.v_median),
                          csv::format(r.v_candidate), csv::format(r.gap), to_string(r.verdict),
                          r.csum ? "true" : "false"})
            << '\n';
}

namespace {

// Lattice search state shared by the exhaustive and coordinate-descent paths.
class LatticeSearch {
public:
    LatticeSearch(const CsumFamily& family, const RiskSpec& spec, const SearchConfig& search)
        : family_(family), spec_(spec), step_(search.step), radius_(lattice_radius(search.half_width, search.step)),
          base_(median_assignment(family)) {
        const std::size_t k = family.size();
        first_free_ = spec.translation_invariant() ? 1 : 0;
        if (first_free_ >= k) first_free_ = k;  // single component, entropy risk: nothing to search
        const int width = 2 * radius_ + 1;
        cache_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            const bool free = i >= first_free_;
            const int count = free ? width : 1;
            cache_[i].resize(count);
            for (int j = 0; j < count; ++j) {
                const double shift = base_[i] + (free ? (j - radius_) * step_ : 0.0);
                if (std::abs(shift) > family.s_max() * (1.0 + 1e-12))
                    throw ParameterError("search lattice leaves the admissible range |shift| <= s_max");
                cache_[i][j] = component_samples(family, i, shift);
            }
        }
    }

    std::size_t components() const { return family_.size(); }
    std::size_t first_free() const { return first_free_; }
    int width() const { return 2 * radius_ + 1; }
    int radius() const { return radius_; }

    // Index j in [0, width) for free components; 0 for pinned ones.
    ShiftAssignment shifts(const std::vector<int>& idx) const {
        ShiftAssignment g = base_;
        for (std::size_t i = first_free_; i < idx.size(); ++i) g.shifts[i] += (idx[i] - radius_) * step_;
        return g;
    }

    double value(const std::vector<int>& idx) const {
        std::vector<const std::vector<double>*> refs(components());
        for (std::size_t i = 0; i < refs.size(); ++i) refs[i] = &cache_[i][idx[i]];
        try {
            const double v = evaluate(spec_, weighted_mixture(family_, refs));
            if (!std::isfinite(v)) throw NumericalError("non-finite risk");
            return v;
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " during shift search", shifts(idx).shifts);
        }
    }

    double objective(double v) const { return spec_.maximize() ? -v : v; }

    long distance2(const std::vector<int>& idx) const {
        long d = 0;
        for (std::size_t i = first_free_; i < idx.size(); ++i) d += static_cast<long>(idx[i] - radius_) * (idx[i] - radius_);
        return d;
    }

    // Strictly better objective, or tied within 1e-12 and closer to the centre.
    bool better(double obj, long dist, double best_obj, long best_dist) const {
        const double tol = 1e-12 * std::max(1.0, std::abs(best_obj));
        if (obj < best_obj - tol) return true;
        if (obj <= best_obj + tol) return dist < best_dist;
        return false;
    }

private:
    const CsumFamily& family_;
    RiskSpec spec_;
    double step_;
    int radius_;
    ShiftAssignment base_;
    std::size_t first_free_ = 0;
    std::vector<std::vector<std::vector<double>>> cache_;
};

struct Incumbent {
    std::vector<int> idx;
    double value = 0.0;
    double obj = 0.0;
    long dist = 0;
    bool set = false;
};

void offer(const LatticeSearch& s, Incumbent& inc, const std::vector<int>& idx, double value, OptimizeResult& result) {
    const double obj = s.objective(value);
    const long dist = s.distance2(idx);
    if (!inc.set || s.better(obj, dist, inc.obj, inc.dist)) {
        inc = {idx, value, obj, dist, true};
        result.trace.emplace_back(s.shifts(idx), value);
    }
}

OptimizeResult exhaustive(const LatticeSearch& s, int jobs) {
    const std::size_t k = s.components();
    const std::size_t free = k - s.first_free();
    std::size_t total = 1;
    for (std::size_t i = 0; i < free; ++i) total *= static_cast<std::size_t>(s.width());

    auto decode = [&](std::size_t flat) {
        std::vector<int> idx(k, 0);
        for (std::size_t i = k; i-- > s.first_free();) {
            idx[i] = static_cast<int>(flat % s.width());
            flat /= s.width();
        }
        return idx;
    };

    std::vector<double> values(total);
    parallel_for(total, jobs, [&](std::size_t f) { values[f] = s.value(decode(f)); });

    OptimizeResult result{};
    Incumbent inc;
    for (std::size_t f = 0; f < total; ++f) offer(s, inc, decode(f), values[f], result);
    result.best_shifts = s.shifts(inc.idx);
    result.best_value = inc.value;
    result.evaluations = total;
    return result;
}

OptimizeResult coordinate_descent(const LatticeSearch& s, const SearchConfig& search, int jobs) {
    const std::size_t k = s.components();
    std::mt19937_64 rng(search.seed);
    OptimizeResult result{};
    Incumbent global;
    std::vector<double> line(s.width());

    for (int run = 0; run <= search.restarts; ++run) {
        // First start at the lattice centre, restarts at seeded random points.
        std::vector<int> idx(k, 0);
        for (std::size_t i = s.first_free(); i < k; ++i)
            idx[i] = run == 0 ? s.radius() : static_cast<int>(rng() % static_cast<std::uint64_t>(s.width()));
        Incumbent local;
        local = {idx, s.value(idx), 0.0, s.distance2(idx), true};
        local.obj = s.objective(local.value);
        ++result.evaluations;

        for (int iter = 0; iter < search.max_iters; ++iter) {
            const double before = local.obj;
            for (std::size_t i = s.first_free(); i < k; ++i) {
                parallel_for(line.size(), jobs, [&](std::size_t j) {
                    std::vector<int> probe = local.idx;
                    probe[i] = static_cast<int>(j);
                    line[j] = s.value(probe);
                });
                result.evaluations += line.size();
                for (std::size_t j = 0; j < line.size(); ++j) {
                    std::vector<int> probe = local.idx;
                    probe[i] = static_cast<int>(j);
                    const double obj = s.objective(line[j]);
                    const long dist = s.distance2(probe);
                    if (s.better(obj, dist, local.obj, local.dist)) local = {probe, line[j], obj, dist, true};
                }
            }
            if (before - local.obj < 1e-12) break;
        }
        offer(s, global, local.idx, local.value, result);
    }
    result.best_shifts = s.shifts(global.idx);
    result.best_value = global.value;
    return result;
}

}  // namespace

OptimizeResult optimize_shifts(const CsumFamily& family, const RiskSpec& spec, const SearchConfig& search, int jobs) {
    if (search.restarts < 0) throw ParameterError("restarts must be >= 0");
    if (search.max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (search.half_width > family.s_max()) throw ParameterError("search half_width exceeds s_max");
    const LatticeSearch s(family, spec, search);
    return family.size() <= 3 ? exhaustive(s, jobs) : coordinate_descent(s, search, jobs);
}

void write_optimize_csv(std::ostream& out, const RiskSpec& spec, const OptimizeResult& result, bool header) {
    if (header) out << "risk,row,shifts,value\n";
    const std::string risk = spec.to_string();
    for (std::size_t t = 0; t < result.trace.size(); ++t)
        out << csv::join({risk, "trace:" + std::to_string(t), join_offsets(result.trace[t].first.shifts),
                          csv::format(result.trace[t].second)})
            << '\n';
    out << csv::join({risk, "best", join_offsets(result.best_shifts.shifts), csv::format(result.best_value)}) << '\n';
}

}  // namespace mee
