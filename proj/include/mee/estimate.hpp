#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mee/densities.hpp"
#include "mee/risks.hpp"

namespace mee {

/// Absolute tolerance on information-potential gaps in theorem verdicts.
inline constexpr double kTheoremTolerance = 1e-8;

enum class Verdict { HoldsLower, HoldsUpper, Violation };

std::string to_string(Verdict v);

/// g_i = median of p(.|y_i): every component of the error mixture centred at 0.
ShiftAssignment median_assignment(const CsumFamily& family);

/// A candidate estimator together with the labels it is reported under.
struct Candidate {
    std::string component;     // perturbed component index, or "joint"
    std::string perturbation;  // offset(s) from the median assignment
    ShiftAssignment shifts;
};

enum class PerturbationMode { PerComponent, Joint };

/// Offsets from the median assignment, in units of each perturbed
/// component's scale: k * step for |k * step| <= half_width.
struct PerturbationConfig {
    PerturbationMode mode = PerturbationMode::PerComponent;
    double step = 0.1;
    double half_width = 2.0;
};

/// Per-component mode moves one component at a time (offset 0 included);
/// joint mode enumerates the product lattice and requires k == 2.
std::vector<Candidate> perturbation_grid(const CsumFamily& family, const PerturbationConfig& config);

struct TheoremReport {
    double alpha;
    Candidate candidate;
    double v_median;
    double v_candidate;
    double gap;  // v_median - v_candidate
    Verdict verdict;
    double h_median;     // Renyi entropies of the two error mixtures
    double h_candidate;
    bool renyi_consistent;  // Renyi ordering holds and agrees with the V ordering
    bool csum;              // family satisfies the theorem hypotheses
};

/// Compares V_alpha of the median-aligned mixture with that of `candidate`.
TheoremReport theorem_gap(const CsumFamily& family, double alpha, const ShiftAssignment& candidate);

/// One report per (alpha, candidate), alpha-major, in input order. Cells may
/// be evaluated on `jobs` threads; the result does not depend on it.
std::vector<TheoremReport> verify_theorem(const CsumFamily& family, const std::vector<double>& alphas,
                                          const std::vector<Candidate>& candidates, int jobs = 1);

/// True iff a report is a Violation or fails the Renyi cross-check.
bool is_violation(const TheoremReport& r);

/// CSV `alpha,component,perturbation,v_median,v_candidate,gap,verdict,csum`.
void write_theorem_csv(std::ostream& out, const std::vector<TheoremReport>& reports);

struct SearchConfig {
    double step = 0.05;
    double half_width = 0.5;  // lattice extent around the median assignment
    int restarts = 0;
    int max_iters = 100;
    std::uint64_t seed = 0;
};

struct OptimizeResult {
    ShiftAssignment best_shifts;
    double best_value;
    std::size_t evaluations;
    std::vector<std::pair<ShiftAssignment, double>> trace;  // incumbent changes
};

/// Lattice search for the risk-optimal shifts. k <= 3: exhaustive; k > 3:
/// cyclic coordinate descent with `restarts` extra seeded random starts.
/// Translation-invariant risks pin component 0 at its location. IP with
/// alpha > 1 is maximized, every other risk minimized. Among values within
/// 1e-12 (relative) the point closest to the lattice centre wins.
OptimizeResult optimize_shifts(const CsumFamily& family, const RiskSpec& spec, const SearchConfig& search,
                               int jobs = 1);

/// CSV `risk,row,shifts,value`: `trace:<i>` rows then a `best` row; shifts
/// are `;`-separated.
void write_optimize_csv(std::ostream& out, const RiskSpec& spec, const OptimizeResult& result, bool header = true);

}  // namespace mee
