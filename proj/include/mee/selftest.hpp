#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mee/densities.hpp"

namespace mee {

struct CorpusFamily {
    std::string name;
    CsumFamily family;
    double l1_threshold;  // smoothing L1 gap bound at n = 256
};

/// Symmetric-unimodal mixtures on grids of spacing 1/160. Every component
/// scale is a multiple of 1/16, so perturbations of 0.1 scale units and the
/// 0.05 search step are lattice shifts.
std::vector<CorpusFamily> csum_corpus();

/// Grid [-length/2, length/2] with spacing 1/160.
Grid lattice_grid(double length);

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

/// `[PASS] 1 theorem sweep: <detail>`
std::string format_criterion(const CriterionResult& r);

/// Runs the invariant corpus (criteria 1-8) and writes one CSV artifact per
/// criterion into out_dir. Artifacts depend only on the seed, never on jobs.
std::vector<CriterionResult> run_self_test(const std::filesystem::path& out_dir, std::uint64_t seed, int jobs);

}  // namespace mee
