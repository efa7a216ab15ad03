#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mee/densities.hpp"
#include "mee/estimate.hpp"
#include "mee/risks.hpp"

namespace mee {

struct ApproxConfig {
    double alpha = 2.0;
    double l1_threshold = 5e-3;
};

/// A risk entry from the config. `renyi` and `ip` without an order expand
/// over ExperimentConfig::alphas.
struct RiskEntry {
    RiskKind kind;
    std::optional<double> alpha;
};

struct ExperimentConfig {
    explicit ExperimentConfig(CsumFamily f) : family(std::move(f)) {}

    CsumFamily family;
    std::vector<double> alphas{0.25, 0.5, 0.75, 1.5, 2.0, 3.0};
    std::vector<RiskEntry> risks;  // empty: every kind
    PerturbationConfig perturbations;
    SearchConfig search;
    std::vector<int> n_list{2, 4, 8, 16, 32, 64, 128, 256};
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
    std::optional<ShiftAssignment> shifts;  // default: median assignment
    ApproxConfig approx;
};

/// Parses an experiment config. The family is either the `family` object or
/// the top-level object itself (`grid`, `components`, `s_max`). Relative
/// `values_file` paths resolve against base_dir. Every failure, including
/// field values rejected by the owning module, is a ConfigError; malformed
/// JSON reports `line L, column C`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

ExperimentConfig load_config(const std::filesystem::path& path);

/// Concrete risks for evaluation, in config order with alpha expansion.
std::vector<RiskSpec> expand_risks(const ExperimentConfig& config);

/// Risks driven by `optimize`: expand_risks when any are configured, else ip:2.
std::vector<RiskSpec> optimize_risks(const ExperimentConfig& config);

}  // namespace mee
