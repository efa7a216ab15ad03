#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mee/config.hpp"

namespace mee {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitCheck = 3 };

/// Writes risks.csv (`risk,alpha,value`) for the configured shifts.
void run_risk(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Writes theorem.csv. Returns false iff a CSUM family produced a violation;
/// non-CSUM families are swept in exploratory mode and always return true.
bool run_verify_theorem(const ExperimentConfig& config, const std::filesystem::path& out_dir, int jobs);

/// Writes optimize.csv, one block per optimized risk.
void run_optimize(const ExperimentConfig& config, const std::filesystem::path& out_dir, int jobs);

/// Writes convergence.csv. Returns the report verdict.
bool run_approx(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Reads a GridFunction CSV and writes rearranged.csv.
void run_rearrange(const std::filesystem::path& input, const std::filesystem::path& out_dir);

/// Writes `content` to out_dir/name, creating out_dir.
void write_artifact(const std::filesystem::path& out_dir, const std::string& name, const std::string& content);

struct CommandArgs {
    std::string command;  // risk | optimize | verify-theorem | rearrange | approx | self-test
    std::optional<std::filesystem::path> config;
    std::optional<std::filesystem::path> input;  // rearrange
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

/// Runs one command and maps failures onto the exit-code contract:
/// 0 ok, 1 configuration, 2 numerical, 3 theorem or check violation.
/// Diagnostics go to `err`, progress to `log`.
int run_command(const CommandArgs& args, std::ostream& log, std::ostream& err);

}  // namespace mee
