#include "mee/runner.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mee/approx.hpp"
#include "mee/csv.hpp"
#include "mee/error.hpp"
#include "mee/rearrange.hpp"
#include "mee/selftest.hpp"

namespace mee {

namespace {

ShiftAssignment configured_shifts(const ExperimentConfig& config) {
    return config.shifts ? *config.shifts : median_assignment(config.family);
}

}  // namespace

void write_artifact(const std::filesystem::path& out_dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
}

void run_risk(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const GridFunction p = mixture_error_pdf(config.family, configured_shifts(config));
    std::ostringstream out;
    out << "risk,alpha,value\n";
    for (const auto& spec : expand_risks(config)) {
        const double v = evaluate(spec, p);
        const std::string name = spec.to_string();
        const auto colon = name.find(':');
        out << name.substr(0, colon) << ',' << (spec.alpha() ? csv::format(*spec.alpha()) : "") << ','
            << csv::format(v) << '\n';
    }
    write_artifact(out_dir, "risks.csv", out.str());
}

bool run_verify_theorem(const ExperimentConfig& config, const std::filesystem::path& out_dir, int jobs) {
    const auto candidates = perturbation_grid(config.family, config.perturbations);
    const auto reports = verify_theorem(config.family, config.alphas, candidates, jobs);
    std::ostringstream out;
    write_theorem_csv(out, reports);
    write_artifact(out_dir, "theorem.csv", out.str());
    if (!config.family.is_csum()) return true;
    for (const auto& r : reports)
        if (is_violation(r)) return false;
    return true;
}

void run_optimize(const ExperimentConfig& config, const std::filesystem::path& out_dir, int jobs) {
    std::ostringstream out;
    bool header = true;
    for (const auto& spec : optimize_risks(config)) {
        write_optimize_csv(out, spec, optimize_shifts(config.family, spec, config.search, jobs), header);
        header = false;
    }
    write_artifact(out_dir, "optimize.csv", out.str());
}

bool run_approx(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const auto report = convergence_report(config.family, configured_shifts(config), config.n_list,
                                           config.approx.alpha, config.approx.l1_threshold);
    std::ostringstream out;
    write_convergence_csv(out, report);
    write_artifact(out_dir, "convergence.csv", out.str());
    return report.pass;
}

void run_rearrange(const std::filesystem::path& input, const std::filesystem::path& out_dir) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw ConfigError("cannot open input '" + input.string() + "'");
    const GridFunction h = [&] {
        try {
            return read_grid_function_csv(in);
        } catch (const ParameterError& e) {
            throw ConfigError(input.string() + ": " + e.what());
        }
    }();
    std::ostringstream out;
    write_csv(out, decreasing_rearrangement(h));
    write_artifact(out_dir, "rearranged.csv", out.str());
}

namespace {

int dispatch(const CommandArgs& args, std::ostream& log) {
    if (args.jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (args.command == "self-test") {
        const auto out_dir = args.out_dir.value_or("self-test");
        const auto results = run_self_test(out_dir, args.seed.value_or(0), args.jobs);
        bool ok = true;
        for (const auto& r : results) {
            log << format_criterion(r) << '\n';
            ok = ok && r.pass;
        }
        return ok ? kExitOk : kExitCheck;
    }
    if (args.command == "rearrange") {
        if (!args.input) throw ConfigError("rearrange needs --input <csv>");
        run_rearrange(*args.input, args.out_dir.value_or("."));
        return kExitOk;
    }
    if (!args.config) throw ConfigError(args.command + " needs --config <path>");
    ExperimentConfig config = load_config(*args.config);
    if (args.seed) config.seed = config.search.seed = *args.seed;
    const auto out_dir = args.out_dir.value_or(config.output_dir);

    if (args.command == "risk") {
        run_risk(config, out_dir);
        return kExitOk;
    }
    if (args.command == "verify-theorem") {
        const bool ok = run_verify_theorem(config, out_dir, args.jobs);
        if (!config.family.is_csum()) log << "family is not CSUM: exploratory sweep, no verdict asserted\n";
        return ok ? kExitOk : kExitCheck;
    }
    if (args.command == "optimize") {
        run_optimize(config, out_dir, args.jobs);
        return kExitOk;
    }
    if (args.command == "approx") return run_approx(config, out_dir) ? kExitOk : kExitCheck;
    throw ConfigError("unknown command '" + args.command + "'");
}

}  // namespace

int run_command(const CommandArgs& args, std::ostream& log, std::ostream& err) {
    try {
        return dispatch(args, log);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what();
        if (!e.shifts().empty()) {
            err << " (shifts";
            for (double g : e.shifts()) err << ' ' << csv::format(g);
            err << ')';
        }
        err << '\n';
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace mee
