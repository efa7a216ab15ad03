#include "mee/config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mee/error.hpp"

namespace mee {

namespace {

using nlohmann::json;

std::string position(const std::string& text, std::size_t byte) {
    // nlohmann reports the 1-based byte at which parsing stopped.
    const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double number(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> number_list(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(std::string("field '") + key + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(std::string("field '") + key + "' must be a list of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

int integer(double v, const char* key) {
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
        throw ConfigError(std::string("field '") + key + "' must be an integer");
    return static_cast<int>(v);
}

RiskEntry parse_risk_entry(const json& v) {
    if (!v.is_string()) throw ConfigError("risk entries must be strings");
    const auto text = v.get<std::string>();
    if (text == "renyi") return {RiskKind::RenyiEE, std::nullopt};
    if (text == "ip") return {RiskKind::IP, std::nullopt};
    const RiskSpec spec = RiskSpec::parse(text);
    return {spec.kind(), spec.alpha()};
}

void read_perturbations(const json& j, PerturbationConfig& p) {
    if (!j.is_object()) throw ConfigError("'perturbations' must be an object");
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) throw ConfigError("perturbations.mode must be a string");
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "per-component")
            p.mode = PerturbationMode::PerComponent;
        else if (mode == "joint")
            p.mode = PerturbationMode::Joint;
        else
            throw ConfigError("perturbations.mode must be 'per-component' or 'joint'");
    }
    if (j.contains("step")) p.step = number(j, "step");
    if (j.contains("half_width")) p.half_width = number(j, "half_width");
    if (!(p.step > 0) || !(p.half_width >= 0)) throw ConfigError("perturbations need step > 0 and half_width >= 0");
}

void read_search(const json& j, SearchConfig& s) {
    if (!j.is_object()) throw ConfigError("'search' must be an object");
    if (j.contains("step")) s.step = number(j, "step");
    if (j.contains("half_width")) s.half_width = number(j, "half_width");
    if (j.contains("restarts")) s.restarts = integer(number(j, "restarts"), "restarts");
    if (j.contains("max_iters")) s.max_iters = integer(number(j, "max_iters"), "max_iters");
    if (!(s.step > 0) || !(s.half_width >= 0) || s.restarts < 0 || s.max_iters < 1)
        throw ConfigError("search needs step > 0, half_width >= 0, restarts >= 0, max_iters >= 1");
}

ExperimentConfig build(const json& root, const std::filesystem::path& base_dir) {
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg{family_from_json(root.contains("family") ? root.at("family") : root, base_dir)};

    if (root.contains("alphas")) cfg.alphas = number_list(root, "alphas");
    if (cfg.alphas.empty()) throw ConfigError("'alphas' must not be empty");
    for (double a : cfg.alphas) check_alpha(a);

    if (root.contains("risk")) cfg.risks.push_back(parse_risk_entry(root.at("risk")));
    if (root.contains("risks")) {
        if (!root.at("risks").is_array()) throw ConfigError("'risks' must be a list");
        for (const auto& r : root.at("risks")) cfg.risks.push_back(parse_risk_entry(r));
    }
    if (root.contains("perturbations")) read_perturbations(root.at("perturbations"), cfg.perturbations);
    if (root.contains("search")) read_search(root.at("search"), cfg.search);

    if (root.contains("n_list")) {
        cfg.n_list.clear();
        for (double n : number_list(root, "n_list")) cfg.n_list.push_back(integer(n, "n_list"));
    }
    if (cfg.n_list.empty()) throw ConfigError("'n_list' must not be empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1 || (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]))
            throw ConfigError("'n_list' must be strictly increasing positive integers");
    }

    if (root.contains("output_dir")) {
        if (!root.at("output_dir").is_string()) throw ConfigError("'output_dir' must be a string");
        cfg.output_dir = root.at("output_dir").get<std::string>();
        if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    }
    if (root.contains("seed")) {
        const auto& s = root.at("seed");
        if (!s.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    cfg.search.seed = cfg.seed;

    if (root.contains("shifts")) {
        ShiftAssignment g{number_list(root, "shifts")};
        if (g.size() != cfg.family.size()) throw ConfigError("'shifts' needs one value per component");
        check_admissible(cfg.family, g);
        cfg.shifts = std::move(g);
    }
    if (root.contains("approx")) {
        const auto& a = root.at("approx");
        if (!a.is_object()) throw ConfigError("'approx' must be an object");
        if (a.contains("alpha")) cfg.approx.alpha = number(a, "alpha");
        if (a.contains("l1_threshold")) cfg.approx.l1_threshold = number(a, "l1_threshold");
        check_alpha(cfg.approx.alpha);
        if (!(cfg.approx.l1_threshold > 0)) throw ConfigError("approx.l1_threshold must be positive");
    }
    return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON at " + position(text, e.byte));
    }
    try {
        return build(root, base_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_config(text, path.parent_path());
}

std::vector<RiskSpec> expand_risks(const ExperimentConfig& config) {
    std::vector<RiskEntry> entries = config.risks;
    if (entries.empty()) {
        entries = {{RiskKind::MSE, {}},       {RiskKind::MAD, {}},     {RiskKind::ZeroOne, {}},
                   {RiskKind::ShannonEE, {}}, {RiskKind::RenyiEE, {}}, {RiskKind::IP, {}}};
    }
    std::vector<RiskSpec> out;
    for (const auto& e : entries) {
        switch (e.kind) {
            case RiskKind::MSE: out.push_back(RiskSpec::mse()); break;
            case RiskKind::MAD: out.push_back(RiskSpec::mad()); break;
            case RiskKind::ZeroOne: out.push_back(RiskSpec::zero_one()); break;
            case RiskKind::ShannonEE: out.push_back(RiskSpec::shannon()); break;
            case RiskKind::RenyiEE:
            case RiskKind::IP:
                if (e.alpha) {
                    out.push_back(e.kind == RiskKind::IP ? RiskSpec::ip(*e.alpha) : RiskSpec::renyi(*e.alpha));
                } else {
                    for (double a : config.alphas)
                        out.push_back(e.kind == RiskKind::IP ? RiskSpec::ip(a) : RiskSpec::renyi(a));
                }
                break;
        }
    }
    return out;
}

std::vector<RiskSpec> optimize_risks(const ExperimentConfig& config) {
    if (config.risks.empty()) return {RiskSpec::ip(2.0)};
    return expand_risks(config);
}

}  // namespace mee
