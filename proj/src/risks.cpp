#include "mee/risks.hpp"

#include <cmath>

#include "mee/csv.hpp"

namespace mee {

void check_alpha(double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw ParameterError("alpha must be > 0 (got " + csv::format(alpha) + ")");
    if (std::abs(alpha - 1.0) <= 1e-6)
        throw ParameterError("alpha must differ from 1 by more than 1e-6; use the Shannon entropy there");
}

RiskSpec::RiskSpec(RiskKind kind, std::optional<double> alpha) : kind_(kind), alpha_(alpha) {
    const bool needs_alpha = kind == RiskKind::RenyiEE || kind == RiskKind::IP;
    if (needs_alpha != alpha.has_value()) throw ParameterError("alpha is required exactly for renyi and ip risks");
    if (alpha) check_alpha(*alpha);
}

RiskSpec RiskSpec::parse(std::string_view text) {
    if (text == "mse") return mse();
    if (text == "mad") return mad();
    if (text == "zero-one") return zero_one();
    if (text == "shannon") return shannon();
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
        const auto head = text.substr(0, colon);
        double a = 0.0;
        try {
            a = csv::parse_double(text.substr(colon + 1));
        } catch (const ConfigError&) {
            throw ConfigError("bad alpha in risk spec '" + std::string(text) + "'");
        }
        try {
            if (head == "renyi") return renyi(a);
            if (head == "ip") return ip(a);
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("risk spec '") + std::string(text) + "': " + e.what());
        }
    }
    throw ConfigError("unknown risk spec '" + std::string(text) + "'");
}

std::string RiskSpec::to_string() const {
    switch (kind_) {
        case RiskKind::MSE: return "mse";
        case RiskKind::MAD: return "mad";
        case RiskKind::ZeroOne: return "zero-one";
        case RiskKind::ShannonEE: return "shannon";
        case RiskKind::RenyiEE: return "renyi:" + csv::format(*alpha_);
        case RiskKind::IP: return "ip:" + csv::format(*alpha_);
    }
    return "?";
}

double mse_risk(const GridFunction& p) {
    return trapezoid(p, [](double x, double v) { return x * x * v; });
}

double mad_risk(const GridFunction& p) {
    return trapezoid(p, [](double x, double v) { return std::abs(x) * v; });
}

double zero_one_risk(const GridFunction& p) { return 1.0 - p.at(0.0); }

double shannon_ee(const GridFunction& p) {
    return -trapezoid(p, [](double, double v) { return v == 0.0 ? 0.0 : v * std::log(v); });
}

double information_potential(const GridFunction& p, double alpha) {
    check_alpha(alpha);
    return power_integral(p, alpha);
}

double renyi_ee(const GridFunction& p, double alpha) {
    const double v = information_potential(p, alpha);
    if (!(v > 0.0)) throw NumericalError("information potential is zero; Renyi entropy undefined");
    return std::log(v) / (1.0 - alpha);
}

double evaluate(const RiskSpec& spec, const GridFunction& p) {
    switch (spec.kind()) {
        case RiskKind::MSE: return mse_risk(p);
        case RiskKind::MAD: return mad_risk(p);
        case RiskKind::ZeroOne: return zero_one_risk(p);
        case RiskKind::ShannonEE: return shannon_ee(p);
        case RiskKind::RenyiEE: return renyi_ee(p, *spec.alpha());
        case RiskKind::IP: return information_potential(p, *spec.alpha());
    }
    return 0.0;
}

}  // namespace mee
