#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mee/grid.hpp"

namespace mee {

enum class RiskKind { MSE, MAD, ZeroOne, ShannonEE, RenyiEE, IP };

/// Throws ParameterError unless alpha > 0 and |alpha - 1| > 1e-6. Inside the
/// guard band the Renyi quantities degenerate; use shannon_ee instead.
void check_alpha(double alpha);

/// A risk functional of the error density, with its order for RenyiEE / IP.
class RiskSpec {
public:
    static RiskSpec mse() { return RiskSpec(RiskKind::MSE); }
    static RiskSpec mad() { return RiskSpec(RiskKind::MAD); }
    static RiskSpec zero_one() { return RiskSpec(RiskKind::ZeroOne); }
    static RiskSpec shannon() { return RiskSpec(RiskKind::ShannonEE); }
    static RiskSpec renyi(double alpha) { return RiskSpec(RiskKind::RenyiEE, alpha); }
    static RiskSpec ip(double alpha) { return RiskSpec(RiskKind::IP, alpha); }

    /// `mse | mad | zero-one | shannon | renyi:<alpha> | ip:<alpha>`
    static RiskSpec parse(std::string_view text);

    RiskKind kind() const noexcept { return kind_; }
    std::optional<double> alpha() const noexcept { return alpha_; }
    std::string to_string() const;

    /// Invariant under a common translation of the error density.
    bool translation_invariant() const noexcept {
        return kind_ == RiskKind::ShannonEE || kind_ == RiskKind::RenyiEE || kind_ == RiskKind::IP;
    }

    /// Minimizing the risk means maximizing its value (IP with alpha > 1).
    bool maximize() const noexcept { return kind_ == RiskKind::IP && *alpha_ > 1.0; }

    friend bool operator==(const RiskSpec&, const RiskSpec&) = default;

private:
    explicit RiskSpec(RiskKind kind, std::optional<double> alpha = {});

    RiskKind kind_;
    std::optional<double> alpha_;
};

/// Integral of x^2 p(x).
double mse_risk(const GridFunction& p);

/// Integral of |x| p(x).
double mad_risk(const GridFunction& p);

/// 1 - p(0), with p(0) linearly interpolated (0 when the origin is outside
/// the grid).
double zero_one_risk(const GridFunction& p);

/// -Integral of p log p, natural log, 0 log 0 = 0.
double shannon_ee(const GridFunction& p);

/// V_alpha = integral of p^alpha.
double information_potential(const GridFunction& p, double alpha);

/// log(V_alpha) / (1 - alpha). Throws NumericalError when V_alpha == 0.
double renyi_ee(const GridFunction& p, double alpha);

double evaluate(const RiskSpec& spec, const GridFunction& p);

}  // namespace mee
