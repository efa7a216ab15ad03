#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mee/grid.hpp"

namespace mee {

enum class ShapeKind { Gaussian, Laplace, Uniform, Triangular, Tabulated };

std::string to_string(ShapeKind kind);
ShapeKind parse_shape_kind(const std::string& name);

/// A conditional density p(x|y_i) that is symmetric about `location` and
/// non-increasing in |x - location|.
///
/// Scale conventions: Gaussian sigma, Laplace b (density e^{-|t|/b}/2b),
/// Uniform full width, Triangular half-width. Tabulated shapes come from a
/// sampled table; their location is the numerically located mass median and
/// their scale the standard deviation. A table that is not symmetric-unimodal
/// is accepted but flagged by is_csum() == false.
class CsumShape {
public:
    static CsumShape gaussian(double location, double sigma);
    static CsumShape laplace(double location, double b);
    static CsumShape uniform(double location, double width);
    static CsumShape triangular(double location, double half_width);
    static CsumShape tabulated(const GridFunction& table);

    ShapeKind kind() const noexcept { return kind_; }
    double location() const noexcept { return location_; }
    double scale() const noexcept { return scale_; }
    bool is_csum() const noexcept { return csum_; }
    const GridFunction* table() const noexcept { return table_.get(); }

    /// Point density at absolute abscissa x.
    double density(double x) const;

    /// Probability mass of [a, b] (a <= b; infinities allowed).
    double interval_mass(double a, double b) const;

    /// Mass of the complement of [lo, hi].
    double mass_outside(double lo, double hi) const;

    /// Value used when placing the density on a lattice with spacing delta:
    /// the point density for smooth and tabulated shapes, the exact cell
    /// average over [x - delta/2, x + delta/2] for shapes with kinks or jumps.
    double lattice_value(double x, double delta) const;

    /// Peak height, p(location).
    double peak() const;

    /// sup{ t >= 0 : p(location + t) >= cap }, or 0 when the peak is below cap.
    /// Only defined for analytic kinds.
    double level_radius(double cap) const;

    double mean() const noexcept { return mean_; }
    double median() const noexcept { return location_; }
    double mode() const noexcept { return mode_; }

private:
    CsumShape(ShapeKind kind, double location, double scale);

    // Standardised helpers, t measured from the location.
    double std_density(double t) const;
    double tail(double t) const;  // mass of [t, inf), t >= 0
    double head(double t) const;  // mass of [0, t], t >= 0

    ShapeKind kind_;
    double location_;
    double scale_;
    double mean_;
    double mode_;
    bool csum_ = true;
    std::shared_ptr<const GridFunction> table_;
    std::shared_ptr<const std::vector<double>> table_cdf_;
};

struct Component {
    double weight;
    CsumShape shape;
};

/// A finite observation model: k conditional densities with weights w_i.
class CsumFamily {
public:
    /// Validates weights (positive, summing to 1 within 1e-9) and support
    /// adequacy: for every |shift| <= s_max, less than 1e-8 of each
    /// component's mass is clipped by the grid. Default s_max = length/4.
    CsumFamily(Grid grid, std::vector<Component> components, std::optional<double> s_max = {});

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<Component>& components() const noexcept { return components_; }
    const Component& component(std::size_t i) const;
    double s_max() const noexcept { return s_max_; }

    /// True iff every component is symmetric-unimodal.
    bool is_csum() const noexcept;

private:
    Grid grid_;
    std::vector<Component> components_;
    double s_max_;
};

/// The estimator values g(y_1), ..., g(y_k).
struct ShiftAssignment {
    std::vector<double> shifts;

    std::size_t size() const noexcept { return shifts.size(); }
    double operator[](std::size_t i) const noexcept { return shifts[i]; }
    friend bool operator==(const ShiftAssignment&, const ShiftAssignment&) = default;
};

struct ConditionalStats {
    double mean;
    double median;
    double mode;
};

/// Analytic conditional density p(x | y_i).
double eval_conditional(const CsumFamily& family, std::size_t i, double x);

ConditionalStats conditional_stats(const CsumFamily& family, std::size_t i);

/// Throws ParameterError unless g has one entry per component, each within s_max.
void check_admissible(const CsumFamily& family, const ShiftAssignment& g);

/// Unweighted lattice values of p(x_j + shift | y_i) on the family grid.
std::vector<double> component_samples(const CsumFamily& family, std::size_t i, double shift);

/// Error density p^g(x) = sum_i w_i p(x + g_i | y_i) on the family grid.
GridFunction mixture_error_pdf(const CsumFamily& family, const ShiftAssignment& g);

/// Accumulates sum_i w_i * samples[i][j] in component order. Shared by
/// mixture_error_pdf and cached search paths so both round identically.
GridFunction weighted_mixture(const CsumFamily& family,
                              const std::vector<const std::vector<double>*>& samples);

/// Parses the family JSON schema. Relative `values_file` paths resolve
/// against base_dir.
CsumFamily family_from_json(const nlohmann::json& spec, const std::filesystem::path& base_dir = {});

}  // namespace mee
