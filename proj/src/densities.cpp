#include "mee/densities.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace mee {

std::string to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Gaussian: return "gaussian";
        case ShapeKind::Laplace: return "laplace";
        case ShapeKind::Uniform: return "uniform";
        case ShapeKind::Triangular: return "triangular";
        case ShapeKind::Tabulated: return "tabulated";
    }
    return "?";
}

ShapeKind parse_shape_kind(const std::string& name) {
    if (name == "gaussian") return ShapeKind::Gaussian;
    if (name == "laplace") return ShapeKind::Laplace;
    if (name == "uniform") return ShapeKind::Uniform;
    if (name == "triangular") return ShapeKind::Triangular;
    if (name == "tabulated") return ShapeKind::Tabulated;
    throw ConfigError("unknown density kind '" + name + "'");
}

CsumShape::CsumShape(ShapeKind kind, double location, double scale)
    : kind_(kind), location_(location), scale_(scale), mean_(location), mode_(location) {
    if (!std::isfinite(location)) throw ParameterError("density location must be finite");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("density scale must be > 0");
}

CsumShape CsumShape::gaussian(double location, double sigma) { return {ShapeKind::Gaussian, location, sigma}; }
CsumShape CsumShape::laplace(double location, double b) { return {ShapeKind::Laplace, location, b}; }
CsumShape CsumShape::uniform(double location, double width) { return {ShapeKind::Uniform, location, width}; }
CsumShape CsumShape::triangular(double location, double half_width) {
    return {ShapeKind::Triangular, location, half_width};
}

namespace {

// Exact integral of the piecewise-linear interpolant of `table` from x_min to x.
double table_cdf_at(const GridFunction& table, const std::vector<double>& cdf, double x) {
    const Grid& g = table.grid();
    const double t = g.position(x);
    if (!(t > 0.0)) return 0.0;
    const double last = static_cast<double>(table.size() - 1);
    if (t >= last) return cdf.back();
    const auto j = static_cast<std::size_t>(t);
    const double f = t - static_cast<double>(j);
    const double v0 = table[j], v1 = table[j + 1];
    return cdf[j] + g.delta() * (v0 * f + 0.5 * (v1 - v0) * f * f);
}

bool table_is_csum(const GridFunction& table, double center) {
    const Grid& g = table.grid();
    double peak = 0.0;
    for (double v : table.values()) peak = std::max(peak, v);
    const double mono_tol = 1e-12 * peak;
    const double sym_tol = 1e-3 * peak;
    double prev_right = std::numeric_limits<double>::infinity();
    double prev_left = prev_right;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = static_cast<double>(k) * g.delta();
        const double right = table.at(center + t);
        const double left = table.at(center - t);
        if (right > prev_right + mono_tol || left > prev_left + mono_tol) return false;
        if (std::abs(right - left) > sym_tol) return false;
        prev_right = right;
        prev_left = left;
        if (center + t > g.x_max() && center - t < g.x_min()) break;
    }
    return true;
}

}  // namespace

CsumShape CsumShape::tabulated(const GridFunction& table) {
    const double mass = integrate(table);
    if (!(mass > 0.0)) throw ParameterError("tabulated density has zero mass");
    std::vector<double> v(table.values().begin(), table.values().end());
    for (double& x : v) x /= mass;
    auto normalized = std::make_shared<const GridFunction>(table.grid(), std::move(v));
    const Grid& g = normalized->grid();

    auto cdf = std::make_shared<std::vector<double>>(g.size(), 0.0);
    for (std::size_t j = 0; j + 1 < g.size(); ++j)
        (*cdf)[j + 1] = (*cdf)[j] + 0.5 * g.delta() * ((*normalized)[j] + (*normalized)[j + 1]);

    // Mass median of the interpolant, by bisection on its exact CDF.
    const double half = 0.5 * cdf->back();
    double lo = g.x_min(), hi = g.x_max();
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (table_cdf_at(*normalized, *cdf, mid) < half ? lo : hi) = mid;
    }
    const double center = 0.5 * (lo + hi);

    const double m1 = trapezoid(*normalized, [](double x, double p) { return x * p; });
    const double m2 = trapezoid(*normalized, [m1](double x, double p) { return (x - m1) * (x - m1) * p; });

    std::size_t argmax = 0, argmax_end = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if ((*normalized)[j] > (*normalized)[argmax]) argmax = argmax_end = j;
        else if ((*normalized)[j] == (*normalized)[argmax] && argmax_end + 1 == j) argmax_end = j;
    }

    const double sd = std::sqrt(std::max(m2, 0.0));
    CsumShape s(ShapeKind::Tabulated, center, sd > 0.0 ? sd : g.delta());
    s.mean_ = m1;
    s.mode_ = 0.5 * (g.x(argmax) + g.x(argmax_end));
    s.csum_ = table_is_csum(*normalized, center);
    s.table_ = std::move(normalized);
    s.table_cdf_ = std::move(cdf);
    return s;
}

double CsumShape::std_density(double t) const {
    const double a = std::abs(t);
    switch (kind_) {
        case ShapeKind::Gaussian: {
            const double z = a / scale_;
            return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
        }
        case ShapeKind::Laplace: return std::exp(-a / scale_) / (2.0 * scale_);
        case ShapeKind::Uniform: return a <= 0.5 * scale_ ? 1.0 / scale_ : 0.0;
        case ShapeKind::Triangular: return a < scale_ ? (1.0 - a / scale_) / scale_ : 0.0;
        case ShapeKind::Tabulated: return table_->at(location_ + t);
    }
    return 0.0;
}

double CsumShape::tail(double t) const {
    switch (kind_) {
        case ShapeKind::Gaussian: return 0.5 * std::erfc(t / (scale_ * std::numbers::sqrt2));
        case ShapeKind::Laplace: return 0.5 * std::exp(-t / scale_);
        case ShapeKind::Uniform: return std::max(0.0, 0.5 * scale_ - t) / scale_;
        case ShapeKind::Triangular: {
            if (t >= scale_) return 0.0;
            const double r = 1.0 - t / scale_;
            return 0.5 * r * r;
        }
        case ShapeKind::Tabulated: break;
    }
    return 0.0;
}

double CsumShape::head(double t) const {
    switch (kind_) {
        case ShapeKind::Gaussian: return 0.5 * std::erf(t / (scale_ * std::numbers::sqrt2));
        case ShapeKind::Laplace: return -0.5 * std::expm1(-t / scale_);
        case ShapeKind::Uniform: return std::min(t, 0.5 * scale_) / scale_;
        case ShapeKind::Triangular: {
            if (t >= scale_) return 0.5;
            const double u = t / scale_;
            return u - 0.5 * u * u;
        }
        case ShapeKind::Tabulated: break;
    }
    return 0.0;
}

double CsumShape::density(double x) const {
    if (kind_ == ShapeKind::Tabulated) return table_->at(x);
    return std_density(x - location_);
}

double CsumShape::interval_mass(double a, double b) const {
    if (!(a < b)) return 0.0;
    if (kind_ == ShapeKind::Tabulated)
        return std::max(0.0, table_cdf_at(*table_, *table_cdf_, b) - table_cdf_at(*table_, *table_cdf_, a));
    const double ta = a - location_, tb = b - location_;
    if (kind_ == ShapeKind::Uniform) {
        const double h = 0.5 * scale_;
        return std::max(0.0, std::min(tb, h) - std::max(ta, -h)) / scale_;
    }
    double m;
    if (ta >= 0.0) m = tail(ta) - tail(tb);
    else if (tb <= 0.0) m = tail(-tb) - tail(-ta);
    else m = head(-ta) + head(tb);
    return std::max(0.0, m);
}

double CsumShape::mass_outside(double lo, double hi) const {
    if (kind_ == ShapeKind::Tabulated) {
        const double inside = interval_mass(std::max(lo, table_->grid().x_min()), std::min(hi, table_->grid().x_max()));
        return std::max(0.0, 1.0 - inside);
    }
    const double tl = lo - location_, th = hi - location_;
    const double below = tl <= 0.0 ? tail(-tl) : 0.5 + head(tl);
    const double above = th >= 0.0 ? tail(th) : 0.5 + head(-th);
    return below + above;
}

double CsumShape::lattice_value(double x, double delta) const {
    switch (kind_) {
        case ShapeKind::Gaussian:
        case ShapeKind::Tabulated: return density(x);
        default: return interval_mass(x - 0.5 * delta, x + 0.5 * delta) / delta;
    }
}

double CsumShape::peak() const {
    if (kind_ == ShapeKind::Tabulated) {
        double m = 0.0;
        for (double v : table_->values()) m = std::max(m, v);
        return m;
    }
    return std_density(0.0);
}

double CsumShape::level_radius(double cap) const {
    const double top = peak();
    if (top < cap) return 0.0;
    switch (kind_) {
        case ShapeKind::Gaussian: return scale_ * std::sqrt(2.0 * std::log(top / cap));
        case ShapeKind::Laplace: return scale_ * std::log(top / cap);
        case ShapeKind::Uniform: return 0.5 * scale_;
        case ShapeKind::Triangular: return scale_ * (1.0 - cap / top);
        case ShapeKind::Tabulated: break;
    }
    throw ParameterError("level_radius is only defined for analytic shapes");
}

CsumFamily::CsumFamily(Grid grid, std::vector<Component> components, std::optional<double> s_max)
    : grid_(grid), components_(std::move(components)), s_max_(s_max.value_or(grid.length() / 4.0)) {
    if (components_.empty()) throw ParameterError("family needs at least one component");
    if (!(s_max_ > 0.0) || !(2.0 * s_max_ < grid_.length()))
        throw ParameterError("s_max must satisfy 0 < 2*s_max < support length");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw ParameterError("component weights must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ParameterError("component weights must sum to 1");
    const double lo = grid_.x_min() + s_max_, hi = grid_.x_max() - s_max_;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const double clipped = components_[i].shape.mass_outside(lo, hi);
        if (!(clipped < 1e-8))
            throw ParameterError("component " + std::to_string(i) +
                                 " is not adequately supported: mass outside [x_min + s_max, x_max - s_max] is " +
                                 std::to_string(clipped));
    }
}

const Component& CsumFamily::component(std::size_t i) const {
    if (i >= components_.size())
        throw ParameterError("component index " + std::to_string(i) + " out of range");
    return components_[i];
}

bool CsumFamily::is_csum() const noexcept {
    return std::all_of(components_.begin(), components_.end(), [](const Component& c) { return c.shape.is_csum(); });
}

double eval_conditional(const CsumFamily& family, std::size_t i, double x) {
    return family.component(i).shape.density(x);
}

ConditionalStats conditional_stats(const CsumFamily& family, std::size_t i) {
    const auto& s = family.component(i).shape;
    return {s.mean(), s.median(), s.mode()};
}

void check_admissible(const CsumFamily& family, const ShiftAssignment& g) {
    if (g.size() != family.size())
        throw ParameterError("shift assignment has " + std::to_string(g.size()) + " entries for " +
                             std::to_string(family.size()) + " components");
    for (double s : g.shifts)
        if (!std::isfinite(s) || std::abs(s) > family.s_max() * (1.0 + 1e-12))
            throw ParameterError("shift " + std::to_string(s) + " exceeds s_max = " + std::to_string(family.s_max()));
}

std::vector<double> component_samples(const CsumFamily& family, std::size_t i, double shift) {
    const auto& shape = family.component(i).shape;
    const Grid& g = family.grid();
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = shape.lattice_value(g.x(j) + shift, g.delta());
    return out;
}

GridFunction weighted_mixture(const CsumFamily& family, const std::vector<const std::vector<double>*>& samples) {
    std::vector<double> out(family.grid().size(), 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double w = family.components()[i].weight;
        const auto& s = *samples[i];
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * s[j];
    }
    return GridFunction(family.grid(), std::move(out));
}

GridFunction mixture_error_pdf(const CsumFamily& family, const ShiftAssignment& g) {
    check_admissible(family, g);
    std::vector<std::vector<double>> samples;
    samples.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) samples.push_back(component_samples(family, i, g[i]));
    std::vector<const std::vector<double>*> refs;
    for (const auto& s : samples) refs.push_back(&s);
    return weighted_mixture(family, refs);
}

namespace {

double number(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

CsumFamily family_from_json(const nlohmann::json& spec, const std::filesystem::path& base_dir) {
    if (!spec.is_object()) throw ConfigError("family must be a JSON object");
    if (!spec.contains("grid") || !spec.at("grid").is_object()) throw ConfigError("family needs a 'grid' object");
    const auto& gj = spec.at("grid");
    const double n = number(gj, "n");
    if (n < 2 || n != std::floor(n)) throw ConfigError("grid.n must be an integer >= 2");
    const Grid grid(number(gj, "x_min"), number(gj, "x_max"), static_cast<std::size_t>(n));

    if (!spec.contains("components") || !spec.at("components").is_array())
        throw ConfigError("family needs a 'components' array");
    std::vector<Component> comps;
    for (const auto& cj : spec.at("components")) {
        if (!cj.is_object()) throw ConfigError("each component must be an object");
        if (!cj.contains("kind") || !cj.at("kind").is_string()) throw ConfigError("component needs a string 'kind'");
        const ShapeKind kind = parse_shape_kind(cj.at("kind").get<std::string>());
        const double weight = number(cj, "weight");
        if (kind == ShapeKind::Tabulated) {
            if (!cj.contains("values_file") || !cj.at("values_file").is_string())
                throw ConfigError("tabulated component needs 'values_file'");
            std::filesystem::path p = cj.at("values_file").get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            std::ifstream in(p);
            if (!in) throw ConfigError("cannot open values_file '" + p.string() + "'");
            comps.push_back({weight, CsumShape::tabulated(read_grid_function_csv(in))});
            continue;
        }
        const double loc = number(cj, "location"), scale = number(cj, "scale");
        switch (kind) {
            case ShapeKind::Gaussian: comps.push_back({weight, CsumShape::gaussian(loc, scale)}); break;
            case ShapeKind::Laplace: comps.push_back({weight, CsumShape::laplace(loc, scale)}); break;
            case ShapeKind::Uniform: comps.push_back({weight, CsumShape::uniform(loc, scale)}); break;
            case ShapeKind::Triangular: comps.push_back({weight, CsumShape::triangular(loc, scale)}); break;
            case ShapeKind::Tabulated: break;
        }
    }
    std::optional<double> s_max;
    if (spec.contains("s_max")) s_max = number(spec, "s_max");
    return CsumFamily(grid, std::move(comps), s_max);
}

}  // namespace mee
