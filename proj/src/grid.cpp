#include "mee/grid.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "mee/csv.hpp"

namespace mee {

Grid::Grid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), delta_(0.0) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw ParameterError("grid requires finite x_min < x_max");
    if (n < 2) throw ParameterError("grid requires at least 2 samples");
    delta_ = (x_max - x_min) / static_cast<double>(n - 1);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw ParameterError("grid function: " + std::to_string(values_.size()) +
                             " values for a grid of " + std::to_string(grid_.size()));
    for (double v : values_)
        if (v < 0.0) throw ParameterError("grid function values must be non-negative");
}

double GridFunction::at(double x) const noexcept {
    const double t = grid_.position(x);
    const double last = static_cast<double>(values_.size() - 1);
    if (!(t >= 0.0) || t > last) return 0.0;
    const auto i = static_cast<std::size_t>(t);
    if (i + 1 >= values_.size()) return values_.back();
    const double frac = t - static_cast<double>(i);
    if (frac == 0.0) return values_[i];
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double integrate(const GridFunction& f) {
    return trapezoid(f, [](double, double v) { return v; });
}

double power_integral(const GridFunction& f, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ParameterError("power integral requires alpha > 0");
    return trapezoid(f, [alpha](double, double v) { return v == 0.0 ? 0.0 : std::pow(v, alpha); });
}

GridFunction shift_resample(const GridFunction& f, double shift) {
    const Grid& g = f.grid();
    if (!(std::abs(shift) < g.length()))
        throw ParameterError("shift magnitude must be below the support length");
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    const double steps = shift / g.delta();
    const double k = std::round(steps);
    if (std::abs(steps - k) < 1e-9) {
        const auto offset = static_cast<long long>(k);
        for (std::size_t i = 0; i < n; ++i) {
            const long long src = static_cast<long long>(i) + offset;
            if (src >= 0 && src < static_cast<long long>(n)) out[i] = f[static_cast<std::size_t>(src)];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = f.at(g.x(i) + shift);
    }
    return GridFunction(g, std::move(out));
}

void write_csv(std::ostream& out, const GridFunction& f) {
    out << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out << csv::format(f.grid().x(i)) << ',' << csv::format(f[i]) << '\n';
}

GridFunction read_grid_function_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("grid function CSV is empty");
    const auto header = csv::split(line);
    if (header.size() != 2 || header[0] != "x")
        throw ConfigError("grid function CSV must start with header 'x,value'");
    std::vector<double> xs, vs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split(line);
        if (fields.size() != 2)
            throw ConfigError("grid function CSV line " + std::to_string(lineno) + ": expected 2 fields");
        xs.push_back(csv::parse_double(fields[0]));
        vs.push_back(csv::parse_double(fields[1]));
    }
    if (xs.size() < 2) throw ConfigError("grid function CSV needs at least 2 rows");
    const Grid grid(xs.front(), xs.back(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - grid.x(i)) > 1e-9 * std::max(1.0, grid.length()))
            throw ConfigError("grid function CSV rows are not uniformly spaced (line " +
                              std::to_string(i + 2) + ")");
    for (double v : vs)
        if (v < 0.0 || !std::isfinite(v)) throw ConfigError("grid function CSV holds a negative or non-finite value");
    return GridFunction(grid, std::move(vs));
}

}  // namespace mee
