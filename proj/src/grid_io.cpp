#include "pomega/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pomega::grid {

std::vector<double> linspace(const AxisSpec& axis) {
    if (axis.count < 2)
        throw std::invalid_argument("linspace: count must be >= 2");
    std::vector<double> out(axis.count);
    const double step = (axis.max - axis.min) / (axis.count - 1);
    for (int i = 0; i < axis.count; ++i) out[i] = axis.min + i * step;
    out.back() = axis.max;
    return out;
}

void PhaseSpaceGrid::validate() const {
    if (axes.empty() || axes.size() > 2)
        throw std::invalid_argument("grid: 1 or 2 axes required");
    std::size_t expected = 1;
    for (const AxisSpec& axis : axes) {
        if (axis.count < 2)
            throw std::invalid_argument("grid: axis count must be >= 2");
        expected *= static_cast<std::size_t>(axis.count);
    }
    if (values.size() != expected)
        throw std::invalid_argument("grid: value count does not match axes");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("grid: non-finite value");
}

void write_grid_csv(const PhaseSpaceGrid& g, const std::string& path,
                    const std::string& value_name) {
    g.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);

    for (const AxisSpec& axis : g.axes) out << axis.name << ",";
    out << value_name << "\n";

    std::vector<std::vector<double>> ticks;
    for (const AxisSpec& axis : g.axes) ticks.push_back(linspace(axis));

    char buf[32];
    const auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    const std::size_t inner = ticks.size() == 2 ? ticks[1].size() : 1;
    for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
        emit(ticks[0][flat / inner]);
        out << ",";
        if (ticks.size() == 2) {
            emit(ticks[1][flat % inner]);
            out << ",";
        }
        emit(g.values[flat]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace pomega::grid
