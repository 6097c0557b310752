#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pomega::grid {

struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int count = 2;
};

// count evenly spaced values from min to max inclusive; count >= 2.
std::vector<double> linspace(const AxisSpec& axis);

// Sampled scalar field over 1 or 2 axes; values row-major with the last
// axis fastest.  Metadata travels to the run manifest, not the CSV.
struct PhaseSpaceGrid {
    std::vector<AxisSpec> axes;
    std::vector<double> values;
    std::vector<std::pair<std::string, double>> metadata;

    // length = product of axis counts, every value finite
    void validate() const;
};

// Long-format CSV: one header row (axis names then value_name), one data
// row per grid point, 17 significant digits.
void write_grid_csv(const PhaseSpaceGrid& g, const std::string& path,
                    const std::string& value_name);

} // namespace pomega::grid
