#include "pomega/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace pomega::filters {

double tri(double z) {
    const double a = std::abs(z);
    return a >= 1.0 ? 0.0 : 1.0 - a;
}

double product_filter(const std::vector<cd>& betas, const FilterSpec& spec) {
    if (spec.kind != FilterKind::ProductTriangular)
        throw std::invalid_argument("product_filter: wrong filter kind");
    if (betas.size() != spec.widths.size())
        throw std::invalid_argument(
            "product_filter: betas/widths dimension mismatch");
    double value = 1.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const double w = spec.widths[i];
        if (!(w > 0.0))
            throw std::invalid_argument("product_filter: width must be > 0");
        value *= tri(betas[i].real() / w) * tri(betas[i].imag() / w);
    }
    return value;
}

double radial_filter(double b, double w) {
    if (!(w > 0.0))
        throw std::invalid_argument("radial_filter: width must be > 0");
    if (b < 0.0) throw std::invalid_argument("radial_filter: b must be >= 0");
    const double x = b / w; // disk radius w/2, separation b: overlap needs b <= w
    if (x >= 1.0) return 0.0;
    // Overlap area of two disks of radius R=w/2 at separation b, over pi R^2.
    return (2.0 / M_PI) * (std::acos(x) - x * std::sqrt(1.0 - x * x));
}

double t_function(const TArgs& args, const numerics::QuadratureSpec& spec) {
    const double y = args.y;
    const cd g = args.g;
    const cd integral = numerics::integrate_1d(
        [y, g](double z) {
            return std::exp(-g * (z * z) + cd(0.0, 2.0 * y * z)) * (1.0 - z);
        },
        0.0, 1.0, spec);
    return (2.0 / M_PI) * integral.real();
}

} // namespace pomega::filters
