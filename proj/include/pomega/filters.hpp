#pragma once

#include <complex>
#include <vector>

#include "pomega/numerics.hpp"

namespace pomega::filters {

using numerics::cd;

enum class FilterKind { ProductTriangular, RadialAutocorrelation };

struct FilterSpec {
    FilterKind kind = FilterKind::ProductTriangular;
    std::vector<double> widths; // one per time argument, all > 0

    FilterSpec(FilterKind k, std::vector<double> w)
        : kind(k), widths(std::move(w)) {}
    // Scalar width shared by all k arguments.
    FilterSpec(FilterKind k, double w, std::size_t count = 1)
        : kind(k), widths(count, w) {}
};

// Triangular hat: 1-|z| on [-1,1], 0 elsewhere.
double tri(double z);

// Product filter over k complex arguments: prod_i tri(Re b_i/w_i)*tri(Im b_i/w_i).
double product_filter(const std::vector<cd>& betas, const FilterSpec& spec);

// Radially symmetric filter: normalized 2D autocorrelation of the indicator
// of a disk of radius w/2.  Support [0,w], value 1 at b=0, and its 2D Fourier
// transform is |disk transform|^2 >= 0.
double radial_filter(double b, double w);

struct TArgs {
    double y = 0.0;
    cd g = 0.0;
};

// T(y,g) = Re[(2/pi) * int_0^1 dz exp(-g z^2 + 2 i y z) (1-z)].
// Each axis of a filtered Gaussian Fourier integral reduces to one of these.
double t_function(const TArgs& args,
                  const numerics::QuadratureSpec& spec = {1e-12, 0.0, 2000});

} // namespace pomega::filters
