#pragma once

#include <span>
#include <vector>

namespace horse {

// Composite Gauss-Legendre nodes on [a, b], split at breakpoints inside (a, b) and
// subdivided into panels no longer than max_panel.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureGrid composite_gauss_legendre(double a, double b, std::span<const double> breakpoints,
                                        double max_panel);

inline constexpr int gauss_legendre_order = 20;

} // namespace horse
