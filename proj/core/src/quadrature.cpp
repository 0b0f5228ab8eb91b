#include "horse/quadrature.hpp"

#include "horse/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

namespace horse {

QuadratureGrid composite_gauss_legendre(double a, double b, std::span<const double> breakpoints,
                                        double max_panel)
{
    if (!(b > a) || !(max_panel > 0.0))
        throw DomainError("composite_gauss_legendre: need b > a and max_panel > 0");
    using rule = boost::math::quadrature::gauss<double, gauss_legendre_order>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadratureGrid grid;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = cuts[s], hi = cuts[s + 1];
        if (hi - lo <= 0.0)
            continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width, half = 0.5 * width;
            // Boost stores the non-negative half of the symmetric rule.
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] == 0.0) {
                    grid.nodes.push_back(mid);
                    grid.weights.push_back(half * w[i]);
                    continue;
                }
                grid.nodes.push_back(mid - half * x[i]);
                grid.weights.push_back(half * w[i]);
                grid.nodes.push_back(mid + half * x[i]);
                grid.weights.push_back(half * w[i]);
            }
        }
    }
    return grid;
}

} // namespace horse
