#include "horse/potential.hpp"

#include "horse/error.hpp"
#include "horse/units.hpp"

#include <boost/math/interpolators/makima.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace horse {

RadialPotential zero_potential()
{
    return {[](double) { return 0.0; }, 0.0, {}};
}

RadialPotential constant_potential(double value)
{
    return {[value](double) { return value; }, std::numeric_limits<double>::infinity(), {}};
}

RadialPotential square_well(double depth, double radius)
{
    if (!(radius > 0.0))
        throw DomainError("square_well: radius must be positive");
    return {[depth, radius](double r) { return r < radius ? depth : 0.0; }, radius, {radius}};
}

RadialPotential harmonic_potential(double mu, double hbar_omega)
{
    const double hc = PhysicalConstants::hbar_c;
    const double coeff = 0.5 * mu * hbar_omega * hbar_omega / (hc * hc);
    return {[coeff](double r) { return coeff * r * r; }, std::numeric_limits<double>::infinity(), {}};
}

WoodsSaxonParams WoodsSaxonParams::for_mass_number(double a)
{
    if (!(a > 0.0))
        throw DomainError("WoodsSaxonParams: mass number must be positive");
    WoodsSaxonParams p;
    p.radius = 1.25 * std::cbrt(a);
    return p;
}

RadialPotential woods_saxon(const WoodsSaxonParams& p, int l, std::optional<double> j)
{
    if (!(p.radius > 0.0) || !(p.diffuseness > 0.0))
        throw DomainError("woods_saxon: radius and diffuseness must be positive");
    double ls = 0.0;
    if (j) {
        const double jj = *j;
        if (std::abs(std::abs(jj - l) - 0.5) > 1e-12 || jj < 0.0)
            throw DomainError("woods_saxon: j must equal l +- 1/2");
        ls = 0.5 * (jj * (jj + 1.0) - l * (l + 1.0) - 0.75);
    }
    const double depth = p.depth, radius = p.radius, a = p.diffuseness, lambda = p.spin_orbit * ls;
    auto eval = [depth, radius, a, lambda](double r) {
        const double e = std::exp((r - radius) / a);
        const double f = 1.0 / (1.0 + e);
        double v = depth * f;
        if (lambda != 0.0 && r > 0.0) {
            const double df = -f * f * e / a;
            v += lambda * df / r;
        }
        return v;
    };
    return {eval, radius + 4.0 * a, {}};
}

RadialPotential point_coulomb(double z1z2)
{
    const double c = z1z2 * PhysicalConstants::e2;
    return {[c](double r) { return c / r; }, std::numeric_limits<double>::infinity(), {}};
}

RadialPotential operator+(const RadialPotential& a, const RadialPotential& b)
{
    RadialPotential sum;
    sum.evaluator = [fa = a.evaluator, fb = b.evaluator](double r) {
        return (fa ? fa(r) : 0.0) + (fb ? fb(r) : 0.0);
    };
    sum.range = std::max(a.range, b.range);
    sum.breakpoints = a.breakpoints;
    sum.breakpoints.insert(sum.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end());
    return sum;
}

RadialPotential truncate(const RadialPotential& v, double radius)
{
    RadialPotential cut;
    cut.evaluator = [f = v.evaluator, radius](double r) { return r <= radius ? f(r) : 0.0; };
    cut.range = radius;
    for (double p : v.breakpoints)
        if (p < radius)
            cut.breakpoints.push_back(p);
    cut.breakpoints.push_back(radius);
    return cut;
}

RadialPotential tabulated_potential(std::vector<double> r, std::vector<double> v)
{
    if (r.size() != v.size() || r.size() < 4)
        throw ConfigError("tabulated potential needs at least 4 (r, V) rows");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw ConfigError("tabulated potential radii must be strictly increasing");
    const double first = r.front(), last = r.back(), v_first = v.front();
    using spline_t = boost::math::interpolators::makima<std::vector<double>>;
    auto spline = std::make_shared<spline_t>(std::move(r), std::move(v));
    auto eval = [spline, first, last, v_first](double x) {
        if (x > last)
            return 0.0;
        if (x < first)
            return v_first;
        return (*spline)(x);
    };
    return {eval, last, {last}};
}

RadialPotential load_tabulated_potential(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open tabulated potential file '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        double a, b;
        if (!(fields >> a))
            continue;
        if (!(fields >> b))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected two columns (r V)");
        r.push_back(a);
        v.push_back(b);
    }
    return tabulated_potential(std::move(r), std::move(v));
}

} // namespace horse
