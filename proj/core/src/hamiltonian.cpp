#include "horse/hamiltonian.hpp"

#include "horse/error.hpp"
#include "horse/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace horse {

namespace {

constexpr int max_refinements = 10;

Eigen::MatrixXd sample_functions(const OscillatorBasis& basis, int n_max, const std::vector<double>& nodes)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(nodes.size()), n_max + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto values = radial_functions(basis, n_max, nodes[i]);
        for (int n = 0; n <= n_max; ++n)
            out(static_cast<Eigen::Index>(i), n) = values[static_cast<std::size_t>(n)];
    }
    return out;
}

Eigen::MatrixXd integrate_on(const QuadratureGrid& grid, const OscillatorBasis& row, int n_row,
                             const OscillatorBasis& col, int n_col, const RadialPotential& v)
{
    const Eigen::MatrixXd br = sample_functions(row, n_row, grid.nodes);
    const Eigen::MatrixXd bc = sample_functions(col, n_col, grid.nodes);
    Eigen::VectorXd w(static_cast<Eigen::Index>(grid.nodes.size()));
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double r = grid.nodes[i];
        w(static_cast<Eigen::Index>(i)) = grid.weights[i] * v(r) * r * r;
    }
    return br.transpose() * w.asDiagonal() * bc;
}

} // namespace

Eigen::MatrixXd potential_matrix(const OscillatorBasis& row, int n_row, const OscillatorBasis& col, int n_col,
                                 const RadialPotential& v, double tolerance, double* error_estimate)
{
    if (n_row < 0 || n_col < 0)
        throw DomainError("potential_matrix: indices must be non-negative");
    const double r_max = std::max(classical_turning_point(row, n_row) + 8.0 * row.r0,
                                  classical_turning_point(col, n_col) + 8.0 * col.r0);
    double panel = 0.5 * std::min(row.r0, col.r0);
    Eigen::MatrixXd previous = integrate_on(composite_gauss_legendre(0.0, r_max, v.breakpoints, panel),
                                            row, n_row, col, n_col, v);
    double change = 0.0;
    for (int level = 0; level < max_refinements; ++level) {
        panel *= 0.5;
        Eigen::MatrixXd current = integrate_on(composite_gauss_legendre(0.0, r_max, v.breakpoints, panel),
                                               row, n_row, col, n_col, v);
        change = (current - previous).cwiseAbs().maxCoeff();
        if (!std::isfinite(change))
            throw ConvergenceError("potential_matrix: non-finite matrix element (potential not integrable?)");
        previous = std::move(current);
        if (change <= tolerance) {
            if (error_estimate)
                *error_estimate = change;
            return previous;
        }
    }
    std::ostringstream msg;
    msg << "potential_matrix: quadrature did not reach " << tolerance << " MeV; last change " << change
        << " MeV with panel width " << panel << " fm";
    throw ConvergenceError(msg.str());
}

Eigen::MatrixXd potential_matrix(const OscillatorBasis& basis, const RadialPotential& v, int n_max,
                                 double tolerance, double* error_estimate)
{
    Eigen::MatrixXd m = potential_matrix(basis, n_max, basis, n_max, v, tolerance, error_estimate);
    return 0.5 * (m + m.transpose());
}

double potential_matrix_element(const OscillatorBasis& basis, const RadialPotential& v, int n, int n_prime)
{
    const int top = std::max(n, n_prime);
    return potential_matrix(basis, v, top)(n, n_prime);
}

Eigen::VectorXd lanczos_factors(int n_max)
{
    Eigen::VectorXd sigma(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double x = std::numbers::pi * (n + 1.0) / (n_max + 2.0);
        sigma(n) = std::sin(x) / x;
    }
    return sigma;
}

Eigen::MatrixXd lanczos_smooth(const Eigen::MatrixXd& v, int n_max)
{
    if (v.rows() != n_max + 1 || v.cols() != n_max + 1)
        throw DomainError("lanczos_smooth: matrix size must be N+1");
    const Eigen::VectorXd s = lanczos_factors(n_max);
    return s.asDiagonal() * v * s.asDiagonal();
}

TruncatedHamiltonian diagonalize_matrix(const OscillatorBasis& basis, const Eigen::MatrixXd& h)
{
    if (h.rows() != h.cols() || h.rows() == 0)
        throw DomainError("diagonalize_matrix: need a non-empty square matrix");
    TruncatedHamiltonian out;
    out.basis = basis;
    out.N = static_cast<int>(h.rows()) - 1;
    out.matrix = h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("diagonalize: symmetric eigensolver failed");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.edge = kinetic_offdiagonal(basis, out.N);
    return out;
}

TruncatedHamiltonian diagonalize(const OscillatorBasis& basis, const RadialPotential& v, int N, bool smoothing)
{
    if (N < 0)
        throw DomainError("diagonalize: N must be non-negative");
    Eigen::MatrixXd vm = potential_matrix(basis, v, N);
    if (smoothing)
        vm = lanczos_smooth(vm, N);
    TruncatedHamiltonian out = diagonalize_matrix(basis, kinetic_matrix(basis, N) + vm);
    out.smoothed = smoothing;
    return out;
}

namespace {

void check_pole(const TruncatedHamiltonian& h, double energy)
{
    for (Eigen::Index i = 0; i < h.eigenvalues.size(); ++i)
        if (std::abs(h.eigenvalues(i) - energy) < pole_guard)
            throw PoleError(static_cast<int>(i), h.eigenvalues(i), energy);
}

} // namespace

Eigen::VectorXd g_column(const TruncatedHamiltonian& h, double energy)
{
    check_pole(h, energy);
    const Eigen::VectorXd inv = (h.eigenvalues.array() - energy).inverse();
    const Eigen::VectorXd weights = inv.cwiseProduct(h.eigenvectors.row(h.N).transpose());
    return -h.edge * (h.eigenvectors * weights);
}

double g_matrix_element(const TruncatedHamiltonian& h, int n, double energy)
{
    if (n < 0 || n > h.N)
        throw DomainError("g_matrix_element: n outside [0, N]");
    check_pole(h, energy);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < h.eigenvalues.size(); ++i)
        sum += h.eigenvectors(n, i) * h.eigenvectors(h.N, i) / (h.eigenvalues(i) - energy);
    return -sum * h.edge;
}

} // namespace horse
