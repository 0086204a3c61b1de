#pragma once

// Independent reference computations used only by the tests.

#include "qwire/graph.hpp"
#include "qwire/units.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <vector>

namespace qwire::oracle {

/// Plane-wave coefficients and outgoing amplitudes from one dense
/// interface-matching system (3N unknowns: b_j, A_j, B_j).
struct DenseSolution {
    std::vector<Complex> amplitudes;
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::vector<Complex> q;
};

inline DenseSolution dense_matching_solve(const StarGraph& g, double energy, std::size_t incident) {
    const auto n = static_cast<Eigen::Index>(g.arm_count());
    const double k = std::sqrt(energy - g.lead_potential());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(3 * n);
    std::vector<Complex> q(n);
    auto col_b = [](Eigen::Index j) { return j; };
    auto col_a = [n](Eigen::Index j) { return n + 2 * j; };
    auto col_bb = [n](Eigen::Index j) { return n + 2 * j + 1; };
    Eigen::Index row = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Arm& arm = g.arm(static_cast<std::size_t>(j));
        q[j] = std::sqrt(Complex(energy - arm.potential, 0.0));
        const Complex ep = std::exp(I * q[j] * arm.length);
        const Complex em = std::exp(-I * q[j] * arm.length);
        const double c = (static_cast<std::size_t>(j) == incident) ? 1.0 : 0.0;
        // psi continuity at the lead end
        m(row, col_a(j)) = ep;
        m(row, col_bb(j)) = em;
        m(row, col_b(j)) = -1.0;
        rhs(row) = c;
        ++row;
        // derivative continuity at the lead end
        m(row, col_a(j)) = I * q[j] * ep;
        m(row, col_bb(j)) = -I * q[j] * em;
        m(row, col_b(j)) = -I * k;
        rhs(row) = -I * k * c;
        ++row;
    }
    for (Eigen::Index j = 1; j < n; ++j) {
        m(row, col_a(j)) = 1.0;
        m(row, col_bb(j)) = 1.0;
        m(row, col_a(0)) = -1.0;
        m(row, col_bb(0)) = -1.0;
        ++row;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        m(row, col_a(j)) = I * q[j];
        m(row, col_bb(j)) = -I * q[j];
    }
    const Eigen::VectorXcd x = m.fullPivLu().solve(rhs);
    DenseSolution out;
    out.q = q;
    for (Eigen::Index j = 0; j < n; ++j) {
        out.amplitudes.push_back(x(col_b(j)));
        out.a.push_back(x(col_a(j)));
        out.b.push_back(x(col_bb(j)));
    }
    return out;
}

/// Classic 4th-order Runge-Kutta for psi'' = -q^2 psi; returns the 2x2
/// propagator built column by column.
inline Eigen::Matrix2cd rk4_propagator(double length, Complex q, int steps) {
    Eigen::Matrix2cd out;
    for (int col = 0; col < 2; ++col) {
        Eigen::Vector2cd y(col == 0 ? 1.0 : 0.0, col == 1 ? 1.0 : 0.0);
        const double h = length / steps;
        auto f = [q](const Eigen::Vector2cd& v) {
            return Eigen::Vector2cd(v(1), -q * q * v(0));
        };
        for (int s = 0; s < steps; ++s) {
            const Eigen::Vector2cd k1 = f(y);
            const Eigen::Vector2cd k2 = f(y + 0.5 * h * k1);
            const Eigen::Vector2cd k3 = f(y + 0.5 * h * k2);
            const Eigen::Vector2cd k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.col(col) = y;
    }
    return out;
}

/// Transmission amplitude of a 1D square region of width L and potential V
/// between two zero-potential leads, phases referenced at the region edges.
inline Complex square_well_transmission(double k, double potential, double width) {
    const Complex q = std::sqrt(Complex(k * k - potential, 0.0));
    return 1.0 / (std::cos(q * width) -
                  I * (k * k + q * q) / (2.0 * k * q) * std::sin(q * width));
}

/// integral over the well of |psi|^2 for left incidence, from the textbook
/// wavefunction, by adaptive Gauss-Kronrod.
inline double square_well_density_integral(double k, double potential, double width) {
    const Complex q = std::sqrt(Complex(k * k - potential, 0.0));
    const Complex t = square_well_transmission(k, potential, width);
    const Complex amp_a = t * std::exp(-I * q * width) * (q + k) / (2.0 * q);
    const Complex amp_b = t * std::exp(I * q * width) * (q - k) / (2.0 * q);
    auto integrand = [&](double x) {
        return std::norm(amp_a * std::exp(I * q * x) + amp_b * std::exp(-I * q * x));
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, width,
                                                                          15, 1e-13);
}

inline double adaptive_integral(const auto& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

/// Free Gaussian packet with a(k) = C exp(-(k - k0)^2 / (4 sigma^2)) over the
/// whole real line, normalized to 1, evaluated in closed form.
inline Complex gaussian_packet(double k0, double sigma, double x, double tau) {
    const double c = 1.0 / std::sqrt(sigma * std::sqrt(2.0 * pi));
    const Complex alpha = 1.0 / (4.0 * sigma * sigma) + I * tau;
    const Complex b = k0 / (2.0 * sigma * sigma) + I * x;
    return c / std::sqrt(2.0 * pi) * std::sqrt(pi / alpha) *
           std::exp(b * b / (4.0 * alpha) - k0 * k0 / (4.0 * sigma * sigma));
}

}  // namespace qwire::oracle
