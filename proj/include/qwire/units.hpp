#pragma once

// Dimensionless units: hbar = 1, 2m = 1, base length l = 1.
// Then E = k^2, omega = E, lead group velocity v = dE/dk = 2k, and times
// come out in units of 2 m l^2 / hbar.

#include <cmath>
#include <complex>
#include <numbers>

namespace qwire {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

inline double wavevector_of_energy(double energy) { return std::sqrt(energy); }
inline double energy_of_wavevector(double k) { return k * k; }
inline double lead_velocity(double k) { return 2.0 * k; }

/// Principal square root of E - V. Real positive when propagating,
/// +i|Im q| (decaying) when E < V.
inline Complex segment_wavevector(double energy, double potential) {
    return std::sqrt(Complex(energy - potential, 0.0));
}

}  // namespace qwire
