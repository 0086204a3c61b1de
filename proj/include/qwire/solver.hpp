#pragma once

#include "qwire/graph.hpp"
#include "qwire/units.hpp"

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace qwire {

/// Maps (psi, psi') at the start of a constant-potential segment to
/// (psi, psi') at its end. det M = 1 (Wronskian conservation).
class TransferMatrix {
public:
    explicit TransferMatrix(const Eigen::Matrix2cd& m) : m_(m) {}

    const Eigen::Matrix2cd& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    Complex determinant() const { return m_.determinant(); }
    /// Exact inverse using det M = 1.
    TransferMatrix inverse() const;

private:
    Eigen::Matrix2cd m_;
};

/// M = [[cos(q l), sin(q l)/q], [-q sin(q l), cos(q l)]], with the
/// [[1, l], [0, 1]] limit as q -> 0.
TransferMatrix segment_transfer(double length, Complex q);

/// Wavefunction on one arm segment, x measured from the node (x = 0)
/// towards the lead (x = length). Derivatives point away from the node.
struct SegmentState {
    double length = 0.0;
    Complex q;
    Complex psi_node;
    Complex dpsi_node;
    Complex psi_end;
    Complex dpsi_end;

    Complex psi(double x) const;
    /// (A, C) with psi(x) = A e^{iqx} + C e^{-iq(x - length)}; both stay
    /// bounded for decaying segments. Undefined for q == 0.
    std::pair<Complex, Complex> end_referenced_coefficients() const;
    /// (A, B) with psi(x) = A e^{iqx} + B e^{-iqx}. Undefined for q == 0 and
    /// may overflow for strongly evanescent segments.
    std::pair<Complex, Complex> plane_wave_coefficients() const;
};

/// Stationary state for a unit-amplitude wave incident in one lead.
/// Lead j carries delta_{j,incident} e^{-iky} + amplitudes[j] e^{iky}, with y
/// measured outward from the end of arm j.
struct ScatteringSolution {
    double energy = 0.0;
    std::size_t incident = 0;
    std::vector<Complex> amplitudes;
    std::vector<SegmentState> segments;
    double condition = 1.0;

    double lead_wavevector = 0.0;
    double outgoing_flux() const;  ///< sum |amplitude|^2
};

ScatteringSolution solve_star(const StarGraph& graph, double energy, std::size_t incident);

/// entries(out, in) = s_{out,in}.
struct SMatrix {
    double energy = 0.0;
    Eigen::MatrixXcd entries;

    Complex operator()(std::size_t out, std::size_t in) const {
        return entries(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    }
    /// max |S^dagger S - I|
    double unitarity_defect() const;
    /// max |S - S^T|
    double symmetry_defect() const;
};

SMatrix s_matrix(const StarGraph& graph, double energy);

/// One S-matrix element without building the full matrix.
Complex channel_amplitude(const StarGraph& graph, double energy, const Channel& channel);

/// Per arm, the integral of |psi|^2 over the segment, in closed form.
std::vector<double> internal_density_integral(const ScatteringSolution& solution);

}  // namespace qwire
