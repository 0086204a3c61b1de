#include "qwire/solver.hpp"

#include "qwire/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

namespace qwire {

namespace {

// Segments whose |Im(q l)| exceeds this are matched through the two-end
// (Dirichlet-to-Neumann) relation instead of the transfer matrix.
constexpr double kEvanescentSwitch = 1.0;
constexpr double kMinReciprocalCondition = 1e-14;

struct CosSinc {
    Complex cos_l;
    Complex sinc_l;  // sin(ql)/q
};

CosSinc cos_sinc(Complex q, double length) {
    const Complex z = q * length;
    if (std::abs(z) < 1e-6) {
        const Complex z2 = z * z;
        return {1.0 - z2 / 2.0, length * (1.0 - z2 / 6.0)};
    }
    return {std::cos(z), std::sin(z) / q};
}

// q cot(ql) and q csc(ql) for Im(ql) > 0, without overflow.
struct CotCsc {
    Complex q_cot;
    Complex q_csc;
};

CotCsc cot_csc(Complex q, double length) {
    const Complex z = q * length;
    const Complex e1 = std::exp(I * z);  // |e1| < 1
    const Complex w = e1 * e1;
    return {q * I * (w + 1.0) / (w - 1.0), q * 2.0 * I * e1 / (w - 1.0)};
}

bool evanescent(Complex q, double length) {
    return std::abs((q * length).imag()) > kEvanescentSwitch;
}

}  // namespace

TransferMatrix TransferMatrix::inverse() const {
    Eigen::Matrix2cd inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return TransferMatrix(inv);
}

TransferMatrix segment_transfer(double length, Complex q) {
    const auto [c, s] = cos_sinc(q, length);
    Eigen::Matrix2cd m;
    m << c, s, -q * q * s, c;
    return TransferMatrix(m);
}

Complex SegmentState::psi(double x) const {
    if (evanescent(q, length)) {
        const auto [a, c] = end_referenced_coefficients();
        return a * std::exp(I * q * x) + c * std::exp(-I * q * (x - length));
    }
    const auto t = segment_transfer(x, q);
    return t(0, 0) * psi_node + t(0, 1) * dpsi_node;
}

std::pair<Complex, Complex> SegmentState::end_referenced_coefficients() const {
    if (evanescent(q, length)) {
        // psi(x) = [psi0 sin(q(l-x)) + psiL sin(qx)] / sin(ql), regrouped with
        // every exponential scaled by e^{-kappa}.
        const Complex z = q * length;
        const double kappa = z.imag();
        const Complex grow = std::exp(-I * z - kappa);  // e^{-iql} e^{-kappa}, modulus 1
        const Complex decay = std::exp(I * z - kappa);  // modulus e^{-2 kappa}
        const Complex denom = grow - decay;             // 2i sin(ql) e^{-kappa}, sign folded
        const double shrink = std::exp(-kappa);
        const Complex a = (psi_node * grow - psi_end * shrink) / denom;
        const Complex c = (psi_end * grow - psi_node * shrink) / denom;
        return {a, c};
    }
    const Complex ratio = dpsi_node / (I * q);
    const Complex a = 0.5 * (psi_node + ratio);
    const Complex b = 0.5 * (psi_node - ratio);
    return {a, b * std::exp(-I * q * length)};
}

std::pair<Complex, Complex> SegmentState::plane_wave_coefficients() const {
    const auto [a, c] = end_referenced_coefficients();
    return {a, c * std::exp(I * q * length)};
}

double ScatteringSolution::outgoing_flux() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum;
}

ScatteringSolution solve_star(const StarGraph& graph, double energy, std::size_t incident) {
    const double kinetic = energy - graph.lead_potential();
    if (!(kinetic > 0.0) || !std::isfinite(energy)) {
        throw DomainError(fmt::format("energy {} is not above the lead potential {}", energy,
                                      graph.lead_potential()));
    }
    const std::size_t n = graph.arm_count();
    if (incident >= n) {
        throw InvalidGraph(fmt::format("incident lead {} out of range", incident + 1));
    }
    const double k = std::sqrt(kinetic);
    const Complex ik = I * k;

    // Unknowns: outgoing amplitude per lead, then the node value phi.
    // Row j ties arm j to phi; the last row is the Kirchhoff sum of outward
    // node derivatives.
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N + 1);
    std::vector<Complex> q(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Arm& arm = graph.arm(j);
        const auto J = static_cast<Eigen::Index>(j);
        const double in = (j == incident) ? 1.0 : 0.0;
        q[j] = segment_wavevector(energy, arm.potential);
        if (evanescent(q[j], arm.length)) {
            // psi'(l) = -q csc psi0 + q cot psiL, psi'(0) = -q cot psi0 + q csc psiL
            const auto [ct, cs] = cot_csc(q[j], arm.length);
            a(J, J) = ik - ct;
            a(J, N) = cs;
            rhs(J) = (ik + ct) * in;
            a(N, J) = cs;
            a(N, N) -= ct;
            rhs(N) -= cs * in;
        } else {
            // (psi0, psi0') = M^{-1} (psiL, psiL')
            const auto [c, s] = cos_sinc(q[j], arm.length);
            a(J, J) = c - ik * s;
            a(J, N) = -1.0;
            rhs(J) = -(c + ik * s) * in;
            a(N, J) = q[j] * q[j] * s + ik * c;
            rhs(N) -= (q[j] * q[j] * s - ik * c) * in;
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > kMinReciprocalCondition)) {
        throw SolverDegeneracy(energy, rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    const Eigen::VectorXcd x = lu.solve(rhs);

    ScatteringSolution sol;
    sol.energy = energy;
    sol.incident = incident;
    sol.condition = 1.0 / rcond;
    sol.lead_wavevector = k;
    sol.amplitudes.resize(n);
    sol.segments.resize(n);
    const Complex node = x(N);
    for (std::size_t j = 0; j < n; ++j) {
        const auto J = static_cast<Eigen::Index>(j);
        const double in = (j == incident) ? 1.0 : 0.0;
        const Complex out = x(J);
        sol.amplitudes[j] = out;
        SegmentState& seg = sol.segments[j];
        seg.length = graph.arm(j).length;
        seg.q = q[j];
        seg.psi_node = node;
        seg.psi_end = in + out;
        seg.dpsi_end = ik * (out - in);
        if (evanescent(q[j], seg.length)) {
            const auto [ct, cs] = cot_csc(q[j], seg.length);
            seg.dpsi_node = -ct * node + cs * seg.psi_end;
        } else {
            const auto [c, s] = cos_sinc(q[j], seg.length);
            seg.dpsi_node = q[j] * q[j] * s * seg.psi_end + c * seg.dpsi_end;
        }
    }
    return sol;
}

double SMatrix::unitarity_defect() const {
    const auto n = entries.rows();
    const Eigen::MatrixXcd d = entries.adjoint() * entries - Eigen::MatrixXcd::Identity(n, n);
    return d.cwiseAbs().maxCoeff();
}

double SMatrix::symmetry_defect() const {
    return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

SMatrix s_matrix(const StarGraph& graph, double energy) {
    const auto n = graph.arm_count();
    SMatrix s;
    s.energy = energy;
    s.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t in = 0; in < n; ++in) {
        const auto sol = solve_star(graph, energy, in);
        for (std::size_t out = 0; out < n; ++out) {
            s.entries(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)) =
                sol.amplitudes[out];
        }
    }
    return s;
}

Complex channel_amplitude(const StarGraph& graph, double energy, const Channel& channel) {
    channel.check(graph);
    return solve_star(graph, energy, channel.incident).amplitudes[channel.outgoing];
}

namespace {

// integral_0^l e^{c x} dx
Complex exp_integral(Complex c, double length) {
    const Complex z = c * length;
    if (std::abs(z) < 1e-4) {
        return length * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    }
    return (std::exp(z) - 1.0) / c;
}

// integral_0^l e^{-c x} dx for real c, via expm1
double decay_integral(double c, double length) {
    if (c == 0.0) return length;
    return -std::expm1(-c * length) / c;
}

// Term-by-term integral of |psi0 C(x) + dpsi0 S(x)|^2 with C = cos(qx),
// S = sin(qx)/q expanded in powers of q^2 x^2. Used for |q| l small, where the
// plane-wave split cancels badly.
double series_density(const SegmentState& seg) {
    constexpr int kTerms = 12;
    const Complex mq2 = -seg.q * seg.q;
    std::array<Complex, kTerms> cc{};
    std::array<Complex, kTerms> cs{};
    Complex p = 1.0;
    double fact_even = 1.0;  // (2n)!
    for (int n = 0; n < kTerms; ++n) {
        if (n > 0) {
            p *= mq2;
            fact_even *= (2.0 * n - 1.0) * (2.0 * n);
        }
        cc[n] = p / fact_even;
        cs[n] = p / (fact_even * (2.0 * n + 1.0));
    }
    const double l = seg.length;
    Complex int_cc = 0.0;
    Complex int_ss = 0.0;
    Complex int_cs = 0.0;
    for (int n = 0; n < kTerms; ++n) {
        for (int m = 0; m < kTerms; ++m) {
            const int e = 2 * (n + m);
            int_cc += cc[n] * std::conj(cc[m]) * std::pow(l, e + 1) / double(e + 1);
            int_ss += cs[n] * std::conj(cs[m]) * std::pow(l, e + 3) / double(e + 3);
            int_cs += cc[n] * std::conj(cs[m]) * std::pow(l, e + 2) / double(e + 2);
        }
    }
    const double value = std::norm(seg.psi_node) * int_cc.real() +
                         std::norm(seg.dpsi_node) * int_ss.real() +
                         2.0 * (seg.psi_node * std::conj(seg.dpsi_node) * int_cs).real();
    return std::max(value, 0.0);
}

double segment_density(const SegmentState& seg) {
    if (seg.length == 0.0) return 0.0;
    if (std::abs(seg.q) * seg.length < 0.5) return series_density(seg);
    // psi = A e^{iqx} + C e^{-iq(x-l)}, q = a + ib with b >= 0
    const auto [amp_a, amp_c] = seg.end_referenced_coefficients();
    const double l = seg.length;
    const double re = seg.q.real();
    const double im = seg.q.imag();
    const Complex cross_phase = std::exp(-I * std::conj(seg.q) * l);
    const double value =
        std::norm(amp_a) * decay_integral(2.0 * im, l) +
        std::norm(amp_c) * decay_integral(2.0 * im, l) +
        2.0 * (amp_a * std::conj(amp_c) * cross_phase * exp_integral(Complex(0.0, 2.0 * re), l))
                  .real();
    return std::max(value, 0.0);
}

}  // namespace

std::vector<double> internal_density_integral(const ScatteringSolution& solution) {
    std::vector<double> out;
    out.reserve(solution.segments.size());
    for (const auto& seg : solution.segments) out.push_back(segment_density(seg));
    return out;
}

}  // namespace qwire
