#include "qtherm/bloch.hpp"

#include <algorithm>
#include <cstdio>

namespace qtherm {

namespace {

constexpr double kHermTol = 1e-10;

// Multiply the vector by a unit phase so its first component of magnitude
// above 1e-14 becomes real and positive.
std::array<Complex, 2> phase_fixed(std::array<Complex, 2> v) {
    for (const auto& c : v) {
        double a = std::abs(c);
        if (a > 1e-14) {
            Complex phase = std::conj(c) / a;
            v[0] *= phase;
            v[1] *= phase;
            break;
        }
    }
    return v;
}

}  // namespace

ComplexMatrix2 density_from_bloch(const BlochState& s) {
    ComplexMatrix2 rho;
    rho(0, 0) = Complex{(1.0 + s.z) / 2.0, 0.0};
    rho(0, 1) = Complex{s.x / 2.0, -s.y / 2.0};
    rho(1, 0) = Complex{s.x / 2.0, s.y / 2.0};
    rho(1, 1) = Complex{(1.0 - s.z) / 2.0, 0.0};
    return rho;
}

BlochState bloch_from_density(const ComplexMatrix2& rho) {
    if (!rho.is_hermitian(kHermTol)) {
        throw NotAState("matrix is not Hermitian within 1e-10");
    }
    if (std::abs(rho.trace() - Complex{1.0}) > kHermTol) {
        throw NotAState("matrix trace deviates from 1 by more than 1e-10");
    }
    BlochState s;
    s.x = (rho(0, 1) + rho(1, 0)).real();
    s.y = rho(1, 0).imag() - rho(0, 1).imag();
    s.z = (rho(0, 0) - rho(1, 1)).real();
    return s;
}

ComplexMatrix2 hamiltonian(const FieldVector& h) {
    ComplexMatrix2 H;
    H(0, 0) = Complex{-h.hz, 0.0};
    H(0, 1) = Complex{-h.hx, h.hy};
    H(1, 0) = Complex{-h.hx, -h.hy};
    H(1, 1) = Complex{h.hz, 0.0};
    return H;
}

EnergyEigenbasis energy_eigenbasis(const FieldVector& field, double tol) {
    const double h = field.magnitude();
    if (h < tol) {
        throw DegenerateHamiltonian("|h| below tolerance: energy eigenbasis undefined");
    }
    const double nx = field.hx / h;
    const double ny = field.hy / h;
    const double nz = field.hz / h;

    // The ground state of H = -h.sigma is the +1 eigenvector of n.sigma.
    // Two charts avoid the loss of accuracy near n_z = -1 / n_z = +1.
    std::array<Complex, 2> plus, minus;
    if (nz >= 0.0) {
        const double norm = std::sqrt(2.0 * (1.0 + nz));
        plus = {Complex{(1.0 + nz) / norm, 0.0}, Complex{nx / norm, ny / norm}};
        minus = {Complex{-nx / norm, ny / norm}, Complex{(1.0 + nz) / norm, 0.0}};
    } else {
        const double norm = std::sqrt(2.0 * (1.0 - nz));
        plus = {Complex{nx / norm, -ny / norm}, Complex{(1.0 - nz) / norm, 0.0}};
        minus = {Complex{-(1.0 - nz) / norm, 0.0}, Complex{nx / norm, ny / norm}};
    }
    return {phase_fixed(plus), phase_fixed(minus)};
}

bool is_unital_sufficient(std::span<const LindbladTerm> terms, double tol) {
    for (const auto& term : terms) {
        const double scale = term.op.max_abs();
        if (scale == 0.0) continue;
        ComplexMatrix2 a = (1.0 / scale) * term.op;
        if (commutator(a, a.adjoint()).max_abs() >= tol) return false;
    }
    return true;
}

bool is_incoherent_sufficient(std::span<const LindbladTerm> terms, const FieldVector& field,
                              double tol) {
    const EnergyEigenbasis basis = energy_eigenbasis(field, tol);
    const std::array<std::array<Complex, 2>, 2> b = {basis.ground, basis.excited};

    for (const auto& term : terms) {
        const double scale = term.op.max_abs();
        if (scale == 0.0) continue;
        ComplexMatrix2 a = (1.0 / scale) * term.op;

        // Matrix elements <h_i| A |h_j> in the energy eigenbasis.
        Complex ab[2][2];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                Complex sum = 0.0;
                for (int p = 0; p < 2; ++p) {
                    for (int q = 0; q < 2; ++q) {
                        sum += std::conj(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)]) *
                               a(p, q) * b[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)];
                    }
                }
                ab[i][j] = sum;
            }
        }
        // <h_n|A|h_k><h_k|A^dag|h_m> = A_nk conj(A_mk), required to vanish
        // for every k whenever n != m.
        for (int k = 0; k < 2; ++k) {
            for (int n = 0; n < 2; ++n) {
                for (int mm = 0; mm < 2; ++mm) {
                    if (n == mm) continue;
                    if (std::abs(ab[n][k] * std::conj(ab[mm][k])) >= tol) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace qtherm
