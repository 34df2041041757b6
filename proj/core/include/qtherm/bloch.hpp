#pragma once

// Qubit state/operator algebra: Bloch <-> density conversions, the energy
// eigenbasis of H = -h.sigma, and sufficient-condition checkers for unital
// and incoherent dynamical maps.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <span>

#include "qtherm/errors.hpp"

namespace qtherm {

using Complex = std::complex<double>;

/// Numerical slack allowed on the purity bound |r| <= 1.
inline constexpr double kPuritySlack = 1e-12;

/// Bloch vector r = (x, y, z); the density operator is (I + r.sigma)/2.
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double purity() const { return std::sqrt(x * x + y * y + z * z); }

    bool valid(double slack = kPuritySlack) const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
               purity() <= 1.0 + slack;
    }
};

/// Field vector h defining the Hamiltonian H = -h.sigma (hbar = 1).
/// The z-field specialization h = (0, 0, -omega0) gives H = omega0 sigma_z.
struct FieldVector {
    double hx = 0.0;
    double hy = 0.0;
    double hz = 0.0;

    double magnitude() const { return std::sqrt(hx * hx + hy * hy + hz * hz); }
};

inline FieldVector z_field(double omega0) { return {0.0, 0.0, -omega0}; }

/// Dense 2x2 complex matrix, row-major. Hermiticity is not assumed.
struct ComplexMatrix2 {
    std::array<Complex, 4> m{};

    Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const Complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    static ComplexMatrix2 of(Complex a, Complex b, Complex c, Complex d) {
        ComplexMatrix2 r;
        r.m = {a, b, c, d};
        return r;
    }
    static ComplexMatrix2 zero() { return {}; }
    static ComplexMatrix2 identity() { return of(1.0, 0.0, 0.0, 1.0); }
    static ComplexMatrix2 sigma_x() { return of(0.0, 1.0, 1.0, 0.0); }
    static ComplexMatrix2 sigma_y() { return of(0.0, Complex{0, -1}, Complex{0, 1}, 0.0); }
    static ComplexMatrix2 sigma_z() { return of(1.0, 0.0, 0.0, -1.0); }
    static ComplexMatrix2 sigma_plus() { return of(0.0, 1.0, 0.0, 0.0); }
    static ComplexMatrix2 sigma_minus() { return of(0.0, 0.0, 1.0, 0.0); }

    ComplexMatrix2 adjoint() const {
        return of(std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3]));
    }

    Complex trace() const { return m[0] + m[3]; }

    double max_abs() const {
        double best = 0.0;
        for (const auto& e : m) best = std::max(best, std::abs(e));
        return best;
    }

    bool is_hermitian(double tol) const {
        return std::abs(m[0].imag()) <= tol && std::abs(m[3].imag()) <= tol &&
               std::abs(m[1] - std::conj(m[2])) <= tol;
    }

    ComplexMatrix2& operator+=(const ComplexMatrix2& o) {
        for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] += o.m[static_cast<std::size_t>(i)];
        return *this;
    }
    ComplexMatrix2& operator-=(const ComplexMatrix2& o) {
        for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] -= o.m[static_cast<std::size_t>(i)];
        return *this;
    }
    ComplexMatrix2& operator*=(Complex c) {
        for (auto& e : m) e *= c;
        return *this;
    }
};

inline ComplexMatrix2 operator+(ComplexMatrix2 a, const ComplexMatrix2& b) { return a += b; }
inline ComplexMatrix2 operator-(ComplexMatrix2 a, const ComplexMatrix2& b) { return a -= b; }
inline ComplexMatrix2 operator*(Complex c, ComplexMatrix2 a) { return a *= c; }
inline ComplexMatrix2 operator*(double c, ComplexMatrix2 a) { return a *= Complex{c}; }

inline ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    ComplexMatrix2 r;
    r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
    r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
    r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
    r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
    return r;
}

inline ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return a * b - b * a;
}

inline ComplexMatrix2 anticommutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return a * b + b * a;
}

/// Lindblad operator paired with its (possibly time-dependent, possibly
/// negative) relaxation rate.
struct LindbladTerm {
    ComplexMatrix2 op;
    std::function<double(double)> rate;
};

inline LindbladTerm constant_rate_term(const ComplexMatrix2& op, double gamma) {
    return {op, [gamma](double) { return gamma; }};
}

/// rho = (I + r.sigma)/2.
ComplexMatrix2 density_from_bloch(const BlochState& state);

/// Inverse of density_from_bloch. Throws NotAState if rho is not Hermitian
/// within 1e-10 or its trace deviates from 1 by more than 1e-10.
BlochState bloch_from_density(const ComplexMatrix2& rho);

/// H = -h.sigma.
ComplexMatrix2 hamiltonian(const FieldVector& field);

/// Orthonormal eigenvectors of H = -h.sigma. `ground` has eigenvalue -h,
/// `excited` +h. Phase convention: first nonzero component real positive.
struct EnergyEigenbasis {
    std::array<Complex, 2> ground;
    std::array<Complex, 2> excited;
};

EnergyEigenbasis energy_eigenbasis(const FieldVector& field, double tol = 1e-10);

/// Sufficient unitality check: true iff every [A_i, A_i^dag] vanishes below
/// tol (operators are normalized first, so the verdict is scale invariant).
/// A false result does not prove the map is non-unital.
bool is_unital_sufficient(std::span<const LindbladTerm> terms, double tol = 1e-10);

/// Sufficient incoherence check in the energy eigenbasis of H = -h.sigma:
/// true iff <h_n|A_i|h_k><h_k|A_i^dag|h_m> vanishes below tol for all k and
/// n != m. Throws DegenerateHamiltonian when |h| < tol.
bool is_incoherent_sufficient(std::span<const LindbladTerm> terms, const FieldVector& field,
                              double tol = 1e-10);

}  // namespace qtherm
