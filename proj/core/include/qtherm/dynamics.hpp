#pragma once

// Trajectory generators: closed-form Bloch solutions for the dissipative
// (A = sigma_x, constant gamma) and dephasing (A = sigma_z, Ohmic gamma(t))
// channels, the Ohmic rate and its decoherence factor, and a generic
// fixed-order integrator for the time-local master equation
//   drho/dt = -i[H(t), rho] + sum_i gamma_i(t) (A_i rho A_i^dag
//                                               - {A_i^dag A_i, rho}/2).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qtherm/bloch.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/trajectory.hpp"

namespace qtherm {

/// Ohmic bath parameters: ohmicity exponent s >= 0 and cutoff omega_c > 0.
struct OhmicParams {
    double s = 1.0;
    double omega_c = 1.0;
};

/// Closed-form Bloch vector of the dissipative channel with H = omega0 sigma_z
/// (field (0,0,-omega0)), A = sigma_x and constant rate gamma:
///   x(t) = e^{-gamma t}/(2w) [ax e^{wt} + bx e^{-wt}],  w = sqrt(gamma^2 - 4 omega0^2),
///   y(t) analogous, z(t) = z0 e^{-2 gamma t}.
/// Underdamped (gamma < 2 omega0) gives imaginary w; the evaluation is done in
/// complex arithmetic and the (tiny) imaginary residue dropped.
BlochState dissipative_bloch(double t, const BlochState& r0, double gamma, double omega0);

/// Raw complex-arithmetic evaluation of (x, y); exposed so tests can bound the
/// imaginary residue. z is exactly real.
std::array<std::complex<double>, 2> dissipative_bloch_complex(double t, const BlochState& r0,
                                                              double gamma, double omega0);

Trajectory dissipative_trajectory(std::span<const double> grid, const BlochState& r0, double gamma,
                                  double omega0);

/// Closed-form heat and coherence flows of the dissipative channel, valid for
/// the fixed initial state r0 = [1/2, 0, 1/2]. Real-valued in every damping
/// regime, including the critical point gamma = 2 omega0.
struct DissipativeFlows {
    double q_dot = 0.0;
    double c_dot = 0.0;
};

DissipativeFlows dissipative_flows(double t, double gamma, double omega0);

/// Fixed initial state the flow formulas are specialized to.
inline constexpr BlochState kDissipativeFlowState{0.5, 0.0, 0.5};

/// Ohmic dephasing rate
///   gamma(t, s) = [1 + (omega_c t)^2]^{-s/2} Gamma[s] sin[s arctan(omega_c t)].
/// s = 0 returns 0.
double ohmic_rate(double t, const OhmicParams& p);

/// integral of the Ohmic rate over [a, b] by adaptive quadrature.
double ohmic_rate_integral(double a, double b, const OhmicParams& p, double abs_tol = 1e-10);

/// Decoherence factor G(t) = exp(-integral_0^t gamma), adaptive quadrature to
/// abs_tol. Throws QuadratureFailure if the subdivision budget is exhausted.
double decoherence_factor(double t, const OhmicParams& p, double abs_tol = 1e-10);

/// G(t -> infinity). The tail beyond a finite horizon is integrated under the
/// substitution u = 1/t; requires s > 1 so the tail converges.
double decoherence_factor_limit(const OhmicParams& p, double abs_tol = 1e-10);

/// Cumulative-integral table for G(t) on a dense grid with monotone cubic
/// Hermite interpolation (exact node values and exact node derivatives
/// gamma(t_i)). Built once, then shared read-only; queries past t_max fall
/// back to direct quadrature from the last node.
class DecoherenceCache {
  public:
    DecoherenceCache(const OhmicParams& p, double t_max, std::size_t nodes = 10000);

    /// integral_0^t gamma.
    double gamma_integral(double t) const;
    /// G(t).
    double operator()(double t) const { return std::exp(-gamma_integral(t)); }

    const OhmicParams& params() const { return params_; }
    double t_max() const { return t_max_; }

  private:
    OhmicParams params_;
    double t_max_;
    double dt_;
    std::vector<double> integral_;  // cumulative integral at the nodes
    std::vector<double> deriv_;     // gamma at the nodes (clamped for shape)
};

/// Dephasing-channel Bloch vector r(t) = [x0 G(t), y0 G(t), z0].
BlochState dephasing_bloch(double t, const BlochState& r0, const OhmicParams& p);
BlochState dephasing_bloch(double t, const BlochState& r0, const DecoherenceCache& cache);

Trajectory dephasing_trajectory(std::span<const double> grid, const BlochState& r0,
                                const DecoherenceCache& cache);

/// Classical RK4 with per-interval substep halving until the step-doubling
/// error estimate for the interval drops below local_tol. Output samples are
/// re-Hermitized and trace-renormalized, then converted to Bloch form.
/// Throws NotAState for an invalid rho0, StepSizeUnderflow when the substep
/// budget is exhausted, GridTooCoarse for a grid with < 2 points.
Trajectory integrate_master(const std::function<ComplexMatrix2(double)>& hamiltonian_of_t,
                            std::span<const LindbladTerm> terms, const ComplexMatrix2& rho0,
                            std::span<const double> grid, double local_tol = 1e-10);

/// Same integration but returning the raw density matrices (no Hermitization
/// or renormalization applied); integrate_master is a wrapper over this.
std::vector<ComplexMatrix2> integrate_master_density(
    const std::function<ComplexMatrix2(double)>& hamiltonian_of_t,
    std::span<const LindbladTerm> terms, const ComplexMatrix2& rho0, std::span<const double> grid,
    double local_tol = 1e-10);

}  // namespace qtherm
