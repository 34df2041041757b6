#pragma once

// Thermodynamic functionals of a qubit state in a field h (H = -h.sigma):
//
//   U        = -h.r                          internal energy
//   dQ_std   = -h.dr,    dW_std = -r.dh      standard heat/work split
//   dQ_ent   = U_r dr,   dW_ent = r dU_r     entropy-based split (U_r = U/r)
//   dW_star  = -r h hhat.d(rhat)             eigenvector-rotation work
//   C        = r sqrt(1 - U_r^2/h^2)         l1 coherence in the H eigenbasis
//   S        = von Neumann entropy, eigenvalues (1 +/- r)/2, k_B = 1
//
// Both splits satisfy dU = dQ + dW, and dW_ent = dW_std + dW_star.

#include <functional>
#include <vector>

#include "qtherm/bloch.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/trajectory.hpp"

namespace qtherm {

/// Cumulative thermodynamic ledger at one time sample.
struct ThermoSample {
    double t = 0.0;
    BlochState state;
    double r = 0.0;
    double U = 0.0;
    double Q_std = 0.0;
    double W_std = 0.0;
    double Q_ent = 0.0;
    double W_ent = 0.0;
    double W_star = 0.0;
    double C = 0.0;
    double S = 0.0;
    /// True when the entropy-based rates were zeroed at (numerically)
    /// vanishing purity instead of evaluating U/r.
    bool purity_degenerate = false;
};

struct ThermoTrajectory {
    std::vector<ThermoSample> samples;
};

double internal_energy(const BlochState& state, const FieldVector& field);

/// Entropy of a qubit with purity r; S(1) = 0 is taken as the limit.
double entropy_from_purity(double r);
double entropy(const BlochState& state);

/// l1 coherence via C = r sqrt(max(0, 1 - U_r^2/h^2)); 0 at r = 0.
/// Throws DegenerateHamiltonian when h = 0.
double coherence(const BlochState& state, const FieldVector& field);

struct FlowRates {
    double dU = 0.0;
    double dQ_std = 0.0;
    double dW_std = 0.0;
    double dQ_ent = 0.0;
    double dW_ent = 0.0;
    double dW_star = 0.0;
};

/// Instantaneous rates given the state/field and their time derivatives.
/// Throws PurityZero when r < 1e-14 (U_r and rhat are then undefined) and
/// DegenerateHamiltonian when h = 0 (needed by dW_star).
FlowRates flow_rates(const BlochState& state, const BlochState& dstate, const FieldVector& field,
                     const FieldVector& dfield);

/// Cumulative ledger along a trajectory. Derivatives are estimated by central
/// differences (second-order one-sided at the endpoints) and integrated with
/// the trapezoidal rule; samples with vanishing purity get zeroed
/// entropy-based rates and a degeneracy flag. Throws GridTooCoarse for fewer
/// than 2 samples.
ThermoTrajectory accumulate(const Trajectory& traj,
                            const std::function<FieldVector(double)>& field_of_t);
ThermoTrajectory accumulate(const Trajectory& traj, const FieldVector& field);

/// Heat of an isochoric process (U_r held fixed): Q = U_r (r - r0).
double isochoric_heat(double r, double r0, double U_r);

/// Heat of a non-dissipative process (U held fixed):
/// Q = -W = U ln sqrt((C^2 + U^2/h^2) / (C0^2 + U^2/h^2)).
/// Throws UndefinedLimit when C = C0 = 0 and U = 0.
double nondissipative_heat(double C, double C0, double U, double h);

/// Closed-form dephasing heat
/// Q(t) = omega0 z_r0 r0 ln sqrt(G^2 + (1 - G^2) z_r0^2), G = decoherence(t).
double dephasing_heat(double t, const std::function<double(double)>& decoherence, double z_r0,
                      double r0, double omega0);

}  // namespace qtherm
