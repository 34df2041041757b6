#pragma once

// Non-Markovianity via breakdown of monotonicity: interval detection on a
// sampled monotone witness F(t), the measure sum_k |F(t_f^k) - F(t_i^k)|,
// maximization over initial states, and the dephasing-channel closed forms
// N_Q(s), N_C(s) built from the zero crossings of the Ohmic rate.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qtherm/bloch.hpp"
#include "qtherm/dynamics.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/trajectory.hpp"

namespace qtherm {

struct Interval {
    double t_begin = 0.0;
    double t_end = 0.0;
};

/// Disjoint, sorted intervals on which sgn(dF/dt) = -alpha.
using SignIntervals = std::vector<Interval>;

/// Intervals where the central-difference derivative of F has sign -alpha
/// beyond the deadband eps_flow. Interior endpoints are refined by bisection
/// on the piecewise-linear interpolated derivative; intervals narrower than
/// min_width, and runs supported by nothing but a single boundary sample
/// (only the one-sided estimate), are discarded. Throws GridTooCoarse for
/// fewer than 3 samples.
SignIntervals detect_intervals(std::span<const double> t, std::span<const double> f, int alpha,
                               double eps_flow, double min_width);

/// sum_k |F(t_f^k) - F(t_i^k)| with endpoint values linearly interpolated.
double measure_from_intervals(std::span<const double> t, std::span<const double> f,
                              const SignIntervals& intervals);

/// Measure value with the optimizing initial state, the violation intervals
/// found there, and the monotonicity direction used. `skipped_states` counts
/// search states whose direction rule was ambiguous (e.g. sgn U = 0).
struct MeasureResult {
    double value = 0.0;
    BlochState optimizer;
    SignIntervals intervals;
    int alpha = 0;
    std::size_t skipped_states = 0;
};

/// Bloch-sphere search grid: purity shells x polar x azimuth, then iterated
/// local halving around the incumbent until the refinement converges.
struct StateSearchGrid {
    std::vector<double> purities{0.25, 0.5, 0.75, 1.0};
    std::size_t polar_steps = 25;
    std::size_t azimuth_steps = 12;
    std::size_t max_refine_levels = 12;
    double eps_flow_scale = 1e-9;  // deadband = scale * max|F|
    double min_width = 1e-6;
};

using TrajectoryGenerator = std::function<Trajectory(const BlochState&)>;
using SeriesFunctional = std::function<std::vector<double>(const Trajectory&)>;

/// Monotonicity direction for a given initial state: +1 (increasing under
/// divisible maps), -1 (decreasing), or 0 to skip the state.
using AlphaRule = std::function<int(const BlochState&)>;

MeasureResult measure_general(const TrajectoryGenerator& channel, const SeriesFunctional& functional,
                              const AlphaRule& alpha_rule, const StateSearchGrid& search = {});

/// Direction rules. Heat decreases (increases) under divisible dynamics when
/// U0 > 0 (U0 < 0); states with U0 = 0 are skipped.
AlphaRule heat_alpha_rule(const FieldVector& field, double tol = 1e-12);
AlphaRule coherence_alpha_rule();
AlphaRule entropy_alpha_rule();

/// Series evaluators over a trajectory.
SeriesFunctional heat_series(const FieldVector& field);
SeriesFunctional coherence_series(const FieldVector& field);
SeriesFunctional entropy_series();

/// Sign-change points of the Ohmic rate: t = tan(k pi / s)/omega_c for
/// integer k with 2k < s, preceded by t_0 = 0. When the rate stays negative
/// beyond the last finite zero, a trailing +infinity marks the open-ended
/// crossing. The rate is negative exactly on consecutive pairs
/// (t_1, t_2), (t_3, t_4), ... of the returned list past the leading zero.
std::vector<double> gamma_zero_crossings(const OhmicParams& p);

struct NqResult {
    double value = 0.0;
    double z_max = 0.0;  // NaN when the measure vanishes identically (s <= 2)
};

/// Heat-based measure for the Ohmic dephasing channel, maximized over the
/// initial |z0| at purity 1 (golden-section seeded from a 200-point scan).
NqResult nq_of_s(const OhmicParams& p, double omega0);

/// Coherence-based measure: sum of decoherence-factor gains over the
/// negative-rate windows.
double nc_of_s(const OhmicParams& p);

struct SweepRow {
    double s = 0.0;
    double n_q = 0.0;
    double n_c = 0.0;
    double z_max = 0.0;
};

/// Measures over an s-grid; rows with s <= 2 carry zeros. jobs = 0 picks the
/// available hardware parallelism; the output order is by s regardless.
std::vector<SweepRow> sweep_measures(double s_min, double s_max, double s_step, double omega_c,
                                     double omega0, unsigned jobs = 0);

}  // namespace qtherm
