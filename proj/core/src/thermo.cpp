#include "qtherm/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace qtherm {

namespace {

constexpr double kPurityFloor = 1e-14;

double dot(double ax, double ay, double az, double bx, double by, double bz) {
    return ax * bx + ay * by + az * bz;
}

}  // namespace

double internal_energy(const BlochState& s, const FieldVector& h) {
    return -(h.hx * s.x + h.hy * s.y + h.hz * s.z);
}

double entropy_from_purity(double r) {
    r = std::clamp(r, 0.0, 1.0);
    const double p = (1.0 + r) / 2.0;
    const double q = (1.0 - r) / 2.0;
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (q > 0.0) s -= q * std::log(q);
    return s;
}

double entropy(const BlochState& state) { return entropy_from_purity(state.purity()); }

double coherence(const BlochState& state, const FieldVector& field) {
    const double h = field.magnitude();
    if (h == 0.0) throw DegenerateHamiltonian("coherence requires h > 0");
    const double r = state.purity();
    if (r == 0.0) return 0.0;
    const double u_r = internal_energy(state, field) / r;
    // |U_r| <= h analytically; rounding can push the radicand slightly below 0.
    const double radicand = std::max(0.0, 1.0 - (u_r / h) * (u_r / h));
    return r * std::sqrt(radicand);
}

FlowRates flow_rates(const BlochState& s, const BlochState& ds, const FieldVector& h,
                     const FieldVector& dh) {
    FlowRates out;
    out.dQ_std = -dot(h.hx, h.hy, h.hz, ds.x, ds.y, ds.z);
    out.dW_std = -dot(s.x, s.y, s.z, dh.hx, dh.hy, dh.hz);
    out.dU = out.dQ_std + out.dW_std;

    const double r = s.purity();
    if (r < kPurityFloor) {
        throw PurityZero("entropy-based rates undefined at zero purity");
    }
    const double hmag = h.magnitude();
    if (hmag == 0.0) throw DegenerateHamiltonian("dW_star requires h > 0");

    const double u = internal_energy(s, h);
    const double u_r = u / r;
    const double rdot = dot(s.x, s.y, s.z, ds.x, ds.y, ds.z) / r;
    out.dQ_ent = u_r * rdot;

    // r dU_r/dt written as dU - U_r rdot keeps dU = dQ_ent + dW_ent exact.
    out.dW_ent = out.dU - u_r * rdot;

    // dW_star = -r h hhat . d(rhat)/dt with d(rhat)/dt = (dr - rhat rdot)/r.
    const double hx = h.hx / hmag, hy = h.hy / hmag, hz = h.hz / hmag;
    const double rhx = s.x / r, rhy = s.y / r, rhz = s.z / r;
    const double h_dot_ds = dot(hx, hy, hz, ds.x, ds.y, ds.z);
    const double h_dot_rh = dot(hx, hy, hz, rhx, rhy, rhz);
    out.dW_star = -hmag * (h_dot_ds - h_dot_rh * rdot);
    return out;
}

ThermoTrajectory accumulate(const Trajectory& traj,
                            const std::function<FieldVector(double)>& field_of_t) {
    traj.validate();
    const std::size_t n = traj.size();
    if (n < 2) throw GridTooCoarse("accumulate needs at least 2 samples");

    std::vector<FieldVector> fields(n);
    for (std::size_t i = 0; i < n; ++i) fields[i] = field_of_t(traj.times[i]);

    // Central differences inside, second-order one-sided at the ends.
    // Written as differences of differences so constant data differentiates
    // to exactly zero.
    auto rate_1d = [&](std::size_t i, auto&& get) -> double {
        const auto& t = traj.times;
        if (n == 2) return (get(1) - get(0)) / (t[1] - t[0]);
        if (i == 0) {
            return (4.0 * (get(1) - get(0)) - (get(2) - get(0))) / (2.0 * (t[1] - t[0]));
        }
        if (i == n - 1) {
            return (4.0 * (get(n - 1) - get(n - 2)) - (get(n - 1) - get(n - 3))) /
                   (2.0 * (t[n - 1] - t[n - 2]));
        }
        return (get(i + 1) - get(i - 1)) / (t[i + 1] - t[i - 1]);
    };
    auto state_rate = [&](std::size_t i) -> BlochState {
        const auto& st = traj.states;
        return {rate_1d(i, [&](std::size_t j) { return st[j].x; }),
                rate_1d(i, [&](std::size_t j) { return st[j].y; }),
                rate_1d(i, [&](std::size_t j) { return st[j].z; })};
    };
    auto field_rate = [&](std::size_t i) -> FieldVector {
        return {rate_1d(i, [&](std::size_t j) { return fields[j].hx; }),
                rate_1d(i, [&](std::size_t j) { return fields[j].hy; }),
                rate_1d(i, [&](std::size_t j) { return fields[j].hz; })};
    };

    std::vector<FlowRates> rates(n);
    std::vector<bool> degenerate(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const BlochState ds = state_rate(i);
        const FieldVector df = field_rate(i);
        if (traj.states[i].purity() < kPurityFloor) {
            // U_r is singular at the maximally mixed point; zero the
            // entropy-based rates and flag the sample.
            FlowRates fr;
            fr.dQ_std = -dot(fields[i].hx, fields[i].hy, fields[i].hz, ds.x, ds.y, ds.z);
            fr.dW_std = -dot(traj.states[i].x, traj.states[i].y, traj.states[i].z, df.hx, df.hy,
                             df.hz);
            fr.dU = fr.dQ_std + fr.dW_std;
            rates[i] = fr;
            degenerate[i] = true;
        } else {
            rates[i] = flow_rates(traj.states[i], ds, fields[i], df);
        }
    }

    ThermoTrajectory out;
    out.samples.resize(n);
    double q_std = 0.0, w_std = 0.0, q_ent = 0.0, w_ent = 0.0, w_star = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double half_dt = 0.5 * (traj.times[i] - traj.times[i - 1]);
            q_std += half_dt * (rates[i - 1].dQ_std + rates[i].dQ_std);
            w_std += half_dt * (rates[i - 1].dW_std + rates[i].dW_std);
            q_ent += half_dt * (rates[i - 1].dQ_ent + rates[i].dQ_ent);
            w_ent += half_dt * (rates[i - 1].dW_ent + rates[i].dW_ent);
            w_star += half_dt * (rates[i - 1].dW_star + rates[i].dW_star);
        }
        ThermoSample& smp = out.samples[i];
        smp.t = traj.times[i];
        smp.state = traj.states[i];
        smp.r = traj.states[i].purity();
        smp.U = internal_energy(traj.states[i], fields[i]);
        smp.Q_std = q_std;
        smp.W_std = w_std;
        smp.Q_ent = q_ent;
        smp.W_ent = w_ent;
        smp.W_star = w_star;
        smp.C = coherence(traj.states[i], fields[i]);
        smp.S = entropy_from_purity(smp.r);
        smp.purity_degenerate = degenerate[i];
    }
    return out;
}

ThermoTrajectory accumulate(const Trajectory& traj, const FieldVector& field) {
    return accumulate(traj, [field](double) { return field; });
}

double isochoric_heat(double r, double r0, double U_r) { return U_r * (r - r0); }

double nondissipative_heat(double C, double C0, double U, double h) {
    if (h <= 0.0) throw DegenerateHamiltonian("nondissipative_heat requires h > 0");
    if (U == 0.0) {
        if (C == 0.0 && C0 == 0.0) {
            throw UndefinedLimit("nondissipative_heat undefined at C = C0 = 0, U = 0");
        }
        return 0.0;
    }
    const double u2 = (U / h) * (U / h);
    return 0.5 * U * (std::log(C * C + u2) - std::log(C0 * C0 + u2));
}

double dephasing_heat(double t, const std::function<double(double)>& decoherence, double z_r0,
                      double r0, double omega0) {
    const double g = decoherence(t);
    return 0.5 * omega0 * z_r0 * r0 * std::log(g * g + (1.0 - g * g) * z_r0 * z_r0);
}

}  // namespace qtherm
