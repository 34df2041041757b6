#include "qtherm/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "qtherm/quadrature.hpp"

namespace qtherm {

namespace {

using Cx = std::complex<double>;

// sinh(x)/x, series near 0.
Cx sinhc(Cx x) {
    if (std::abs(x) < 1e-4) {
        const Cx x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

// c1(u) = (cosh(2 w t) - 1) / (2 w^2 t^2) with u = w^2 t^2 (real, any sign),
// multiplied by exp(-decay). The u > 0 branch folds the decay into the
// exponentials so large w t cannot overflow (requires decay >= 2 sqrt(u)).
double c1_scaled(double u, double decay) {
    if (std::abs(u) < 1e-12) {
        return (1.0 + u / 3.0 + 2.0 * u * u / 45.0) * std::exp(-decay);
    }
    if (u < 0.0) {
        const double a = 2.0 * std::sqrt(-u);
        return (1.0 - std::cos(a)) / (-2.0 * u) * std::exp(-decay);
    }
    const double a = 2.0 * std::sqrt(u);
    return (std::exp(a - decay) + std::exp(-a - decay) - 2.0 * std::exp(-decay)) / (4.0 * u);
}

}  // namespace

std::array<Cx, 2> dissipative_bloch_complex(double t, const BlochState& r0, double gamma,
                                            double omega0) {
    const Cx w = std::sqrt(Cx{gamma * gamma - 4.0 * omega0 * omega0, 0.0});

    if (std::abs(w) < 1e-8 * omega0) {
        // Removable singularity at gamma = 2 omega0: secular (linear-in-t)
        // limit of sinh(w t)/w.
        const Cx wt = w * t;
        const Cx ch = std::cosh(wt);
        const Cx sc = t * sinhc(wt);
        const double damp = std::exp(-gamma * t);
        const Cx x = damp * (r0.x * ch + (gamma * r0.x - 2.0 * omega0 * r0.y) * sc);
        const Cx y = damp * (r0.y * ch + (-gamma * r0.y + 2.0 * omega0 * r0.x) * sc);
        return {x, y};
    }

    const Cx ax = w * r0.x + gamma * r0.x - 2.0 * omega0 * r0.y;
    const Cx bx = w * r0.x - gamma * r0.x + 2.0 * omega0 * r0.y;
    const Cx ay = w * r0.y - gamma * r0.y + 2.0 * omega0 * r0.x;
    const Cx by = w * r0.y + gamma * r0.y - 2.0 * omega0 * r0.x;

    // e^{-gamma t} e^{+-w t} combined so both exponents decay for real w.
    const Cx ep = std::exp((w - gamma) * t);
    const Cx em = std::exp(-(w + gamma) * t);
    const Cx x = (ax * ep + bx * em) / (2.0 * w);
    const Cx y = (ay * ep + by * em) / (2.0 * w);
    return {x, y};
}

BlochState dissipative_bloch(double t, const BlochState& r0, double gamma, double omega0) {
    const auto xy = dissipative_bloch_complex(t, r0, gamma, omega0);
    return {xy[0].real(), xy[1].real(), r0.z * std::exp(-2.0 * gamma * t)};
}

Trajectory dissipative_trajectory(std::span<const double> grid, const BlochState& r0, double gamma,
                                  double omega0) {
    Trajectory traj;
    traj.times.assign(grid.begin(), grid.end());
    traj.states.reserve(grid.size());
    for (double t : grid) traj.states.push_back(dissipative_bloch(t, r0, gamma, omega0));
    return traj;
}

DissipativeFlows dissipative_flows(double t, double gamma, double omega0) {
    const BlochState rt = dissipative_bloch(t, kDissipativeFlowState, gamma, omega0);
    const double r2 = rt.x * rt.x + rt.y * rt.y + rt.z * rt.z;
    const double coh = std::sqrt(rt.x * rt.x + rt.y * rt.y);

    const double u = (gamma * gamma - 4.0 * omega0 * omega0) * t * t;
    const double gt = gamma * t;

    DissipativeFlows out;
    // Heat flow: the closed form reduced by the identity
    // denominator = 4 w^2 r(t)^2 e^{2 gamma t}; the w^2 factors cancel.
    out.q_dot = -omega0 * gamma *
                (4.0 * omega0 * omega0 * t * t * c1_scaled(u, 4.0 * gt) + std::exp(-6.0 * gt)) /
                (4.0 * r2);
    // Coherence flow: denominator w sqrt(E) = 2 w^2 C(t) e^{gamma t}.
    out.c_dot = -2.0 * omega0 * omega0 * gamma * t * t * c1_scaled(u, 2.0 * gt) / coh;
    return out;
}

double ohmic_rate(double t, const OhmicParams& p) {
    if (p.s == 0.0) return 0.0;
    const double u = p.omega_c * t;
    return std::pow(1.0 + u * u, -0.5 * p.s) * std::tgamma(p.s) * std::sin(p.s * std::atan(u));
}

double ohmic_rate_integral(double a, double b, const OhmicParams& p, double abs_tol) {
    if (p.s == 0.0) return 0.0;
    return integrate_adaptive([&p](double t) { return ohmic_rate(t, p); }, a, b, abs_tol);
}

double decoherence_factor(double t, const OhmicParams& p, double abs_tol) {
    return std::exp(-ohmic_rate_integral(0.0, t, p, abs_tol));
}

double decoherence_factor_limit(const OhmicParams& p, double abs_tol) {
    if (p.s <= 1.0) {
        throw UndefinedLimit("decoherence factor limit requires s > 1");
    }
    const double head_end = 100.0 / p.omega_c;
    const double head = ohmic_rate_integral(0.0, head_end, p, 0.5 * abs_tol);
    // Tail under u = 1/t: integral_{T}^{inf} gamma(t) dt
    //   = integral_0^{1/T} gamma(1/u) / u^2 du, integrable for s > 1.
    const double tail = integrate_adaptive(
        [&p](double u) { return ohmic_rate(1.0 / u, p) / (u * u); }, 0.0, 1.0 / head_end,
        0.5 * abs_tol);
    return std::exp(-(head + tail));
}

DecoherenceCache::DecoherenceCache(const OhmicParams& p, double t_max, std::size_t nodes)
    : params_(p), t_max_(t_max) {
    if (nodes < 2) throw GridTooCoarse("decoherence cache needs at least 2 nodes");
    if (!(t_max > 0.0)) throw Error("decoherence cache span must be positive");
    dt_ = t_max / static_cast<double>(nodes - 1);
    integral_.resize(nodes);
    deriv_.resize(nodes);
    integral_[0] = 0.0;
    deriv_[0] = ohmic_rate(0.0, p);
    auto f = [&p](double t) { return ohmic_rate(t, p); };
    for (std::size_t i = 1; i < nodes; ++i) {
        const double a = dt_ * static_cast<double>(i - 1);
        const double b = dt_ * static_cast<double>(i);
        double err = 0.0;
        double piece = gauss_kronrod_15(f, a, b, &err);
        if (err > 1e-13) piece = integrate_adaptive(f, a, b, 1e-13);
        integral_[i] = integral_[i - 1] + piece;
        deriv_[i] = ohmic_rate(b, p);
    }
}

double DecoherenceCache::gamma_integral(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= t_max_) {
        if (t == t_max_) return integral_.back();
        return integral_.back() + ohmic_rate_integral(t_max_, t, params_, 1e-10);
    }
    const auto n = integral_.size();
    std::size_t i = std::min(static_cast<std::size_t>(t / dt_), n - 2);
    const double t0 = dt_ * static_cast<double>(i);
    const double th = (t - t0) / dt_;

    const double y0 = integral_[i];
    const double y1 = integral_[i + 1];
    double d0 = deriv_[i];
    double d1 = deriv_[i + 1];

    // Fritsch-Carlson overshoot guard; with exact derivatives on a dense grid
    // this only ever activates on degenerate (flat) intervals.
    const double delta = (y1 - y0) / dt_;
    if (delta != 0.0) {
        const double alpha = d0 / delta;
        const double beta = d1 / delta;
        if (alpha > 0.0 && beta > 0.0) {
            const double norm = alpha * alpha + beta * beta;
            if (norm > 9.0) {
                const double scale = 3.0 / std::sqrt(norm);
                d0 *= scale;
                d1 *= scale;
            }
        }
    }

    const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    const double h10 = th * (1.0 - th) * (1.0 - th);
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    return h00 * y0 + h10 * dt_ * d0 + h01 * y1 + h11 * dt_ * d1;
}

BlochState dephasing_bloch(double t, const BlochState& r0, const OhmicParams& p) {
    const double g = decoherence_factor(t, p);
    return {r0.x * g, r0.y * g, r0.z};
}

BlochState dephasing_bloch(double t, const BlochState& r0, const DecoherenceCache& cache) {
    const double g = cache(t);
    return {r0.x * g, r0.y * g, r0.z};
}

Trajectory dephasing_trajectory(std::span<const double> grid, const BlochState& r0,
                                const DecoherenceCache& cache) {
    Trajectory traj;
    traj.times.assign(grid.begin(), grid.end());
    traj.states.reserve(grid.size());
    for (double t : grid) traj.states.push_back(dephasing_bloch(t, r0, cache));
    return traj;
}

namespace {

struct PreparedTerm {
    ComplexMatrix2 op;
    ComplexMatrix2 op_dag;
    ComplexMatrix2 op_dag_op;
    const std::function<double(double)>* rate;
};

ComplexMatrix2 liouville(double t, const ComplexMatrix2& rho,
                         const std::function<ComplexMatrix2(double)>& h_of_t,
                         const std::vector<PreparedTerm>& terms) {
    const ComplexMatrix2 h = h_of_t(t);
    ComplexMatrix2 out = Cx{0.0, -1.0} * commutator(h, rho);
    for (const auto& term : terms) {
        const double g = (*term.rate)(t);
        if (g == 0.0) continue;
        out += g * (term.op * rho * term.op_dag - 0.5 * anticommutator(term.op_dag_op, rho));
    }
    return out;
}

ComplexMatrix2 rk4_span(const ComplexMatrix2& start, double t0, double t1, std::size_t substeps,
                        const std::function<ComplexMatrix2(double)>& h_of_t,
                        const std::vector<PreparedTerm>& terms) {
    ComplexMatrix2 y = start;
    const double h = (t1 - t0) / static_cast<double>(substeps);
    for (std::size_t i = 0; i < substeps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const ComplexMatrix2 k1 = liouville(t, y, h_of_t, terms);
        const ComplexMatrix2 k2 = liouville(t + 0.5 * h, y + (0.5 * h) * k1, h_of_t, terms);
        const ComplexMatrix2 k3 = liouville(t + 0.5 * h, y + (0.5 * h) * k2, h_of_t, terms);
        const ComplexMatrix2 k4 = liouville(t + h, y + h * k3, h_of_t, terms);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace

std::vector<ComplexMatrix2> integrate_master_density(
    const std::function<ComplexMatrix2(double)>& hamiltonian_of_t,
    std::span<const LindbladTerm> terms, const ComplexMatrix2& rho0, std::span<const double> grid,
    double local_tol) {
    if (grid.size() < 2) throw GridTooCoarse("integration grid needs at least 2 points");
    if (std::abs(grid[0]) > 1e-12) throw Error("integration grid must start at t = 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw Error("integration grid must be strictly increasing");
    }
    if (!rho0.is_hermitian(1e-10) || std::abs(rho0.trace() - Cx{1.0}) > 1e-10) {
        throw NotAState("rho0 fails the hermiticity/trace check");
    }
    if (bloch_from_density(rho0).purity() > 1.0 + 1e-10) {
        throw NotAState("rho0 has purity above 1");
    }

    std::vector<PreparedTerm> prepared;
    prepared.reserve(terms.size());
    for (const auto& t : terms) {
        prepared.push_back({t.op, t.op.adjoint(), t.op.adjoint() * t.op, &t.rate});
    }

    constexpr std::size_t kMaxSubsteps = std::size_t{1} << 20;

    std::vector<ComplexMatrix2> out;
    out.reserve(grid.size());
    out.push_back(rho0);
    ComplexMatrix2 rho = rho0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t0 = grid[i - 1];
        const double t1 = grid[i];
        std::size_t n = 1;
        ComplexMatrix2 coarse = rk4_span(rho, t0, t1, n, hamiltonian_of_t, prepared);
        for (;;) {
            const ComplexMatrix2 fine = rk4_span(rho, t0, t1, 2 * n, hamiltonian_of_t, prepared);
            double err = (fine - coarse).max_abs() / 15.0;
            for (const auto& e : fine.m) {
                if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
                    err = std::numeric_limits<double>::infinity();
                }
            }
            if (err < local_tol) {
                rho = fine;
                break;
            }
            n *= 2;
            if (2 * n > kMaxSubsteps) {
                throw StepSizeUnderflow("substep budget exhausted before meeting local tolerance");
            }
            coarse = fine;
        }
        out.push_back(rho);
    }
    return out;
}

Trajectory integrate_master(const std::function<ComplexMatrix2(double)>& hamiltonian_of_t,
                            std::span<const LindbladTerm> terms, const ComplexMatrix2& rho0,
                            std::span<const double> grid, double local_tol) {
    const auto densities = integrate_master_density(hamiltonian_of_t, terms, rho0, grid, local_tol);
    Trajectory traj;
    traj.times.assign(grid.begin(), grid.end());
    traj.states.reserve(densities.size());
    for (const auto& rho : densities) {
        ComplexMatrix2 herm = 0.5 * (rho + rho.adjoint());
        const double tr = herm.trace().real();
        herm *= Cx{1.0 / tr, 0.0};
        traj.states.push_back(bloch_from_density(herm));
    }
    return traj;
}

}  // namespace qtherm
