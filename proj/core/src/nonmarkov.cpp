#include "qtherm/nonmarkov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "qtherm/thermo.hpp"

namespace qtherm {

namespace {

std::vector<double> derivative_estimates(std::span<const double> t, std::span<const double> f) {
    const std::size_t n = t.size();
    std::vector<double> d(n);
    // Differences first: a constant series must give exactly zero.
    d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * (t[1] - t[0]));
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (t[i + 1] - t[i - 1]);
    d[n - 1] =
        (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * (t[n - 1] - t[n - 2]));
    return d;
}

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

// Bisection for the point in [a, b] where the interpolated derivative crosses
// the deadband edge `level`; g(a) and g(b) straddle it by construction.
double refine_crossing(std::span<const double> t, std::span<const double> d, double a, double b,
                       double level) {
    auto g = [&](double x) { return interp_linear(t, d, x) - level; };
    double ga = g(a);
    const double span = t.back() - t.front();
    for (int iter = 0; iter < 200 && (b - a) > 1e-13 * span; ++iter) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if ((ga <= 0.0) == (gm <= 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

SignIntervals detect_intervals(std::span<const double> t, std::span<const double> f, int alpha,
                               double eps_flow, double min_width) {
    if (t.size() < 3) throw GridTooCoarse("interval detection needs at least 3 samples");
    if (t.size() != f.size()) throw Error("series size mismatch");
    if (alpha != 1 && alpha != -1) throw SignAmbiguous("alpha must be +1 or -1");

    const std::vector<double> d = derivative_estimates(t, f);
    const int target = -alpha;
    auto sign_of = [&](double v) -> int {
        if (v > eps_flow) return 1;
        if (v < -eps_flow) return -1;
        return 0;
    };

    SignIntervals out;
    const std::size_t n = t.size();
    // The deadband edge the derivative crosses when entering a violation run.
    const double level = target > 0 ? eps_flow : -eps_flow;
    std::size_t i = 0;
    while (i < n) {
        if (sign_of(d[i]) != target) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && sign_of(d[j + 1]) == target) ++j;

        // A run supported only by a single boundary sample rests entirely on
        // the one-sided estimate, whose O(h^2) bias can fake a sign at a
        // stationary endpoint; it is below resolution.
        if (i == j && (i == 0 || j == n - 1)) {
            i = j + 1;
            continue;
        }

        Interval interval;
        interval.t_begin = (i == 0) ? t[0] : refine_crossing(t, d, t[i - 1], t[i], level);
        interval.t_end = (j == n - 1) ? t[n - 1] : refine_crossing(t, d, t[j], t[j + 1], level);
        if (interval.t_end - interval.t_begin >= min_width) out.push_back(interval);
        i = j + 1;
    }
    return out;
}

double measure_from_intervals(std::span<const double> t, std::span<const double> f,
                              const SignIntervals& intervals) {
    double total = 0.0;
    for (const auto& iv : intervals) {
        total += std::abs(interp_linear(t, f, iv.t_end) - interp_linear(t, f, iv.t_begin));
    }
    return total;
}

AlphaRule heat_alpha_rule(const FieldVector& field, double tol) {
    return [field, tol](const BlochState& r0) -> int {
        const double u0 = internal_energy(r0, field);
        if (std::abs(u0) <= tol) return 0;
        return u0 > 0.0 ? -1 : 1;
    };
}

AlphaRule coherence_alpha_rule() {
    return [](const BlochState&) { return -1; };
}

AlphaRule entropy_alpha_rule() {
    return [](const BlochState&) { return 1; };
}

SeriesFunctional heat_series(const FieldVector& field) {
    return [field](const Trajectory& traj) {
        const std::size_t n = traj.size();
        if (n < 3) throw GridTooCoarse("heat series needs at least 3 samples");
        std::vector<double> r(n), u(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = traj.states[i].purity();
            u[i] = internal_energy(traj.states[i], field);
        }
        const std::vector<double> rdot = derivative_estimates(traj.times, r);
        std::vector<double> rate(n);
        for (std::size_t i = 0; i < n; ++i) {
            rate[i] = r[i] < 1e-14 ? 0.0 : (u[i] / r[i]) * rdot[i];
        }
        std::vector<double> q(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            q[i] = q[i - 1] + 0.5 * (traj.times[i] - traj.times[i - 1]) * (rate[i - 1] + rate[i]);
        }
        return q;
    };
}

SeriesFunctional coherence_series(const FieldVector& field) {
    return [field](const Trajectory& traj) {
        std::vector<double> c(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i) c[i] = coherence(traj.states[i], field);
        return c;
    };
}

SeriesFunctional entropy_series() {
    return [](const Trajectory& traj) {
        std::vector<double> s(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i) s[i] = entropy(traj.states[i]);
        return s;
    };
}

namespace {

struct Evaluation {
    double value = 0.0;
    SignIntervals intervals;
    int alpha = 0;
};

std::optional<Evaluation> evaluate_state(const BlochState& r0, const TrajectoryGenerator& channel,
                                         const SeriesFunctional& functional,
                                         const AlphaRule& alpha_rule, const StateSearchGrid& search,
                                         std::size_t& skipped) {
    const int alpha = alpha_rule(r0);
    if (alpha == 0) {
        ++skipped;
        return std::nullopt;
    }
    const Trajectory traj = channel(r0);
    const std::vector<double> f = functional(traj);
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    const double eps = search.eps_flow_scale * fmax;
    Evaluation ev;
    ev.alpha = alpha;
    ev.intervals = detect_intervals(traj.times, f, alpha, eps, search.min_width);
    ev.value = measure_from_intervals(traj.times, f, ev.intervals);
    return ev;
}

BlochState spherical_state(double r, double theta, double phi) {
    return {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
            r * std::cos(theta)};
}

}  // namespace

MeasureResult measure_general(const TrajectoryGenerator& channel, const SeriesFunctional& functional,
                              const AlphaRule& alpha_rule, const StateSearchGrid& search) {
    if (search.purities.empty() || search.polar_steps < 2 || search.azimuth_steps < 1) {
        throw Error("state search grid is empty");
    }
    constexpr double pi = std::numbers::pi;

    MeasureResult best;
    best.value = -1.0;
    std::size_t skipped = 0;
    double best_r = 0.0, best_theta = 0.0, best_phi = 0.0;

    auto consider = [&](double r, double theta, double phi) {
        const BlochState state = spherical_state(r, theta, phi);
        if (!state.valid()) return;
        const auto ev = evaluate_state(state, channel, functional, alpha_rule, search, skipped);
        if (ev && ev->value > best.value) {
            best.value = ev->value;
            best.optimizer = state;
            best.intervals = ev->intervals;
            best.alpha = ev->alpha;
            best_r = r;
            best_theta = theta;
            best_phi = phi;
        }
    };

    const double dtheta = pi / static_cast<double>(search.polar_steps - 1);
    const double dphi = 2.0 * pi / static_cast<double>(search.azimuth_steps);
    for (double r : search.purities) {
        for (std::size_t j = 0; j < search.polar_steps; ++j) {
            const double theta = dtheta * static_cast<double>(j);
            const bool pole = (j == 0 || j + 1 == search.polar_steps);
            const std::size_t kmax = pole ? 1 : search.azimuth_steps;
            for (std::size_t k = 0; k < kmax; ++k) consider(r, theta, dphi * static_cast<double>(k));
        }
    }

    // Local subdivision around the incumbent, halving the step each level
    // until the improvement stalls.
    double half_r = 0.0;
    if (search.purities.size() > 1) {
        double spacing = 0.0;
        auto sorted = search.purities;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            spacing = std::max(spacing, sorted[i] - sorted[i - 1]);
        }
        half_r = 0.5 * spacing;
    }
    double half_theta = 0.5 * dtheta;
    double half_phi = 0.5 * dphi;
    // Keep halving even through stalled levels: a sharp optimizer between
    // grid points improves again once the step drops below its scale.
    for (std::size_t level = 0; level < search.max_refine_levels; ++level) {
        for (int ir = -1; ir <= 1; ++ir) {
            for (int it = -1; it <= 1; ++it) {
                for (int ip = -1; ip <= 1; ++ip) {
                    if (ir == 0 && it == 0 && ip == 0) continue;
                    const double r = std::clamp(best_r + ir * half_r, 0.0, 1.0);
                    const double theta = std::clamp(best_theta + it * half_theta, 0.0, pi);
                    const double phi = best_phi + ip * half_phi;
                    consider(r, theta, phi);
                }
            }
        }
        half_r *= 0.5;
        half_theta *= 0.5;
        half_phi *= 0.5;
        if (best.value <= 0.0) break;  // nothing to polish
    }

    if (best.value < 0.0) {
        // Every searched state was skipped by the direction rule.
        throw SignAmbiguous("no searchable initial state: direction rule returned 0 everywhere");
    }
    best.skipped_states = skipped;
    return best;
}

std::vector<double> gamma_zero_crossings(const OhmicParams& p) {
    if (!(p.s > 0.0)) throw Error("gamma_zero_crossings requires s > 0");
    constexpr double pi = std::numbers::pi;
    // Zeros beyond this horizon are indistinguishable from the critical
    // (argument = pi/2) case in double precision; the rate integral past it
    // is below 1e-8, so they collapse into the open-ended marker.
    const double horizon = 1e8 / p.omega_c;
    std::vector<double> out{0.0};
    for (int k = 1; 2.0 * k < p.s; ++k) {
        const double tk = std::tan(k * pi / p.s) / p.omega_c;
        if (!(tk > 0.0) || tk > horizon) break;
        out.push_back(tk);
    }
    // sin(s arctan) alternates sign across consecutive zeros; an odd count of
    // finite zeros leaves the rate negative all the way out.
    if ((out.size() - 1) % 2 == 1) {
        out.push_back(std::numeric_limits<double>::infinity());
    }
    return out;
}

namespace {

// Decoherence-factor values at the ends of every negative-rate window.
std::vector<std::pair<double, double>> window_factors(const OhmicParams& p) {
    const std::vector<double> cross = gamma_zero_crossings(p);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i + 1 < cross.size(); i += 2) {
        const double gi = decoherence_factor(cross[i], p);
        const double gf =
            std::isinf(cross[i + 1]) ? decoherence_factor_limit(p) : decoherence_factor(cross[i + 1], p);
        out.emplace_back(gi, gf);
    }
    return out;
}

}  // namespace

NqResult nq_of_s(const OhmicParams& p, double omega0) {
    const auto windows = window_factors(p);
    if (windows.empty()) {
        return {0.0, std::numeric_limits<double>::quiet_NaN()};
    }

    auto objective = [&](double z) {
        double sum = 0.0;
        const double z2 = z * z;
        for (const auto& [gi, gf] : windows) {
            sum += 0.5 * (std::log(gf * gf + (1.0 - gf * gf) * z2) -
                          std::log(gi * gi + (1.0 - gi * gi) * z2));
        }
        return omega0 * z * sum;
    };

    // 200-point scan, then golden-section on the bracketing cell.
    constexpr int kScan = 200;
    double best_z = 0.0, best_v = 0.0;
    for (int i = 0; i <= kScan; ++i) {
        const double z = static_cast<double>(i) / kScan;
        const double v = objective(z);
        if (v > best_v) {
            best_v = v;
            best_z = z;
        }
    }
    double lo = std::max(0.0, best_z - 1.0 / kScan);
    double hi = std::min(1.0, best_z + 1.0 / kScan);
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(x1);
        }
    }
    const double z = 0.5 * (lo + hi);
    return {objective(z), z};
}

double nc_of_s(const OhmicParams& p) {
    double total = 0.0;
    for (const auto& [gi, gf] : window_factors(p)) total += gf - gi;
    return total;
}

std::vector<SweepRow> sweep_measures(double s_min, double s_max, double s_step, double omega_c,
                                     double omega0, unsigned jobs) {
    if (!(s_step > 0.0)) throw Error("sweep step must be positive");
    const auto count =
        static_cast<std::size_t>(std::floor((s_max - s_min) / s_step + 1e-9)) + 1;
    std::vector<SweepRow> rows(count);

    auto compute = [&](std::size_t i) {
        const double s = s_min + s_step * static_cast<double>(i);
        SweepRow row;
        row.s = s;
        if (s > 2.0) {
            const OhmicParams p{s, omega_c};
            const NqResult nq = nq_of_s(p, omega0);
            row.n_q = nq.value;
            row.n_c = nc_of_s(p);
            row.z_max = std::isnan(nq.z_max) ? 0.0 : nq.z_max;
        }
        rows[i] = row;
    };

    unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) compute(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                compute(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace qtherm
