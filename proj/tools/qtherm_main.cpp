// Command-line front end: closed-form trajectory datasets for the dissipative
// and dephasing channels, the non-Markovianity sweep, and the map checkers.
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtherm/csv.hpp"
#include "qtherm/dynamics.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/lindblad_json.hpp"
#include "qtherm/nonmarkov.hpp"
#include "qtherm/thermo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct TrajectoryOptions {
    std::vector<double> initial;
    double omega0 = 1.0;
    double t_max = 0.0;
    std::size_t steps = 2000;
    std::string out = "-";
    int precision = 17;
    std::string format = "csv";
};

int validate_common(const TrajectoryOptions& o, qtherm::BlochState& r0) {
    if (o.steps < 2) {
        std::cerr << "invalid --steps: need at least 2 grid points\n";
        return kExitUsage;
    }
    if (!(o.t_max > 0.0)) {
        std::cerr << "invalid --t-max: must be positive\n";
        return kExitUsage;
    }
    if (o.precision < 1) {
        std::cerr << "invalid --precision: must be at least 1\n";
        return kExitUsage;
    }
    if (o.format != "csv" && o.format != "json") {
        std::cerr << "invalid --format: expected csv or json\n";
        return kExitUsage;
    }
    if (o.initial.size() != 3) {
        std::cerr << "invalid --initial: expected a comma triple x,y,z\n";
        return kExitUsage;
    }
    r0 = {o.initial[0], o.initial[1], o.initial[2]};
    if (!r0.valid()) {
        std::cerr << "invalid --initial: purity exceeds 1\n";
        return kExitUsage;
    }
    return kExitOk;
}

void write_trajectory(const TrajectoryOptions& o, const qtherm::ThermoTrajectory& traj,
                      std::span<const qtherm::ExtraColumn> extras) {
    if (o.format == "csv") {
        qtherm::write_output(o.out, [&](std::ostream& os) {
            qtherm::write_thermo_csv(os, traj, o.precision, extras);
        });
        return;
    }
    nlohmann::json doc;
    auto& columns = doc["columns"];
    for (const char* name :
         {"t", "x", "y", "z", "r", "U", "Q_std", "W_std", "Q_ent", "W_ent", "W_star", "C", "S"}) {
        columns.push_back(name);
    }
    for (const auto& col : extras) columns.push_back(col.name);
    auto& rows = doc["rows"];
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        nlohmann::json row = {s.t,     s.state.x, s.state.y, s.state.z, s.r,  s.U, s.Q_std,
                              s.W_std, s.Q_ent,   s.W_ent,   s.W_star,  s.C,  s.S};
        for (const auto& col : extras) row.push_back(col.values[i]);
        rows.push_back(std::move(row));
    }
    qtherm::write_output(o.out, [&](std::ostream& os) { os << doc.dump(1) << '\n'; });
}

// The ledger is integrated on an internally refined grid (the emitted rows
// are a subsample) so the second-order derivative estimates do not limit the
// accuracy of the requested, possibly coarse, output grid.
constexpr std::size_t kMinLedgerIntervals = 8000;

std::size_t refine_factor(std::size_t steps) {
    return (kMinLedgerIntervals + steps - 2) / (steps - 1);
}

qtherm::ThermoTrajectory subsample(const qtherm::ThermoTrajectory& fine, std::size_t factor,
                                   std::size_t steps) {
    qtherm::ThermoTrajectory out;
    out.samples.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) out.samples.push_back(fine.samples[i * factor]);
    return out;
}

int run_dissipative(const TrajectoryOptions& o, double gamma) {
    qtherm::BlochState r0;
    if (int rc = validate_common(o, r0); rc != kExitOk) return rc;
    if (!(gamma > 0.0)) {
        std::cerr << "invalid --gamma: must be positive\n";
        return kExitUsage;
    }
    if (!(o.omega0 > 0.0)) {
        std::cerr << "invalid --omega0: must be positive\n";
        return kExitUsage;
    }

    const std::size_t factor = refine_factor(o.steps);
    const std::vector<double> fine_grid =
        qtherm::linspace(0.0, o.t_max, (o.steps - 1) * factor + 1);
    const qtherm::Trajectory traj = qtherm::dissipative_trajectory(fine_grid, r0, gamma, o.omega0);
    const qtherm::ThermoTrajectory th =
        subsample(qtherm::accumulate(traj, qtherm::z_field(o.omega0)), factor, o.steps);
    const std::vector<double> grid = qtherm::linspace(0.0, o.t_max, o.steps);

    std::vector<qtherm::ExtraColumn> extras;
    const auto& ref = qtherm::kDissipativeFlowState;
    if (std::abs(r0.x - ref.x) < 1e-12 && std::abs(r0.y - ref.y) < 1e-12 &&
        std::abs(r0.z - ref.z) < 1e-12) {
        qtherm::ExtraColumn qdot{"Qdot_ent", {}}, cdot{"Cdot", {}};
        qdot.values.reserve(grid.size());
        cdot.values.reserve(grid.size());
        for (double t : grid) {
            const auto flows = qtherm::dissipative_flows(t, gamma, o.omega0);
            qdot.values.push_back(flows.q_dot);
            cdot.values.push_back(flows.c_dot);
        }
        extras.push_back(std::move(qdot));
        extras.push_back(std::move(cdot));
    }
    write_trajectory(o, th, extras);
    return kExitOk;
}

int run_dephasing(const TrajectoryOptions& o, double s, double omega_c) {
    qtherm::BlochState r0;
    if (int rc = validate_common(o, r0); rc != kExitOk) return rc;
    if (s < 0.0) {
        std::cerr << "invalid --s: must be non-negative\n";
        return kExitUsage;
    }
    if (!(omega_c > 0.0)) {
        std::cerr << "invalid --omega-c: must be positive\n";
        return kExitUsage;
    }
    const double purity = r0.purity();
    if (purity <= 0.0) {
        std::cerr << "invalid --initial: dephasing ledger needs purity > 0\n";
        return kExitUsage;
    }

    const std::size_t factor = refine_factor(o.steps);
    const std::vector<double> fine_grid =
        qtherm::linspace(0.0, o.t_max, (o.steps - 1) * factor + 1);
    const qtherm::OhmicParams params{s, omega_c};
    const qtherm::DecoherenceCache cache(params, o.t_max,
                                         std::max<std::size_t>(10000, fine_grid.size()));
    const qtherm::Trajectory traj = qtherm::dephasing_trajectory(fine_grid, r0, cache);
    const qtherm::ThermoTrajectory th =
        subsample(qtherm::accumulate(traj, qtherm::z_field(o.omega0)), factor, o.steps);
    const std::vector<double> grid = qtherm::linspace(0.0, o.t_max, o.steps);

    // Closed-form heat column, evaluated with the same cached decoherence
    // factor that produced the trajectory.
    qtherm::ExtraColumn closed{"Q_closed", {}};
    closed.values.reserve(grid.size());
    const double z_r0 = r0.z / purity;
    for (double t : grid) {
        closed.values.push_back(qtherm::dephasing_heat(
            t, [&cache](double tt) { return cache(tt); }, z_r0, purity, o.omega0));
    }
    std::vector<qtherm::ExtraColumn> extras;
    extras.push_back(std::move(closed));
    write_trajectory(o, th, extras);
    return kExitOk;
}

struct MeasureOptions {
    double s_min = 0.0;
    double s_max = 8.0;
    double s_step = 0.05;
    double omega0 = 1.0;
    double omega_c = 1.0;
    unsigned jobs = 0;
    std::string out = "-";
    int precision = 17;
    std::string format = "csv";
    double s_single = -1.0;  // used by the JSON report
};

int run_measure(const MeasureOptions& o) {
    if (o.precision < 1) {
        std::cerr << "invalid --precision: must be at least 1\n";
        return kExitUsage;
    }
    if (!(o.omega_c > 0.0)) {
        std::cerr << "invalid --omega-c: must be positive\n";
        return kExitUsage;
    }
    if (o.format == "json") {
        if (!(o.s_single > 0.0)) {
            std::cerr << "invalid --s: the JSON report needs a single positive s\n";
            return kExitUsage;
        }
        const qtherm::OhmicParams p{o.s_single, o.omega_c};
        const qtherm::NqResult nq = qtherm::nq_of_s(p, o.omega0);
        nlohmann::json doc;
        doc["value"] = nq.value;
        const double z = std::isnan(nq.z_max) ? 0.0 : nq.z_max;
        doc["optimizer"] = {{"x", std::sqrt(std::max(0.0, 1.0 - z * z))}, {"y", 0.0}, {"z", z}};
        doc["alpha"] = -1;
        doc["intervals"] = nlohmann::json::array();
        const auto crossings = qtherm::gamma_zero_crossings(p);
        for (std::size_t i = 1; i + 1 < crossings.size(); i += 2) {
            nlohmann::json pair = nlohmann::json::array();
            pair.push_back(crossings[i]);
            if (std::isinf(crossings[i + 1])) {
                pair.push_back(nullptr);  // open-ended window
            } else {
                pair.push_back(crossings[i + 1]);
            }
            doc["intervals"].push_back(std::move(pair));
        }
        qtherm::write_output(o.out, [&](std::ostream& os) { os << doc.dump(1) << '\n'; });
        return kExitOk;
    }
    if (o.format != "csv") {
        std::cerr << "invalid --format: expected csv or json\n";
        return kExitUsage;
    }
    if (!(o.s_step > 0.0)) {
        std::cerr << "invalid --s-step: must be positive\n";
        return kExitUsage;
    }
    if (o.s_max < o.s_min) {
        std::cerr << "invalid --s-max: must not be below --s-min\n";
        return kExitUsage;
    }
    const auto rows =
        qtherm::sweep_measures(o.s_min, o.s_max, o.s_step, o.omega_c, o.omega0, o.jobs);
    qtherm::write_output(o.out, [&](std::ostream& os) {
        qtherm::write_sweep_csv(os, rows, o.precision);
    });
    return kExitOk;
}

int run_check(const std::string& path, double omega0, double tol) {
    std::vector<qtherm::LoadedTerm> loaded;
    try {
        loaded = qtherm::load_lindblad_terms_file(path);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "malformed operator JSON: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qtherm::Error& e) {
        std::cerr << "invalid operator file: " << e.what() << '\n';
        return kExitUsage;
    }
    const qtherm::FieldVector field = qtherm::z_field(omega0);
    std::size_t index = 1;
    for (const auto& item : loaded) {
        const std::span<const qtherm::LindbladTerm> one(&item.term, 1);
        const bool unital = qtherm::is_unital_sufficient(one, tol);
        const bool incoherent = qtherm::is_incoherent_sufficient(one, field, tol);
        std::cout << "term " << index++ << " (rate " << item.rate_label
                  << "): unital-sufficient=" << (unital ? "yes" : "no")
                  << " incoherent-sufficient=" << (incoherent ? "yes" : "no") << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-qubit open-dynamics thermodynamic toolkit"};
    app.require_subcommand(1);

    TrajectoryOptions dis;
    dis.initial = {0.5, 0.0, 0.5};
    dis.t_max = 50.0;
    double gamma = 0.1;
    CLI::App* cmd_dis = app.add_subcommand(
        "dissipative", "closed-form dissipative channel trajectory and ledger");
    cmd_dis->add_option("--gamma", gamma, "relaxation rate")->capture_default_str();
    cmd_dis->add_option("--omega0", dis.omega0, "level splitting")->capture_default_str();
    cmd_dis->add_option("--initial", dis.initial, "initial Bloch vector x,y,z")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd_dis->add_option("--t-max", dis.t_max, "end of the time grid")->capture_default_str();
    cmd_dis->add_option("--steps", dis.steps, "number of grid points")->capture_default_str();
    cmd_dis->add_option("--out", dis.out, "output path, - for stdout")->capture_default_str();
    cmd_dis->add_option("--precision", dis.precision, "significant digits")->capture_default_str();
    cmd_dis->add_option("--format", dis.format, "csv or json")->capture_default_str();

    TrajectoryOptions dep;
    const double z0_default = 0.05;
    dep.initial = {std::sqrt(1.0 - z0_default * z0_default), 0.0, z0_default};
    dep.t_max = 10.0;
    double s_param = 1.5;
    double omega_c = 1.0;
    CLI::App* cmd_dep =
        app.add_subcommand("dephasing", "Ohmic dephasing channel trajectory and ledger");
    cmd_dep->add_option("--s", s_param, "ohmicity parameter")->capture_default_str();
    cmd_dep->add_option("--omega-c", omega_c, "cutoff frequency")->capture_default_str();
    cmd_dep->add_option("--omega0", dep.omega0, "level splitting")->capture_default_str();
    cmd_dep->add_option("--initial", dep.initial, "initial Bloch vector x,y,z")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd_dep->add_option("--t-max", dep.t_max, "end of the time grid")->capture_default_str();
    cmd_dep->add_option("--steps", dep.steps, "number of grid points")->capture_default_str();
    cmd_dep->add_option("--out", dep.out, "output path, - for stdout")->capture_default_str();
    cmd_dep->add_option("--precision", dep.precision, "significant digits")->capture_default_str();
    cmd_dep->add_option("--format", dep.format, "csv or json")->capture_default_str();

    MeasureOptions meas;
    CLI::App* cmd_meas =
        app.add_subcommand("measure", "non-Markovianity measures over an ohmicity sweep");
    cmd_meas->add_option("--s-min", meas.s_min, "sweep start")->capture_default_str();
    cmd_meas->add_option("--s-max", meas.s_max, "sweep end")->capture_default_str();
    cmd_meas->add_option("--s-step", meas.s_step, "sweep step")->capture_default_str();
    cmd_meas->add_option("--omega0", meas.omega0, "level splitting")->capture_default_str();
    cmd_meas->add_option("--omega-c", meas.omega_c, "cutoff frequency")->capture_default_str();
    cmd_meas->add_option("--jobs", meas.jobs, "worker threads, 0 = hardware")
        ->capture_default_str();
    cmd_meas->add_option("--s", meas.s_single, "single s for the JSON report");
    cmd_meas->add_option("--out", meas.out, "output path, - for stdout")->capture_default_str();
    cmd_meas->add_option("--precision", meas.precision, "significant digits")
        ->capture_default_str();
    cmd_meas->add_option("--format", meas.format, "csv sweep or json report")
        ->capture_default_str();

    std::string operators_path;
    double check_omega0 = 1.0;
    double check_tol = 1e-10;
    CLI::App* cmd_check =
        app.add_subcommand("check", "unital/incoherent sufficiency report for a term set");
    cmd_check->add_option("--operators", operators_path, "JSON operator file")->required();
    cmd_check->add_option("--omega0", check_omega0, "level splitting for the energy eigenbasis")
        ->capture_default_str();
    cmd_check->add_option("--tol", check_tol, "sufficiency tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_dis->parsed()) return run_dissipative(dis, gamma);
        if (cmd_dep->parsed()) return run_dephasing(dep, s_param, omega_c);
        if (cmd_meas->parsed()) return run_measure(meas);
        if (cmd_check->parsed()) return run_check(operators_path, check_omega0, check_tol);
    } catch (const qtherm::QuadratureFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qtherm::StepSizeUnderflow& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qtherm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
