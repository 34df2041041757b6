#include "qtherm/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

#include "qtherm/errors.hpp"

namespace qtherm {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

void write_thermo_csv(std::ostream& out, const ThermoTrajectory& traj, int precision,
                      std::span<const ExtraColumn> extras) {
    for (const auto& col : extras) {
        if (col.values.size() != traj.samples.size()) {
            throw Error("extra column '" + col.name + "' size mismatch");
        }
    }
    out << "t,x,y,z,r,U,Q_std,W_std,Q_ent,W_ent,W_star,C,S";
    for (const auto& col : extras) out << ',' << col.name;
    out << '\n';
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const ThermoSample& s = traj.samples[i];
        const double row[] = {s.t,     s.state.x, s.state.y, s.state.z, s.r,   s.U,  s.Q_std,
                              s.W_std, s.Q_ent,   s.W_ent,   s.W_star,  s.C,   s.S};
        bool first = true;
        for (double v : row) {
            if (!first) out << ',';
            out << format_double(v, precision);
            first = false;
        }
        for (const auto& col : extras) out << ',' << format_double(col.values[i], precision);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, int precision) {
    out << "s,N_Q,N_C,z_max\n";
    for (const auto& row : rows) {
        out << format_double(row.s, precision) << ',' << format_double(row.n_q, precision) << ','
            << format_double(row.n_c, precision) << ',' << format_double(row.z_max, precision)
            << '\n';
    }
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        writer(std::cout);
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp.string());
        writer(out);
        if (!out) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace qtherm
