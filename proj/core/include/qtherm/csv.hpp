#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qtherm/nonmarkov.hpp"
#include "qtherm/thermo.hpp"

namespace qtherm {

/// Extra trajectory column appended after the standard schema.
struct ExtraColumn {
    std::string name;
    std::vector<double> values;  // one per sample
};

/// Schema: t,x,y,z,r,U,Q_std,W_std,Q_ent,W_ent,W_star,C,S (then any extras),
/// one row per sample. precision = significant digits (default 17 elsewhere).
void write_thermo_csv(std::ostream& out, const ThermoTrajectory& traj, int precision,
                      std::span<const ExtraColumn> extras = {});

/// Schema: s,N_Q,N_C,z_max.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, int precision);

/// Runs the writer against `path`, atomically (temp file + rename). The path
/// "-" streams to stdout instead.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& writer);

std::string format_double(double v, int precision);

}  // namespace qtherm
