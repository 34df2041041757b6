#pragma once

#include <cstddef>
#include <vector>

#include "qtherm/bloch.hpp"
#include "qtherm/errors.hpp"

namespace qtherm {

/// Bloch-vector samples on a strictly increasing time grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<BlochState> states;

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.size() != states.size()) {
            throw Error("trajectory times/states size mismatch");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw Error("trajectory time grid is not strictly increasing");
            }
        }
    }
};

/// n evenly spaced points covering [a, b], endpoints included.
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace qtherm
