#include "qtherm/trajectory.hpp"

namespace qtherm {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2) throw GridTooCoarse("linspace needs at least 2 points");
    std::vector<double> out(n);
    const double dt = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + dt * static_cast<double>(i);
    out.back() = b;
    return out;
}

}  // namespace qtherm
