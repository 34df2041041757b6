#pragma once

#include <cstddef>
#include <functional>

#include "qtherm/errors.hpp"

namespace qtherm {

/// Gauss7/Kronrod15 evaluation of integral f over [a, b]; *err_estimate (if
/// non-null) receives the usual |G7 - K15| based estimate.
double gauss_kronrod_15(const std::function<double(double)>& f, double a, double b,
                        double* err_estimate = nullptr);

/// Adaptive bisection on top of G7K15 down to an absolute tolerance.
/// Throws QuadratureFailure once max_intervals live subintervals are exceeded.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, std::size_t max_intervals = 4000);

}  // namespace qtherm
