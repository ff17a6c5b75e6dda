#pragma once

#include <functional>
#include <utility>

namespace magsteer {

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Returns (argmax, max). Deterministic for fixed inputs.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double lo, double hi, double x_tol);

/// Bisection root of a continuous function with f(lo) and f(hi) of opposite
/// sign. Throws std::invalid_argument when the bracket does not straddle zero.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol);

}  // namespace magsteer
