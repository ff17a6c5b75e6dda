#pragma once

#include <Eigen/Dense>
#include <utility>

#include "magsteer/model.hpp"

namespace magsteer::oracle {

/// Closed-form steady-state covariance data of the decoupled two-magnon
/// system. n_a and n_b include the +1/2 vacuum term.
struct NoCavityCM {
    double n_a = 0.0;
    double n_b = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double de = 0.0;
};

/// Evaluates the closed forms. Requires g_ac = g_bc = 0; throws
/// MarginalStability when the common denominator vanishes.
NoCavityCM analytic_cm(const DerivedModel& dm, const SystemParams& p);

/// Assembles the structured 4x4 covariance matrix from the closed forms.
Eigen::Matrix4d to_matrix(const NoCavityCM& cm);

/// Closed-form steering pair (a->b, b->a); no linear solves involved.
std::pair<double, double> analytic_steering(const DerivedModel& dm, const SystemParams& p);

}  // namespace magsteer::oracle
