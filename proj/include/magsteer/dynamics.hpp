#pragma once

#include <Eigen/Dense>

#include "magsteer/model.hpp"

namespace magsteer {

struct StabilityReport {
    bool stable = false;
    double margin = 0.0;  ///< minus the largest eigenvalue real part
};

/// Drift matrix of the quadrature Langevin system in the basis
/// (X_a, Y_a, X_b, Y_b, X_c, Y_c).
Eigen::MatrixXd build_drift(const DerivedModel& dm, const SystemParams& p);

/// Diffusion matrix diag(kappa_a, kappa_a, kappa_b, kappa_b, kappa_c, kappa_c)
/// for vacuum inputs.
Eigen::MatrixXd build_diffusion(const SystemParams& p);

/// Stable iff every drift eigenvalue has negative real part.
StabilityReport is_stable(const Eigen::MatrixXd& m);

/// Steady-state covariance matrix of the stable system. Throws
/// UnstableSystem, or MarginalStability when the margin is below 1e-8.
Eigen::MatrixXd steady_state(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d);

/// Block-diagonal symplectic form for n_modes modes in (X, Y) ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic eigenvalues of a covariance matrix, ascending. Physical
/// states satisfy nu_k >= 1/2.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v);

}  // namespace magsteer
