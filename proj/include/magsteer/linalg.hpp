#pragma once

#include <Eigen/Dense>

namespace magsteer::linalg {

/// All eigenvalues (with multiplicity) of a square real matrix.
/// For real input the spectrum is closed under complex conjugation.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m);

/// Solves M V + V M^T = -D for symmetric V via the Kronecker-sum linear
/// system. Requires D symmetric and M free of eigenvalue pairs with
/// lambda_i + lambda_j = 0; throws MarginalStability otherwise.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d);

/// Determinant by cofactor expansion, exact sign. Dimension <= 4.
double determinant(const Eigen::MatrixXd& m);

/// Kronecker product a (x) b.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace magsteer::linalg
