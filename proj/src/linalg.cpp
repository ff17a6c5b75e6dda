#include "magsteer/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "magsteer/errors.hpp"

namespace magsteer::linalg {

namespace {

void require_square(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
    }
}

double cofactor_det(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double det = 0.0;
    double sign = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            Eigen::Index cc = 0;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        det += sign * m(0, j) * cofactor_det(minor);
        sign = -sign;
    }
    return det;
}

}  // namespace

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) {
    require_square(m, "eigenvalues");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error("eigenvalues: iteration did not converge");
    }
    return solver.eigenvalues();
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d) {
    require_square(m, "solve_lyapunov");
    if (d.rows() != m.rows() || d.cols() != m.cols()) {
        throw std::invalid_argument("solve_lyapunov: dimension mismatch between M and D");
    }
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("solve_lyapunov: D must be symmetric");
    }

    const Eigen::Index n = m.rows();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    // vec(MV + VM^T) = (I (x) M + M (x) I) vec(V), column-major vec.
    const Eigen::MatrixXd system = kron(eye, m) + kron(m, eye);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) {
        throw MarginalStability(
            "solve_lyapunov: singular system (eigenvalue pair with lambda_i + lambda_j = 0)");
    }

    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(d.data(), n * n);
    Eigen::VectorXd x = lu.solve(rhs);

    // One refinement pass keeps the residual near machine precision even
    // when the stability margin is small.
    Eigen::VectorXd correction = lu.solve(rhs - system * x);
    x += correction;

    Eigen::MatrixXd v = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
    v = ((v + v.transpose()) / 2.0).eval();

    const double residual = (m * v + v * m.transpose() + d).cwiseAbs().maxCoeff();
    const double bound = 1e-10 * std::max(d.cwiseAbs().maxCoeff(), 1e-300);
    if (residual > bound) {
        std::ostringstream msg;
        msg << "solve_lyapunov: residual " << residual << " exceeds contract bound " << bound;
        throw Error(msg.str());
    }
    return v;
}

double determinant(const Eigen::MatrixXd& m) {
    require_square(m, "determinant");
    if (m.rows() > 4) {
        throw std::invalid_argument("determinant: dimension must be <= 4");
    }
    if (m.rows() <= 2) return cofactor_det(m);
    // Pivoted LU keeps strongly squeezed covariance blocks accurate where
    // the cofactor sum cancels catastrophically.
    return Eigen::FullPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace magsteer::linalg
