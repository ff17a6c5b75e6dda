#include "magsteer/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "magsteer/errors.hpp"
#include "magsteer/linalg.hpp"

namespace magsteer {

namespace {
constexpr double kMarginFloor = 1e-8;
}

Eigen::MatrixXd build_drift(const DerivedModel& dm, const SystemParams& p) {
    const double ka = p.kappa_a, kb = p.kappa_b, kc = p.kappa_c;
    const double wa = dm.omega_a, wb = dm.omega_b, wc = dm.omega_c;
    const double gab = dm.g_ab, gac = dm.g_ac, gbc = dm.g_bc;

    Eigen::MatrixXd m(6, 6);
    // a-b and a-c blocks carry the two-mode-squeezing pattern, b-c the
    // beam-splitter pattern.
    m << -ka,   wa,  0.0, -gab,  0.0, -gac,
         -wa,  -ka, -gab,  0.0, -gac,  0.0,
          0.0, -gab, -kb,   wb,  0.0,  gbc,
         -gab,  0.0, -wb,  -kb, -gbc,  0.0,
          0.0, -gac,  0.0,  gbc, -kc,   wc,
         -gac,  0.0, -gbc,  0.0, -wc,  -kc;
    return m;
}

Eigen::MatrixXd build_diffusion(const SystemParams& p) {
    if (p.kappa_a <= 0.0 || p.kappa_b <= 0.0 || p.kappa_c <= 0.0) {
        throw std::invalid_argument("build_diffusion: damping rates must be > 0");
    }
    Eigen::VectorXd diag(6);
    diag << p.kappa_a, p.kappa_a, p.kappa_b, p.kappa_b, p.kappa_c, p.kappa_c;
    return diag.asDiagonal();
}

StabilityReport is_stable(const Eigen::MatrixXd& m) {
    const Eigen::VectorXcd eigs = linalg::eigenvalues(m);
    const double max_real = eigs.real().maxCoeff();
    return {max_real < 0.0, -max_real};
}

Eigen::MatrixXd steady_state(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d) {
    const StabilityReport rep = is_stable(m);
    if (!rep.stable) {
        throw UnstableSystem("steady_state: drift matrix is unstable (margin = " +
                             std::to_string(rep.margin) + ")");
    }
    if (rep.margin < kMarginFloor) {
        throw MarginalStability("steady_state: stability margin " +
                                std::to_string(rep.margin) + " below " +
                                std::to_string(kMarginFloor));
    }
    return linalg::solve_lyapunov(m, d);
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    if (n_modes <= 0) throw std::invalid_argument("symplectic_form: n_modes must be > 0");
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v) {
    if (v.rows() != v.cols() || v.rows() % 2 != 0) {
        throw std::invalid_argument("symplectic_eigenvalues: need an even-dimensional square matrix");
    }
    const int n = static_cast<int>(v.rows()) / 2;
    const Eigen::VectorXcd eigs = linalg::eigenvalues(symplectic_form(n) * v);
    // Eigenvalues of Omega V come in +-(i nu) pairs; pair the moduli.
    std::vector<double> mods(eigs.size());
    for (Eigen::Index i = 0; i < eigs.size(); ++i) mods[i] = std::abs(eigs(i));
    std::sort(mods.begin(), mods.end());
    Eigen::VectorXd nu(n);
    for (int k = 0; k < n; ++k) nu(k) = (mods[2 * k] + mods[2 * k + 1]) / 2.0;
    return nu;
}

}  // namespace magsteer
