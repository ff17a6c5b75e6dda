#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "magsteer/dynamics.hpp"
#include "magsteer/model.hpp"

namespace magsteer {

enum class Mode { a = 0, b = 1, c = 2 };

/// Which party of a bipartite covariance matrix performs the measurements.
enum class SteerDirection { from_first, from_second };

/// Two-mode squeezing frame that diagonalizes the magnon sector.
struct BogoliubovFrame {
    double r = 0.0;            ///< squeezing parameter, tanh(2r) = 2 g_ab / (omega_a + omega_b)
    double omega_alpha = 0.0;  ///< upper magnon band
    double omega_beta = 0.0;   ///< lower magnon band
    double g_alpha_c = 0.0;
    double g_beta_c = 0.0;
};

/// Per-point record of every derived quantity. Fields that could not be
/// evaluated are NaN; `stable` is false when no steady state exists.
struct MeasureSet {
    /// All fields NaN, flagged unstable.
    static MeasureSet invalid();

    bool stable = false;
    double stability_margin = 0.0;
    double e_n = 0.0;
    double g_a_to_b = 0.0;
    double g_b_to_a = 0.0;
    double pop_a = 0.0;
    double pop_b = 0.0;
    double pop_c = 0.0;
    double pop_alpha = 0.0;
    double pop_beta = 0.0;
    double r = 0.0;
    double g_alpha_c = 0.0;
    double g_beta_c = 0.0;
    double omega_alpha = 0.0;
    double omega_beta = 0.0;
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    double omega_3 = 0.0;
    double gamma1_bc = 0.0;
    double visibility = 0.0;
    double distinguishability = 0.0;
};

/// 4x4 reduced covariance matrix of two distinct modes, quadrature order.
Eigen::Matrix4d reduce(const Eigen::MatrixXd& v, Mode first, Mode second);

/// Logarithmic negativity max{0, -ln 2 eta^-} of a bipartite covariance
/// matrix. Throws UnphysicalState when a square-root argument is negative
/// beyond -1e-12.
double log_negativity(const Eigen::Matrix4d& v4);

/// Renyi-2 Gaussian steering max{0, S(2 V_party) - S(2 V')} with
/// S(sigma) = ln(det sigma)/2; results below 1e-12 clamp to exactly zero.
/// Throws UnphysicalState when det V' <= 0.
double steering(const Eigen::Matrix4d& v4, SteerDirection dir);

/// Mean mode occupations (a, b, c) from the quadrature variances.
std::array<double, 3> populations(const Eigen::MatrixXd& v);

/// Throws SingularTransform when 2 g_ab >= omega_a + omega_b.
BogoliubovFrame bogoliubov_frame(const DerivedModel& dm);

/// Occupations of the squeezed-frame modes reconstructed from the bare
/// second moments. Satisfies pop_a - pop_b = pop_alpha - pop_beta.
std::pair<double, double> bogoliubov_populations(const Eigen::MatrixXd& v,
                                                 const BogoliubovFrame& frame);

/// First-order coherence |<b+ c>| / sqrt(<b+ b><c+ c>); zero by convention
/// when either occupation is below 1e-14.
double coherence_bc(const Eigen::MatrixXd& v);

/// Interference visibility and distinguishability of modes b and c;
/// (0, 0) by convention when both occupations vanish.
std::pair<double, double> visibility_distinguishability(const Eigen::MatrixXd& v);

/// The three positive mode frequencies of the coupled system, descending.
/// Throws DegenerateSpectrum when fewer than three are distinct within 1e-9.
std::array<double, 3> eigenfrequencies(const Eigen::MatrixXd& m);

/// Full pipeline: derive -> drift/diffusion -> steady state -> measures.
MeasureSet evaluate(const SystemParams& p);

/// Same but with a caller-supplied derived model (coupling overrides).
MeasureSet evaluate(const SystemParams& p, const DerivedModel& dm);

namespace detail {

/// Re <b+ c> and Im <b+ c> reconstructed from quadrature covariances.
std::pair<double, double> cross_moment_bc(const Eigen::MatrixXd& v);

/// <ab> + <a+ b+> reconstructed from quadrature covariances.
double squeeze_moment_ab(const Eigen::MatrixXd& v);

/// Covariance matrix of an ideal two-mode squeezed vacuum state.
Eigen::Matrix4d tmsv_cm(double r);

}  // namespace detail

}  // namespace magsteer
