#include "magsteer/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "magsteer/errors.hpp"
#include "magsteer/linalg.hpp"

namespace magsteer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPopulationFloor = 1e-14;
constexpr double kFrequencyResolution = 1e-9;

void require_cm6(const Eigen::MatrixXd& v, const char* who) {
    if (v.rows() != 6 || v.cols() != 6) {
        throw std::invalid_argument(std::string(who) + ": expected a 6x6 covariance matrix");
    }
}

double mode_population(const Eigen::MatrixXd& v, int mode) {
    const int i = 2 * mode;
    return (v(i, i) + v(i + 1, i + 1) - 1.0) / 2.0;
}

}  // namespace

Eigen::Matrix4d reduce(const Eigen::MatrixXd& v, Mode first, Mode second) {
    require_cm6(v, "reduce");
    if (first == second) {
        throw std::invalid_argument("reduce: mode indices must be distinct");
    }
    const int i = 2 * static_cast<int>(first);
    const int j = 2 * static_cast<int>(second);
    Eigen::Matrix4d out;
    out.block<2, 2>(0, 0) = v.block<2, 2>(i, i);
    out.block<2, 2>(0, 2) = v.block<2, 2>(i, j);
    out.block<2, 2>(2, 0) = v.block<2, 2>(j, i);
    out.block<2, 2>(2, 2) = v.block<2, 2>(j, j);
    return out;
}

double log_negativity(const Eigen::Matrix4d& v4) {
    const double det_a = linalg::determinant(v4.block<2, 2>(0, 0));
    const double det_b = linalg::determinant(v4.block<2, 2>(2, 2));
    const double det_c = linalg::determinant(v4.block<2, 2>(0, 2));
    const double det_v = linalg::determinant(v4);

    const double sigma = det_a + det_b - 2.0 * det_c;
    double disc = sigma * sigma - 4.0 * det_v;
    if (disc < -1e-12 * std::max(1.0, sigma * sigma)) {
        throw UnphysicalState("log_negativity: negative discriminant " + std::to_string(disc));
    }
    disc = std::max(disc, 0.0);

    // (sigma - sqrt(disc))/2 rewritten to avoid cancellation at strong squeezing
    double inner = 2.0 * det_v / (sigma + std::sqrt(disc));
    if (inner < -1e-12 * std::max(1.0, std::abs(sigma))) {
        throw UnphysicalState("log_negativity: negative squared symplectic eigenvalue " +
                              std::to_string(inner));
    }
    inner = std::max(inner, 0.0);

    const double eta_minus = std::sqrt(inner);
    if (!(eta_minus > 0.0)) {
        throw UnphysicalState("log_negativity: vanishing symplectic eigenvalue");
    }
    return std::max(0.0, -std::log(2.0 * eta_minus));
}

double steering(const Eigen::Matrix4d& v4, SteerDirection dir) {
    const double det_v = linalg::determinant(v4);
    if (det_v <= 0.0) {
        throw UnphysicalState("steering: det V' <= 0");
    }
    const Eigen::Matrix2d party = (dir == SteerDirection::from_first)
                                      ? v4.block<2, 2>(0, 0)
                                      : v4.block<2, 2>(2, 2);
    const double s_party = 0.5 * std::log(linalg::determinant(2.0 * party));
    const double s_full = 0.5 * std::log(linalg::determinant((2.0 * v4).eval()));
    const double value = s_party - s_full;
    // Equal-damping states sit exactly on the clamp boundary; snap the
    // double-precision noise there to the clamped zero.
    return value < 1e-12 ? 0.0 : value;
}

std::array<double, 3> populations(const Eigen::MatrixXd& v) {
    require_cm6(v, "populations");
    return {mode_population(v, 0), mode_population(v, 1), mode_population(v, 2)};
}

BogoliubovFrame bogoliubov_frame(const DerivedModel& dm) {
    const double sum = dm.omega_a + dm.omega_b;
    const double x = 2.0 * dm.g_ab / sum;
    if (!(x < 1.0) || sum <= 0.0) {
        throw SingularTransform("bogoliubov_frame: tanh(2r) argument >= 1");
    }
    BogoliubovFrame f;
    f.r = 0.5 * std::atanh(x);
    const double root = std::sqrt(sum * sum - 4.0 * dm.g_ab * dm.g_ab);
    f.omega_alpha = (dm.omega_a - dm.omega_b + root) / 2.0;
    f.omega_beta = (-dm.omega_a + dm.omega_b + root) / 2.0;
    f.g_alpha_c = dm.g_ac * std::cosh(f.r) - dm.g_bc * std::sinh(f.r);
    f.g_beta_c = -dm.g_ac * std::sinh(f.r) + dm.g_bc * std::cosh(f.r);
    return f;
}

std::pair<double, double> bogoliubov_populations(const Eigen::MatrixXd& v,
                                                 const BogoliubovFrame& frame) {
    require_cm6(v, "bogoliubov_populations");
    const double n_a = mode_population(v, 0);
    const double n_b = mode_population(v, 1);
    const double cross = detail::squeeze_moment_ab(v);
    const double ch = std::cosh(frame.r);
    const double sh = std::sinh(frame.r);
    const double pop_alpha = ch * ch * n_a + sh * sh * (n_b + 1.0) + ch * sh * cross;
    const double pop_beta = sh * sh * (n_a + 1.0) + ch * ch * n_b + ch * sh * cross;
    return {pop_alpha, pop_beta};
}

double coherence_bc(const Eigen::MatrixXd& v) {
    require_cm6(v, "coherence_bc");
    const double n_b = mode_population(v, 1);
    const double n_c = mode_population(v, 2);
    if (n_b < kPopulationFloor || n_c < kPopulationFloor) {
        return 0.0;  // empty mode carries no coherence
    }
    const auto [re, im] = detail::cross_moment_bc(v);
    return std::hypot(re, im) / std::sqrt(n_b * n_c);
}

std::pair<double, double> visibility_distinguishability(const Eigen::MatrixXd& v) {
    require_cm6(v, "visibility_distinguishability");
    const double n_b = std::max(0.0, mode_population(v, 1));
    const double n_c = std::max(0.0, mode_population(v, 2));
    const double total = n_b + n_c;
    if (total < kPopulationFloor) {
        return {0.0, 0.0};
    }
    const auto [re, im] = detail::cross_moment_bc(v);
    return {2.0 * std::hypot(re, im) / total, std::abs(n_b - n_c) / total};
}

std::array<double, 3> eigenfrequencies(const Eigen::MatrixXd& m) {
    const Eigen::VectorXcd eigs = linalg::eigenvalues(m);
    std::vector<double> freqs;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (eigs(i).imag() > kFrequencyResolution) freqs.push_back(eigs(i).imag());
    }
    std::sort(freqs.begin(), freqs.end(), std::greater<>());
    int distinct = freqs.empty() ? 0 : 1;
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (freqs[i - 1] - freqs[i] > kFrequencyResolution) ++distinct;
    }
    if (freqs.size() != 3 || distinct != 3) {
        throw DegenerateSpectrum("eigenfrequencies: expected 3 distinct positive mode "
                                 "frequencies, found " + std::to_string(distinct),
                                 distinct);
    }
    return {freqs[0], freqs[1], freqs[2]};
}

namespace detail {

std::pair<double, double> cross_moment_bc(const Eigen::MatrixXd& v) {
    // X = (v + v+)/sqrt2, Y = (v - v+)/(i sqrt2) force
    // Re<b+c> = (V_XbXc + V_YbYc)/2, Im<b+c> = (V_XbYc - V_YbXc)/2.
    const double re = (v(2, 4) + v(3, 5)) / 2.0;
    const double im = (v(2, 5) - v(3, 4)) / 2.0;
    return {re, im};
}

double squeeze_moment_ab(const Eigen::MatrixXd& v) {
    return v(0, 2) - v(1, 3);
}

Eigen::Matrix4d tmsv_cm(double r) {
    const double c = std::cosh(2.0 * r) / 2.0;
    const double s = std::sinh(2.0 * r) / 2.0;
    Eigen::Matrix4d v;
    v << c, 0, s, 0,
         0, c, 0, -s,
         s, 0, c, 0,
         0, -s, 0, c;
    return v;
}

}  // namespace detail

MeasureSet MeasureSet::invalid() {
    MeasureSet ms;
    ms.stable = false;
    ms.stability_margin = kNaN;
    ms.e_n = ms.g_a_to_b = ms.g_b_to_a = kNaN;
    ms.pop_a = ms.pop_b = ms.pop_c = ms.pop_alpha = ms.pop_beta = kNaN;
    ms.r = ms.g_alpha_c = ms.g_beta_c = ms.omega_alpha = ms.omega_beta = kNaN;
    ms.omega_1 = ms.omega_2 = ms.omega_3 = kNaN;
    ms.gamma1_bc = ms.visibility = ms.distinguishability = kNaN;
    return ms;
}

MeasureSet evaluate(const SystemParams& p) {
    DerivedModel dm;
    try {
        dm = derive_model(p);
    } catch (const Error&) {
        return MeasureSet::invalid();
    }
    return evaluate(p, dm);
}

MeasureSet evaluate(const SystemParams& p, const DerivedModel& dm) {
    MeasureSet ms;
    ms.e_n = ms.g_a_to_b = ms.g_b_to_a = kNaN;
    ms.pop_a = ms.pop_b = ms.pop_c = ms.pop_alpha = ms.pop_beta = kNaN;
    ms.omega_1 = ms.omega_2 = ms.omega_3 = kNaN;
    ms.gamma1_bc = ms.visibility = ms.distinguishability = kNaN;

    // Frame quantities need no steady state; keep them even for unstable points.
    const BogoliubovFrame frame = bogoliubov_frame(dm);
    ms.r = frame.r;
    ms.omega_alpha = frame.omega_alpha;
    ms.omega_beta = frame.omega_beta;
    ms.g_alpha_c = frame.g_alpha_c;
    ms.g_beta_c = frame.g_beta_c;

    const Eigen::MatrixXd m = build_drift(dm, p);
    const Eigen::MatrixXd d = build_diffusion(p);
    const StabilityReport rep = is_stable(m);
    ms.stability_margin = rep.margin;
    if (!rep.stable || rep.margin < 1e-8) {
        ms.stable = false;
        return ms;
    }

    const Eigen::MatrixXd v = linalg::solve_lyapunov(m, d);
    const Eigen::Matrix4d v_ab = reduce(v, Mode::a, Mode::b);

    ms.e_n = log_negativity(v_ab);
    ms.g_a_to_b = steering(v_ab, SteerDirection::from_first);
    ms.g_b_to_a = steering(v_ab, SteerDirection::from_second);

    const auto pops = populations(v);
    ms.pop_a = std::max(0.0, pops[0]);
    ms.pop_b = std::max(0.0, pops[1]);
    ms.pop_c = std::max(0.0, pops[2]);
    const auto [pop_alpha, pop_beta] = bogoliubov_populations(v, frame);
    ms.pop_alpha = std::max(0.0, pop_alpha);
    ms.pop_beta = std::max(0.0, pop_beta);

    ms.gamma1_bc = coherence_bc(v);
    const auto [vis, dis] = visibility_distinguishability(v);
    ms.visibility = vis;
    ms.distinguishability = dis;

    try {
        const auto freqs = eigenfrequencies(m);
        ms.omega_1 = freqs[0];
        ms.omega_2 = freqs[1];
        ms.omega_3 = freqs[2];
    } catch (const DegenerateSpectrum&) {
        // Coincident mode frequencies at an isolated grid point; the
        // remaining measures stay valid.
    }

    ms.stable = true;
    return ms;
}

}  // namespace magsteer
