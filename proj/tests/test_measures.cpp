#include <doctest.h>

#include <cmath>
#include <complex>

#include "magsteer/dynamics.hpp"
#include "magsteer/errors.hpp"
#include "magsteer/measures.hpp"
#include "magsteer/model.hpp"
#include "magsteer/linalg.hpp"
#include "magsteer/oracle.hpp"
#include "test_util.hpp"

using namespace magsteer;

namespace {

Eigen::MatrixXd vacuum6() { return Eigen::MatrixXd::Identity(6, 6) / 2.0; }

SystemParams fig2_params(double s, double f, bool cavity = true) {
    SystemParams p;
    p.spin_ratio = s;
    p.field_ratio = f;
    p.cavity_enabled = cavity;
    return p;
}

Eigen::MatrixXd no_cavity_cm(double s, double f, double ka, double kb) {
    SystemParams p = fig2_params(s, f, false);
    p.kappa_a = ka;
    p.kappa_b = kb;
    return steady_state(build_drift(derive_model(p), p), build_diffusion(p));
}

}  // namespace

TEST_CASE("reduce: vacuum, swap symmetry, duplicate rejection") {
    const Eigen::Matrix4d v4 = reduce(vacuum6(), Mode::a, Mode::b);
    CHECK((v4 - Eigen::Matrix4d::Identity() / 2.0).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::MatrixXd v = no_cavity_cm(1.2, 0.1, 1e-3, 1.1e-3);
    const Eigen::Matrix4d ab = reduce(v, Mode::a, Mode::b);
    const Eigen::Matrix4d ba = reduce(v, Mode::b, Mode::a);
    CHECK((ab.block<2, 2>(0, 0) - ba.block<2, 2>(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ab.block<2, 2>(2, 2) - ba.block<2, 2>(0, 0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ab.block<2, 2>(0, 2) - ba.block<2, 2>(2, 0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ab.block<2, 2>(0, 2) - ba.block<2, 2>(0, 2).transpose()).cwiseAbs().maxCoeff() ==
          0.0);

    CHECK_THROWS_AS(reduce(v, Mode::a, Mode::a), std::invalid_argument);
}

TEST_CASE("reduce: no-cavity steady state has the structured form") {
    const Eigen::MatrixXd v = no_cavity_cm(1.4, 0.2, 1e-3, 0.9e-3);
    const Eigen::Matrix4d v4 = reduce(v, Mode::a, Mode::b);
    CHECK(v4(0, 0) == doctest::Approx(v4(1, 1)).epsilon(1e-12));
    CHECK(v4(2, 2) == doctest::Approx(v4(3, 3)).epsilon(1e-12));
    CHECK(std::abs(v4(0, 1)) < 1e-12);
    CHECK(std::abs(v4(2, 3)) < 1e-12);
    CHECK(v4(0, 2) == doctest::Approx(-v4(1, 3)).epsilon(1e-12));
    CHECK(v4(0, 3) == doctest::Approx(v4(1, 2)).epsilon(1e-12));
}

TEST_CASE("log_negativity: separable vacuum and ideal squeezed states") {
    CHECK(log_negativity(Eigen::Matrix4d::Identity() / 2.0) == 0.0);
    for (double r : {0.05, 0.3, 0.9569, 1.5, 2.2, 3.0}) {
        CHECK(std::abs(log_negativity(detail::tmsv_cm(r)) - 2.0 * r) < 1e-9);
    }
}

TEST_CASE("log_negativity: no-cavity baseline at s=1.6") {
    const Eigen::MatrixXd v = no_cavity_cm(1.6, 0.1, 1e-3, 1e-3);
    const double en = log_negativity(reduce(v, Mode::a, Mode::b));
    CHECK(en == doctest::Approx(0.67161837508443).epsilon(1e-10));
    CHECK(en == doctest::Approx(0.67).epsilon(0.015));  // quoted 0.67-0.68
}

TEST_CASE("log_negativity: rejects garbage covariance data") {
    Eigen::Matrix4d bad = Eigen::Matrix4d::Identity() / 2.0;
    bad(0, 2) = bad(2, 0) = 5.0;  // wildly unphysical correlations
    CHECK_THROWS_AS(log_negativity(bad), UnphysicalState);
}

TEST_CASE("steering: vacuum, equal-damping null, one-way direction") {
    CHECK(steering(Eigen::Matrix4d::Identity() / 2.0, SteerDirection::from_first) == 0.0);

    const Eigen::Matrix4d equal = reduce(no_cavity_cm(1.3, 0.1, 1e-3, 1e-3), Mode::a, Mode::b);
    CHECK(steering(equal, SteerDirection::from_first) == 0.0);
    CHECK(steering(equal, SteerDirection::from_second) == 0.0);

    // smaller damping steers larger damping
    const Eigen::Matrix4d v4 = reduce(no_cavity_cm(1.0, 0.0, 1e-3, 1.2e-3), Mode::a, Mode::b);
    CHECK(steering(v4, SteerDirection::from_first) > 0.0);
    CHECK(steering(v4, SteerDirection::from_second) == 0.0);
}

TEST_CASE("steering: general block formula equals the structured shortcut") {
    std::mt19937_64 gen(23);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        SystemParams p = fig2_params(testutil::uniform(gen, 0.8, 1.5),
                                     testutil::uniform(gen, -0.2, 0.2), false);
        p.kappa_a = testutil::uniform(gen, 5e-4, 2e-3);
        p.kappa_b = p.kappa_a * testutil::uniform(gen, 0.85, 1.2);
        const DerivedModel dm = derive_model(p);
        const oracle::NoCavityCM cm = oracle::analytic_cm(dm, p);
        if (cm.de <= 0.0) continue;  // unstable draw
        const Eigen::Matrix4d v4 = oracle::to_matrix(cm);

        const double det_v = std::pow(cm.n_a * cm.n_b - cm.c1 * cm.c1 - cm.c2 * cm.c2, 2);
        const double want_ab = std::max(0.0, 0.5 * std::log(cm.n_a * cm.n_a / (4.0 * det_v)));
        const double want_ba = std::max(0.0, 0.5 * std::log(cm.n_b * cm.n_b / (4.0 * det_v)));
        CHECK(std::abs(steering(v4, SteerDirection::from_first) - want_ab) < 1e-10);
        CHECK(std::abs(steering(v4, SteerDirection::from_second) - want_ba) < 1e-10);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("populations: vacuum and oracle agreement") {
    const auto zero = populations(vacuum6());
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);

    SystemParams p = fig2_params(1.6, 0.1, false);
    const DerivedModel dm = derive_model(p);
    const Eigen::MatrixXd v = steady_state(build_drift(dm, p), build_diffusion(p));
    const auto pops = populations(v);
    const oracle::NoCavityCM cm = oracle::analytic_cm(dm, p);
    CHECK(pops[0] == doctest::Approx(cm.n_a - 0.5).epsilon(1e-10));
    CHECK(pops[1] == doctest::Approx(cm.n_b - 0.5).epsilon(1e-10));
    CHECK(std::abs(pops[2]) < 1e-12);
}

TEST_CASE("moment reconstruction against brute-force Gaussian states") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 60; ++trial) {
        testutil::GaussianState st;
        st.randomize(gen);
        const Eigen::MatrixXd v = st.covariance();
        const Eigen::Matrix3cd n = st.n_moments();
        const Eigen::Matrix3cd a = st.a_moments();

        const auto [re_bc, im_bc] = detail::cross_moment_bc(v);
        CHECK(re_bc == doctest::Approx(n(1, 2).real()).epsilon(1e-10));
        CHECK(im_bc == doctest::Approx(n(1, 2).imag()).epsilon(1e-10));

        const double cross_ab = detail::squeeze_moment_ab(v);
        CHECK(cross_ab == doctest::Approx(2.0 * a(0, 1).real()).epsilon(1e-10));

        const auto pops = populations(v);
        for (int mode = 0; mode < 3; ++mode) {
            CHECK(pops[mode] == doctest::Approx(n(mode, mode).real()).epsilon(1e-10));
        }

        const double n_b = n(1, 1).real(), n_c = n(2, 2).real();
        if (n_b > 1e-12 && n_c > 1e-12) {
            const double want = std::abs(n(1, 2)) / std::sqrt(n_b * n_c);
            CHECK(coherence_bc(v) == doctest::Approx(want).epsilon(1e-9));
        }
        const auto [vis, dis] = visibility_distinguishability(v);
        if (n_b + n_c > 1e-12) {
            CHECK(vis == doctest::Approx(2.0 * std::abs(n(1, 2)) / (n_b + n_c)).epsilon(1e-9));
            CHECK(dis == doctest::Approx(std::abs(n_b - n_c) / (n_b + n_c)).epsilon(1e-9));
        }
        CHECK(vis * vis + dis * dis <= 1.0 + 1e-9);

        // pure states sit exactly on the vacuum floor
        const Eigen::VectorXd nu = symplectic_eigenvalues(v);
        CHECK(std::abs(nu.minCoeff() - 0.5) < 1e-8);
        CHECK(std::abs(nu.maxCoeff() - 0.5) < 1e-8);
    }
}

TEST_CASE("bogoliubov_frame: identity limit and frozen s=1.6 values") {
    DerivedModel flat;
    flat.omega_a = 1.0;
    flat.omega_b = 0.8;
    flat.omega_c = 0.2;
    flat.g_ab = 0.0;
    flat.g_ac = 0.01;
    flat.g_bc = 0.012;
    const BogoliubovFrame id = bogoliubov_frame(flat);
    CHECK(id.r == 0.0);
    CHECK(id.omega_alpha == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id.omega_beta == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(id.g_alpha_c == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(id.g_beta_c == doctest::Approx(0.012).epsilon(1e-14));

    const BogoliubovFrame f16 = bogoliubov_frame(derive_model(fig2_params(1.6, 0.0)));
    CHECK(2.0 * f16.r == doctest::Approx(1.9137931572013).epsilon(1e-12));
    CHECK(f16.omega_alpha == doctest::Approx(0.67661100406158828).epsilon(1e-12));
    CHECK(f16.omega_beta == doctest::Approx(0.086391004061588284).epsilon(1e-12));

    DerivedModel singular = flat;
    singular.g_ab = 0.91;  // 2 g_ab > omega_a + omega_b
    CHECK_THROWS_AS(bogoliubov_frame(singular), SingularTransform);
}

TEST_CASE("bogoliubov_frame: tanh(2r) pins the coupling ratio, band ordering") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 30; ++trial) {
        SystemParams p = fig2_params(testutil::uniform(gen, 0.4, 2.2),
                                     testutil::uniform(gen, -0.4, 0.4));
        const DerivedModel dm = derive_model(p);
        const BogoliubovFrame f = bogoliubov_frame(dm);
        CHECK(std::tanh(2.0 * f.r) ==
              doctest::Approx(2.0 * dm.g_ab / (dm.omega_a + dm.omega_b)).epsilon(1e-12));
        if (dm.omega_a >= dm.omega_b) {
            CHECK(f.omega_alpha >= f.omega_beta);
        } else {
            CHECK(f.omega_alpha < f.omega_beta);
        }
    }
}

TEST_CASE("bogoliubov_frame: band-photon crossings sit at the quoted fields") {
    auto gap = [](double s, double f) {
        const DerivedModel dm = derive_model(fig2_params(s, f));
        return bogoliubov_frame(dm).omega_beta - dm.omega_c;
    };
    // sign change brackets from the sweep range
    CHECK(gap(1.3, -0.3) * gap(1.3, -0.2) < 0.0);
    CHECK(gap(1.0, 0.1) * gap(1.0, 0.2) < 0.0);

    double lo = -0.3, hi = -0.2;
    for (int i = 0; i < 60; ++i) {
        const double mid = (lo + hi) / 2.0;
        (gap(1.3, lo) * gap(1.3, mid) <= 0.0 ? hi : lo) = mid;
    }
    CHECK((lo + hi) / 2.0 == doctest::Approx(-0.24719839736732712).epsilon(1e-9));
}

TEST_CASE("bogoliubov_populations: bare limit and population identity") {
    const Eigen::MatrixXd v = no_cavity_cm(1.2, 0.1, 1e-3, 1.1e-3);
    BogoliubovFrame id;
    id.r = 0.0;
    const auto [pa, pb] = bogoliubov_populations(v, id);
    const auto pops = populations(v);
    CHECK(pa == doctest::Approx(pops[0]).epsilon(1e-12));
    CHECK(pb == doctest::Approx(pops[1]).epsilon(1e-12));

    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        SystemParams p = fig2_params(testutil::uniform(gen, 0.9, 1.5),
                                     testutil::uniform(gen, -0.3, 0.3));
        const DerivedModel dm = derive_model(p);
        const Eigen::MatrixXd m = build_drift(dm, p);
        if (!is_stable(m).stable) continue;
        const Eigen::MatrixXd vv = steady_state(m, build_diffusion(p));
        const auto ps = populations(vv);
        const auto [na, nb] = bogoliubov_populations(vv, bogoliubov_frame(dm));
        CHECK(std::abs((ps[0] - ps[1]) - (na - nb)) < 1e-9);
    }
}

TEST_CASE("bogoliubov_populations: frame transform against the brute-force generator") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 25; ++trial) {
        testutil::GaussianState st;
        st.randomize(gen, 4);
        const double r_frame = testutil::uniform(gen, 0.05, 1.1);

        BogoliubovFrame frame;
        frame.r = r_frame;
        const auto [pop_alpha, pop_beta] = bogoliubov_populations(st.covariance(), frame);

        testutil::GaussianState in_frame = st;
        in_frame.squeeze(0, 1, r_frame);  // alpha = cosh r a + sinh r b^dag
        const Eigen::Matrix3cd n = in_frame.n_moments();
        CHECK(pop_alpha == doctest::Approx(n(0, 0).real()).epsilon(1e-9));
        CHECK(pop_beta == doctest::Approx(n(1, 1).real()).epsilon(1e-9));
    }
}

TEST_CASE("steering direction follows the population ordering with the cavity on") {
    // The steady state keeps the structured reduced form, so the block
    // determinants reduce to occupations and the more-populated magnon steers.
    for (double s : {1.0, 1.3}) {
        for (int i = 0; i <= 20; ++i) {
            SystemParams p = fig2_params(s, -0.5 + 0.05 * i);
            const Eigen::MatrixXd v =
                steady_state(build_drift(derive_model(p), p), build_diffusion(p));
            const Eigen::Matrix4d v4 = reduce(v, Mode::a, Mode::b);
            const auto pops = populations(v);

            const double n_a = v4(0, 0), n_b = v4(2, 2);
            const double det_v = linalg::determinant(v4);
            const double b2_ab = std::max(0.0, 0.5 * std::log(n_a * n_a / (4.0 * det_v)));
            const double b2_ba = std::max(0.0, 0.5 * std::log(n_b * n_b / (4.0 * det_v)));
            if (pops[0] >= pops[1]) {
                CHECK(b2_ab >= b2_ba);
                CHECK(steering(v4, SteerDirection::from_first) >=
                      steering(v4, SteerDirection::from_second));
            }
            CHECK(std::abs(steering(v4, SteerDirection::from_first) - b2_ab) < 1e-9);
            CHECK(std::abs(steering(v4, SteerDirection::from_second) - b2_ba) < 1e-9);
        }
    }
}

TEST_CASE("coherence and distinguishability conventions") {
    CHECK(coherence_bc(vacuum6()) == 0.0);
    const auto [vis0, dis0] = visibility_distinguishability(vacuum6());
    CHECK(vis0 == 0.0);
    CHECK(dis0 == 0.0);

    // hot magnon b, photon c in vacuum: fully distinguishable
    testutil::GaussianState st;
    st.squeeze(0, 1, 0.8);
    const auto [vis, dis] = visibility_distinguishability(st.covariance());
    CHECK(vis == 0.0);
    CHECK(dis == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigenfrequencies: decoupled modes and degeneracy reporting") {
    SystemParams p;
    DerivedModel dm;
    dm.omega_a = 0.7;
    dm.omega_b = 1.2;
    dm.omega_c = 0.3;
    const auto freqs = eigenfrequencies(build_drift(dm, p));
    CHECK(freqs[0] == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(freqs[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(freqs[2] == doctest::Approx(0.3).epsilon(1e-12));

    dm.omega_b = dm.omega_a;  // exact two-fold degeneracy
    CHECK_THROWS_AS(eigenfrequencies(build_drift(dm, p)), DegenerateSpectrum);
}

TEST_CASE("eigenfrequencies: upper branch tracks the decoupled band") {
    for (int i = 0; i <= 40; ++i) {
        const double f = -0.5 + i * 0.025;
        SystemParams p = fig2_params(1.3, f);
        const DerivedModel dm = derive_model(p);
        const auto freqs = eigenfrequencies(build_drift(dm, p));
        CHECK(std::abs(freqs[0] - bogoliubov_frame(dm).omega_alpha) < 1e-3);
    }
}

TEST_CASE("evaluate: golden point s=1.3, f=-0.25 against an independent solver") {
    const MeasureSet m = evaluate(fig2_params(1.3, -0.25));
    REQUIRE(m.stable);
    CHECK(m.stability_margin == doctest::Approx(9.999836394464952e-04).epsilon(1e-8));
    CHECK(m.e_n == doctest::Approx(1.136109119718323).epsilon(1e-9));
    CHECK(m.g_a_to_b == doctest::Approx(0.5306836025478593).epsilon(1e-9));
    CHECK(m.g_b_to_a == doctest::Approx(0.3700704073435154).epsilon(1e-9));
    CHECK(m.pop_a == doctest::Approx(7.694713126869900).epsilon(1e-9));
    CHECK(m.pop_b == doctest::Approx(6.478793218577813).epsilon(1e-9));
    CHECK(m.pop_c == doctest::Approx(0.4053066360973802).epsilon(1e-9));
    CHECK(m.pop_alpha == doctest::Approx(1.775226370499063).epsilon(1e-9));
    CHECK(m.pop_beta == doctest::Approx(0.5593064622069761).epsilon(1e-9));
    CHECK(m.r == doctest::Approx(1.098048252228600).epsilon(1e-12));
    CHECK(m.g_alpha_c == doctest::Approx(1.467525754035902e-03).epsilon(1e-12));
    CHECK(m.g_beta_c == doctest::Approx(5.670417254378961e-03).epsilon(1e-12));
    CHECK(m.omega_alpha == doctest::Approx(0.3590690385293199).epsilon(1e-12));
    CHECK(m.omega_beta == doctest::Approx(0.1546035226417027).epsilon(1e-12));
    CHECK(m.omega_1 == doctest::Approx(0.3590648412810939).epsilon(1e-9));
    CHECK(m.omega_2 == doctest::Approx(0.1599350979196641).epsilon(1e-9));
    CHECK(m.omega_3 == doctest::Approx(0.1487598504648627).epsilon(1e-9));
    CHECK(m.gamma1_bc == doctest::Approx(0.2238971063632055).epsilon(1e-9));
    CHECK(m.visibility == doctest::Approx(0.1054071890710176).epsilon(1e-9));
    CHECK(m.distinguishability == doctest::Approx(0.8822484726678900).epsilon(1e-9));
}

TEST_CASE("evaluate: unstable point is flagged with NaN measures") {
    // strongly asymmetric damping destabilizes the decoupled magnon pair
    SystemParams p = fig2_params(1.0, 0.0, false);
    p.kappa_a = 1e-3;
    p.kappa_b = 2e-4;
    const MeasureSet m = evaluate(p);
    CHECK(!m.stable);
    CHECK(m.stability_margin < 0.0);
    CHECK(std::isnan(m.e_n));
    CHECK(std::isnan(m.pop_a));
    CHECK(std::isnan(m.gamma1_bc));
    CHECK(!std::isnan(m.r));  // frame quantities stay defined
    CHECK(!std::isnan(m.omega_beta));
}
