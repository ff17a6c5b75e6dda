#include "magsteer/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "magsteer/dynamics.hpp"
#include "magsteer/errors.hpp"
#include "magsteer/linalg.hpp"
#include "magsteer/measures.hpp"
#include "magsteer/model.hpp"
#include "magsteer/optimize.hpp"
#include "magsteer/oracle.hpp"
#include "magsteer/sweep.hpp"

namespace magsteer::acceptance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

SweepSpec field_sweep(double spin_ratio, bool cavity) {
    SweepSpec spec = preset_spec("fig2a");
    spec.base.spin_ratio = spin_ratio;
    spec.base.cavity_enabled = cavity;
    return spec;
}

MeasureSet eval_at_gac(const SystemParams& base, double g_ac) {
    SweepSpec spec;
    spec.base = base;
    spec.axis = Axis::g_ac;
    return evaluate_sweep_point(spec, g_ac);
}

double beta_photon_gap(double spin_ratio, double f) {
    SystemParams p = preset_spec("fig2a").base;
    p.spin_ratio = spin_ratio;
    p.field_ratio = f;
    const DerivedModel dm = derive_model(p);
    return bogoliubov_frame(dm).omega_beta - dm.omega_c;
}

CriterionResult criterion1() {
    SweepSpec spec = field_sweep(1.6, /*cavity=*/false);
    const SweepResult res = run_sweep(spec);
    bool all_stable = true;
    double lo = kInf, hi = -kInf;
    for (const auto& row : res.rows) {
        if (!row.m.stable) {
            all_stable = false;
            continue;
        }
        lo = std::min(lo, row.m.e_n);
        hi = std::max(hi, row.m.e_n);
    }
    const bool in_band = lo >= 0.66 && hi <= 0.69;
    const bool flat = (hi - lo) <= 1e-6;
    return {1, "no-cavity baseline E_N (s=1.6)", all_stable && in_band && flat,
            "E_N=" + num(lo) + " spread=" + num(hi - lo) + " band [0.66,0.69]"};
}

CriterionResult criterion2() {
    SystemParams p = preset_spec("fig2a").base;
    p.spin_ratio = 1.6;
    const BogoliubovFrame frame = bogoliubov_frame(derive_model(p));
    const double two_r = 2.0 * frame.r;
    const double en_tmsv = log_negativity(detail::tmsv_cm(frame.r));
    const bool pass = std::abs(two_r - 1.91) <= 0.01 && std::abs(en_tmsv - two_r) <= 1e-9;
    return {2, "ideal squeezing bound 2r and TMSV E_N", pass,
            "2r=" + num(two_r) + " |E_N(TMSV)-2r|=" + num(std::abs(en_tmsv - two_r))};
}

CriterionResult criterion3() {
    const double root13 = bisect_root([](double f) { return beta_photon_gap(1.3, f); },
                                      -0.5, 0.5, 1e-10);
    const double root10 = bisect_root([](double f) { return beta_photon_gap(1.0, f); },
                                      -0.5, 0.5, 1e-10);
    const bool pass = std::abs(root13 - (-0.25)) <= 0.02 && std::abs(root10 - 0.15) <= 0.02;
    return {3, "resonance locations of omega_beta = omega_c", pass,
            "s=1.3: " + num(root13) + " (target -0.25)  s=1.0: " + num(root10) +
                " (target 0.15)"};
}

CriterionResult criterion4() {
    bool pass = true;
    std::string detail;
    for (double s : {1.0, 1.3, 1.6}) {
        SystemParams base = preset_spec("fig2a").base;
        base.spin_ratio = s;
        base.cavity_enabled = false;
        const double baseline = evaluate(base).e_n;

        const SweepResult res = run_sweep(field_sweep(s, /*cavity=*/true));
        double best = -kInf, best_f = 0.0;
        for (const auto& row : res.rows) {
            if (row.m.stable && row.m.e_n > best) {
                best = row.m.e_n;
                best_f = row.axis_value;
            }
        }
        base.cavity_enabled = true;
        const double f_res = resonance_field(base);
        const bool ok = best > baseline && std::abs(best_f - f_res) <= 0.02;
        pass = pass && ok;
        detail += "s=" + num(s) + ": max=" + num(best) + ">" + num(baseline) +
                  " at f=" + num(best_f) + " (res " + num(f_res) + "); ";
    }
    return {4, "cavity enhancement peaks at the resonance", pass, detail};
}

CriterionResult criterion5() {
    bool null_ok = true;
    for (double s : {1.0, 1.3, 1.6}) {
        for (double f : {-0.3, 0.0, 0.3}) {
            SystemParams p = preset_spec("fig2a").base;
            p.spin_ratio = s;
            p.field_ratio = f;
            p.cavity_enabled = false;
            const MeasureSet ms = evaluate(p);
            const auto [ora_ab, ora_ba] = oracle::analytic_steering(derive_model(p), p);
            null_ok = null_ok && ms.stable && ms.g_a_to_b == 0.0 && ms.g_b_to_a == 0.0 &&
                      std::abs(ms.g_a_to_b - ora_ab) <= 1e-8 &&
                      std::abs(ms.g_b_to_a - ora_ba) <= 1e-8;
        }
    }

    bool order_ok = true;
    int two_way = 0;
    for (double s : {1.3, 1.0}) {
        SweepSpec spec = preset_spec("fig2b");
        spec.base.spin_ratio = s;
        for (const auto& row : run_sweep(spec).rows) {
            if (!row.m.stable) continue;
            if (row.m.g_a_to_b < row.m.g_b_to_a) order_ok = false;
            if (row.m.g_b_to_a > 0.0) {
                ++two_way;
                if (!(row.m.g_a_to_b > row.m.g_b_to_a)) order_ok = false;
            }
        }
    }
    return {5, "steering null (kappa_a=kappa_b, no cavity) and cavity asymmetry",
            null_ok && order_ok,
            std::string("null+oracle ") + (null_ok ? "ok" : "FAIL") + ", ordering " +
                (order_ok ? "ok" : "FAIL") + " over " + num(two_way) + " two-way points"};
}

CriterionResult criterion6() {
    bool direction_ok = true;
    for (double s : {0.9, 1.0, 1.1}) {
        for (double f : {0.0, 0.1}) {
            SystemParams p = preset_spec("fig2a").base;
            p.spin_ratio = s;
            p.field_ratio = f;
            p.cavity_enabled = false;
            p.kappa_b = 1.25e-3;  // kappa_a < kappa_b
            MeasureSet ms = evaluate(p);
            direction_ok = direction_ok && ms.stable && ms.g_a_to_b > 0.0 && ms.g_b_to_a == 0.0;
            std::swap(p.kappa_a, p.kappa_b);
            ms = evaluate(p);
            direction_ok = direction_ok && ms.stable && ms.g_b_to_a > 0.0 && ms.g_a_to_b == 0.0;
        }
    }

    const SweepSpec spec = preset_spec("fig3b");  // kappa_b/kappa_a = 0.8
    const SweepResult res = run_sweep(spec);
    double best = -kInf, best_s = 0.0;
    for (const auto& row : res.rows) {
        if (row.m.stable && row.m.g_b_to_a > best) {
            best = row.m.g_b_to_a;
            best_s = row.axis_value;
        }
    }
    const double step = (spec.stop - spec.start) / (spec.points - 1);
    const bool max_at_one = std::abs(best_s - 1.0) <= step + 1e-12;
    return {6, "one-way steering direction; maximum at equal spins", direction_ok && max_at_one,
            std::string("directions ") + (direction_ok ? "ok" : "FAIL") + "; argmax s=" +
                num(best_s) + " (grid step " + num(step) + ")"};
}

CriterionResult criterion7() {
    std::mt19937_64 gen(20250809ULL);
    int accepted = 0;
    int cm_fail = 0, steer_fail = 0;
    double worst_cm = 0.0, worst_steer = 0.0;

    while (accepted < 200) {
        SystemParams p;
        p.spin_ratio = uniform(gen, 0.6, 1.8);
        p.anis_a = uniform(gen, 0.005, 0.04);
        p.field_ratio = uniform(gen, -0.3, 0.3);
        p.kappa_a = std::pow(10.0, uniform(gen, -3.7, -2.7));
        p.kappa_b = p.kappa_a * uniform(gen, 0.75, 1.3);
        p.kappa_c = 1e-3;
        p.cavity_enabled = false;

        DerivedModel dm;
        try {
            dm = derive_model(p);
        } catch (const Error&) {
            continue;
        }
        const Eigen::MatrixXd m = build_drift(dm, p);
        const StabilityReport rep = is_stable(m);
        if (!rep.stable || rep.margin < 1e-4) continue;
        ++accepted;

        const Eigen::MatrixXd v = linalg::solve_lyapunov(m, build_diffusion(p));
        const Eigen::Matrix4d v4 = reduce(v, Mode::a, Mode::b);
        const oracle::NoCavityCM cm = oracle::analytic_cm(dm, p);

        auto rel = [](double got, double want) {
            return std::abs(got - want) / std::abs(want);
        };
        const double cm_err = std::max({rel(v4(0, 0), cm.n_a), rel(v4(1, 1), cm.n_a),
                                        rel(v4(2, 2), cm.n_b), rel(v4(3, 3), cm.n_b),
                                        rel(v4(0, 2), cm.c1), rel(-v4(1, 3), cm.c1),
                                        rel(v4(0, 3), cm.c2), rel(v4(1, 2), cm.c2)});
        worst_cm = std::max(worst_cm, cm_err);
        if (cm_err > 1e-8) ++cm_fail;

        const auto [ora_ab, ora_ba] = oracle::analytic_steering(dm, p);
        const double steer_err = std::max(
            std::abs(steering(v4, SteerDirection::from_first) - ora_ab),
            std::abs(steering(v4, SteerDirection::from_second) - ora_ba));
        worst_steer = std::max(worst_steer, steer_err);
        if (steer_err > 1e-8) ++steer_fail;
    }
    return {7, "oracle equivalence over 200 random stable points",
            cm_fail == 0 && steer_fail == 0,
            "worst CM rel err " + num(worst_cm) + ", worst steering abs err " +
                num(worst_steer)};
}

CriterionResult criterion8() {
    std::string detail;

    // Unequal photon damping: kappa_c = 3 kappa_b.
    const SweepSpec spec_a = preset_spec("fig6a");
    const SweepResult res_a = run_sweep(spec_a);
    int i_peak = 0;
    for (int i = 0; i < static_cast<int>(res_a.rows.size()); ++i) {
        if (res_a.rows[i].m.stable &&
            res_a.rows[i].m.gamma1_bc > res_a.rows[i_peak].m.gamma1_bc) {
            i_peak = i;
        }
    }
    auto gamma_a = [&](double g) { return eval_at_gac(spec_a.base, g).gamma1_bc; };
    const double lo_a = res_a.rows[std::max(0, i_peak - 1)].axis_value;
    const double hi_a = res_a.rows[std::min<int>(res_a.rows.size() - 1, i_peak + 1)].axis_value;
    const auto [g_peak_a, peak_a] = golden_section_max(gamma_a, lo_a, hi_a, 1e-12);
    const double g_bc = spec_a.base.g_ac * std::sqrt(spec_a.base.spin_ratio);
    const bool part_a = std::abs(peak_a - 0.92) <= 0.02 && g_peak_a >= 0.5 * g_bc &&
                        g_peak_a <= 2.0 * g_bc;
    detail += "gamma1 peak (kc=3kb) " + num(peak_a) + " at g_ac=" + num(g_peak_a) + "; ";

    // Equal damping: coherence peak reaches one.
    const SweepSpec spec_b = preset_spec("fig6b");
    const SweepResult res_b = run_sweep(spec_b);
    i_peak = 0;
    int i_dip = 0;
    for (int i = 0; i < static_cast<int>(res_b.rows.size()); ++i) {
        const auto& m = res_b.rows[i].m;
        if (!m.stable) continue;
        if (m.gamma1_bc > res_b.rows[i_peak].m.gamma1_bc) i_peak = i;
        if (m.pop_c < res_b.rows[i_dip].m.pop_c) i_dip = i;
    }
    auto gamma_b = [&](double g) { return eval_at_gac(spec_b.base, g).gamma1_bc; };
    const double lo_b = res_b.rows[std::max(0, i_peak - 1)].axis_value;
    const double hi_b = res_b.rows[std::min<int>(res_b.rows.size() - 1, i_peak + 1)].axis_value;
    const auto [g_peak_b, peak_b] = golden_section_max(gamma_b, lo_b, hi_b, 1e-12);
    const bool part_b = peak_b >= 1.0 - 1e-4 && peak_b <= 1.0 + 1e-9;
    detail += "equal-k peak " + num(peak_b) + "; ";

    // Interference dip, located as the pop_c minimum.
    auto neg_pop_c = [&](double g) {
        const MeasureSet ms = eval_at_gac(spec_b.base, g);
        return ms.stable ? -ms.pop_c : -kInf;
    };
    const double lo_d = res_b.rows[std::max(0, i_dip - 1)].axis_value;
    const double hi_d = res_b.rows[std::min<int>(res_b.rows.size() - 1, i_dip + 1)].axis_value;
    const auto [g_dip, neg_pc] = golden_section_max(neg_pop_c, lo_d, hi_d, 1e-13);
    const double pop_c_dip = -neg_pc;
    const MeasureSet at_dip = eval_at_gac(spec_b.base, g_dip);

    SystemParams no_cavity = spec_b.base;
    no_cavity.cavity_enabled = false;
    const double en_base = evaluate(no_cavity).e_n;

    const bool part_c = pop_c_dip < 1e-6;
    const bool part_d = std::abs(1.0 - at_dip.distinguishability) <= 1e-6;
    const bool part_e = std::abs(at_dip.e_n - en_base) <= 1e-6;
    detail += "dip at g_ac=" + num(g_dip) + ": pop_c=" + num(pop_c_dip) +
              " (<1e-6: " + (part_c ? "yes" : "NO") + "), 1-D=" +
              num(1.0 - at_dip.distinguishability) + " (<=1e-6: " + (part_d ? "yes" : "NO") +
              "), |E_N-baseline|=" + num(std::abs(at_dip.e_n - en_base)) + " (<=1e-6: " +
              (part_e ? "yes" : "NO") + ")";

    return {8, "first-order coherence peak and interference dip",
            part_a && part_b && part_c && part_d && part_e, detail};
}

CriterionResult criterion9() {
    double min_beta_13 = kInf, min_beta_10 = kInf;
    bool aligned = true, alpha_flat = true;
    std::string detail;
    for (double s : {1.3, 1.0}) {
        SweepSpec spec = preset_spec("fig4");
        spec.base.spin_ratio = s;
        const SweepResult res = run_sweep(spec);
        int i_beta = -1, i_c = -1;
        double alpha_lo = kInf, alpha_hi = -kInf;
        for (int i = 0; i < static_cast<int>(res.rows.size()); ++i) {
            const auto& m = res.rows[i].m;
            if (!m.stable) continue;
            if (i_beta < 0 || m.pop_beta < res.rows[i_beta].m.pop_beta) i_beta = i;
            if (i_c < 0 || m.pop_c > res.rows[i_c].m.pop_c) i_c = i;
            alpha_lo = std::min(alpha_lo, m.pop_alpha);
            alpha_hi = std::max(alpha_hi, m.pop_alpha);
        }
        if (std::abs(i_beta - i_c) > 1) aligned = false;
        const double variation = (alpha_hi - alpha_lo) / alpha_lo;
        if (!(variation < 0.05)) alpha_flat = false;
        (s == 1.3 ? min_beta_13 : min_beta_10) = res.rows[i_beta].m.pop_beta;
        detail += "s=" + num(s) + ": argmin beta idx " + num(i_beta) + ", argmax c idx " +
                  num(i_c) + ", alpha variation " + num(variation) + "; ";
    }
    const bool deeper = min_beta_13 < min_beta_10;
    detail += "min pop_beta " + num(min_beta_13) + " (s=1.3) vs " + num(min_beta_10) +
              " (s=1.0)";
    return {9, "cavity cooling signature of the acoustic mode", aligned && alpha_flat && deeper,
            detail};
}

CriterionResult criterion10() {
    std::vector<SweepSpec> specs;
    specs.push_back(field_sweep(1.6, true));
    specs.push_back(field_sweep(1.6, false));
    {
        SweepSpec s13 = preset_spec("fig2b");
        specs.push_back(s13);
        SweepSpec s10 = preset_spec("fig2b");
        s10.base.spin_ratio = 1.0;
        specs.push_back(s10);
    }
    specs.push_back(preset_spec("fig3a"));
    specs.push_back(preset_spec("fig3b"));
    specs.push_back(preset_spec("fig6a"));
    specs.push_back(preset_spec("fig6b"));

    long audited = 0, skipped = 0, violations = 0;
    double worst_residual = 0.0, worst_nu = kInf, worst_identity = 0.0, worst_comp = 0.0;

    for (const auto& spec : specs) {
        for (int i = 0; i < spec.points; ++i) {
            const double x = spec.start + (spec.stop - spec.start) *
                                              static_cast<double>(i) / (spec.points - 1);
            SystemParams p = params_at(spec, x);
            DerivedModel dm;
            try {
                dm = derive_model(p);
                if (spec.axis == Axis::g_ac) dm.g_ac = p.cavity_enabled ? x : 0.0;
            } catch (const Error&) {
                ++skipped;
                continue;
            }
            const Eigen::MatrixXd m = build_drift(dm, p);
            const Eigen::MatrixXd d = build_diffusion(p);
            const StabilityReport rep = is_stable(m);
            if (!rep.stable || rep.margin < 1e-8) {
                ++skipped;
                continue;
            }
            const Eigen::MatrixXd v = linalg::solve_lyapunov(m, d);
            ++audited;

            const double residual = (m * v + v * m.transpose() + d).cwiseAbs().maxCoeff() /
                                    d.cwiseAbs().maxCoeff();
            worst_residual = std::max(worst_residual, residual);
            if (residual > 1e-10) ++violations;

            const double nu_min = symplectic_eigenvalues(v).minCoeff();
            worst_nu = std::min(worst_nu, nu_min);
            if (nu_min < 0.5 - 1e-9) ++violations;
            if (v.diagonal().minCoeff() < 0.5 - 1e-10) ++violations;

            const auto pops = populations(v);
            const auto [n_alpha, n_beta] = bogoliubov_populations(v, bogoliubov_frame(dm));
            const double identity = std::abs((pops[0] - pops[1]) - (n_alpha - n_beta));
            worst_identity = std::max(worst_identity, identity);
            if (identity > 1e-9) ++violations;

            const auto [vis, dis] = visibility_distinguishability(v);
            const double comp = vis * vis + dis * dis;
            worst_comp = std::max(worst_comp, comp);
            if (comp > 1.0 + 1e-9) ++violations;

            const Eigen::Matrix4d v4 = reduce(v, Mode::a, Mode::b);
            const double en = log_negativity(v4);
            if (steering(v4, SteerDirection::from_first) > 0.0 && !(en > 0.0)) ++violations;
            if (steering(v4, SteerDirection::from_second) > 0.0 && !(en > 0.0)) ++violations;
        }
    }
    return {10, "pointwise property suite over the figure grids", violations == 0,
            num(audited) + " points audited (" + num(skipped) + " skipped), " +
                num(violations) + " violations; worst residual " + num(worst_residual) +
                ", min nu " + num(worst_nu) + ", worst identity " + num(worst_identity) +
                ", worst V^2+D^2 " + num(worst_comp)};
}

}  // namespace

std::vector<CriterionResult> run_all() {
    return {criterion1(), criterion2(), criterion3(), criterion4(), criterion5(),
            criterion6(), criterion7(), criterion8(), criterion9(), criterion10()};
}

bool all_pass(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

}  // namespace magsteer::acceptance
