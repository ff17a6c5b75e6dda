#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magsteer/acceptance.hpp"
#include "magsteer/errors.hpp"
#include "magsteer/measures.hpp"
#include "magsteer/sweep.hpp"
#include "magsteer/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct ParamOpts {
    double spin_ratio = 0, field_ratio = 0, anis_a = 0;
    double kappa_a = 0, kappa_b = 0, kappa_c = 0;
    double g_ac = 0, omega_c_over_hsp = 0;
    bool no_cavity = false;

    CLI::Option* o_spin = nullptr;
    CLI::Option* o_field = nullptr;
    CLI::Option* o_anis = nullptr;
    CLI::Option* o_ka = nullptr;
    CLI::Option* o_kb = nullptr;
    CLI::Option* o_kc = nullptr;
    CLI::Option* o_gac = nullptr;
    CLI::Option* o_wc = nullptr;
    CLI::Option* o_nocav = nullptr;

    void add_to(CLI::App& app) {
        o_spin = app.add_option("--spin-ratio", spin_ratio, "S_B / S_A");
        o_field = app.add_option("--field-ratio", field_ratio, "H / H_sp");
        o_anis = app.add_option("--anis-a", anis_a, "sublattice-A anisotropy");
        o_ka = app.add_option("--kappa-a", kappa_a, "magnon-a damping");
        o_kb = app.add_option("--kappa-b", kappa_b, "magnon-b damping");
        o_kc = app.add_option("--kappa-c", kappa_c, "photon damping");
        o_gac = app.add_option("--g-ac", g_ac, "magnon-a to photon coupling");
        o_wc = app.add_option("--omega-c-over-hsp", omega_c_over_hsp,
                              "photon frequency over the spin-flop field");
        o_nocav = app.add_flag("--no-cavity", no_cavity, "decouple the photon mode");
    }

    void apply(magsteer::SystemParams& p) const {
        if (o_spin->count()) p.spin_ratio = spin_ratio;
        if (o_field->count()) p.field_ratio = field_ratio;
        if (o_anis->count()) p.anis_a = anis_a;
        if (o_ka->count()) p.kappa_a = kappa_a;
        if (o_kb->count()) p.kappa_b = kappa_b;
        if (o_kc->count()) p.kappa_c = kappa_c;
        if (o_gac->count()) p.g_ac = g_ac;
        if (o_wc->count()) p.omega_c_over_hsp = omega_c_over_hsp;
        if (o_nocav->count()) p.cavity_enabled = false;
    }
};

std::string show(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void print_point(const magsteer::MeasureSet& m) {
    std::cout << "stable = " << (m.stable ? "true" : "false") << '\n'
              << "stability_margin = " << show(m.stability_margin) << '\n'
              << "e_n = " << show(m.e_n) << '\n'
              << "g_a_to_b = " << show(m.g_a_to_b) << '\n'
              << "g_b_to_a = " << show(m.g_b_to_a) << '\n'
              << "pop_a = " << show(m.pop_a) << '\n'
              << "pop_b = " << show(m.pop_b) << '\n'
              << "pop_c = " << show(m.pop_c) << '\n'
              << "pop_alpha = " << show(m.pop_alpha) << '\n'
              << "pop_beta = " << show(m.pop_beta) << '\n'
              << "r = " << show(m.r) << '\n'
              << "g_alpha_c = " << show(m.g_alpha_c) << '\n'
              << "g_beta_c = " << show(m.g_beta_c) << '\n'
              << "omega_alpha = " << show(m.omega_alpha) << '\n'
              << "omega_beta = " << show(m.omega_beta) << '\n'
              << "omega_1 = " << show(m.omega_1) << '\n'
              << "omega_2 = " << show(m.omega_2) << '\n'
              << "omega_3 = " << show(m.omega_3) << '\n'
              << "gamma1_bc = " << show(m.gamma1_bc) << '\n'
              << "visibility = " << show(m.visibility) << '\n'
              << "distinguishability = " << show(m.distinguishability) << '\n';
}

magsteer::SweepSpec resolve_spec(const std::string& config_path, const std::string& preset,
                                 const ParamOpts& params, CLI::Option* o_axis,
                                 const std::string& axis, CLI::Option* o_start, double start,
                                 CLI::Option* o_stop, double stop, CLI::Option* o_points,
                                 int points, CLI::Option* o_optimize, bool optimize) {
    magsteer::SweepSpec spec;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw magsteer::ConfigError("cannot open config file '" + config_path + "'");
        spec = magsteer::parse_config(in);
    } else if (!preset.empty()) {
        spec = magsteer::preset_spec(preset);
    }
    params.apply(spec.base);
    if (o_axis->count()) spec.axis = magsteer::axis_from_name(axis);
    if (o_start->count()) spec.start = start;
    if (o_stop->count()) spec.stop = stop;
    if (o_points->count()) spec.points = points;
    if (o_optimize->count()) spec.optimize_field = optimize;
    spec.validate();
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state entanglement, steering and coherence of the "
                 "cavity-ferrimagnet three-mode model"};
    app.set_version_flag("--version", magsteer::kVersion);
    app.require_subcommand(1);

    // point
    CLI::App* point = app.add_subcommand("point", "evaluate a single parameter point");
    ParamOpts point_params;
    point_params.add_to(*point);

    // sweep
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV");
    ParamOpts sweep_params;
    sweep_params.add_to(*sweep);
    std::string sweep_preset, sweep_config, sweep_axis, sweep_out;
    double sweep_start = 0, sweep_stop = 0;
    int sweep_points = 0;
    bool sweep_optimize = false;
    CLI::Option* o_preset = sweep->add_option("--preset", sweep_preset, "figure preset");
    CLI::Option* o_config = sweep->add_option("--config", sweep_config, "config file");
    o_preset->excludes(o_config);
    CLI::Option* o_axis = sweep->add_option("--axis", sweep_axis, "sweep axis name");
    CLI::Option* o_start = sweep->add_option("--start", sweep_start, "axis range start");
    CLI::Option* o_stop = sweep->add_option("--stop", sweep_stop, "axis range stop");
    CLI::Option* o_points = sweep->add_option("--points", sweep_points, "grid point count");
    CLI::Option* o_optimize =
        sweep->add_flag("--optimize-field", sweep_optimize, "maximize E_N over field_ratio per point");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();

    // stability
    CLI::App* stab = app.add_subcommand("stability", "stability margin over a grid");
    ParamOpts stab_params;
    stab_params.add_to(*stab);
    std::string stab_preset, stab_config, stab_axis;
    double stab_start = 0, stab_stop = 0;
    int stab_points = 0;
    bool stab_optimize = false;
    CLI::Option* s_preset = stab->add_option("--preset", stab_preset, "figure preset");
    CLI::Option* s_config = stab->add_option("--config", stab_config, "config file");
    s_preset->excludes(s_config);
    CLI::Option* s_axis = stab->add_option("--axis", stab_axis, "sweep axis name");
    CLI::Option* s_start = stab->add_option("--start", stab_start, "axis range start");
    CLI::Option* s_stop = stab->add_option("--stop", stab_stop, "axis range stop");
    CLI::Option* s_points = stab->add_option("--points", stab_points, "grid point count");
    CLI::Option* s_optimize = stab->add_flag("--optimize-field", stab_optimize, "");
    s_optimize->group("");  // accepted for config parity, not useful here

    // verify
    app.add_subcommand("verify", "run the acceptance criteria and invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (point->parsed()) {
            magsteer::SystemParams p;
            point_params.apply(p);
            p.validate();
            print_point(magsteer::evaluate(p));
            return kExitOk;
        }

        if (sweep->parsed()) {
            const magsteer::SweepSpec spec = resolve_spec(
                sweep_config, sweep_preset, sweep_params, o_axis, sweep_axis, o_start,
                sweep_start, o_stop, sweep_stop, o_points, sweep_points, o_optimize,
                sweep_optimize);
            const magsteer::SweepResult result = magsteer::run_sweep(spec);
            std::ofstream csv(sweep_out);
            if (!csv) throw magsteer::ConfigError("cannot write '" + sweep_out + "'");
            magsteer::write_csv(result, csv);
            std::ofstream meta(sweep_out + ".meta.json");
            if (!meta) throw magsteer::ConfigError("cannot write '" + sweep_out + ".meta.json'");
            magsteer::write_metadata(result, meta);
            int stable = 0;
            for (const auto& row : result.rows) stable += row.m.stable ? 1 : 0;
            std::cerr << "wrote " << result.rows.size() << " rows (" << stable
                      << " stable) to " << sweep_out << '\n';
            return kExitOk;
        }

        if (stab->parsed()) {
            const magsteer::SweepSpec spec = resolve_spec(
                stab_config, stab_preset, stab_params, s_axis, stab_axis, s_start, stab_start,
                s_stop, stab_stop, s_points, stab_points, s_optimize, stab_optimize);
            std::cout << "axis,margin,stable\n";
            for (int i = 0; i < spec.points; ++i) {
                const double x = spec.start + (spec.stop - spec.start) *
                                                  static_cast<double>(i) / (spec.points - 1);
                const magsteer::MeasureSet m = magsteer::evaluate_sweep_point(spec, x);
                std::cout << show(x) << ',' << show(m.stability_margin) << ','
                          << (m.stable ? '1' : '0') << '\n';
            }
            return kExitOk;
        }

        // verify
        const auto results = magsteer::acceptance::run_all();
        for (const auto& r : results) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " — "
                      << r.detail << '\n';
        }
        if (!magsteer::acceptance::all_pass(results)) {
            std::cout << "verification FAILED\n";
            return kExitVerify;
        }
        std::cout << "verification passed\n";
        return kExitOk;
    } catch (const magsteer::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const magsteer::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
