#include "magsteer/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "magsteer/errors.hpp"
#include "magsteer/optimize.hpp"
#include "magsteer/version.hpp"

namespace magsteer {

namespace {

constexpr double kFieldWindow = 0.08;   // field_ratio half-window around resonance
constexpr double kFieldXTol = 1e-5;     // optimizer tolerance in field_ratio

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_or_empty(double x) {
    return std::isnan(x) ? std::string() : fmt(x);
}

MeasureSet evaluate_point(const SweepSpec& spec, double axis_value) {
    SystemParams p = params_at(spec, axis_value);
    if (spec.axis == Axis::g_ac) {
        if (axis_value < 0.0) throw std::invalid_argument("g_ac axis value must be >= 0");
        DerivedModel dm = derive_model(p);
        dm.g_ac = p.cavity_enabled ? axis_value : 0.0;  // g_bc stays pinned by the base coupling
        return evaluate(p, dm);
    }
    return evaluate(p);
}

MeasureSet evaluate_optimized(const SweepSpec& spec, double axis_value) {
    SystemParams p = params_at(spec, axis_value);
    const double center = resonance_field(p);

    auto score = [&](double f) {
        SweepSpec local = spec;
        local.base = p;
        local.base.field_ratio = f;
        const MeasureSet ms = evaluate_point(local, axis_value);
        return ms.stable ? ms.e_n : -std::numeric_limits<double>::infinity();
    };

    // Coarse bracket first; the enhancement peak is narrow.
    const int coarse = 17;
    double best_f = center;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse; ++i) {
        const double f = center - kFieldWindow +
                         2.0 * kFieldWindow * static_cast<double>(i) / (coarse - 1);
        const double v = score(f);
        if (v > best_v) {
            best_v = v;
            best_f = f;
        }
    }
    if (!std::isfinite(best_v)) return MeasureSet::invalid();

    const double step = 2.0 * kFieldWindow / (coarse - 1);
    const auto [f_opt, v_opt] = golden_section_max(score, best_f - step, best_f + step, kFieldXTol);
    (void)v_opt;

    SweepSpec local = spec;
    local.base = p;
    local.base.field_ratio = f_opt;
    return evaluate_point(local, axis_value);
}

}  // namespace

const char* axis_name(Axis axis) {
    switch (axis) {
        case Axis::field_ratio: return "field_ratio";
        case Axis::spin_ratio: return "spin_ratio";
        case Axis::kappa_ratio_b_over_a: return "kappa_ratio_b_over_a";
        case Axis::g_ac: return "g_ac";
    }
    throw std::invalid_argument("axis_name: unknown axis");
}

Axis axis_from_name(const std::string& name) {
    if (name == "field_ratio") return Axis::field_ratio;
    if (name == "spin_ratio") return Axis::spin_ratio;
    if (name == "kappa_ratio_b_over_a") return Axis::kappa_ratio_b_over_a;
    if (name == "g_ac") return Axis::g_ac;
    throw ConfigError("unknown axis '" + name + "'");
}

void SweepSpec::validate() const {
    if (points < 2) throw ConfigError("sweep needs at least 2 points");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("sweep range must be finite");
    if (optimize_field && axis == Axis::field_ratio) {
        throw ConfigError("optimize_field cannot be combined with the field_ratio axis");
    }
    try {
        base.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SweepSpec preset_spec(const std::string& name) {
    SystemParams fig2;  // base parameter set shared by the field-sweep presets
    fig2.spin_ratio = 1.6;
    fig2.field_ratio = 0.0;
    fig2.anis_a = 0.0163;
    fig2.kappa_a = 1e-3;
    fig2.kappa_b = 1e-3;
    fig2.kappa_c = 3e-3;
    fig2.g_ac = 0.01;
    fig2.omega_c_over_hsp = 0.85;
    fig2.cavity_enabled = true;

    SweepSpec spec;
    spec.base = fig2;
    spec.preset = name;

    if (name == "fig2a") {
        return spec;
    }
    if (name == "fig2b" || name == "fig4") {
        spec.base.spin_ratio = 1.3;
        return spec;
    }
    if (name == "fig3a") {
        spec.base.spin_ratio = 1.0;
        spec.base.cavity_enabled = false;
        spec.axis = Axis::kappa_ratio_b_over_a;
        spec.start = 0.75;
        spec.stop = 1.25;
        return spec;
    }
    if (name == "fig3b") {
        spec.base.spin_ratio = 1.0;
        spec.base.kappa_b = 0.8e-3;
        spec.base.cavity_enabled = false;
        spec.axis = Axis::spin_ratio;
        spec.start = 0.5;
        spec.stop = 1.5;
        return spec;
    }
    if (name == "fig5") {
        spec.base.spin_ratio = 1.0;
        spec.axis = Axis::spin_ratio;
        spec.start = 0.1;
        spec.stop = 1.6;
        spec.optimize_field = true;
        return spec;
    }
    if (name == "fig6a" || name == "fig6" || name == "fig6b" || name == "fig6c" ||
        name == "fig6d") {
        spec.base.spin_ratio = 1.0;
        spec.base.field_ratio = 0.15;
        if (name != "fig6a") spec.base.kappa_c = 1e-3;  // equal damping panels
        spec.axis = Axis::g_ac;
        spec.start = 0.0;
        spec.stop = 0.02;
        return spec;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5",
            "fig6", "fig6a", "fig6b", "fig6c", "fig6d"};
}

double resonance_field(const SystemParams& p) {
    SystemParams at_zero = p;
    at_zero.field_ratio = 0.0;
    const DerivedModel dm = derive_model(at_zero);
    const BogoliubovFrame frame = bogoliubov_frame(dm);
    // omega_beta is exactly linear in the field: omega_beta(f) = omega_beta(0) - f h_sp.
    return (frame.omega_beta - dm.omega_c) / dm.h_sp;
}

SystemParams params_at(const SweepSpec& spec, double axis_value) {
    SystemParams p = spec.base;
    switch (spec.axis) {
        case Axis::field_ratio: p.field_ratio = axis_value; break;
        case Axis::spin_ratio: p.spin_ratio = axis_value; break;
        case Axis::kappa_ratio_b_over_a: p.kappa_b = axis_value * spec.base.kappa_a; break;
        case Axis::g_ac: break;  // handled at the derived-model level
    }
    return p;
}

MeasureSet evaluate_sweep_point(const SweepSpec& spec, double axis_value) {
    try {
        if (spec.optimize_field) return evaluate_optimized(spec, axis_value);
        return evaluate_point(spec, axis_value);
    } catch (const Error&) {
        return MeasureSet::invalid();
    } catch (const std::invalid_argument&) {
        return MeasureSet::invalid();
    }
}

int worker_count() {
    if (const char* env = std::getenv("MAGSTEER_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1 && n <= 256) return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const int n = spec.points;
    SweepResult result;
    result.spec = spec;
    result.rows.resize(n);

    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = spec.start + (spec.stop - spec.start) * static_cast<double>(i) / (n - 1);
    }

    const int workers = std::min(worker_count(), n);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) {
                    result.rows[i] = {grid[i], evaluate_sweep_point(spec, grid[i])};
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return result;
}

void write_csv(const SweepResult& result, std::ostream& os) {
    os << "axis,stable,e_n,g_a_to_b,g_b_to_a,pop_a,pop_b,pop_c,pop_alpha,pop_beta,"
          "r,g_alpha_c,g_beta_c,omega_alpha,omega_beta,omega_1,omega_2,omega_3,"
          "gamma1_bc,visibility,distinguishability\n";
    for (const auto& row : result.rows) {
        const MeasureSet& m = row.m;
        os << fmt(row.axis_value) << ',' << (m.stable ? '1' : '0') << ','
           << fmt_or_empty(m.e_n) << ',' << fmt_or_empty(m.g_a_to_b) << ','
           << fmt_or_empty(m.g_b_to_a) << ',' << fmt_or_empty(m.pop_a) << ','
           << fmt_or_empty(m.pop_b) << ',' << fmt_or_empty(m.pop_c) << ','
           << fmt_or_empty(m.pop_alpha) << ',' << fmt_or_empty(m.pop_beta) << ','
           << fmt_or_empty(m.r) << ',' << fmt_or_empty(m.g_alpha_c) << ','
           << fmt_or_empty(m.g_beta_c) << ',' << fmt_or_empty(m.omega_alpha) << ','
           << fmt_or_empty(m.omega_beta) << ',' << fmt_or_empty(m.omega_1) << ','
           << fmt_or_empty(m.omega_2) << ',' << fmt_or_empty(m.omega_3) << ','
           << fmt_or_empty(m.gamma1_bc) << ',' << fmt_or_empty(m.visibility) << ','
           << fmt_or_empty(m.distinguishability) << '\n';
    }
}

void write_metadata(const SweepResult& result, std::ostream& os) {
    const SweepSpec& spec = result.spec;
    int stable = 0;
    for (const auto& row : result.rows) {
        if (row.m.stable) ++stable;
    }
    nlohmann::ordered_json j;
    j["tool"] = {{"name", "magsteer"}, {"version", kVersion}};
    j["preset"] = spec.preset;
    j["axis"] = axis_name(spec.axis);
    j["range"] = {{"start", spec.start}, {"stop", spec.stop}, {"points", spec.points}};
    j["optimize_field"] = spec.optimize_field;
    j["base_params"] = {
        {"spin_ratio", spec.base.spin_ratio},
        {"field_ratio", spec.base.field_ratio},
        {"anis_a", spec.base.anis_a},
        {"kappa_a", spec.base.kappa_a},
        {"kappa_b", spec.base.kappa_b},
        {"kappa_c", spec.base.kappa_c},
        {"g_ac", spec.base.g_ac},
        {"omega_c_over_hsp", spec.base.omega_c_over_hsp},
        {"cavity_enabled", spec.base.cavity_enabled},
    };
    j["tolerances"] = {
        {"lyapunov_residual_rel", 1e-10},
        {"stability_margin_min", 1e-8},
        {"field_optimizer_x_tol", kFieldXTol},
    };
    j["points_total"] = spec.points;
    j["points_stable"] = stable;
    j["notes"] = {
        {"preset_ranges", "figure preset axis ranges are read off plot axes and approximate"},
    };
    os << j.dump(2) << '\n';
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    }
    return x;
}

int parse_int(const std::string& v, const std::string& key) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
    }
    return static_cast<int>(x);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

SweepSpec parse_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        kv[key] = value;
    }

    SweepSpec spec;
    if (auto it = kv.find("preset"); it != kv.end()) {
        spec = preset_spec(it->second);
        kv.erase(it);
    }
    for (const auto& [key, value] : kv) {
        if (key == "spin_ratio") spec.base.spin_ratio = parse_double(value, key);
        else if (key == "field_ratio") spec.base.field_ratio = parse_double(value, key);
        else if (key == "anis_a") spec.base.anis_a = parse_double(value, key);
        else if (key == "kappa_a") spec.base.kappa_a = parse_double(value, key);
        else if (key == "kappa_b") spec.base.kappa_b = parse_double(value, key);
        else if (key == "kappa_c") spec.base.kappa_c = parse_double(value, key);
        else if (key == "g_ac") spec.base.g_ac = parse_double(value, key);
        else if (key == "omega_c_over_hsp") spec.base.omega_c_over_hsp = parse_double(value, key);
        else if (key == "cavity_enabled") spec.base.cavity_enabled = parse_bool(value, key);
        else if (key == "axis") spec.axis = axis_from_name(value);
        else if (key == "start") spec.start = parse_double(value, key);
        else if (key == "stop") spec.stop = parse_double(value, key);
        else if (key == "points") spec.points = parse_int(value, key);
        else if (key == "optimize_field") spec.optimize_field = parse_bool(value, key);
        else throw ConfigError("unknown key '" + key + "'");
    }
    return spec;
}

std::string serialize_config(const SweepSpec& spec) {
    std::ostringstream os;
    if (!spec.preset.empty()) os << "preset = " << spec.preset << '\n';
    os << "spin_ratio = " << fmt(spec.base.spin_ratio) << '\n'
       << "field_ratio = " << fmt(spec.base.field_ratio) << '\n'
       << "anis_a = " << fmt(spec.base.anis_a) << '\n'
       << "kappa_a = " << fmt(spec.base.kappa_a) << '\n'
       << "kappa_b = " << fmt(spec.base.kappa_b) << '\n'
       << "kappa_c = " << fmt(spec.base.kappa_c) << '\n'
       << "g_ac = " << fmt(spec.base.g_ac) << '\n'
       << "omega_c_over_hsp = " << fmt(spec.base.omega_c_over_hsp) << '\n'
       << "cavity_enabled = " << (spec.base.cavity_enabled ? "true" : "false") << '\n'
       << "axis = " << axis_name(spec.axis) << '\n'
       << "start = " << fmt(spec.start) << '\n'
       << "stop = " << fmt(spec.stop) << '\n'
       << "points = " << spec.points << '\n'
       << "optimize_field = " << (spec.optimize_field ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace magsteer
