#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magsteer/measures.hpp"
#include "magsteer/model.hpp"

namespace magsteer {

enum class Axis { field_ratio, spin_ratio, kappa_ratio_b_over_a, g_ac };

const char* axis_name(Axis axis);
Axis axis_from_name(const std::string& name);  // throws ConfigError

/// One-dimensional parameter sweep. When `optimize_field` is set, every
/// grid point maximizes E_N over field_ratio before measuring.
struct SweepSpec {
    SystemParams base;
    Axis axis = Axis::field_ratio;
    double start = -0.5;
    double stop = 0.5;
    int points = 401;
    std::string preset;
    bool optimize_field = false;

    void validate() const;  // throws ConfigError
    bool operator==(const SweepSpec&) const = default;
};

struct SweepRow {
    double axis_value = 0.0;
    MeasureSet m;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
};

/// Known figure presets: fig2a fig2b fig3a fig3b fig4 fig5 fig6 fig6a-fig6d.
SweepSpec preset_spec(const std::string& name);  // throws ConfigError
std::vector<std::string> preset_names();

/// Field ratio at which the lower magnon band crosses the photon frequency.
double resonance_field(const SystemParams& p);

/// The SystemParams of one grid point of a sweep.
SystemParams params_at(const SweepSpec& spec, double axis_value);

/// Evaluates one grid point, including the g_ac coupling override and the
/// optional inner field optimization. Never throws for out-of-range points;
/// those come back flagged unstable.
MeasureSet evaluate_sweep_point(const SweepSpec& spec, double axis_value);

/// Runs the grid on a worker pool (width from MAGSTEER_WORKERS, default
/// hardware concurrency). Row order matches the grid regardless of width.
SweepResult run_sweep(const SweepSpec& spec);

/// Fixed-column CSV; unstable points leave measure fields empty.
void write_csv(const SweepResult& result, std::ostream& os);

/// JSON sidecar with resolved parameters and solver tolerances.
void write_metadata(const SweepResult& result, std::ostream& os);

/// Flat key = value configuration, exact SweepSpec/SystemParams field names.
/// Unknown or duplicate keys are errors.
SweepSpec parse_config(std::istream& is);
std::string serialize_config(const SweepSpec& spec);

int worker_count();

}  // namespace magsteer
