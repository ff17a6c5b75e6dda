#include "magsteer/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "magsteer/errors.hpp"

namespace magsteer {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string("SystemParams: ") + name + " must be finite");
    }
}

}  // namespace

void SystemParams::validate() const {
    require_finite(spin_ratio, "spin_ratio");
    require_finite(field_ratio, "field_ratio");
    require_finite(anis_a, "anis_a");
    require_finite(kappa_a, "kappa_a");
    require_finite(kappa_b, "kappa_b");
    require_finite(kappa_c, "kappa_c");
    require_finite(g_ac, "g_ac");
    require_finite(omega_c_over_hsp, "omega_c_over_hsp");
    if (spin_ratio <= 0.0) throw std::invalid_argument("SystemParams: spin_ratio must be > 0");
    if (anis_a < 0.0) throw std::invalid_argument("SystemParams: anis_a must be >= 0");
    if (kappa_a <= 0.0 || kappa_b <= 0.0 || kappa_c <= 0.0) {
        throw std::invalid_argument("SystemParams: damping rates must be > 0");
    }
    if (g_ac < 0.0) throw std::invalid_argument("SystemParams: g_ac must be >= 0");
    if (omega_c_over_hsp <= 0.0) {
        throw std::invalid_argument("SystemParams: omega_c_over_hsp must be > 0");
    }
}

double spin_flop_field(const SystemParams& p) {
    if (!(p.anis_a >= 0.0)) {
        throw std::invalid_argument("spin_flop_field: anisotropy must be >= 0");
    }
    return std::sqrt(p.anis_a * (p.anis_a + 2.0));
}

namespace detail {

DerivedModel derive_model_with_unit(const SystemParams& p, double omega_b_ex) {
    p.validate();
    if (!(omega_b_ex > 0.0)) {
        throw std::invalid_argument("derive_model: frequency unit must be > 0");
    }
    const double s = p.spin_ratio;
    const double h_sp = std::sqrt(p.anis_a * (p.anis_a + 2.0 * omega_b_ex));
    const double h = p.field_ratio * h_sp;

    DerivedModel dm;
    dm.h_sp = h_sp;
    dm.omega_a = s * omega_b_ex + p.anis_a + h;
    dm.omega_b = omega_b_ex + s * p.anis_a - h;
    dm.omega_c = p.omega_c_over_hsp * h_sp;
    dm.g_ab = std::sqrt(s) * omega_b_ex;
    dm.g_ac = p.cavity_enabled ? p.g_ac : 0.0;
    dm.g_bc = p.cavity_enabled ? p.g_ac * std::sqrt(s) : 0.0;

    if (dm.omega_a <= 0.0 || dm.omega_b <= 0.0) {
        throw InvalidModel("derive_model: nonpositive magnon frequency (omega_a = " +
                           std::to_string(dm.omega_a) + ", omega_b = " +
                           std::to_string(dm.omega_b) + ")");
    }
    if (dm.omega_a + dm.omega_b <= 2.0 * dm.g_ab) {
        throw SingularTransform("derive_model: omega_a + omega_b <= 2 g_ab, "
                                "two-mode squeezing transform is singular");
    }
    return dm;
}

}  // namespace detail

DerivedModel derive_model(const SystemParams& p) {
    return detail::derive_model_with_unit(p, 1.0);
}

}  // namespace magsteer
