#include "magsteer/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "magsteer/errors.hpp"

namespace magsteer::oracle {

namespace {

void require_decoupled(const DerivedModel& dm) {
    if (dm.g_ac != 0.0 || dm.g_bc != 0.0) {
        throw std::invalid_argument("oracle: cavity must be decoupled (g_ac = g_bc = 0)");
    }
}

double denominator(const DerivedModel& dm, const SystemParams& p) {
    const double ka = p.kappa_a, kb = p.kappa_b;
    const double g2 = dm.g_ab * dm.g_ab;
    const double sum_k = ka + kb;
    const double sum_w = dm.omega_a + dm.omega_b;
    return (ka * kb - g2) * sum_k * sum_k + ka * kb * sum_w * sum_w;
}

}  // namespace

NoCavityCM analytic_cm(const DerivedModel& dm, const SystemParams& p) {
    require_decoupled(dm);
    const double ka = p.kappa_a, kb = p.kappa_b;
    const double g = dm.g_ab;
    const double sum_k = ka + kb;
    const double sum_w = dm.omega_a + dm.omega_b;
    const double de = denominator(dm, p);
    if (std::abs(de) < 1e-300) {
        throw MarginalStability("oracle: De = 0 (marginal two-mode subsystem)");
    }
    NoCavityCM cm;
    cm.de = de;
    cm.n_a = g * g * sum_k * kb / de + 0.5;
    cm.n_b = g * g * sum_k * ka / de + 0.5;
    cm.c1 = -g * ka * kb * sum_w / de;
    cm.c2 = -g * ka * kb * sum_k / de;
    return cm;
}

Eigen::Matrix4d to_matrix(const NoCavityCM& cm) {
    Eigen::Matrix4d v;
    v << cm.n_a, 0.0,     cm.c1,  cm.c2,
         0.0,    cm.n_a,  cm.c2, -cm.c1,
         cm.c1,  cm.c2,   cm.n_b, 0.0,
         cm.c2, -cm.c1,   0.0,    cm.n_b;
    return v;
}

std::pair<double, double> analytic_steering(const DerivedModel& dm, const SystemParams& p) {
    require_decoupled(dm);
    const double ka = p.kappa_a, kb = p.kappa_b;
    const double g2 = dm.g_ab * dm.g_ab;
    const double de = denominator(dm, p);
    const double den = de + 2.0 * g2 * (ka * ka + kb * kb);
    if (den == 0.0) {
        throw MarginalStability("oracle: steering denominator vanished");
    }
    const double a_to_b = std::max(0.0, std::log(std::abs(1.0 + 2.0 * g2 * (kb - ka) * ka / den)));
    const double b_to_a = std::max(0.0, std::log(std::abs(1.0 + 2.0 * g2 * (ka - kb) * kb / den)));
    return {a_to_b, b_to_a};
}

}  // namespace magsteer::oracle
