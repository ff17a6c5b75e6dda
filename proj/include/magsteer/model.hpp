#pragma once

namespace magsteer {

/// Physical knobs of the cavity-ferrimagnet system, expressed in units of
/// the sublattice-B exchange frequency (omega_b_ex = 1).
struct SystemParams {
    double spin_ratio = 1.0;        ///< S_B / S_A
    double field_ratio = 0.0;       ///< H / H_sp
    double anis_a = 0.0163;         ///< sublattice-A anisotropy frequency
    double kappa_a = 1e-3;
    double kappa_b = 1e-3;
    double kappa_c = 3e-3;
    double g_ac = 0.01;             ///< magnon-a <-> photon coupling
    double omega_c_over_hsp = 0.85; ///< photon frequency over spin-flop field
    bool cavity_enabled = true;

    /// Throws std::invalid_argument when a field is non-finite or out of range.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

/// Concrete mode frequencies and couplings of the three-mode Hamiltonian.
struct DerivedModel {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double omega_c = 0.0;
    double g_ab = 0.0;
    double g_ac = 0.0;
    double g_bc = 0.0;
    double h_sp = 0.0;
};

/// Spin-flop field sqrt(w_an (w_an + 2)) evaluated at the equal-spin
/// anisotropy, the common field normalization for every spin ratio.
double spin_flop_field(const SystemParams& p);

/// Maps SystemParams onto mode frequencies and couplings.
/// Throws InvalidModel when omega_a or omega_b is nonpositive and
/// SingularTransform when omega_a + omega_b <= 2 g_ab.
DerivedModel derive_model(const SystemParams& p);

namespace detail {

/// Same derivation with an explicit frequency unit; all rate-like inputs of
/// SystemParams are then read as absolute frequencies in that unit. The
/// public derive_model fixes the unit to 1.
DerivedModel derive_model_with_unit(const SystemParams& p, double omega_b_ex);

}  // namespace detail

}  // namespace magsteer
