#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phonon/errors.hpp"
#include "phonon/observables.hpp"

namespace phonon {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double ba138_mass_kg = 137.9052472 * atomic_mass_unit;
}  // namespace constants

// Hardware inputs of the linear Paul trap and the interaction-generating
// standing wave. Frequencies are cycle frequencies (Hz); conversions to
// angular units happen inside the formulas that need them.
struct TrapParams {
    double rf_drive_hz = 15e6;
    double stability_q = 0.42;
    double axial_freq_hz = 180e3;  // provenance only, enters no derived coupling
    double ion_spacing_m = 20e-6;
    double ion_mass_kg = constants::ba138_mass_kg;
    double standing_wave_f_hz = 2.25e6;  // dipole interaction strength F, nominally ~ omega_x
    double standing_wave_lambda_m = 300e-9;
    int delta_parity = 0;  // 0: ions at potential maxima, 1: minima
    double quench_mod_freq_hz = 75e3;  // piezo modulation frequency omega_0

    void validate() const;
};

// Effective chain couplings derived from TrapParams, all in Hz.
struct DerivedCouplings {
    double omega_x_hz = 0.0;
    double eta_x = 0.0;
    double hopping_hz = 0.0;
    double onsite_u_hz = 0.0;
    double beta_x = 0.0;  // 2 J / omega_x
};

// Fluorescence detection constants. `solid_angle` defaults to the quoted
// detection fraction 0.04 for a NA = 0.4 lens; solid_angle_fraction() gives
// the exact value (0.0417) when preferred.
struct DetectionParams {
    double branching_f = 0.73;
    double numerical_aperture = 0.4;
    double solid_angle = 0.04;
    double p_lifetime_s = 7.8e-9;
    double quantum_eff = 0.5;
    double optics_loss = 0.1;
    bool gamma_angular = false;  // use 2 pi / tau instead of 1 / tau for the linewidth

    void validate() const;
};

// Lowest-order pseudopotential radial frequency, omega_x = q Omega / (2 sqrt 2).
double radial_frequency_hz(double rf_drive_hz, double stability_q);

// Lamb-Dicke parameter eta_x = (2 pi / lambda) sqrt(hbar / (2 m omega)).
double lamb_dicke(double lambda_m, double ion_mass_kg, double omega_x_hz);

// Coulomb-mediated transverse hopping J = e^2 / (4 pi eps0 d^3) / (2 m omega),
// reported as a cycle frequency.
double hopping_hz(double ion_spacing_m, double ion_mass_kg, double omega_x_hz);

// On-site interaction U = 2 (-1)^delta F eta_x^4.
double onsite_interaction_hz(double f_hz, double eta_x, int delta_parity);

// Fractional detection solid angle (1 - sqrt(1 - NA^2)) / 2.
double solid_angle_fraction(double numerical_aperture);

// Mean fluorescence count rate <R> = f w Gamma Qe Qo / 2 with Gamma = 1/tau.
double mean_count_rate(const DetectionParams& det);

// Pointwise R_i(t) = <R> n_{i0}(t). When the physical U (Hz) is supplied the
// dimensionless t*U axis is converted to seconds via t = (t*U) / (2 pi U_hz).
ObservableSeries photon_series(const ObservableSeries& n_series, const DetectionParams& det,
                               std::optional<double> u_hz = std::nullopt);

DerivedCouplings derive_couplings(const TrapParams& trap);

// Operating-window audit. Each window is scored by a single ratio that must be
// small: ratio <= 0.1 passes, <= 0.25 is marginal, anything larger fails.
// Failures are report content, never exceptions.
enum class ValidityStatus { pass, marginal, fail };

struct ValidityCheck {
    std::string name;
    double ratio = 0.0;
    ValidityStatus status = ValidityStatus::pass;
};

struct ValidityReport {
    std::vector<ValidityCheck> checks;
    bool all_pass() const;
};

inline constexpr double validity_pass_threshold = 0.1;
inline constexpr double validity_marginal_threshold = 0.25;

ValidityReport validity_report(const DerivedCouplings& derived, double quench_mod_freq_hz,
                               double standing_wave_f_hz, double eta_x);

}  // namespace phonon
