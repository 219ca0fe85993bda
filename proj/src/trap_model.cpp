#include "phonon/trap_model.hpp"

#include <cmath>
#include <numbers>

namespace phonon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStabilityBound = 0.9;

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw DomainError(std::string(name) + " must be positive");
    }
}

}  // namespace

void TrapParams::validate() const {
    require_positive(rf_drive_hz, "rf drive frequency");
    require_positive(axial_freq_hz, "axial frequency");
    require_positive(ion_spacing_m, "ion spacing");
    require_positive(ion_mass_kg, "ion mass");
    require_positive(standing_wave_f_hz, "standing wave strength");
    require_positive(standing_wave_lambda_m, "standing wave wavelength");
    require_positive(quench_mod_freq_hz, "quench modulation frequency");
    if (!(stability_q > 0.0) || stability_q >= kStabilityBound) {
        throw DomainError("stability parameter q must lie in (0, 0.9)");
    }
    if (delta_parity != 0 && delta_parity != 1) {
        throw DomainError("delta parity must be 0 or 1");
    }
}

void DetectionParams::validate() const {
    auto in_unit_interval = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit_interval(branching_f) || !in_unit_interval(quantum_eff) ||
        !in_unit_interval(optics_loss) || !in_unit_interval(solid_angle)) {
        throw DomainError("detection fractions must lie in (0, 1]");
    }
    if (!(numerical_aperture > 0.0) || numerical_aperture >= 1.0) {
        throw DomainError("numerical aperture must lie in (0, 1)");
    }
    require_positive(p_lifetime_s, "excited-state lifetime");
}

double radial_frequency_hz(double rf_drive_hz, double stability_q) {
    require_positive(rf_drive_hz, "rf drive frequency");
    if (!(stability_q > 0.0) || stability_q >= kStabilityBound) {
        throw DomainError("stability parameter q must lie in (0, 0.9)");
    }
    return stability_q * rf_drive_hz / (2.0 * std::sqrt(2.0));
}

double lamb_dicke(double lambda_m, double ion_mass_kg, double omega_x_hz) {
    require_positive(lambda_m, "wavelength");
    require_positive(ion_mass_kg, "ion mass");
    require_positive(omega_x_hz, "radial frequency");
    const double k = 2.0 * kPi / lambda_m;
    const double omega_rad = 2.0 * kPi * omega_x_hz;
    return k * std::sqrt(constants::hbar / (2.0 * ion_mass_kg * omega_rad));
}

double hopping_hz(double ion_spacing_m, double ion_mass_kg, double omega_x_hz) {
    require_positive(ion_spacing_m, "ion spacing");
    require_positive(ion_mass_kg, "ion mass");
    require_positive(omega_x_hz, "radial frequency");
    const double coulomb = constants::elementary_charge * constants::elementary_charge /
                           (4.0 * kPi * constants::vacuum_permittivity *
                            ion_spacing_m * ion_spacing_m * ion_spacing_m);
    const double omega_rad = 2.0 * kPi * omega_x_hz;
    const double hopping_rad = coulomb / (2.0 * ion_mass_kg * omega_rad);
    return hopping_rad / (2.0 * kPi);
}

double onsite_interaction_hz(double f_hz, double eta_x, int delta_parity) {
    require_positive(f_hz, "standing wave strength");
    if (delta_parity != 0 && delta_parity != 1) {
        throw DomainError("delta parity must be 0 or 1");
    }
    const double sign = delta_parity == 0 ? 1.0 : -1.0;
    return 2.0 * sign * f_hz * eta_x * eta_x * eta_x * eta_x;
}

double solid_angle_fraction(double numerical_aperture) {
    if (!(numerical_aperture >= 0.0) || numerical_aperture >= 1.0) {
        throw DomainError("numerical aperture must lie in [0, 1)");
    }
    return 0.5 * (1.0 - std::sqrt(1.0 - numerical_aperture * numerical_aperture));
}

double mean_count_rate(const DetectionParams& det) {
    det.validate();
    const double gamma = (det.gamma_angular ? 2.0 * kPi : 1.0) / det.p_lifetime_s;
    return det.branching_f * det.solid_angle * gamma * det.quantum_eff * det.optics_loss / 2.0;
}

ObservableSeries photon_series(const ObservableSeries& n_series, const DetectionParams& det,
                               std::optional<double> u_hz) {
    const double rate = mean_count_rate(det);
    ObservableSeries out;
    out.site = n_series.site;
    out.times.reserve(n_series.times.size());
    out.values.reserve(n_series.values.size());
    for (double v : n_series.values) {
        if (v < -1e-9 || v > 1.0 + 1e-9) {
            throw InputError("projection probabilities must lie in [0, 1], got " +
                             std::to_string(v));
        }
        out.values.push_back(rate * v);
    }
    for (double t_u : n_series.times) {
        if (u_hz) {
            require_positive(*u_hz, "interaction strength");
            out.times.push_back(t_u / (2.0 * kPi * *u_hz));
        } else {
            out.times.push_back(t_u);
        }
    }
    return out;
}

DerivedCouplings derive_couplings(const TrapParams& trap) {
    trap.validate();
    DerivedCouplings derived;
    derived.omega_x_hz = radial_frequency_hz(trap.rf_drive_hz, trap.stability_q);
    derived.eta_x = lamb_dicke(trap.standing_wave_lambda_m, trap.ion_mass_kg, derived.omega_x_hz);
    derived.hopping_hz = hopping_hz(trap.ion_spacing_m, trap.ion_mass_kg, derived.omega_x_hz);
    derived.onsite_u_hz =
        onsite_interaction_hz(trap.standing_wave_f_hz, derived.eta_x, trap.delta_parity);
    derived.beta_x = 2.0 * derived.hopping_hz / derived.omega_x_hz;
    return derived;
}

bool ValidityReport::all_pass() const {
    for (const ValidityCheck& check : checks) {
        if (check.status != ValidityStatus::pass) return false;
    }
    return true;
}

ValidityReport validity_report(const DerivedCouplings& derived, double quench_mod_freq_hz,
                               double standing_wave_f_hz, double eta_x) {
    auto grade = [](double ratio) {
        if (ratio <= validity_pass_threshold) return ValidityStatus::pass;
        if (ratio <= validity_marginal_threshold) return ValidityStatus::marginal;
        return ValidityStatus::fail;
    };
    const double coupling_scale = std::max(std::abs(derived.hopping_hz),
                                           std::abs(derived.onsite_u_hz));
    ValidityReport report;
    auto add = [&](std::string name, double ratio) {
        report.checks.push_back({std::move(name), ratio, grade(ratio)});
    };
    // phonon number conservation: J, U << omega_x
    add("max_JU/omega_x", coupling_scale / derived.omega_x_hz);
    // quench suddenness window: omega_x >> omega_0 >> J, U
    add("omega_0/omega_x", quench_mod_freq_hz / derived.omega_x_hz);
    add("max_JU/omega_0", coupling_scale / quench_mod_freq_hz);
    // standing-wave perturbativity: F eta_x^2 << omega_x
    add("F*eta_x^2/omega_x", standing_wave_f_hz * eta_x * eta_x / derived.omega_x_hz);
    return report;
}

}  // namespace phonon
