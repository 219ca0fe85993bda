#pragma once

#include <span>
#include <vector>

#include "phonon/dynamics.hpp"
#include "phonon/observables.hpp"

namespace phonon {

enum class InitialState {
    ground,             // interacting ground state at the uniform initial U
    fock_unit_filling,  // one phonon per site (requires N = L)
};

// Parameters of one local-quench run: prepare the uniform-U ground state,
// flip the sign of U at one site, and record observables on a uniform grid of
// `samples` times covering t*U in [0, t_max_u]. The post-quench couplings are
// always derived from u_initial, never stored separately.
struct QuenchSpec {
    int sites = 5;
    int phonons = 5;
    double hopping = 1.0;    // J
    double u_initial = 1.0;  // uniform U before the flip
    int quench_site = 0;     // 1-based; 0 resolves to the central site
    int measure_site = 0;    // 1-based; 0 resolves to the quench site
    double t_max_u = 20.0;   // window length in units of 1/U
    int samples = 400;
    Boundary boundary = Boundary::open;
    InitialState initial_state = InitialState::ground;
    bool apply_sign_flip = true;      // false runs the unquenched control
    bool allow_sign_override = false; // permit J < 0 or U <= 0
    std::size_t dimension_cap = BasisSector::default_dimension_cap;
    std::size_t dense_cap = dense_dimension_cap;

    int resolved_quench_site() const { return quench_site > 0 ? quench_site : (sites + 1) / 2; }
    int resolved_measure_site() const {
        return measure_site > 0 ? measure_site : resolved_quench_site();
    }
};

struct QuenchResult {
    QuenchSpec spec;
    double ground_energy = 0.0;
    std::vector<double> overlap_weights;  // |c0_a|^2, spectral path only
    ObservableSeries zero_phonon;         // n_{i0}(t); times carry t*U
    ObservableSeries density;             // <n_i>(t);  times carry t*U
    bool degeneracy_warning = false;
};

QuenchResult run_quench(const QuenchSpec& spec);

// Variant reusing an already-enumerated sector (shared, immutable) so sweep
// workers do not rebuild it per point.
QuenchResult run_quench(const QuenchSpec& spec, const BasisSector& sector);

// One run per J/U ratio at fixed hopping (U adjusted per point, the
// experimental knob), collecting the oscillation amplitude and time mean of
// n_{i0}. Points are independent jobs; results come back in input order.
struct SweepPoint {
    double j_over_u = 0.0;
    double amplitude = 0.0;
    double mean_zero_phonon = 0.0;
};
std::vector<SweepPoint> sweep_max_variation(const QuenchSpec& base,
                                            std::span<const double> ju_values, int workers = 1);

// Ground-state order-parameter magnitude per interaction value, for the
// Mott-to-superfluid crossover curve. With the positive hopping convention the
// nearest-neighbour correlation carries an alternating gauge sign on the open
// chain, so the gauge-invariant magnitude is reported.
struct CrossoverPoint {
    double j_over_u = 0.0;
    double delta_avg = 0.0;      // |<b_i^+ b_{i+1}>| averaged over bonds
    double delta_central = 0.0;  // central bond
    double gap_over_u = 0.0;     // (E_1 - E_0) / U
};
std::vector<CrossoverPoint> crossover_curve(int sites, int phonons, double hopping,
                                            std::span<const double> u_values,
                                            Boundary boundary = Boundary::open, int workers = 1);

}  // namespace phonon
