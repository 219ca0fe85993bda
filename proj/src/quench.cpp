#include "phonon/quench.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phonon/parallel.hpp"

namespace phonon {

namespace {

void validate(const QuenchSpec& spec) {
    if (spec.samples < 1) {
        throw InputError("sample count must be at least 1, got " + std::to_string(spec.samples));
    }
    if (!(spec.t_max_u >= 0.0)) {
        throw InputError("time window must be non-negative");
    }
    if (!spec.allow_sign_override && (spec.hopping < 0.0 || spec.u_initial <= 0.0)) {
        throw InputError("quench expects J >= 0 and U > 0; set allow_sign_override to run other signs");
    }
    if (spec.u_initial == 0.0) {
        throw InputError("initial interaction must be nonzero, it sets the time unit");
    }
    const int q = spec.resolved_quench_site();
    const int m = spec.resolved_measure_site();
    if (q < 1 || q > spec.sites) {
        throw RangeError("quench site " + std::to_string(q) + " outside 1.." +
                         std::to_string(spec.sites));
    }
    if (m < 1 || m > spec.sites) {
        throw RangeError("measure site " + std::to_string(m) + " outside 1.." +
                         std::to_string(spec.sites));
    }
    if (spec.initial_state == InitialState::fock_unit_filling && spec.phonons != spec.sites) {
        throw InputError("unit-filling initial state requires N = L");
    }
}

std::vector<double> uniform_grid(double t_end, int samples) {
    std::vector<double> times(static_cast<std::size_t>(samples), 0.0);
    if (samples > 1) {
        const double dt = t_end / (samples - 1);
        for (int k = 0; k < samples; ++k) times[static_cast<std::size_t>(k)] = k * dt;
    }
    return times;
}

}  // namespace

QuenchResult run_quench(const QuenchSpec& spec) {
    return run_quench(spec,
                      BasisSector::enumerate(spec.sites, spec.phonons, spec.dimension_cap));
}

QuenchResult run_quench(const QuenchSpec& spec, const BasisSector& sector) {
    validate(spec);
    if (sector.sites() != spec.sites || sector.total_phonons() != spec.phonons) {
        throw DimensionError("sector does not match the quench sizes");
    }
    const int quench_site = spec.resolved_quench_site();
    const int measure_site = spec.resolved_measure_site();

    const HamiltonianSpec initial = HamiltonianSpec::uniform(spec.sites, spec.hopping,
                                                             spec.u_initial, 0.0, spec.boundary);
    const HamiltonianSpec final_spec =
        spec.apply_sign_flip ? initial.with_sign_flipped(quench_site) : initial;

    QuenchResult result;
    result.spec = spec;

    Eigen::VectorXcd psi0;
    if (spec.initial_state == InitialState::fock_unit_filling) {
        FockState filled;
        filled.occupations.assign(static_cast<std::size_t>(spec.sites), 1);
        const std::size_t k = sector.rank(filled);
        psi0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector.dimension()));
        psi0[static_cast<Eigen::Index>(k)] = 1.0;
        const SparseOperator h_initial = build_hamiltonian(initial, sector);
        result.ground_energy = std::real(psi0.dot(h_initial.apply(psi0)));
    } else {
        const SparseOperator h_initial = build_hamiltonian(initial, sector);
        const GroundState ground = ground_state(h_initial, spec.dense_cap);
        result.ground_energy = ground.energy;
        result.degeneracy_warning = ground.degenerate;
        psi0 = ground.vector.cast<std::complex<double>>();
    }

    const SparseOperator h_final = build_hamiltonian(final_spec, sector);
    const std::vector<double> times = uniform_grid(spec.t_max_u / std::abs(spec.u_initial),
                                                   spec.samples);

    result.zero_phonon.site = measure_site;
    result.density.site = measure_site;
    result.zero_phonon.values.reserve(times.size());
    result.density.values.reserve(times.size());
    for (double t : times) {
        // record the dimensionless axis t*U
        result.zero_phonon.times.push_back(t * std::abs(spec.u_initial));
        result.density.times.push_back(t * std::abs(spec.u_initial));
    }

    std::vector<EvolvedState> evolved;
    if (sector.dimension() <= spec.dense_cap) {
        SpectralDecomposition sd = full_diagonalize(h_final, spec.dense_cap);
        sd.attach_initial_state(psi0);
        result.overlap_weights.reserve(sd.dim());
        for (Eigen::Index a = 0; a < sd.overlaps.size(); ++a) {
            result.overlap_weights.push_back(std::norm(sd.overlaps[a]));
        }
        evolved = evolve_spectral(sd, psi0, times);
    } else {
        evolved = evolve_krylov(h_final, psi0, times);
    }
    for (const EvolvedState& state : evolved) {
        result.zero_phonon.values.push_back(
            occupation_projection(state.amplitudes, sector, measure_site, 0));
        result.density.values.push_back(local_density(state.amplitudes, sector, measure_site));
    }
    return result;
}

std::vector<SweepPoint> sweep_max_variation(const QuenchSpec& base,
                                            std::span<const double> ju_values, int workers) {
    if (ju_values.empty()) {
        throw InputError("sweep requires at least one J/U value");
    }
    for (std::size_t i = 0; i < ju_values.size(); ++i) {
        if (!(ju_values[i] > 0.0)) {
            throw InputError("J/U values must be positive");
        }
        if (i > 0 && ju_values[i] <= ju_values[i - 1]) {
            throw InputError("J/U values must be sorted strictly ascending");
        }
    }
    if (!(base.hopping > 0.0)) {
        throw InputError("sweep requires positive hopping, it fixes the U scale per point");
    }

    const BasisSector sector =
        BasisSector::enumerate(base.sites, base.phonons, base.dimension_cap);
    std::vector<SweepPoint> points(ju_values.size());
    parallel_for(ju_values.size(), workers, [&](std::size_t i) {
        QuenchSpec spec = base;
        spec.u_initial = base.hopping / ju_values[i];
        const QuenchResult run = run_quench(spec, sector);
        double mean = 0.0;
        for (double v : run.zero_phonon.values) mean += v;
        mean /= static_cast<double>(run.zero_phonon.values.size());
        points[i] = {ju_values[i], oscillation_amplitude(run.zero_phonon), mean};
    });
    return points;
}

std::vector<CrossoverPoint> crossover_curve(int sites, int phonons, double hopping,
                                            std::span<const double> u_values, Boundary boundary,
                                            int workers) {
    if (sites < 2) {
        throw InputError("crossover curve needs at least one bond (sites >= 2)");
    }
    if (u_values.empty()) {
        throw InputError("crossover curve requires at least one interaction value");
    }
    for (double u : u_values) {
        if (!(u > 0.0)) throw InputError("interaction values must be positive");
    }
    if (!(hopping > 0.0)) {
        throw InputError("crossover curve requires positive hopping");
    }

    const BasisSector sector = BasisSector::enumerate(sites, phonons);
    if (sector.dimension() < 2) {
        throw InputError("crossover curve needs a sector with at least two states");
    }
    const int central = (sites + 1) / 2;  // bond (central, central + 1)

    std::vector<CrossoverPoint> points(u_values.size());
    parallel_for(u_values.size(), workers, [&](std::size_t i) {
        const double u = u_values[i];
        const SparseOperator h =
            build_hamiltonian(HamiltonianSpec::uniform(sites, hopping, u, 0.0, boundary), sector);
        const SpectralDecomposition sd = full_diagonalize(h);
        const Eigen::VectorXcd ground = sd.eigenvectors.col(0).cast<std::complex<double>>();

        double sum = 0.0;
        double central_value = 0.0;
        const int bonds = sites - 1;
        for (int b = 1; b <= bonds; ++b) {
            const double delta = correlation(ground, sector, b, b + 1);
            sum += delta;
            if (b == central) central_value = delta;
        }
        CrossoverPoint& point = points[i];
        point.j_over_u = hopping / u;
        point.delta_avg = std::abs(sum / bonds);
        point.delta_central = std::abs(central_value);
        point.gap_over_u = (sd.energies[1] - sd.energies[0]) / u;
    });
    return points;
}

}  // namespace phonon
