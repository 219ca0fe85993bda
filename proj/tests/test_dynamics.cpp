#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "phonon/dynamics.hpp"
#include "phonon/observables.hpp"

using namespace phonon;
using Complex = std::complex<double>;

namespace {

// analytic two-site N=2 spectrum: {2U, U - sqrt(U^2+4J^2), U + sqrt(U^2+4J^2)}
// plus the 2 omega_x trap shift
std::vector<double> two_site_spectrum(double j, double u, double w) {
    const double root = std::sqrt(u * u + 4.0 * j * j);
    std::vector<double> e{u - root + 2 * w, 2 * u + 2 * w, u + root + 2 * w};
    std::sort(e.begin(), e.end());
    return e;
}

Eigen::VectorXcd random_state(std::size_t dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {gauss(rng), gauss(rng)};
    v.normalize();
    return v;
}

std::vector<double> time_grid(double t_end, int samples) {
    std::vector<double> times(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) times[static_cast<std::size_t>(k)] = t_end * k / (samples - 1);
    return times;
}

}  // namespace

TEST_CASE("single-state sector diagonalizes trivially") {
    const BasisSector sector = BasisSector::enumerate(1, 2);
    const double u = 0.9, w = 0.35;
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(1, 0.0, u, w), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    REQUIRE(sd.dim() == 1);
    CHECK(sd.energies[0] == doctest::Approx(2 * u + 2 * w).epsilon(1e-12));
}

TEST_CASE("two-site spectrum matches the analytic formula for random couplings") {
    const BasisSector sector = BasisSector::enumerate(2, 2);
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> coupling(0.05, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double j = coupling(rng), u = coupling(rng), w = coupling(rng);
        const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(2, j, u, w), sector);
        const SpectralDecomposition sd = full_diagonalize(h);
        const std::vector<double> expected = two_site_spectrum(j, u, w);
        const double scale = std::abs(expected.back());
        for (int a = 0; a < 3; ++a) {
            CHECK(std::abs(sd.energies[a] - expected[static_cast<std::size_t>(a)]) <=
                  1e-9 * scale);
        }
    }
}

TEST_CASE("trace identity on a random four-site operator") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    std::mt19937 rng(17u);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    HamiltonianSpec spec;
    spec.hopping = coupling(rng);
    spec.trap_frequency = coupling(rng);
    for (int s = 0; s < 4; ++s) spec.u_site.push_back(coupling(rng));
    const SparseOperator h = build_hamiltonian(spec, sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    CHECK(std::abs(sd.energies.sum() - h.trace()) <= 1e-9 * std::abs(h.trace()));
}

TEST_CASE("decomposition satisfies orthonormality and the eigen-residual bound") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(4, 0.8, 1.1), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    const auto dim = static_cast<Eigen::Index>(sd.dim());
    const Eigen::MatrixXd gram = sd.eigenvectors.transpose() * sd.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-9);
    const double norm_scale = sd.energies.cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < dim; ++a) {
        const Eigen::VectorXd residual =
            h.apply(Eigen::VectorXd(sd.eigenvectors.col(a))) - sd.energies[a] * sd.eigenvectors.col(a);
        CHECK(residual.norm() <= 1e-9 * norm_scale);
    }
    for (Eigen::Index a = 1; a < dim; ++a) CHECK(sd.energies[a] >= sd.energies[a - 1]);
}

TEST_CASE("dense cap rejection points at the krylov path") {
    const BasisSector sector = BasisSector::enumerate(5, 5);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(5, 1.0, 1.0), sector);
    try {
        full_diagonalize(h, 100);
        FAIL("expected SizingError");
    } catch (const SizingError& error) {
        CHECK(std::string(error.what()).find("krylov") != std::string::npos);
    }
}

TEST_CASE("ground state at zero hopping is the unit-filling Fock state") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const double w = 0.25;
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(4, 0.0, 1.0, w), sector);
    const GroundState ground = ground_state(h);
    CHECK(ground.energy == doctest::Approx(w * 4).epsilon(1e-12));
    FockState filled;
    filled.occupations.assign(4, 1);
    const auto k = static_cast<Eigen::Index>(sector.rank(filled));
    CHECK(std::abs(ground.vector[k]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(ground.degenerate);
}

TEST_CASE("two-site ground energy matches the closed form") {
    const BasisSector sector = BasisSector::enumerate(2, 2);
    const double j = 0.6, u = 1.4, w = 0.3;
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(2, j, u, w), sector);
    const GroundState ground = ground_state(h);
    CHECK(ground.energy ==
          doctest::Approx(u - std::sqrt(u * u + 4 * j * j) + 2 * w).epsilon(1e-12));
}

TEST_CASE("ground state agrees with the lowest entry of the full decomposition") {
    const BasisSector sector = BasisSector::enumerate(5, 5);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(5, 2.0, 1.0), sector);
    const GroundState ground = ground_state(h);
    const SpectralDecomposition sd = full_diagonalize(h);
    CHECK(ground.energy == doctest::Approx(sd.energies[0]).epsilon(1e-12));
    CHECK(std::abs(ground.vector.dot(Eigen::VectorXd(sd.eigenvectors.col(0)))) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("iterative ground state matches the dense one when forced past the cap") {
    const BasisSector sector = BasisSector::enumerate(5, 5);  // dim 126
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(5, 0.7, 1.0), sector);
    const GroundState dense = ground_state(h);
    const GroundState lanczos = ground_state(h, 50);  // force the iterative path
    CHECK(std::abs(lanczos.energy - dense.energy) <= 1e-8 * std::abs(dense.energy));
    CHECK(std::abs(lanczos.vector.dot(dense.vector)) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("attractive uniform chain at zero hopping reports ground degeneracy") {
    // all phonons piled on any one site give the same energy
    const BasisSector sector = BasisSector::enumerate(3, 3);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(3, 0.0, -1.0), sector);
    const GroundState ground = ground_state(h);
    CHECK(ground.degenerate);
    CHECK(ground.degenerate_levels.size() == 3);
}

TEST_CASE("spectral evolution of an eigenstate is stationary") {
    const BasisSector sector = BasisSector::enumerate(3, 3);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(3, 0.9, 1.2), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    const Eigen::VectorXcd psi0 = sd.eigenvectors.col(4).cast<Complex>();
    const std::vector<double> times{0.0, 0.7, 3.1, 12.0};
    const std::vector<EvolvedState> evolved = evolve_spectral(sd, psi0, times);
    for (const EvolvedState& state : evolved) {
        CHECK(std::abs(std::abs(psi0.dot(state.amplitudes)) - 1.0) <= 1e-10);
        CHECK(local_density(state.amplitudes, sector, 2) ==
              doctest::Approx(local_density(psi0, sector, 2)).epsilon(1e-10));
    }
}

TEST_CASE("spectral evolution returns the initial state at t = 0") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(4, 0.8, 1.0), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    const Eigen::VectorXcd psi0 = random_state(sector.dimension(), 61u);
    const std::vector<double> times{0.0};
    const std::vector<EvolvedState> evolved = evolve_spectral(sd, psi0, times);
    CHECK((evolved[0].amplitudes - psi0).norm() <= 1e-9);
}

TEST_CASE("spectral evolution rejects unnormalized input") {
    const BasisSector sector = BasisSector::enumerate(2, 2);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(2, 1.0, 1.0), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    const Eigen::VectorXcd bad = 2.0 * random_state(sector.dimension(), 3u);
    const std::vector<double> times{0.0};
    CHECK_THROWS_AS(evolve_spectral(sd, bad, times), InputError);
}

TEST_CASE("overlap weights attached to a decomposition sum to one") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(4, 0.8, 1.0), sector);
    SpectralDecomposition sd = full_diagonalize(h);
    sd.attach_initial_state(random_state(sector.dimension(), 71u));
    CHECK(std::abs(sd.overlaps.squaredNorm() - 1.0) <= 1e-9);
}

TEST_CASE("krylov propagation of a diagonal-Hamiltonian eigenstate is a pure phase") {
    const BasisSector sector = BasisSector::enumerate(3, 3);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(3, 0.0, 1.3), sector);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector.dimension()));
    psi0[3] = 1.0;
    const std::vector<double> times{0.0, 2.5, 9.0};
    const std::vector<EvolvedState> evolved = evolve_krylov(h, psi0, times, 1e-10);
    for (const EvolvedState& state : evolved) {
        CHECK(std::abs(std::abs(psi0.dot(state.amplitudes)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("krylov agrees with spectral evolution after a quench") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h_initial =
        build_hamiltonian(HamiltonianSpec::uniform(4, 0.7, 1.0), sector);
    const SparseOperator h_final = build_hamiltonian(
        HamiltonianSpec::uniform(4, 0.7, 1.0).with_sign_flipped(2), sector);
    const Eigen::VectorXcd psi0 = ground_state(h_initial).vector.cast<Complex>();
    const std::vector<double> times = time_grid(20.0, 81);

    const SpectralDecomposition sd = full_diagonalize(h_final);
    const std::vector<EvolvedState> spectral = evolve_spectral(sd, psi0, times);
    const std::vector<EvolvedState> krylov = evolve_krylov(h_final, psi0, times, 1e-10);

    const double energy0 = std::real(psi0.dot(h_final.apply(psi0)));
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK((spectral[k].amplitudes - krylov[k].amplitudes).norm() <= 1e-8);
        CHECK(std::abs(krylov[k].amplitudes.norm() - 1.0) <= 1e-9);
        const double energy =
            std::real(krylov[k].amplitudes.dot(h_final.apply(krylov[k].amplitudes)));
        CHECK(std::abs(energy - energy0) <= 1e-8 * std::abs(energy0));
    }
}

TEST_CASE("krylov single long step agrees with many short steps") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h = build_hamiltonian(
        HamiltonianSpec::uniform(4, 0.9, 1.0).with_sign_flipped(2), sector);
    const Eigen::VectorXcd psi0 =
        ground_state(build_hamiltonian(HamiltonianSpec::uniform(4, 0.9, 1.0), sector))
            .vector.cast<Complex>();
    const std::vector<double> single{20.0};
    const std::vector<double> split = time_grid(20.0, 9);
    const Eigen::VectorXcd direct = evolve_krylov(h, psi0, single, 1e-10)[0].amplitudes;
    const Eigen::VectorXcd stepped = evolve_krylov(h, psi0, split, 1e-10).back().amplitudes;
    CHECK((direct - stepped).norm() <= 1e-9);
}

TEST_CASE("krylov rejects a non-positive tolerance") {
    const BasisSector sector = BasisSector::enumerate(2, 2);
    const SparseOperator h = build_hamiltonian(HamiltonianSpec::uniform(2, 1.0, 1.0), sector);
    const Eigen::VectorXcd psi0 = random_state(sector.dimension(), 13u);
    const std::vector<double> times{1.0};
    CHECK_THROWS_AS(evolve_krylov(h, psi0, times, 0.0), InputError);
}

TEST_CASE("revival probability is bounded by one with equality at t = 0") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h_initial =
        build_hamiltonian(HamiltonianSpec::uniform(4, 0.5, 1.0), sector);
    const SparseOperator h_final = build_hamiltonian(
        HamiltonianSpec::uniform(4, 0.5, 1.0).with_sign_flipped(2), sector);
    const Eigen::VectorXcd psi0 = ground_state(h_initial).vector.cast<Complex>();
    const SpectralDecomposition sd = full_diagonalize(h_final);
    const std::vector<double> times = time_grid(20.0, 101);
    const std::vector<EvolvedState> evolved = evolve_spectral(sd, psi0, times);
    CHECK(std::norm(psi0.dot(evolved[0].amplitudes)) == doctest::Approx(1.0).epsilon(1e-10));
    for (const EvolvedState& state : evolved) {
        CHECK(std::norm(psi0.dot(state.amplitudes)) <= 1.0 + 1e-12);
        CHECK(std::abs(state.amplitudes.norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("spectral evolution is identical across worker counts") {
    const BasisSector sector = BasisSector::enumerate(4, 4);
    const SparseOperator h = build_hamiltonian(
        HamiltonianSpec::uniform(4, 0.6, 1.0).with_sign_flipped(2), sector);
    const SpectralDecomposition sd = full_diagonalize(h);
    const Eigen::VectorXcd psi0 = random_state(sector.dimension(), 23u);
    const std::vector<double> times = time_grid(10.0, 33);
    const std::vector<EvolvedState> serial = evolve_spectral(sd, psi0, times, 1);
    const std::vector<EvolvedState> parallel = evolve_spectral(sd, psi0, times, 4);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK((serial[k].amplitudes - parallel[k].amplitudes).norm() == 0.0);
    }
}
