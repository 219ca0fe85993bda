#include "phonon/observables.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace phonon {

namespace {

using Complex = std::complex<double>;

void check_site(const BasisSector& sector, int site) {
    if (site < 1 || site > sector.sites()) {
        throw RangeError("site " + std::to_string(site) + " outside 1.." +
                         std::to_string(sector.sites()));
    }
}

void check_state(const Eigen::VectorXcd& state, const BasisSector& sector) {
    if (static_cast<std::size_t>(state.size()) != sector.dimension()) {
        throw DimensionError("state length " + std::to_string(state.size()) +
                             " does not match sector dimension " +
                             std::to_string(sector.dimension()));
    }
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw InputError("state is not normalized (norm = " + std::to_string(norm) + ")");
    }
}

}  // namespace

double local_density(const Eigen::VectorXcd& state, const BasisSector& sector, int site) {
    check_site(sector, site);
    check_state(state, sector);
    const std::size_t j = static_cast<std::size_t>(site - 1);
    double density = 0.0;
    for (std::size_t k = 0; k < sector.dimension(); ++k) {
        density += std::norm(state[static_cast<Eigen::Index>(k)]) *
                   sector.states()[k].occupations[j];
    }
    return density;
}

double occupation_projection(const Eigen::VectorXcd& state, const BasisSector& sector, int site,
                             int occupation) {
    check_site(sector, site);
    if (occupation < 0 || occupation > sector.total_phonons()) {
        throw DomainError("occupation " + std::to_string(occupation) + " outside 0.." +
                          std::to_string(sector.total_phonons()));
    }
    check_state(state, sector);
    const std::size_t j = static_cast<std::size_t>(site - 1);
    double probability = 0.0;
    for (std::size_t k = 0; k < sector.dimension(); ++k) {
        if (sector.states()[k].occupations[j] == occupation) {
            probability += std::norm(state[static_cast<Eigen::Index>(k)]);
        }
    }
    return probability;
}

double correlation(const Eigen::VectorXcd& state, const BasisSector& sector, int site_i,
                   int site_j) {
    check_site(sector, site_i);
    check_site(sector, site_j);
    check_state(state, sector);
    const std::size_t i = static_cast<std::size_t>(site_i - 1);
    const std::size_t j = static_cast<std::size_t>(site_j - 1);

    if (site_i == site_j) {
        return local_density(state, sector, site_i);
    }

    // <psi| b_i^+ b_j |psi>: move one phonon j -> i in each basis state
    Complex value = 0.0;
    FockState moved;
    for (std::size_t k = 0; k < sector.dimension(); ++k) {
        const FockState& source = sector.states()[k];
        const int n_j = source.occupations[j];
        if (n_j == 0) continue;
        const int n_i = source.occupations[i];
        moved = source;
        moved.occupations[j] -= 1;
        moved.occupations[i] += 1;
        const std::size_t target = sector.rank(moved);
        value += std::conj(state[static_cast<Eigen::Index>(target)]) *
                 std::sqrt((n_i + 1.0) * n_j) * state[static_cast<Eigen::Index>(k)];
    }
    if (std::abs(value.imag()) > 1e-9) {
        throw DomainError("correlation has non-negligible imaginary part " +
                          std::to_string(value.imag()));
    }
    return value.real();
}

double oscillation_amplitude(const ObservableSeries& series) {
    if (series.values.empty()) {
        throw InputError("oscillation amplitude of an empty series");
    }
    double lo = series.values.front();
    double hi = series.values.front();
    for (double v : series.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

ObservableSeries zero_phonon_series(const SpectralDecomposition& sd, const Eigen::VectorXcd& psi0,
                                    const BasisSector& sector, int site,
                                    std::span<const double> times) {
    check_site(sector, site);
    if (sd.dim() != sector.dimension()) {
        throw DimensionError("decomposition dimension " + std::to_string(sd.dim()) +
                             " does not match sector dimension " +
                             std::to_string(sector.dimension()));
    }
    ObservableSeries series;
    series.site = site;
    series.times.assign(times.begin(), times.end());
    series.values.reserve(times.size());
    const std::vector<EvolvedState> states = evolve_spectral(sd, psi0, times);
    for (const EvolvedState& evolved : states) {
        series.values.push_back(occupation_projection(evolved.amplitudes, sector, site, 0));
    }
    return series;
}

SpectralSumSeries zero_phonon_series_spectral_sum(const SpectralDecomposition& sd,
                                                  const Eigen::VectorXcd& psi0,
                                                  const BasisSector& sector, int site,
                                                  std::span<const double> times) {
    check_site(sector, site);
    if (sd.dim() != sector.dimension()) {
        throw DimensionError("decomposition dimension " + std::to_string(sd.dim()) +
                             " does not match sector dimension " +
                             std::to_string(sector.dimension()));
    }
    const auto dim = static_cast<Eigen::Index>(sd.dim());
    const std::size_t j = static_cast<std::size_t>(site - 1);

    // M_ab = sum_{k0} d^i_{a k0} d^i_{k0 b} over the zero-phonon-at-site states
    std::vector<Eigen::Index> zero_rows;
    for (std::size_t k = 0; k < sector.dimension(); ++k) {
        if (sector.states()[k].occupations[j] == 0) {
            zero_rows.push_back(static_cast<Eigen::Index>(k));
        }
    }
    Eigen::MatrixXd projections(static_cast<Eigen::Index>(zero_rows.size()), dim);
    for (Eigen::Index r = 0; r < projections.rows(); ++r) {
        projections.row(r) = sd.eigenvectors.row(zero_rows[static_cast<std::size_t>(r)]);
    }
    const Eigen::MatrixXd overlap_matrix = projections.transpose() * projections;

    const Eigen::VectorXcd coeffs = detail::real_times_complex(sd.eigenvectors.transpose(), psi0);
    SpectralSumSeries result;
    result.series.site = site;
    result.series.times.assign(times.begin(), times.end());
    result.series.values.reserve(times.size());
    for (double t : times) {
        Eigen::VectorXcd phased(dim);
        for (Eigen::Index a = 0; a < dim; ++a) {
            phased[a] = coeffs[a] * std::exp(Complex(0.0, -sd.energies[a] * t));
        }
        const Complex value = phased.dot(detail::real_times_complex(overlap_matrix, phased));
        result.series.values.push_back(value.real());
        result.max_imag_residue = std::max(result.max_imag_residue, std::abs(value.imag()));
    }
    return result;
}

}  // namespace phonon
