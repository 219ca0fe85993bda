#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "phonon/dynamics.hpp"
#include "phonon/fock_basis.hpp"

namespace phonon {

// One observable sampled on a time grid. Sites are 1-based throughout this
// module, matching the chain labelling used by the CLI.
struct ObservableSeries {
    int site = 0;
    std::vector<double> times;
    std::vector<double> values;
};

// <n_i> of a normalized state; lies in [0, N].
double local_density(const Eigen::VectorXcd& state, const BasisSector& sector, int site);

// P(n_i = m) of a normalized state; the m = 0 case is the motional
// ground-state projection n_{i0}.
double occupation_projection(const Eigen::VectorXcd& state, const BasisSector& sector, int site,
                             int occupation);

// Order-parameter correlation <b_i^+ b_j>. Real symmetric Hamiltonians give
// real ground states, so the value is returned real after asserting the
// imaginary part is negligible; Delta_ii reduces to the local density.
double correlation(const Eigen::VectorXcd& state, const BasisSector& sector, int site_i,
                   int site_j);

// max - min over the series window.
double oscillation_amplitude(const ObservableSeries& series);

// n_{i0}(t) by evolving |psi(t)> spectrally and projecting at each time. This
// is the production path, O(dim^2) per time.
ObservableSeries zero_phonon_series(const SpectralDecomposition& sd, const Eigen::VectorXcd& psi0,
                                    const BasisSector& sector, int site,
                                    std::span<const double> times);

// n_{i0}(t) as the double spectral sum
//   sum_{a,b,k0} c0_a^* c0_b exp(i(E_a - E_b) t) d^i_{a k0} d^i_{k0 b},
// where d^i_{a k0} projects eigenstate a on the zero-phonon-at-i basis states.
// Kept as an independent cross-check of zero_phonon_series; the sum is real up
// to rounding, and max_imag_residue reports how far it strays off the axis.
struct SpectralSumSeries {
    ObservableSeries series;
    double max_imag_residue = 0.0;
};
SpectralSumSeries zero_phonon_series_spectral_sum(const SpectralDecomposition& sd,
                                                  const Eigen::VectorXcd& psi0,
                                                  const BasisSector& sector, int site,
                                                  std::span<const double> times);

}  // namespace phonon
