#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "phonon/hamiltonian.hpp"

namespace phonon {

// Full dense diagonalization is allowed up to this dimension; larger sectors
// must go through ground_state() (iterative) and evolve_krylov().
inline constexpr std::size_t dense_dimension_cap = 5000;

namespace detail {

// y = M x for real M and complex x, as two real products.
template <typename Derived>
Eigen::VectorXcd real_times_complex(const Eigen::MatrixBase<Derived>& m,
                                    const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y(m.rows());
    y.real() = m * x.real();
    y.imag() = m * x.imag();
    return y;
}

}  // namespace detail

// Eigensystem of a sector Hamiltonian. `overlaps` holds the expansion
// coefficients c0_a = <a|psi0> of an initial state once attach_initial_state()
// has been called; the evolved state is then
//   |psi(t)> = sum_a c0_a exp(-i E_a t) |a>.
struct SpectralDecomposition {
    Eigen::VectorXd energies;      // ascending
    Eigen::MatrixXd eigenvectors;  // column a pairs with energies[a]
    Eigen::VectorXcd overlaps;

    std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }
    void attach_initial_state(const Eigen::VectorXcd& psi0);
};

struct EvolvedState {
    double time = 0.0;
    Eigen::VectorXcd amplitudes;
};

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd vector;
    bool degenerate = false;             // near-degenerate lowest level, see degenerate_levels
    std::vector<int> degenerate_levels;  // eigenlevel indices inside the degeneracy window
};

SpectralDecomposition full_diagonalize(const SparseOperator& op,
                                       std::size_t dense_cap = dense_dimension_cap);

// Lowest eigenpair. Dense path below `dense_cap`, Lanczos above it. A
// near-degenerate ground level is flagged on the result, never thrown.
GroundState ground_state(const SparseOperator& op, std::size_t dense_cap = dense_dimension_cap);

// |psi(t)> for each requested time via the spectral sum. Times are evaluated
// independently, so `workers` > 1 splits the grid across threads.
std::vector<EvolvedState> evolve_spectral(const SpectralDecomposition& sd,
                                          const Eigen::VectorXcd& psi0,
                                          std::span<const double> times, int workers = 1);

// Krylov (Lanczos) propagation of exp(-iHt) psi0 through the time list in the
// given order, with adaptive subspace size and step halving. Each returned
// state is within `tolerance` (2-norm) of the exact evolution.
std::vector<EvolvedState> evolve_krylov(const SparseOperator& op, const Eigen::VectorXcd& psi0,
                                        std::span<const double> times, double tolerance = 1e-10);

}  // namespace phonon
