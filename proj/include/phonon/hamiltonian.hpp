#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "phonon/fock_basis.hpp"

namespace phonon {

enum class Boundary { open, periodic };

// Couplings of the phonon chain,
//
//   H = J sum_<ij> (b_i^+ b_j + h.c.) + sum_j U_j n_j (n_j - 1) + omega_x sum_j n_j,
//
// with the hopping sign kept positive as written and the interaction
// site-resolved so that a single-site sign flip is expressible. All energies
// share one unit system chosen by the caller; within a fixed-N sector the
// omega_x term only shifts the spectrum by omega_x * N.
struct HamiltonianSpec {
    double hopping = 0.0;         // J
    std::vector<double> u_site;   // U_j, one entry per site
    double trap_frequency = 0.0;  // omega_x
    Boundary boundary = Boundary::open;

    static HamiltonianSpec uniform(int sites, double hopping, double u, double trap_frequency = 0.0,
                                   Boundary boundary = Boundary::open);

    // Copy with U -> -U at `site` (1-based).
    HamiltonianSpec with_sign_flipped(int site) const;
};

struct Triplet {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;
};

// Real symmetric sparse matrix, built once from coordinate triplets and then
// compressed to row-ordered storage for repeated products. Immutable after
// construction; concurrent apply() calls on a shared operator are safe.
class SparseOperator {
public:
    static SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries);

    std::size_t dim() const { return dim_; }
    std::size_t nonzeros() const { return values_.size(); }
    double trace() const;
    double max_abs_value() const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

    std::vector<Triplet> triplets() const;  // row-major, duplicates merged
    Eigen::MatrixXd to_dense() const;

    // max |A - A^T| over all entries, by explicit transpose comparison.
    double hermiticity_defect() const;

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> cols_;
    std::vector<double> values_;
};

SparseOperator build_hamiltonian(const HamiltonianSpec& spec, const BasisSector& sector);

}  // namespace phonon
