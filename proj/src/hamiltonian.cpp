#include "phonon/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace phonon {

HamiltonianSpec HamiltonianSpec::uniform(int sites, double hopping, double u, double trap_frequency,
                                         Boundary boundary) {
    HamiltonianSpec spec;
    spec.hopping = hopping;
    spec.u_site.assign(static_cast<std::size_t>(sites), u);
    spec.trap_frequency = trap_frequency;
    spec.boundary = boundary;
    return spec;
}

HamiltonianSpec HamiltonianSpec::with_sign_flipped(int site) const {
    if (site < 1 || site > static_cast<int>(u_site.size())) {
        throw RangeError("flip site " + std::to_string(site) + " outside 1.." +
                         std::to_string(u_site.size()));
    }
    HamiltonianSpec flipped = *this;
    flipped.u_site[static_cast<std::size_t>(site - 1)] = -u_site[static_cast<std::size_t>(site - 1)];
    return flipped;
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, const std::vector<Triplet>& entries) {
    std::vector<Triplet> sorted = entries;
    for (const Triplet& t : sorted) {
        if (t.row >= dim || t.col >= dim) {
            throw RangeError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                             ") outside dimension " + std::to_string(dim));
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseOperator op;
    op.dim_ = dim;
    op.row_start_.assign(dim + 1, 0);
    op.cols_.reserve(sorted.size());
    op.values_.reserve(sorted.size());
    bool have_prev = false;
    std::uint32_t prev_row = 0, prev_col = 0;
    for (const Triplet& t : sorted) {
        if (have_prev && t.row == prev_row && t.col == prev_col) {
            op.values_.back() += t.value;
        } else {
            op.cols_.push_back(t.col);
            op.values_.push_back(t.value);
            op.row_start_[t.row + 1] = op.values_.size();
            prev_row = t.row;
            prev_col = t.col;
            have_prev = true;
        }
    }
    // rows without entries inherit the previous row end
    for (std::size_t r = 1; r <= dim; ++r) {
        op.row_start_[r] = std::max(op.row_start_[r], op.row_start_[r - 1]);
    }
    return op;
}

double SparseOperator::trace() const {
    double tr = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            if (cols_[p] == r) tr += values_[p];
        }
    }
    return tr;
}

double SparseOperator::max_abs_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) {
        throw DimensionError("vector length " + std::to_string(v.size()) +
                             " does not match operator dimension " + std::to_string(dim_));
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < dim_; ++r) {
        std::complex<double> acc = 0.0;
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            acc += values_[p] * v[static_cast<Eigen::Index>(cols_[p])];
        }
        out[static_cast<Eigen::Index>(r)] = acc;
    }
    return out;
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) {
        throw DimensionError("vector length " + std::to_string(v.size()) +
                             " does not match operator dimension " + std::to_string(dim_));
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            acc += values_[p] * v[static_cast<Eigen::Index>(cols_[p])];
        }
        out[static_cast<Eigen::Index>(r)] = acc;
    }
    return out;
}

std::vector<Triplet> SparseOperator::triplets() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            out.push_back({static_cast<std::uint32_t>(r), cols_[p], values_[p]});
        }
    }
    return out;
}

Eigen::MatrixXd SparseOperator::to_dense() const {
    Eigen::MatrixXd dense =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) {
            dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[p])) += values_[p];
        }
    }
    return dense;
}

double SparseOperator::hermiticity_defect() const {
    auto direct = triplets();
    auto transposed = direct;
    for (Triplet& t : transposed) std::swap(t.row, t.col);
    auto order = [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    };
    std::sort(transposed.begin(), transposed.end(), order);

    // merge walk over the two sorted entry lists; a position missing on one
    // side counts as an explicit zero there
    double defect = 0.0;
    std::size_t i = 0, j = 0;
    while (i < direct.size() || j < transposed.size()) {
        if (j == transposed.size() || (i < direct.size() && order(direct[i], transposed[j]))) {
            defect = std::max(defect, std::abs(direct[i].value));
            ++i;
        } else if (i == direct.size() || order(transposed[j], direct[i])) {
            defect = std::max(defect, std::abs(transposed[j].value));
            ++j;
        } else {
            defect = std::max(defect, std::abs(direct[i].value - transposed[j].value));
            ++i;
            ++j;
        }
    }
    return defect;
}

SparseOperator build_hamiltonian(const HamiltonianSpec& spec, const BasisSector& sector) {
    const int sites = sector.sites();
    if (static_cast<int>(spec.u_site.size()) != sites) {
        throw InputError("hamiltonian has " + std::to_string(spec.u_site.size()) +
                         " interaction entries for " + std::to_string(sites) + " sites");
    }
    if (!std::isfinite(spec.hopping) || !std::isfinite(spec.trap_frequency)) {
        throw InputError("hamiltonian couplings must be finite");
    }
    for (double u : spec.u_site) {
        if (!std::isfinite(u)) throw InputError("hamiltonian couplings must be finite");
    }

    // Undirected nearest-neighbour bonds. For L = 2 the periodic wrap bond
    // coincides with the open one and is skipped.
    std::vector<std::pair<int, int>> bonds;
    for (int j = 0; j + 1 < sites; ++j) bonds.emplace_back(j, j + 1);
    if (spec.boundary == Boundary::periodic && sites > 2) bonds.emplace_back(sites - 1, 0);

    const std::size_t dim = sector.dimension();
    std::vector<Triplet> entries;
    entries.reserve(dim * (1 + 2 * bonds.size()));

    const double trap_diagonal = spec.trap_frequency * sector.total_phonons();
    FockState hopped;
    for (std::size_t k = 0; k < dim; ++k) {
        const FockState& state = sector.states()[k];
        double diag = trap_diagonal;
        for (int j = 0; j < sites; ++j) {
            const double n = state.occupations[static_cast<std::size_t>(j)];
            diag += spec.u_site[static_cast<std::size_t>(j)] * n * (n - 1.0);
        }
        entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k), diag});

        if (spec.hopping == 0.0) continue;
        for (const auto& [a, b] : bonds) {
            // b_dst^+ b_src for both directions of the bond
            for (const auto& [dst, src] : {std::pair{a, b}, std::pair{b, a}}) {
                const int n_src = state.occupations[static_cast<std::size_t>(src)];
                if (n_src == 0) continue;
                const int n_dst = state.occupations[static_cast<std::size_t>(dst)];
                hopped = state;
                hopped.occupations[static_cast<std::size_t>(src)] -= 1;
                hopped.occupations[static_cast<std::size_t>(dst)] += 1;
                const std::size_t target = sector.rank(hopped);
                const double amp = spec.hopping * std::sqrt((n_dst + 1.0) * n_src);
                entries.push_back({static_cast<std::uint32_t>(target),
                                   static_cast<std::uint32_t>(k), amp});
            }
        }
    }
    return SparseOperator::from_triplets(dim, entries);
}

}  // namespace phonon
