#include "phonon/fock_basis.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace phonon {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t c = a + b;
    return (c < a) ? kSaturated : c;
}

}  // namespace

int FockState::sum() const {
    return std::accumulate(occupations.begin(), occupations.end(), 0);
}

std::uint64_t sector_dimension(int sites, int total_phonons, std::uint64_t cap) {
    if (sites < 1) {
        throw DomainError("sector requires at least one site, got sites=" + std::to_string(sites));
    }
    if (total_phonons < 0) {
        throw DomainError("total phonon number must be non-negative, got N=" +
                          std::to_string(total_phonons));
    }
    // C(N+L-1, L-1) via the multiplicative formula, watching for overflow.
    const int n = total_phonons + sites - 1;
    const int k = std::min(sites - 1, total_phonons);
    unsigned __int128 dim = 1;
    for (int i = 1; i <= k; ++i) {
        dim = dim * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (dim > static_cast<unsigned __int128>(kSaturated)) {
            throw SizingError("sector dimension overflows 64 bits (sites=" + std::to_string(sites) +
                              ", phonons=" + std::to_string(total_phonons) + ")");
        }
    }
    const auto result = static_cast<std::uint64_t>(dim);
    if (result > cap) {
        throw SizingError("sector dimension " + std::to_string(result) + " exceeds cap " +
                          std::to_string(cap) + " (sites=" + std::to_string(sites) +
                          ", phonons=" + std::to_string(total_phonons) + ")");
    }
    return result;
}

BasisSector BasisSector::enumerate(int sites, int total_phonons, std::size_t dimension_cap) {
    const std::uint64_t dim = sector_dimension(sites, total_phonons, dimension_cap);
    if (total_phonons > std::numeric_limits<occupation_t>::max()) {
        throw SizingError("total phonon number " + std::to_string(total_phonons) +
                          " exceeds the occupation storage width");
    }

    BasisSector sector;
    sector.sites_ = sites;
    sector.total_ = total_phonons;
    sector.states_.reserve(dim);

    // Pascal triangle up to row N+L-1, columns 0..L-1, saturating on overflow.
    // Saturated entries sit far off the near-diagonal band used by rank().
    const int rows = total_phonons + sites;
    sector.binomial_cols_ = sites;
    sector.binomial_.assign(static_cast<std::size_t>(rows) * sites, 0);
    for (int n = 0; n < rows; ++n) {
        sector.binomial_[static_cast<std::size_t>(n) * sites] = 1;
        for (int k = 1; k < sites && k <= n; ++k) {
            const auto above = sector.binomial_[static_cast<std::size_t>(n - 1) * sites + k];
            const auto left = sector.binomial_[static_cast<std::size_t>(n - 1) * sites + k - 1];
            sector.binomial_[static_cast<std::size_t>(n) * sites + k] = saturating_add(above, left);
        }
    }

    // Descending lexicographic enumeration: shift one phonon off the rightmost
    // movable site and dump the remainder just after it.
    FockState state;
    state.occupations.assign(sites, 0);
    state.occupations[0] = static_cast<occupation_t>(total_phonons);
    if (sites == 1) {
        sector.states_.push_back(state);
        return sector;
    }
    while (true) {
        sector.states_.push_back(state);
        int pivot = -1;
        for (int k = sites - 2; k >= 0; --k) {
            if (state.occupations[k] != 0) {
                pivot = k;
                break;
            }
        }
        if (pivot < 0) break;
        state.occupations[pivot] -= 1;
        int used = 0;
        for (int i = 0; i <= pivot; ++i) used += state.occupations[i];
        state.occupations[pivot + 1] = static_cast<occupation_t>(total_phonons - used);
        for (int i = pivot + 2; i < sites; ++i) state.occupations[i] = 0;
    }
    return sector;
}

std::uint64_t BasisSector::choose(int n, int k) const {
    if (k < 0 || k > n) return 0;
    return binomial_[static_cast<std::size_t>(n) * binomial_cols_ + k];
}

std::size_t BasisSector::rank(const FockState& state) const {
    if (static_cast<int>(state.occupations.size()) != sites_) {
        throw MembershipError("state has " + std::to_string(state.occupations.size()) +
                              " sites, sector has " + std::to_string(sites_));
    }
    if (state.sum() != total_) {
        throw MembershipError("state carries " + std::to_string(state.sum()) +
                              " phonons, sector requires " + std::to_string(total_));
    }
    // Count the states that precede `state`: at each site, every admissible
    // occupation larger than n_j freezes the prefix and leaves a free tail.
    // The tail counts telescope (hockey-stick) to a single binomial per site.
    std::uint64_t ordinal = 0;
    int remaining = total_;
    for (int j = 0; j < sites_ - 1; ++j) {
        const int occ = state.occupations[j];
        const int tail_sites = sites_ - 1 - j;
        if (remaining - occ - 1 >= 0) {
            ordinal += choose(remaining - occ - 1 + tail_sites, tail_sites);
        }
        remaining -= occ;
    }
    return static_cast<std::size_t>(ordinal);
}

const FockState& BasisSector::unrank(std::size_t ordinal) const {
    if (ordinal >= states_.size()) {
        throw RangeError("ordinal " + std::to_string(ordinal) + " out of range for dimension " +
                         std::to_string(states_.size()));
    }
    return states_[ordinal];
}

}  // namespace phonon
