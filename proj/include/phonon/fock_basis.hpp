#pragma once

#include <cstdint>
#include <vector>

#include "phonon/errors.hpp"

namespace phonon {

using occupation_t = std::uint16_t;

// One occupation-basis ket |n_1 ... n_L> of a fixed-N sector.
struct FockState {
    std::vector<occupation_t> occupations;

    int sum() const;
    bool operator==(const FockState&) const = default;
};

// The full Hilbert-space sector of N bosons on L sites: every Fock state with
// total occupation N, ordered lexicographically descending, so (N,0,...,0)
// comes first and (0,...,0,N) last. Ranking is combinatorial (O(L), no hash
// map). Immutable after construction; concurrent reads are safe.
class BasisSector {
public:
    static constexpr std::size_t default_dimension_cap = 200'000;

    static BasisSector enumerate(int sites, int total_phonons,
                                 std::size_t dimension_cap = default_dimension_cap);

    int sites() const { return sites_; }
    int total_phonons() const { return total_; }
    std::size_t dimension() const { return states_.size(); }
    const std::vector<FockState>& states() const { return states_; }

    // Ordinal of `state` under the sector ordering. Throws MembershipError if
    // the state has the wrong length or the wrong phonon total.
    std::size_t rank(const FockState& state) const;

    // Inverse of rank. Throws RangeError for ordinal >= dimension().
    const FockState& unrank(std::size_t ordinal) const;

private:
    BasisSector() = default;
    std::uint64_t choose(int n, int k) const;

    int sites_ = 0;
    int total_ = 0;
    std::vector<FockState> states_;
    std::vector<std::uint64_t> binomial_;  // row-major C(n,k), n <= N+L-1, k <= L-1
    int binomial_cols_ = 0;
};

// C(total+sites-1, sites-1) computed without enumerating. Throws DomainError
// for sites < 1 and SizingError when the dimension exceeds `cap`.
std::uint64_t sector_dimension(int sites, int total_phonons, std::uint64_t cap);

}  // namespace phonon
