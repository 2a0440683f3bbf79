#pragma once

// Exact stationary currents on a finite ring with fixed particle numbers.
//
// The average swap rate Phi(nu) is the root of a 3x3 determinant equation whose
// entries are residues F_gamma[a, b, c]. All arithmetic is exact.

#include "tasep2/exact_rational.hpp"

#include <cstddef>

namespace tasep2::ring
{
    inline constexpr std::size_t default_max_sites = 120;

    struct RingParams
    {
        ExactRational alpha{1};
        ExactRational beta{1};
    };

    struct RingCounts
    {
        int m_black = 1;
        int m_white = 1;
        int m_star = 1;

        int n() const noexcept { return m_black + m_white + m_star; }
    };

    /// Weights (nu_{black,white}, nu_{black,star}, nu_{star,white}) of the three swap types.
    struct SwapWeights
    {
        ExactRational black_white{0};
        ExactRational black_star{0};
        ExactRational star_white{0};
    };

    struct ExactCurrents
    {
        ExactRational j_white;
        ExactRational j_black;
        ExactRational j_star;
    };

    /// Residue at z = 0 of z^-a (z-1)^-b (z-gamma)^-c, for gamma > 0 and a, b, c >= 1.
    ExactRational f_gamma(const ExactRational &gamma, int a, int b, int c);

    /// Throws OutOfDomain if a count is < 1, a rate is <= 0, or N exceeds max_sites.
    void validate(const RingParams &params, const RingCounts &counts, std::size_t max_sites = default_max_sites);

    /// Long-time average of  sum_type nu_type * (number of swaps of that type) / t.
    ExactRational phi(const RingParams &params, const RingCounts &counts, const SwapWeights &nu,
                      std::size_t max_sites = default_max_sites);

    /// J_black = Phi(1,1,0)/N, J_white = Phi(-1,0,-1)/N, J_star = Phi(0,-1,1)/N.
    ExactCurrents ring_currents(const RingParams &params, const RingCounts &counts,
                                std::size_t max_sites = default_max_sites);
}
