#pragma once

#include "dcic/channel.hpp"

#include <array>

namespace dcic {

/// The five sum-rate upper bounds u1..u5 and their minimum.
struct BoundSet {
    std::array<double, 5> u{};
    double min_bound = 0;

    static BoundSet from(const std::array<double, 5>& u);
    /// min(u1..u4), the part compared against the level-domain surrogates.
    double min_first_four() const;
};

/// Exact integer bounds of the deterministic model (stored as doubles).
BoundSet ld_bound_set(const LdChannel& ch);

/// Gaussian bounds in bits per channel use.
BoundSet gaussian_bound_set(const GaussChannel& ch);

/// Level-domain surrogates u'1..u'4 evaluated on derive_levels(ch), and the
/// unit-coefficient log expression u'5. u'2/u'3 use the same link pairing as
/// ld_bound_set's u2/u3.
BoundSet gaussian_primed_bound_set(const GaussChannel& ch);

/// The alternative u'2/u'3 pairing, with the direct links exchanged between
/// the two terms. Kept for comparison only: it can undershoot min(u1..u4) by
/// more than 7 bits, so it is not part of gaussian_primed_bound_set.
std::array<double, 2> swapped_primed_pair(const GaussChannel& ch);

} // namespace dcic
