#include "dcic/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace dcic {

BoundSet BoundSet::from(const std::array<double, 5>& u)
{
    return {u, *std::min_element(u.begin(), u.end())};
}

double BoundSet::min_first_four() const { return std::min({u[0], u[1], u[2], u[3]}); }

BoundSet ld_bound_set(const LdChannel& ch)
{
    const int n13 = ch.n13, n23 = ch.n23, n14 = ch.n14, n24 = ch.n24, nC = ch.nC;
    int u1 = std::max({n13 - n14 + nC, n23, nC}) + std::max({n24 - n23 + nC, n14, nC});
    int u2 = std::max(n24, n23) + (std::max({n13, n23, nC}) - n23);
    int u3 = std::max(n13, n14) + (std::max({n24, n14, nC}) - n14);
    int u4 = std::max(n13, nC) + std::max(n24, nC);
    int u5 = (n13 - n23 != n14 - n24) ? std::max(n13 + n24, n14 + n23) : std::max({n13, n24, n14, n23});
    return BoundSet::from({double(u1), double(u2), double(u3), double(u4), double(u5)});
}

namespace {

double sq(double x) { return x * x; }

// One half of the first bound: the genie term seen by one destination.
// `direct` is that destination's own link, `cross` the link its source
// leaks to the other destination, `incoming` the interfering link.
double u1_term(double direct, double cross, double incoming, double gC)
{
    if (cross > std::max(1.0, gC)) {
        return std::log2(1 + sq(incoming + gC + direct * gC / cross) + sq(direct / cross));
    }
    return std::log2(1 + sq(incoming + gC + direct));
}

} // namespace

BoundSet gaussian_bound_set(const GaussChannel& ch)
{
    const double g13 = ch.g13, g23 = ch.g23, g14 = ch.g14, g24 = ch.g24, gC = ch.gC;
    double u1 = u1_term(g13, g14, g23, gC) + u1_term(g24, g23, g14, gC);
    double u2 = std::log2(1 + sq(g13 + g23 + gC)) + std::log2(1 + sq(g24) / std::max(1.0, sq(g23)));
    double u3 = std::log2(1 + sq(g24 + g14 + gC)) + std::log2(1 + sq(g13) / std::max(1.0, sq(g14)));
    double u4 = std::log2(1 + sq(g13 + gC)) + std::log2(1 + sq(g24 + gC));
    double direct = sq(g13 * g24), cross = sq(g14 * g23);
    double inner = 1 + 2 * (sq(g13) + sq(g24) + sq(g14) + sq(g23))
                 + 4 * (direct + cross - 2 * g13 * g24 * g14 * g23 * std::cos(ch.theta));
    double u5 = std::log2(std::max(inner, 1.0));
    return BoundSet::from({u1, u2, u3, u4, u5});
}

BoundSet gaussian_primed_bound_set(const GaussChannel& ch)
{
    const auto l = derive_levels(ch);
    const double n13 = l.n13, n23 = l.n23, n14 = l.n14, n24 = l.n24, nC = l.nC;
    double u1 = std::max({n13 - n14 + nC, n23, nC}) + std::max({n24 - n23 + nC, n14, nC});
    double u2 = std::max(n24, n23) + (std::max({n13, n23, nC}) - n23);
    double u3 = std::max(n13, n14) + (std::max({n24, n14, nC}) - n14);
    double u4 = std::max(n13, nC) + std::max(n24, nC);
    double inner = 1 + (sq(ch.g13) + sq(ch.g24) + sq(ch.g14) + sq(ch.g23))
                 + (sq(ch.g13 * ch.g24) + sq(ch.g14 * ch.g23)
                    - 2 * ch.g13 * ch.g24 * ch.g14 * ch.g23 * std::cos(ch.theta));
    double u5 = std::log2(std::max(inner, 1.0));
    return BoundSet::from({u1, u2, u3, u4, u5});
}

std::array<double, 2> swapped_primed_pair(const GaussChannel& ch)
{
    const auto l = derive_levels(ch);
    return {std::max(l.n13, l.n23) + (std::max({l.n24, l.n23, l.nC}) - l.n23),
            std::max(l.n24, l.n14) + (std::max({l.n13, l.n14, l.nC}) - l.n14)};
}

} // namespace dcic
