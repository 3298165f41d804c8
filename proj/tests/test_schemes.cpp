#include "dcic/bounds.hpp"
#include "dcic/schemes.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dcic;

namespace {

int min_bound(const LdChannel& ch) { return int(ld_bound_set(ch).min_bound); }

GaussChannel from_levels(double n13, double n23, double n14, double n24, double nC, double theta = 1.0)
{
    auto g = [](double n) { return std::pow(2.0, n / 2); };
    return {g(n13), g(n23), g(n14), g(n24), g(nC), theta};
}

} // namespace

TEST_CASE("regime (i) deterministic allocations")
{
    SUBCASE("both destinations relay")
    {
        auto a = regime1_ld_rates({5, 2, 2, 5, 1, 2});
        CHECK(a.kind == Regime1Case::A);
        for (const auto& u : a.user) {
            CHECK(u.u == 1);
            CHECK(u.s == 1);
            CHECK(u.z_up == 1);
            CHECK(u.z_dn == 1);
        }
        CHECK(a.sum == 8);
        CHECK(a.allocation_sum() == 8);
        CHECK(a.precoder_shift == std::array<int, 2>{2, 2});
    }
    SUBCASE("one destination relays")
    {
        auto a = regime1_ld_rates({6, 2, 2, 3, 1, 2});
        CHECK(a.kind == Regime1Case::B);
        CHECK(a.relay_silent == std::array<bool, 2>{false, true});
        CHECK(a.sum == 7);
        CHECK(a.sum == min_bound({6, 2, 2, 3, 1, 2}));

        auto m = regime1_ld_rates(LdChannel{6, 2, 2, 3, 1, 2}.mirrored());
        CHECK(m.kind == Regime1Case::BMirrored);
        CHECK(m.sum == 7);
        CHECK(m.relay_silent == std::array<bool, 2>{true, false});
    }
    SUBCASE("cooperation does not help")
    {
        auto a = regime1_ld_rates({3, 3, 3, 3, 0, 2});
        CHECK(a.kind == Regime1Case::NoCoop);
        CHECK(a.sum == 3);
    }
    CHECK_THROWS_WITH_AS(regime1_ld_rates({2, 1, 1, 2, 3, 2}), "not regime (i)", std::invalid_argument);
}

TEST_CASE("regime (i) case-a allocation never exceeds the bound")
{
    for (int n13 = 0; n13 <= 6; ++n13)
        for (int n23 = 0; n23 <= 6; ++n23)
            for (int n14 = 0; n14 <= 6; ++n14)
                for (int n24 = 0; n24 <= 6; ++n24)
                    for (int nC = 0; nC <= std::min({n13, n23, n14, n24}); ++nC) {
                        LdChannel ch{n13, n23, n14, n24, nC, 2};
                        auto a = regime1_ld_rates(ch);
                        CHECK(a.allocation_sum() <= min_bound(ch));
                        CHECK(a.sum <= min_bound(ch));
                    }
}

TEST_CASE("compress-and-forward entropy terms agree with enumeration")
{
    auto sys = ld_regime3_system({2, 1, 1, 2, 3, 2});
    auto enumerated = [&](const VarSet& a, const VarSet& b, const VarSet& c) {
        VarSet bc = b, abc = a;
        bc.insert(bc.end(), c.begin(), c.end());
        abc.insert(abc.end(), bc.begin(), bc.end());
        VarSet ac = a;
        ac.insert(ac.end(), c.begin(), c.end());
        // I(A;B|C) = H(A|C) - H(A|B,C)
        return oracle::enumerated_cond_entropy(sys.stack(a), sys.stack(c)) -
               oracle::enumerated_cond_entropy(sys.stack(a), sys.stack(bc));
    };
    CHECK(sys.mutual_info_symbols({"U2"}, {"Y3"}, {"X3", "X4", "U1"}) ==
          doctest::Approx(enumerated({"U2"}, {"Y3"}, {"X3", "X4", "U1"})));
    CHECK(sys.mutual_info_symbols({"U1", "U2"}, {"Y3", "V4"}, {"X3", "X4"}) ==
          doctest::Approx(enumerated({"U1", "U2"}, {"Y3", "V4"}, {"X3", "X4"})));
    CHECK(sys.mutual_info_symbols({"Y4"}, {"V4"}, {"X3", "X4", "U1", "U2", "Y3"}) == 0);
    CHECK(enumerated({"Y4"}, {"V4"}, {"X3", "X4", "U1", "U2", "Y3"}) == doctest::Approx(0));
}

TEST_CASE("regime (iii) deterministic sums")
{
    CHECK(regime3_ld_sum({2, 1, 1, 2, 3, 2}).fm_sum == 4);
    auto r = regime3_ld_sum({4, 1, 2, 4, 5, 2});
    CHECK(r.fm_sum == r.closed_form);
    CHECK(r.fm_sum == min_bound({4, 1, 2, 4, 5, 2}));
    CHECK(regime3_ld_sum({1, 0, 0, 1, 5, 2}).fm_sum == 2);
    CHECK(regime3_ld_sum({0, 0, 0, 0, 1, 2}).fm_sum == 0);
    CHECK_THROWS_WITH_AS(regime3_ld_sum({5, 2, 2, 5, 1, 2}), "not regime (iii)", std::invalid_argument);
}

TEST_CASE("the zero rate point is inside the deterministic region")
{
    auto sys = cf_constraints(ld_regime3_system({3, 1, 2, 2, 4, 2}));
    for (const auto& row : sys.rows()) CHECK(row.rhs >= 0);
}

TEST_CASE("achievable sum equals the bound on a small deterministic sweep")
{
    for (int n13 = 0; n13 <= 3; ++n13)
        for (int n23 = 0; n23 <= 3; ++n23)
            for (int n14 = 0; n14 <= 3; ++n14)
                for (int n24 = 0; n24 <= 3; ++n24)
                    for (int nC = 0; nC <= 5; ++nC) {
                        LdChannel ch{n13, n23, n14, n24, nC, 2};
                        if (ch.n() == 0) continue;
                        CHECK(ld_achievable_sum(ch) == min_bound(ch));
                    }
    auto a = ld_achievable({5, 2, 2, 5, 4, 2});
    CHECK(a.sum == 8);
    CHECK(a.scheme == "regime1a");
    CHECK(a.rates.at("cooperation_level") == 1);
}

TEST_CASE("no-cooperation scheme on simple channels")
{
    // no crosstalk: two point-to-point links
    GaussChannel ch{8, 0, 0, 4, 3, 0.3};
    CHECK(hk_noncoop_sum(ch) == doctest::Approx(std::log2(65.0) + std::log2(17.0)).epsilon(1e-12));
    GaussChannel silent{0, 0, 0, 0, 5, 0};
    CHECK(hk_noncoop_sum(silent) == doctest::Approx(0));
}

TEST_CASE("gaussian schemes stay below the upper bound")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> db(-10, 60), th(0, 2 * M_PI);
    auto gain = [&] { return std::pow(10.0, db(rng) / 20); };
    for (int i = 0; i < 150; ++i) {
        GaussChannel ch{gain(), gain(), gain(), gain(), gain(), th(rng)};
        const double ub = gaussian_bound_set(ch).min_bound;
        const double hk = hk_noncoop_sum(ch);
        CHECK(hk >= 0);
        CHECK(hk <= ub + 1e-9);
        auto r1 = regime1_gauss_rates(ch);
        CHECK(r1.sum <= ub + 1e-9);
        const double ach = gauss_achievable_sum(ch);
        CHECK(ach >= hk);
        CHECK(ach <= ub + 1e-9);
        CHECK(ub - ach <= 43);
    }
}

TEST_CASE("gaussian regime (i) log rates dominate their level forms")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lv(0, 40);
    int evaluated = 0;
    for (int i = 0; i < 400; ++i) {
        const double n13 = lv(rng), n23 = lv(rng), n14 = lv(rng), n24 = lv(rng), nC = lv(rng);
        auto ch = from_levels(n13, n23, n14, n24, nC);
        auto r = regime1_gauss_rates(ch);
        if (r.fallback_hk) continue;
        ++evaluated;
        for (const auto& c : r.constraints) {
            INFO(c.name);
            CHECK(c.log_value >= c.integer_form - 1e-9);
        }
    }
    CHECK(evaluated > 50);
}

TEST_CASE("gaussian regime (i) picks the case from the nulling ratios")
{
    auto a = regime1_gauss_at(from_levels(20, 12, 12, 20, 8), std::pow(2.0, 4));
    CHECK(a.kind == Regime1Case::A);
    CHECK_FALSE(a.fallback_hk);
    CHECK(a.constraints.size() == 10);

    auto b = regime1_gauss_at(from_levels(24, 12, 12, 14, 8), std::pow(2.0, 4));
    CHECK(b.kind == Regime1Case::B);
    CHECK(b.constraints.size() == 9);

    auto fb = regime1_gauss_at(from_levels(20, 12, 12, 20, 8), 1.0);
    CHECK(fb.fallback_hk);
}

TEST_CASE("gaussian regime (iii) tracks the deterministic sum")
{
    for (auto [a, b, c, d, e] : std::vector<std::array<int, 5>>{{4, 2, 2, 4, 10}, {10, 6, 8, 12, 20}, {20, 4, 6, 16, 30}}) {
        LdChannel ld{a, b, c, d, e, 2};
        auto g = regime3_gauss_sum(from_levels(a, b, c, d, e, 2.0));
        CHECK(g.sum >= 0);
        CHECK(std::abs(g.sum - regime3_ld_sum(ld).fm_sum) <= 15);
        CHECK(g.sum == std::max(g.exact_path, g.printed_path));
    }
    CHECK_THROWS_AS(regime3_gauss_sum(from_levels(20, 12, 12, 20, 8)), std::invalid_argument);
}
