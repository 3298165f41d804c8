#include "dcic/schemes.hpp"
#include "dcic/simulator.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dcic;

namespace {

int symbol(const LdScheme& s, int user, const std::string& layer, int block, int index = 0)
{
    for (std::size_t i = 0; i < s.symbols.size(); ++i) {
        const auto& m = s.symbols[i];
        if (m.user == user && m.layer == layer && m.block == block && m.index == index) return int(i);
    }
    return -1;
}

// Row of a symbolic signal as the set of symbols it carries (with coefficients).
std::vector<std::pair<int, int>> row_terms(const GfMatrix& sig, int row)
{
    std::vector<std::pair<int, int>> out;
    for (Index c = 0; c < sig.cols(); ++c)
        if (sig(row, c) != 0) out.emplace_back(int(c), sig(row, c));
    return out;
}

std::vector<std::pair<int, int>> sorted(std::vector<std::pair<int, int>> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

using Terms = std::vector<std::pair<int, int>>;

std::vector<LdChannel> cooperative_channels(Regime1Case want, int top)
{
    std::vector<LdChannel> out;
    for (int a = 0; a <= top; ++a)
        for (int b = 0; b <= top; ++b)
            for (int c = 0; c <= top; ++c)
                for (int d = 0; d <= top; ++d)
                    for (int e = 0; e <= std::min({a, b, c, d}); ++e) {
                        LdChannel ch{a, b, c, d, e, 2};
                        auto k = regime1_ld_rates(ch).kind;
                        if (k == want || (want == Regime1Case::B && k == Regime1Case::BMirrored)) out.push_back(ch);
                    }
    return out;
}

bool all_zero(const SimReport& r, std::size_t signal)
{
    for (const auto& step : r.trace)
        for (int v : step[signal])
            if (v != 0) return false;
    return true;
}

} // namespace

TEST_CASE("first worked scheme delivers four symbols per use")
{
    const LdChannel ch{5, 2, 2, 5, 1, 2};
    auto s = build_example1_scheme(ch, 20);
    for (unsigned long long seed = 0; seed < 100; ++seed) {
        auto r = run_ld_network(s, random_messages(s, seed));
        REQUIRE(r.success);
        CHECK(r.steady_rates == std::array<int, 2>{4, 4});
        CHECK(r.achieved_rates[0] == doctest::Approx(79.0 / 20));
    }
    CHECK_THROWS_AS(build_example1_scheme({5, 2, 2, 5, 2, 2}, 20), std::invalid_argument);
}

TEST_CASE("first worked scheme: received levels")
{
    auto s = build_example1_scheme({5, 2, 2, 5, 1, 2}, 6);
    auto r = run_ld_network(s, std::vector<int>(s.symbols.size(), 1));
    REQUIRE(r.success);
    const GfMatrix& y3 = r.symbolic[0][4];
    // first use: no cooperative symbol yet, so level 2 is empty
    CHECK(row_terms(y3, 0) == Terms{{symbol(s, 0, "u", 1), 1}});
    CHECK(row_terms(y3, 1).empty());
    CHECK(row_terms(y3, 2) == Terms{{symbol(s, 0, "z_up", 1), 1}});
    CHECK(row_terms(y3, 3) == sorted({{symbol(s, 1, "u", 1), 1}, {symbol(s, 0, "s", 2), 1}}));
    CHECK(row_terms(y3, 4) == Terms{{symbol(s, 0, "z_dn", 1), 1}});

    // steady state: (u1, s1, z_up1, s1[t+1] + u2, z_dn1 - u1[t-1])
    const GfMatrix& y = r.symbolic[2][4];
    CHECK(row_terms(y, 1) == Terms{{symbol(s, 0, "s", 3), 1}});
    CHECK(row_terms(y, 4) == sorted({{symbol(s, 0, "u", 2), 1}, {symbol(s, 0, "z_dn", 3), 1}}));
    CHECK(r.trace[0][4] == std::vector<int>{1, 0, 1, 0, 1});
}

TEST_CASE("first worked scheme: relay sends the negated, lifted residual")
{
    const LdChannel ch{5, 2, 2, 5, 1, 3};
    auto s = build_example1_scheme(ch, 8);
    auto r = run_ld_network(s, random_messages(s, 4));
    REQUIRE(r.success);
    for (int t = 1; t < 8; ++t) {
        const auto& y3 = r.trace[static_cast<std::size_t>(t - 1)][4];
        const auto& x3 = r.trace[static_cast<std::size_t>(t)][2];
        CHECK(x3[0] == (3 - y3[3]) % 3);
        CHECK(x3[1] == (3 - y3[4]) % 3);
        CHECK(x3[2] == 0);
    }
}

TEST_CASE("first worked scheme over a single use")
{
    auto s = build_example1_scheme({5, 2, 2, 5, 1, 2}, 1);
    auto r = run_ld_network(s, random_messages(s, 1));
    CHECK(r.success);
    CHECK(r.steady_rates == std::array<int, 2>{3, 3});
}

TEST_CASE("second worked scheme delivers two symbols per use")
{
    const LdChannel ch{2, 1, 1, 2, 3, 2};
    auto s = build_example2_scheme(ch, 20);
    for (unsigned long long seed = 0; seed < 100; ++seed) {
        auto r = run_ld_network(s, random_messages(s, seed));
        REQUIRE(r.success);
        CHECK(r.steady_rates == std::array<int, 2>{2, 2});
    }
    auto r = run_ld_network(s, random_messages(s, 7));
    for (int t = 2; t < 20; ++t) {
        const GfMatrix& y3 = r.symbolic[static_cast<std::size_t>(t - 1)][4];
        CHECK(row_terms(y3, 0) == Terms{{symbol(s, 1, "u", t - 1), 1}});
        CHECK(row_terms(y3, 1) == Terms{{symbol(s, 0, "u", t), 1}});
        CHECK(row_terms(y3, 2) == sorted({{symbol(s, 1, "u", t), 1}, {symbol(s, 0, "z", t), 1}}));
    }
    CHECK(symbol(s, 0, "u", 20) == -1);
    CHECK_THROWS_AS(build_example2_scheme({2, 1, 1, 2, 2, 2}, 4), std::invalid_argument);

    auto two = build_example2_scheme(ch, 2);
    auto r2 = run_ld_network(two, random_messages(two, 2));
    CHECK(r2.success);
    CHECK(r2.achieved_rates[0] == doctest::Approx(1.5));
}

TEST_CASE("zero messages give silent signals")
{
    for (auto s : {build_example1_scheme({5, 2, 2, 5, 1, 2}, 5), build_regime1_scheme({6, 2, 2, 3, 1, 2}, 5)}) {
        auto r = run_ld_network(s, std::vector<int>(s.symbols.size(), 0));
        CHECK(r.success);
        for (std::size_t i = 0; i < 6; ++i) CHECK(all_zero(r, i));
    }
}

TEST_CASE("signals are linear in the messages")
{
    for (const LdChannel& ch : {LdChannel{5, 2, 2, 5, 1, 3}, LdChannel{7, 3, 4, 6, 2, 2}, LdChannel{6, 2, 2, 3, 1, 2}}) {
        auto s = build_regime1_scheme(ch, 6);
        auto a = random_messages(s, 11), b = random_messages(s, 12), sum = a;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = (a[i] + b[i]) % ch.p;
        auto ra = run_ld_network(s, a), rb = run_ld_network(s, b), rs = run_ld_network(s, sum);
        REQUIRE(rs.success);
        for (std::size_t t = 0; t < rs.trace.size(); ++t)
            for (std::size_t sig = 0; sig < 6; ++sig)
                for (std::size_t l = 0; l < rs.trace[t][sig].size(); ++l)
                    CHECK(rs.trace[t][sig][l] == (ra.trace[t][sig][l] + rb.trace[t][sig][l]) % ch.p);
    }
}

TEST_CASE("cooperative private symbols are nulled at the other destination")
{
    auto channels = cooperative_channels(Regime1Case::A, 7);
    REQUIRE(channels.size() >= 50);
    for (std::size_t i = 0; i < 50; ++i) {
        const auto& ch = channels[i * channels.size() / 50];
        auto s = build_regime1_scheme(ch, 8);
        for (int user = 0; user < 2; ++user) {
            auto m = random_messages(s, i);
            for (std::size_t id = 0; id < m.size(); ++id)
                if (s.symbols[id].user != user || s.symbols[id].layer != "s") m[id] = 0;
            auto r = run_ld_network(s, m);
            INFO(ch.n13, ch.n23, ch.n14, ch.n24, ch.nC, " user ", user);
            CHECK(r.success);
            CHECK(all_zero(r, user == 0 ? 5 : 4));
        }
    }
}

TEST_CASE("regime (i) schemes deliver the allocated rates")
{
    int tested = 0;
    for (auto kind : {Regime1Case::A, Regime1Case::B}) {
        for (const auto& ch : cooperative_channels(kind, 6)) {
            auto alloc = regime1_ld_rates(ch);
            auto s = build_regime1_scheme(ch, 8);
            auto r = run_ld_network(s, random_messages(s, static_cast<unsigned long long>(tested)));
            INFO(ch.n13, ch.n23, ch.n14, ch.n24, ch.nC);
            CHECK(r.success);
            CHECK(r.steady_rates[0] == int(alloc.user[0].total()));
            CHECK(r.steady_rates[1] == int(alloc.user[1].total()));
            ++tested;
        }
    }
    CHECK(tested == 278);
}

TEST_CASE("decoding is sound across message draws")
{
    for (const LdChannel& ch : {LdChannel{5, 2, 2, 5, 1, 2}, LdChannel{6, 2, 2, 3, 1, 2}, LdChannel{6, 3, 3, 4, 2, 2},
                                LdChannel{8, 3, 4, 7, 2, 2}}) {
        auto s = build_regime1_scheme(ch, 10);
        for (unsigned long long seed = 0; seed < 100; ++seed) {
            auto m = random_messages(s, seed);
            auto r = run_ld_network(s, m);
            REQUIRE(r.success);
            for (std::size_t id = 0; id < m.size(); ++id) {
                const auto own = static_cast<std::size_t>(s.symbols[id].user);
                CHECK(r.decoded[own].at(int(id)) == m[id]);
            }
        }
    }
}

TEST_CASE("one-sided cooperation keeps the other destination silent")
{
    auto s = build_regime1_scheme({6, 2, 2, 3, 1, 2}, 10);
    auto r = run_ld_network(s, random_messages(s, 3));
    REQUIRE(r.success);
    CHECK(r.steady_rates[0] + r.steady_rates[1] == 7);
    CHECK(all_zero(r, 3));

    auto none = build_regime1_scheme({3, 3, 3, 3, 0, 2}, 4);
    CHECK(none.symbols.empty());
    CHECK(run_ld_network(none, {}).success);
    CHECK_THROWS_AS(build_regime1_scheme({2, 1, 1, 2, 3, 2}, 4), std::invalid_argument);
}

TEST_CASE("an undetermined decode step is reported, not thrown")
{
    auto s = build_example2_scheme({2, 1, 1, 2, 3, 2}, 4);
    // read the own public symbol from the wrong level
    for (auto& step : s.nodes[2].schedule)
        if (step.label == "own u[2]") step.observe = {{2, 2, 1}};
    auto r = run_ld_network(s, random_messages(s, 0));
    CHECK_FALSE(r.success);
    REQUIRE(r.failure);
    CHECK(r.failure->node == 3);
    CHECK(r.failure->step == "own u[2]");
    CHECK_THROWS_AS(run_ld_network(s, {1, 0}), std::invalid_argument);
}

TEST_CASE("trace csv layout")
{
    auto s = build_example2_scheme({2, 1, 1, 2, 3, 2}, 2);
    auto csv = trace_csv(run_ld_network(s, random_messages(s, 0)));
    CHECK(csv.rfind("t,node,level,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 6 * 3);
}
