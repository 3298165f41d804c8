#include "dcic/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dcic;
using namespace dcic::cli;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "dcic");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = run(int(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const std::string example1 = R"({"ld": {"n13": 5, "n23": 2, "n14": 2, "n24": 5, "nC": 1}})";

} // namespace

TEST_CASE("range parsing")
{
    auto r = parse_ranges("0..5^4,0..8");
    CHECK(r[0].lo == 0);
    CHECK(r[3].hi == 5);
    CHECK(r[4].hi == 8);
    auto single = parse_ranges("5,2,2,5,1");
    CHECK(single[0].size() == 1);
    CHECK(single[4].lo == 1);
    CHECK(parse_ranges("0..3")[4].hi == 3);
    CHECK(parse_ranges("1..0,0..2^4")[0].empty());
    CHECK_THROWS_AS(parse_ranges("0..3,1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_ranges("a..3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_ranges("-1..3"), std::invalid_argument);
}

TEST_CASE("deterministic sweep")
{
    auto small = verify_ld_sweep(parse_ranges("0..3^4,0..5"));
    CHECK(small.total == 256 * 6);
    CHECK(small.mismatches.empty());
    CHECK(small.passed);

    auto one = verify_ld_sweep(parse_ranges("5,2,2,5,1"));
    CHECK(one.total == 1);
    CHECK(one.mismatches.empty());

    auto none = verify_ld_sweep(parse_ranges("1..0,0..3^4"));
    CHECK(none.total == 0);
    CHECK(none.passed);

    // thread count does not change the report
    CHECK(to_json(verify_ld_sweep(parse_ranges("0..2^4,0..3"), 2, 1)) ==
          to_json(verify_ld_sweep(parse_ranges("0..2^4,0..3"), 2, 4)));
}

TEST_CASE("gaussian gap sampling")
{
    GaussSampling zero;
    zero.zero_gains = true;
    auto z = verify_gauss_gap(zero);
    CHECK(z.total == 1);
    CHECK(z.max_gap == 0);
    CHECK(z.passed);

    GaussSampling s;
    s.samples = 40;
    s.seed = 3;
    auto a = verify_gauss_gap(s, 1), b = verify_gauss_gap(s, 3);
    CHECK(to_json(a) == to_json(b));
    CHECK(a.passed);
    CHECK(a.min_gap >= 0);
    CHECK(a.max_gap <= gauss_gap_limit);
    s.seed = 4;
    CHECK(sample_gauss_channels(s)[0].g13 != sample_gauss_channels({40, -10, 60, 3, false})[0].g13);

    s.samples = 0;
    CHECK_THROWS_AS(sample_gauss_channels(s), std::invalid_argument);
}

TEST_CASE("cooperation curve")
{
    auto pts = cooperation_curve(60, 0.01);
    REQUIRE(pts.size() == 201);
    CHECK(pts.back().alpha == doctest::Approx(2.0));
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].normalized >= pts[i - 1].normalized - 1e-12);
    CHECK(std::abs(pts.back().normalized - 2.0) <= 0.05);

    // At alpha = 0 the first bound carries a finite-gain offset of about 4.6
    // bits: 2 log2(1 + (2^15 + 1 + 2^15)^2 + 2^30) / 60.
    const double offset = 2 * std::log2(1 + std::pow(std::pow(2.0, 16) + 1, 2) + std::pow(2.0, 30)) / 60;
    CHECK(pts.front().normalized == doctest::Approx(offset).epsilon(1e-12));
    CHECK(std::abs(cooperation_curve(120, 1).front().normalized - 1.0) <= 0.05);

    // with much larger gains the corners sharpen onto the limiting shape
    auto fine = fit_segments(cooperation_curve(300, 0.005), {0, 0.25, 1.0, 1.5, 2.0}, 0.05);
    const std::vector<double> slopes{2, 0, 1, 0}, knots{0.25, 1.0, 1.5};
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(fine.slopes[k] - slopes[k]) <= 0.05);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(fine.breakpoints[k] - knots[k]) <= 0.01);

    CHECK_THROWS_AS(cooperation_curve(60, 0), std::invalid_argument);
    CHECK_THROWS_AS(cooperation_curve(600, 0.5), std::invalid_argument);
}

TEST_CASE("segment fit recovers an exact broken line")
{
    std::vector<CurvePoint> pts;
    for (int i = 0; i <= 40; ++i) {
        const double a = i * 0.05;
        pts.push_back({a, a < 1 ? 3 * a : 3.0});
    }
    auto fit = fit_segments(pts, {0, 1, 2}, 0.1);
    CHECK(fit.slopes[0] == doctest::Approx(3));
    CHECK(fit.slopes[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK(fit.breakpoints[0] == doctest::Approx(1));
}

TEST_CASE("six-decimal formatting")
{
    CHECK(fixed6(1.5) == "1.500000");
    CHECK(fixed6(-1e-9) == "0.000000");
    CHECK(fixed6(2.0 / 3) == "0.666667");
}

TEST_CASE("channel loading")
{
    auto ch = load_channel(example1);
    CHECK(std::get<LdChannel>(ch) == LdChannel{5, 2, 2, 5, 1, 2});
    CHECK(channel_from_json(to_json(ch)) == ch);

    const std::string path = "test_cli_channel.json";
    {
        std::ofstream f(path);
        f << R"({"gauss": {"g13": 4, "g23": 1, "g14": 1, "g24": 4, "gC": 2, "theta": 0.5}})";
    }
    CHECK(std::holds_alternative<GaussChannel>(load_channel(path)));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_channel("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(load_channel("no_such_file.json"), std::invalid_argument);
}

TEST_CASE("bounds and achieve commands")
{
    auto b = run_cli({"bounds", "--channel", example1});
    REQUIRE(b.code == 0);
    auto j = nlohmann::json::parse(b.out);
    CHECK(j["min"] == 8);
    CHECK(j["bounds"] == nlohmann::json{8, 8, 8, 10, 10});

    auto csv = run_cli({"bounds", "--channel", example1, "--format", "csv"});
    CHECK(csv.out.rfind("bound,value\nu1,8.000000\n", 0) == 0);
    CHECK(csv.out.find('\r') == std::string::npos);

    auto a = nlohmann::json::parse(run_cli({"achieve", "--channel", example1}).out);
    CHECK(a["sum"] == 8);
    CHECK(a["gap"] == 0);
    CHECK(a["scheme"] == "regime1a");

    auto g = run_cli({"achieve", "--channel", R"({"gauss": {"g13": 100, "g23": 10, "g14": 10, "g24": 100, "gC": 3}})",
                      "--format", "csv"});
    CHECK(g.code == 0);
    CHECK(g.out.rfind("sum,bound,gap,scheme\n", 0) == 0);
}

TEST_CASE("simulate command")
{
    auto r = run_cli({"simulate", "--scheme", "example1", "--channel", example1, "--horizon", "20", "--seed", "5"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["success"] == true);
    CHECK(j["symbol_errors"] == 0);
    CHECK(j["steady_rates"] == nlohmann::json{4, 4});
    CHECK(r.out == run_cli({"simulate", "--scheme", "example1", "--channel", example1, "--horizon", "20", "--seed", "5"}).out);

    const std::string path = "test_cli_trace.csv";
    auto t = run_cli({"simulate", "--scheme", "example2", "--channel",
                      R"({"ld": {"n13": 2, "n23": 1, "n14": 1, "n24": 2, "nC": 3}})", "--horizon", "3", "--trace", path});
    CHECK(t.code == 0);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,node,level,value");
    f.close();
    std::remove(path.c_str());

    auto wrong = run_cli({"simulate", "--scheme", "example2", "--channel", example1});
    CHECK(wrong.code == 2);
    auto gauss = run_cli({"simulate", "--channel", R"({"gauss": {"g13": 1, "g23": 1, "g14": 1, "g24": 1, "gC": 1}})"});
    CHECK(gauss.code == 2);
}

TEST_CASE("verification commands and exit codes")
{
    auto one = run_cli({"verify-ld-sweep", "--ranges", "5,2,2,5,1"});
    CHECK(one.code == 0);
    CHECK(nlohmann::json::parse(one.out)["total"] == 1);
    CHECK(one.err.find("runtime_ms") != std::string::npos);
    CHECK(one.out.find("runtime") == std::string::npos);

    auto empty = run_cli({"verify-ld-sweep", "--ranges", "3..2"});
    CHECK(empty.code == 0);
    CHECK(nlohmann::json::parse(empty.out)["total"] == 0);

    auto zero = run_cli({"verify-gauss-gap", "--samples", "1", "--zero-gains"});
    CHECK(zero.code == 0);
    CHECK(nlohmann::json::parse(zero.out)["max_gap"] == 0);

    auto g1 = run_cli({"verify-gauss-gap", "--samples", "20", "--seed", "9", "--format", "csv"});
    auto g2 = run_cli({"verify-gauss-gap", "--samples", "20", "--seed", "9", "--format", "csv"});
    CHECK(g1.code == 0);
    CHECK(g1.out == g2.out);
    CHECK(g1.out.rfind("total,mismatches,max_gap,min_gap,passed\n20,0,", 0) == 0);

    auto c = run_cli({"curve", "--step", "0.5"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("# breakpoints 0.25,1.0,1.5", 0) == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 2 + 5);
    auto cj = nlohmann::json::parse(run_cli({"curve", "--step", "0.5", "--format", "json"}).out);
    CHECK(cj["points"].size() == 5);

    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"bounds"}).code == 2);
    CHECK(run_cli({"bounds", "--channel", "{\"ld\": {\"n13\": -1}}"}).code == 2);
    CHECK(run_cli({"verify-ld-sweep", "--ranges", "0..1,0..1"}).code == 2);
    CHECK(run_cli({"verify-gauss-gap", "--samples", "0"}).code == 2);
    CHECK(run_cli({"curve", "--format", "xml"}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}
