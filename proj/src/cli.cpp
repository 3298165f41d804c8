#include "dcic/cli.hpp"

#include "dcic/bounds.hpp"
#include "dcic/schemes.hpp"
#include "dcic/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dcic::cli {

namespace {

IntRange parse_one(const std::string& f)
{
    auto bad = [&] { return std::invalid_argument("bad range field '" + f + "'"); };
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != s.size()) throw bad();
        return v;
    };
    const auto dots = f.find("..");
    if (dots == std::string::npos) {
        int v = to_int(f);
        return {v, v};
    }
    return {to_int(f.substr(0, dots)), to_int(f.substr(dots + 2))};
}

// Runs body(i) for i in [0, count) on a small pool; callers write results by index.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

long long elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read channel file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Thrown for bad flag values found after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace

LdRanges parse_ranges(const std::string& text)
{
    std::vector<IntRange> fields;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        int repeat = 1;
        if (auto caret = item.find('^'); caret != std::string::npos) {
            auto r = parse_one(item.substr(caret + 1));
            if (r.lo != r.hi || r.lo < 1) throw std::invalid_argument("bad repeat in '" + item + "'");
            repeat = r.lo;
            item = item.substr(0, caret);
        }
        auto r = parse_one(item);
        for (int k = 0; k < repeat; ++k) fields.push_back(r);
    }
    if (fields.size() == 1) fields.assign(5, fields[0]);
    if (fields.size() != 5) throw std::invalid_argument("expected 5 range fields, got " + std::to_string(fields.size()));
    LdRanges out;
    std::copy(fields.begin(), fields.end(), out.begin());
    for (const auto& r : out)
        if (!r.empty() && r.lo < 0) throw std::invalid_argument("levels must be nonnegative");
    return out;
}

nlohmann::json to_json(const SweepReport& r)
{
    nlohmann::json mm = nlohmann::json::array();
    for (const auto& m : r.mismatches) mm.push_back({{"channel", m.channel}, {"achievable", m.achievable}, {"bound", m.bound}});
    return {{"total", r.total}, {"mismatches", mm}, {"max_gap", r.max_gap}, {"min_gap", r.min_gap}, {"passed", r.passed}};
}

SweepReport verify_ld_sweep(const LdRanges& ranges, int p, unsigned threads)
{
    const auto start = std::chrono::steady_clock::now();
    SweepReport rep;
    std::vector<LdChannel> channels;
    if (std::none_of(ranges.begin(), ranges.end(), [](const IntRange& r) { return r.empty(); })) {
        for (int a = ranges[0].lo; a <= ranges[0].hi; ++a)
            for (int b = ranges[1].lo; b <= ranges[1].hi; ++b)
                for (int c = ranges[2].lo; c <= ranges[2].hi; ++c)
                    for (int d = ranges[3].lo; d <= ranges[3].hi; ++d)
                        for (int e = ranges[4].lo; e <= ranges[4].hi; ++e) channels.push_back({a, b, c, d, e, p});
    }
    std::vector<std::pair<double, double>> result(channels.size());
    parallel_for(channels.size(), threads, [&](std::size_t i) {
        result[i] = {ld_achievable_sum(channels[i]), ld_bound_set(channels[i]).min_bound};
    });
    rep.total = long(channels.size());
    bool first = true;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto [ach, ub] = result[i];
        const double gap = ub - ach;
        rep.max_gap = first ? gap : std::max(rep.max_gap, gap);
        rep.min_gap = first ? gap : std::min(rep.min_gap, gap);
        first = false;
        if (ach != ub) rep.mismatches.push_back({to_json(channels[i]), ach, ub});
    }
    rep.passed = rep.mismatches.empty();
    rep.runtime_ms = elapsed_ms(start);
    return rep;
}

std::vector<GaussChannel> sample_gauss_channels(const GaussSampling& s)
{
    if (s.samples < 1) throw std::invalid_argument("samples must be at least 1");
    if (!(s.lo_db <= s.hi_db)) throw std::invalid_argument("empty gain range");
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> db(s.lo_db, s.hi_db), theta(0, 2 * M_PI);
    std::vector<GaussChannel> out;
    out.reserve(static_cast<std::size_t>(s.samples));
    for (long i = 0; i < s.samples; ++i) {
        std::array<double, 5> g{};
        for (auto& v : g) v = s.zero_gains ? (db(rng), 0.0) : std::pow(10.0, db(rng) / 20);
        out.push_back({g[0], g[1], g[2], g[3], g[4], theta(rng)});
    }
    return out;
}

SweepReport verify_gauss_gap(const std::vector<GaussChannel>& channels, unsigned threads)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<double, double>> result(channels.size());
    parallel_for(channels.size(), threads, [&](std::size_t i) {
        result[i] = {gauss_achievable_sum(channels[i]), gaussian_bound_set(channels[i]).min_bound};
    });
    SweepReport rep;
    rep.total = long(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto [ach, ub] = result[i];
        const double gap = ub - ach;
        rep.max_gap = i == 0 ? gap : std::max(rep.max_gap, gap);
        rep.min_gap = i == 0 ? gap : std::min(rep.min_gap, gap);
        if (gap < 0 || gap > gauss_gap_limit) rep.mismatches.push_back({to_json(channels[i]), ach, ub});
    }
    rep.passed = rep.mismatches.empty();
    rep.runtime_ms = elapsed_ms(start);
    return rep;
}

SweepReport verify_gauss_gap(const GaussSampling& s, unsigned threads)
{
    return verify_gauss_gap(sample_gauss_channels(s), threads);
}

std::vector<CurvePoint> cooperation_curve(double gD_bits, double step)
{
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    if (!(gD_bits > 0)) throw std::invalid_argument("gD_bits must be positive");
    const double gD = std::pow(2.0, gD_bits / 2), gI = std::pow(2.0, gD_bits / 4);
    const long count = std::lround(std::floor(2.0 / step + 1e-9));
    std::vector<CurvePoint> out;
    for (long i = 0; i <= count; ++i) {
        const double alpha = double(i) * step;
        GaussChannel ch{gD, gI, gI, gD, std::pow(2.0, alpha * gD_bits / 2), 0.0};
        const double v = gaussian_bound_set(ch).min_bound / gD_bits;
        if (!std::isfinite(v)) throw std::invalid_argument("gains overflow double precision; lower gD_bits");
        out.push_back({alpha, v});
    }
    return out;
}

SegmentFit fit_segments(const std::vector<CurvePoint>& pts, const std::vector<double>& knots, double margin)
{
    SegmentFit fit;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k] + margin, hi = knots[k + 1] - margin;
        double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : pts)
            if (p.alpha >= lo - 1e-12 && p.alpha <= hi + 1e-12) {
                n += 1;
                sx += p.alpha;
                sy += p.normalized;
                sxx += p.alpha * p.alpha;
                sxy += p.alpha * p.normalized;
            }
        const double det = n * sxx - sx * sx;
        if (n < 2 || det <= 0) throw std::invalid_argument("too few points to fit a segment");
        const double slope = (n * sxy - sx * sy) / det;
        fit.slopes.push_back(slope);
        fit.intercepts.push_back((sy - slope * sx) / n);
    }
    for (std::size_t k = 0; k + 1 < fit.slopes.size(); ++k) {
        const double ds = fit.slopes[k] - fit.slopes[k + 1];
        fit.breakpoints.push_back(ds == 0 ? std::nan("") : (fit.intercepts[k + 1] - fit.intercepts[k]) / ds);
    }
    return fit;
}

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

nlohmann::json bounds_json(const AnyChannel& ch)
{
    nlohmann::json j{{"channel", to_json(ch)}};
    if (const auto* ld = std::get_if<LdChannel>(&ch)) {
        auto b = ld_bound_set(*ld);
        j["model"] = "ld";
        j["bounds"] = b.u;
        j["min"] = b.min_bound;
    } else {
        const auto& g = std::get<GaussChannel>(ch);
        auto b = gaussian_bound_set(g);
        auto primed = gaussian_primed_bound_set(g);
        j["model"] = "gauss";
        j["bounds"] = b.u;
        j["min"] = b.min_bound;
        j["primed"] = primed.u;
        j["levels"] = [&] {
            auto l = derive_levels(g);
            return nlohmann::json{{"n13", l.n13}, {"n23", l.n23}, {"n14", l.n14}, {"n24", l.n24}, {"nC", l.nC}};
        }();
    }
    return j;
}

nlohmann::json achieve_json(const AnyChannel& ch)
{
    nlohmann::json j{{"channel", to_json(ch)}};
    Achievable a;
    double ub = 0;
    if (const auto* ld = std::get_if<LdChannel>(&ch)) {
        a = ld_achievable(*ld);
        ub = ld_bound_set(*ld).min_bound;
        j["model"] = "ld";
    } else {
        const auto& g = std::get<GaussChannel>(ch);
        a = gauss_achievable(g);
        ub = gaussian_bound_set(g).min_bound;
        j["model"] = "gauss";
    }
    j["sum"] = a.sum;
    j["scheme"] = a.scheme;
    j["rates"] = a.rates;
    j["bound"] = ub;
    j["gap"] = ub - a.sum;
    return j;
}

AnyChannel load_channel(const std::string& arg)
{
    auto first = arg.find_first_not_of(" \t\r\n");
    const std::string text = (first != std::string::npos && arg[first] == '{') ? arg : read_file(arg);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("channel is not valid JSON: ") + e.what());
    }
    return channel_from_json(j);
}

namespace {

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

LdScheme build_named(const std::string& name, const LdChannel& ch, int horizon)
{
    if (name == "example1") return build_example1_scheme(ch, horizon);
    if (name == "example2") return build_example2_scheme(ch, horizon);
    return build_regime1_scheme(ch, horizon);
}

int simulate(const std::string& scheme_name, const std::string& channel_arg, int horizon, std::uint64_t seed,
             const std::string& trace_path, bool csv, std::ostream& out)
{
    auto any = load_channel(channel_arg);
    const auto* ch = std::get_if<LdChannel>(&any);
    if (!ch) throw UsageError("simulate needs a deterministic channel");
    if (horizon < 1) throw UsageError("horizon must be at least 1");
    auto scheme = build_named(scheme_name, *ch, horizon);
    auto messages = random_messages(scheme, seed);
    auto r = run_ld_network(scheme, messages);

    long errors = 0;
    std::array<long, 2> delivered{};
    for (std::size_t id = 0; id < messages.size(); ++id) {
        const auto own = static_cast<std::size_t>(scheme.symbols[id].user);
        auto it = r.decoded[own].find(int(id));
        if (it == r.decoded[own].end() || it->second != messages[id]) ++errors;
        else ++delivered[own];
    }

    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw UsageError("cannot write trace file '" + trace_path + "'");
        f << trace_csv(r);
    }
    if (csv) {
        out << trace_csv(r);
    } else {
        nlohmann::json j{{"scheme", scheme.name},
                         {"channel", to_json(*ch)},
                         {"horizon", r.horizon},
                         {"blocks", r.blocks},
                         {"seed", seed},
                         {"symbols", messages.size()},
                         {"success", r.success && errors == 0},
                         {"symbol_errors", errors},
                         {"delivered", delivered},
                         {"achieved_rates", r.achieved_rates},
                         {"steady_rates", r.steady_rates},
                         {"bound", ld_bound_set(*ch).min_bound}};
        if (r.failure)
            j["failure"] = {{"node", r.failure->node}, {"step", r.failure->step}, {"reason", r.failure->reason}};
        emit(out, j);
    }
    return (r.success && errors == 0) ? 0 : 1;
}

void bounds_csv(const nlohmann::json& j, std::ostream& out)
{
    out << "bound,value\n";
    for (int i = 0; i < 5; ++i) out << 'u' << i + 1 << ',' << fixed6(j["bounds"][i].get<double>()) << '\n';
    out << "min," << fixed6(j["min"].get<double>()) << '\n';
    if (j.contains("primed"))
        for (int i = 0; i < 5; ++i) out << "u" << i + 1 << "_primed," << fixed6(j["primed"][i].get<double>()) << '\n';
}

void sweep_csv(const SweepReport& r, std::ostream& out)
{
    out << "total,mismatches,max_gap,min_gap,passed\n";
    out << r.total << ',' << r.mismatches.size() << ',' << fixed6(r.max_gap) << ',' << fixed6(r.min_gap) << ','
        << (r.passed ? 1 : 0) << '\n';
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sum-rate bounds, achievable schemes and simulation for the interference channel with "
                 "cooperating destinations",
                 "dcic"};
    app.require_subcommand(1);
    std::string format;
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    std::string channel;
    auto* bounds = app.add_subcommand("bounds", "Upper bounds u1..u5 for one channel");
    bounds->add_option("--channel", channel, "Channel JSON or path to a JSON file")->required();
    add_format(bounds);

    auto* achieve = app.add_subcommand("achieve", "Best achievable sum rate for one channel");
    achieve->add_option("--channel", channel, "Channel JSON or path to a JSON file")->required();
    add_format(achieve);

    std::string scheme = "regime1", trace;
    int horizon = 20;
    std::uint64_t seed = 0;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a deterministic scheme symbol by symbol");
    simulate_cmd->add_option("--scheme", scheme, "Scheme")->check(CLI::IsMember({"example1", "example2", "regime1"}));
    simulate_cmd->add_option("--channel", channel, "Deterministic channel JSON or file")->required();
    simulate_cmd->add_option("--horizon", horizon, "Channel uses");
    simulate_cmd->add_option("--seed", seed, "Message seed");
    simulate_cmd->add_option("--trace", trace, "Write per-use signals as CSV (t,node,level,value) to this file");
    add_format(simulate_cmd);

    std::string ranges = "0..5^4,0..8";
    int field = 2;
    unsigned threads = 0;
    auto* ld_sweep = app.add_subcommand("verify-ld-sweep", "Check achievable == bound over a grid of channels");
    ld_sweep->add_option("--ranges", ranges, "Five ranges lo..hi for n13,n23,n14,n24,nC");
    ld_sweep->add_option("--field", field, "Field size p")->check(CLI::Range(2, 251));
    ld_sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
    add_format(ld_sweep);

    GaussSampling sampling;
    sampling.samples = 10000;
    auto* gap = app.add_subcommand("verify-gauss-gap", "Check the bound-to-achievable gap on random channels");
    gap->add_option("--samples", sampling.samples, "Number of channels")->check(CLI::PositiveNumber);
    gap->add_option("--seed", sampling.seed, "Sampling seed");
    gap->add_option("--db-min", sampling.lo_db, "Lowest gain in dB");
    gap->add_option("--db-max", sampling.hi_db, "Highest gain in dB");
    gap->add_flag("--zero-gains", sampling.zero_gains, "Force every gain to zero");
    gap->add_option("--threads", threads, "Worker threads (0 = all cores)");
    add_format(gap);

    double gd_bits = 60, step = 0.01;
    auto* curve = app.add_subcommand("curve", "Normalized sum-rate bound against cooperation strength");
    curve->add_option("--gd-bits", gd_bits, "Direct link capacity in bits")->check(CLI::PositiveNumber);
    curve->add_option("--step", step, "Step in alpha")->check(CLI::PositiveNumber);
    add_format(curve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    // curve defaults to CSV, everything else to JSON
    const bool csv = format == "csv" || (format.empty() && app.got_subcommand(curve));

    try {
        if (app.got_subcommand(bounds)) {
            auto j = bounds_json(load_channel(channel));
            if (csv) bounds_csv(j, out);
            else emit(out, j);
            return 0;
        }
        if (app.got_subcommand(achieve)) {
            auto j = achieve_json(load_channel(channel));
            if (csv)
                out << "sum,bound,gap,scheme\n"
                    << fixed6(j["sum"].get<double>()) << ',' << fixed6(j["bound"].get<double>()) << ','
                    << fixed6(j["gap"].get<double>()) << ',' << j["scheme"].get<std::string>() << '\n';
            else emit(out, j);
            return 0;
        }
        if (app.got_subcommand(simulate_cmd)) return simulate(scheme, channel, horizon, seed, trace, csv, out);
        if (app.got_subcommand(ld_sweep)) {
            LdRanges parsed;
            try {
                parsed = parse_ranges(ranges);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            auto r = verify_ld_sweep(parsed, field, threads);
            if (csv) sweep_csv(r, out);
            else emit(out, to_json(r));
            err << "runtime_ms " << r.runtime_ms << '\n';
            return r.passed ? 0 : 1;
        }
        if (app.got_subcommand(gap)) {
            if (!(sampling.lo_db <= sampling.hi_db)) throw UsageError("--db-min exceeds --db-max");
            auto r = verify_gauss_gap(sampling, threads);
            if (csv) sweep_csv(r, out);
            else {
                auto j = to_json(r);
                j["seed"] = sampling.seed;
                j["gain_range_db"] = {sampling.lo_db, sampling.hi_db};
                j["limit"] = gauss_gap_limit;
                emit(out, j);
            }
            err << "runtime_ms " << r.runtime_ms << '\n';
            return r.passed ? 0 : 1;
        }
        if (app.got_subcommand(curve)) {
            auto pts = cooperation_curve(gd_bits, step);
            if (csv) {
                out << "# breakpoints 0.25,1.0,1.5 (gD_bits " << fixed6(gd_bits) << ")\n";
                out << "alpha,normalized_sum\n";
                for (const auto& p : pts) out << fixed6(p.alpha) << ',' << fixed6(p.normalized) << '\n';
            } else {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& p : pts) arr.push_back({{"alpha", p.alpha}, {"normalized_sum", p.normalized}});
                emit(out, {{"gD_bits", gd_bits}, {"step", step}, {"breakpoints", {0.25, 1.0, 1.5}}, {"points", arr}});
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace dcic::cli
