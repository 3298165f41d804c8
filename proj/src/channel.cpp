#include "dcic/channel.hpp"

#include "dcic/gf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dcic {

int LdChannel::n() const { return std::max({n13, n23, n14, n24, nC}); }

int LdChannel::n_min() const { return std::min({n13, n14, n23, n24}); }

LdChannel LdChannel::mirrored() const { return {n24, n14, n23, n13, nC, p}; }

void LdChannel::validate() const
{
    if (n13 < 0 || n23 < 0 || n14 < 0 || n24 < 0 || nC < 0) throw std::invalid_argument("LD levels must be >= 0");
    if (!is_prime(p)) throw std::invalid_argument("LD field size must be prime");
}

GaussChannel GaussChannel::mirrored() const { return {g24, g14, g23, g13, gC, theta}; }

void GaussChannel::validate() const
{
    for (double g : {g13, g23, g14, g24, gC}) {
        if (!(g >= 0) || !std::isfinite(g)) throw std::invalid_argument("Gaussian gains must be finite and >= 0");
    }
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

GaussChannel normalize_gaussian(const RawGains& raw)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    double theta = std::arg(raw.g14) + std::arg(raw.g23) - std::arg(raw.g13) - std::arg(raw.g24);
    theta = std::fmod(theta, two_pi);
    if (theta < 0) theta += two_pi;
    if (theta >= two_pi) theta = 0;
    return {std::abs(raw.g13), std::abs(raw.g23), std::abs(raw.g14), std::abs(raw.g24), std::abs(raw.gC), theta};
}

namespace {
double level(double g) { return g > 1 ? std::log2(g * g) : 0.0; }
} // namespace

LevelProfile derive_levels(const GaussChannel& ch)
{
    return {level(ch.g13), level(ch.g23), level(ch.g14), level(ch.g24), level(ch.gC)};
}

LdChannel floor_levels(const LevelProfile& l, int p)
{
    auto f = [](double v) { return static_cast<int>(std::floor(v)); };
    return {f(l.n13), f(l.n23), f(l.n14), f(l.n24), f(l.nC), p};
}

nlohmann::json to_json(const LdChannel& ch)
{
    return {{"ld", {{"n13", ch.n13}, {"n23", ch.n23}, {"n14", ch.n14}, {"n24", ch.n24}, {"nC", ch.nC}, {"p", ch.p}}}};
}

nlohmann::json to_json(const GaussChannel& ch)
{
    return {{"gauss",
             {{"g13", ch.g13}, {"g23", ch.g23}, {"g14", ch.g14}, {"g24", ch.g24}, {"gC", ch.gC}, {"theta", ch.theta}}}};
}

nlohmann::json to_json(const AnyChannel& ch)
{
    return std::visit([](const auto& c) { return to_json(c); }, ch);
}

AnyChannel channel_from_json(const nlohmann::json& j)
{
    try {
        if (j.contains("ld")) {
            const auto& o = j.at("ld");
            LdChannel ch{o.at("n13").get<int>(), o.at("n23").get<int>(), o.at("n14").get<int>(),
                         o.at("n24").get<int>(), o.at("nC").get<int>(), o.value("p", 2)};
            ch.validate();
            return ch;
        }
        if (j.contains("gauss")) {
            const auto& o = j.at("gauss");
            GaussChannel ch{o.at("g13").get<double>(), o.at("g23").get<double>(), o.at("g14").get<double>(),
                            o.at("g24").get<double>(), o.at("gC").get<double>(), o.value("theta", 0.0)};
            ch.validate();
            return ch;
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed channel JSON: ") + e.what());
    }
    throw std::invalid_argument("channel JSON needs an \"ld\" or \"gauss\" key");
}

} // namespace dcic
