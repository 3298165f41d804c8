#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <complex>
#include <variant>

namespace dcic {

/// Linear-deterministic channel. Levels count field symbols (bits when p = 2).
/// The single nC models the reciprocal cooperation link n34 = n43.
struct LdChannel {
    int n13 = 0;
    int n23 = 0;
    int n14 = 0;
    int n24 = 0;
    int nC = 0;
    int p = 2;

    /// Signal dimension n: the largest level.
    int n() const;
    int n_min() const;
    /// Users exchanged: 1 <-> 2 and 3 <-> 4.
    LdChannel mirrored() const;
    void validate() const;

    friend bool operator==(const LdChannel&, const LdChannel&) = default;
};

/// Normalized Gaussian channel: unit power, unit noise, magnitudes only,
/// with every phase folded into theta. The cross links carry e^{j theta/2}.
struct GaussChannel {
    double g13 = 0;
    double g23 = 0;
    double g14 = 0;
    double g24 = 0;
    double gC = 0;
    double theta = 0;

    GaussChannel mirrored() const;
    void validate() const;

    friend bool operator==(const GaussChannel&, const GaussChannel&) = default;
};

/// Real-valued level exponents [log2 |g|^2]_+.
struct LevelProfile {
    double n13 = 0;
    double n23 = 0;
    double n14 = 0;
    double n24 = 0;
    double nC = 0;
};

/// Raw complex gains in the order g13, g23, g14, g24, gC.
struct RawGains {
    std::complex<double> g13;
    std::complex<double> g23;
    std::complex<double> g14;
    std::complex<double> g24;
    std::complex<double> gC;
};

GaussChannel normalize_gaussian(const RawGains& raw);
LevelProfile derive_levels(const GaussChannel& ch);
/// Integer LD instance obtained by flooring each level.
LdChannel floor_levels(const LevelProfile& levels, int p = 2);

using AnyChannel = std::variant<LdChannel, GaussChannel>;

nlohmann::json to_json(const LdChannel& ch);
nlohmann::json to_json(const GaussChannel& ch);
nlohmann::json to_json(const AnyChannel& ch);
/// Accepts {"ld": {...}} or {"gauss": {...}}. Throws std::invalid_argument.
AnyChannel channel_from_json(const nlohmann::json& j);

} // namespace dcic
