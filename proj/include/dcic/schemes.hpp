#pragma once

#include "dcic/channel.hpp"
#include "dcic/info.hpp"
#include "dcic/polytope.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace dcic {

/// Which regime-(i) strategy applies. `B` has only destination 3 relaying;
/// `BMirrored` is the same with the users exchanged.
enum class Regime1Case { A, B, BMirrored, NoCoop };

std::string to_string(Regime1Case c);

/// Per-user message split: public, cooperative private, and the two private
/// layers decoded without / with delay.
struct UserRates {
    double u = 0;
    double s = 0;
    double z_up = 0;
    double z_dn = 0;

    double total() const { return u + s + z_up + z_dn; }
};

/// Regime-(i) deterministic allocation. Rates are in field symbols.
struct Regime1LdAllocation {
    Regime1Case kind = Regime1Case::NoCoop;
    std::array<UserRates, 2> user{};
    /// Exponents k of the precoder S^k at each source and -k of the relay
    /// shifts -S^{-k} at each destination; relay_silent marks A = 0.
    std::array<int, 2> precoder_shift{};
    std::array<int, 2> relay_shift{};
    std::array<bool, 2> relay_silent{true, true};
    /// Achievable sum for this case (closed form over the monotone family).
    int sum = 0;

    int allocation_sum() const { return int(user[0].total() + user[1].total()); }
};

/// Throws std::invalid_argument("not regime (i)") when nC > min level.
Regime1LdAllocation regime1_ld_rates(const LdChannel& ch);

/// Mutual-information oracle over the named variables U1 U2 X1 X2 X3 X4
/// Y3 Y4 V3 V4, returning exact rationals.
using MiOracle = std::function<Rational(const VarSet&, const VarSet&, const VarSet&)>;

/// Rate variables of the compress-and-forward region.
inline const std::vector<std::string> cf_rate_names{"r_U1", "r_U2", "r_X1", "r_X2", "r3", "r4"};

/// Every inequality of the compress-and-forward region (both destinations)
/// with nonnegativity. The objective is r_U1 + r_X1 + r_U2 + r_X2.
ConstraintSystem cf_constraints(const MiOracle& mi);
std::vector<Rational> cf_objective(const ConstraintSystem& sys);

/// Deterministic instantiation: uniform public parts, private parts on the
/// levels below the cross link, test channels truncating to the private level.
LinearRvSystem ld_regime3_system(const LdChannel& ch);
ConstraintSystem cf_constraints(const LinearRvSystem& sys);

/// Gaussian instantiation with quantizer noise at the private-signal level.
GaussRvSystem gauss_regime3_system(const GaussChannel& ch);
ConstraintSystem cf_constraints(const GaussRvSystem& sys);

struct Regime3LdResult {
    int fm_sum = 0;
    int closed_form = 0;  // min(u2, u3, u4, u5)
};

/// Throws std::invalid_argument("not regime (iii)") unless nC > min(n13, n24).
Regime3LdResult regime3_ld_sum(const LdChannel& ch);

/// One constraint of the Gaussian regime-(i) lists: its log value and the
/// simplified integer-level lower form it is claimed to dominate.
struct RateConstraint {
    std::string name;
    double log_value = 0;
    double integer_form = 0;
};

struct Regime1GaussResult {
    Regime1Case kind = Regime1Case::NoCoop;
    bool fallback_hk = true;
    double reduced_gC = 0;
    std::array<UserRates, 2> user{};
    double sum = 0;
    std::vector<RateConstraint> constraints;
};

/// Evaluates the regime-(i) log-formulas at one cooperation gain (already
/// reduced by the caller). Falls back to hk_noncoop_sum when gC <= 1 or both
/// nulling ratios are >= 1/2.
Regime1GaussResult regime1_gauss_at(const GaussChannel& ch, double gC);

/// Sweeps the reduced gain min(gC, g14/2, g23/2, g13, g24) down a 0.5-bit
/// grid and keeps the best evaluation.
Regime1GaussResult regime1_gauss_rates(const GaussChannel& ch);

struct Regime3GaussResult {
    double exact_path = 0;    // region from exact log-det values
    double printed_path = 0;  // region from the simplified closed forms
    double sum = 0;
};

/// Throws std::invalid_argument("not regime (iii)") unless the derived
/// levels satisfy nC > min(n13, n24).
Regime3GaussResult regime3_gauss_sum(const GaussChannel& ch);

/// Maximum sum-rate of the exact compress-and-forward region for any channel.
double cf_gauss_sum(const GaussChannel& ch);

/// Han-Kobayashi without cooperation: private power 1/max(1, cross^2),
/// the rest public, simultaneous non-unique decoding.
double hk_noncoop_sum(const GaussChannel& ch);

struct Achievable {
    double sum = 0;
    std::string scheme;  // regime1a | regime1b | regime3 | hk
    nlohmann::json rates;
};

Achievable ld_achievable(const LdChannel& ch);
int ld_achievable_sum(const LdChannel& ch);

Achievable gauss_achievable(const GaussChannel& ch);
double gauss_achievable_sum(const GaussChannel& ch);

} // namespace dcic
