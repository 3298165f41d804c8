#pragma once

#include "dcic/channel.hpp"
#include "dcic/gf.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dcic {

/// One message symbol in F_p: which user sent it, its layer (u, s, z_up,
/// z_dn, z), the block it belongs to (1-based) and its position in the layer.
struct MessageSymbol {
    int user = 0;
    std::string layer;
    int block = 1;
    int index = 0;
};

/// X[t] += gain * (Y[time] - contribution of the `cancel` symbols to Y[time]).
/// The cancelled symbols must already be decoded by the relaying destination.
struct RelayTap {
    int time = 0;
    GfMatrix gain;
    std::vector<int> cancel;
};

/// Rows [first_level, first_level + levels) of the observation at `time`.
struct Observation {
    int time = 0;
    int first_level = 0;
    int levels = 0;
};

/// One successive-decoding step, run at the end of channel use `after_time`.
struct DecodeStep {
    std::string label;
    int after_time = 0;
    std::vector<int> targets;
    std::vector<Observation> observe;
    std::vector<int> cancel;
};

/// Sources fill `encode`, destinations fill `relay` and `schedule`.
struct NodeProgram {
    /// n x (symbol count) map from the message vector to X[t]; only columns
    /// of the node's own symbols may be nonzero.
    std::function<GfMatrix(int t)> encode;
    /// Linear causal relay: every tap reads an earlier observation.
    std::function<std::vector<RelayTap>(int t)> relay;
    std::vector<DecodeStep> schedule;
};

/// Nodes are ordered source 1, source 2, destination 3, destination 4.
struct LdScheme {
    std::string name;
    LdChannel channel;
    int horizon = 0;
    std::vector<MessageSymbol> symbols;
    std::array<NodeProgram, 4> nodes;
};

struct DecodeFailure {
    int node = 0;  // 3 or 4
    std::string step;
    std::string reason;
};

/// Signals at one channel use, in the order x1 x2 x3 x4 y3 y4.
using SignalSet = std::array<std::vector<int>, 6>;
inline const std::array<const char*, 6> signal_names{"x1", "x2", "x3", "x4", "y3", "y4"};

struct SimReport {
    int horizon = 0;
    int blocks = 0;
    /// Symbol id -> value recovered at destination 3 and 4.
    std::array<std::map<int, int>, 2> decoded;
    bool success = false;
    std::optional<DecodeFailure> failure;
    /// Own symbols delivered per channel use over the whole horizon.
    std::array<double, 2> achieved_rates{};
    /// Own symbols carried by the middle block (the rate once edge blocks
    /// are amortized away).
    std::array<int, 2> steady_rates{};
    std::vector<SignalSet> trace;
    /// Same signals as linear maps of the message vector.
    std::vector<std::array<GfMatrix, 6>> symbolic;
};

/// Runs the scheme on its channel for its horizon with the given message
/// symbols (one value in [0, p) per entry of scheme.symbols).
SimReport run_ld_network(const LdScheme& scheme, const std::vector<int>& messages);

/// Uniform random message symbols for a scheme.
std::vector<int> random_messages(const LdScheme& scheme, unsigned long long seed);

/// Worked scheme on (5,2,2,5,1): one public, one cooperative private and two
/// private symbols per user per use, with a one-use decoding lag.
LdScheme build_example1_scheme(const LdChannel& ch, int horizon);

/// Worked scheme on (2,1,1,2,3): destinations forward the other user's public
/// symbol from the previous use.
LdScheme build_example2_scheme(const LdChannel& ch, int horizon);

/// Uncoded block-Markov nulling scheme for nC <= min level, one channel use
/// per block, rates from regime1_ld_rates. Without a cooperation gain the
/// program is silent.
LdScheme build_regime1_scheme(const LdChannel& ch, int horizon);

std::string trace_csv(const SimReport& report);

} // namespace dcic
