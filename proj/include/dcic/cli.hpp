#pragma once

#include "dcic/channel.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dcic::cli {

/// Inclusive integer range; empty when lo > hi.
struct IntRange {
    int lo = 0;
    int hi = -1;
    bool empty() const { return lo > hi; }
    long size() const { return empty() ? 0 : long(hi - lo + 1); }
};

/// Ranges for n13, n23, n14, n24, nC.
using LdRanges = std::array<IntRange, 5>;

/// "lo..hi" or "v" per field, five comma-separated fields; a single field
/// applies to all five. "0..5^4,0..8" style is accepted as shorthand for
/// repeating a field. Throws std::invalid_argument.
LdRanges parse_ranges(const std::string& text);

struct Mismatch {
    nlohmann::json channel;
    double achievable = 0;
    double bound = 0;
};

struct SweepReport {
    long total = 0;
    std::vector<Mismatch> mismatches;
    double max_gap = 0;
    double min_gap = 0;
    long long runtime_ms = 0;
    /// LD: no mismatch. Gaussian: 0 <= every gap <= 43.
    bool passed = true;
};

/// Deterministic part of a report (runtime is left out).
nlohmann::json to_json(const SweepReport& r);

/// 0 picks the hardware concurrency.
SweepReport verify_ld_sweep(const LdRanges& ranges, int p = 2, unsigned threads = 0);

struct GaussSampling {
    long samples = 1;
    double lo_db = -10;
    double hi_db = 60;
    std::uint64_t seed = 0;
    /// Every gain set to exactly zero (θ still drawn).
    bool zero_gains = false;
};

inline constexpr double gauss_gap_limit = 43.0;

/// Gains |g| = 10^{dB/20} with dB uniform, θ uniform in [0, 2π); draws in
/// the order g13, g23, g14, g24, gC, θ per sample.
std::vector<GaussChannel> sample_gauss_channels(const GaussSampling& s);

SweepReport verify_gauss_gap(const GaussSampling& s, unsigned threads = 0);
SweepReport verify_gauss_gap(const std::vector<GaussChannel>& channels, unsigned threads = 0);

struct CurvePoint {
    double alpha = 0;
    double normalized = 0;
};

/// min(u1..u5)/gD_bits with |gD|^2 = 2^gD_bits, |gI|^2 = 2^(gD_bits/2),
/// |gC|^2 = 2^(alpha gD_bits), alpha from 0 to 2.
std::vector<CurvePoint> cooperation_curve(double gD_bits = 60, double step = 0.01);

/// Least-squares lines through the points inside each interval
/// [knots[k] + margin, knots[k+1] - margin]; breakpoints are where
/// neighbouring lines meet.
struct SegmentFit {
    std::vector<double> slopes;
    std::vector<double> intercepts;
    std::vector<double> breakpoints;
};
SegmentFit fit_segments(const std::vector<CurvePoint>& pts, const std::vector<double>& knots, double margin);

/// Fixed six-decimal formatting used by every CSV writer.
std::string fixed6(double v);

nlohmann::json bounds_json(const AnyChannel& ch);
nlohmann::json achieve_json(const AnyChannel& ch);

/// Accepts inline JSON or a path to a JSON file.
AnyChannel load_channel(const std::string& arg);

/// Full command line; returns the process exit code (0 ok, 1 verification
/// failure, 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dcic::cli
