#include "dcic/simulator.hpp"

#include "dcic/schemes.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcic {

namespace {

GfMatrix column(const std::vector<int>& v, int p)
{
    GfMatrix m(static_cast<Index>(v.size()), 1, p);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(static_cast<Index>(i), 0, v[i]);
    return m;
}

std::vector<int> values(const GfMatrix& m)
{
    std::vector<int> v(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, 0);
    return v;
}

GfMatrix rows_of(const std::vector<int>& ids, Index total, int p)
{
    std::vector<Index> coords(ids.begin(), ids.end());
    return GfMatrix::selector(total, coords, p);
}

// Contribution of the listed symbols to a signal map, as a map.
GfMatrix restricted(const GfMatrix& sig, const std::vector<int>& ids)
{
    GfMatrix out(sig.rows(), sig.cols(), sig.p());
    for (int c : ids)
        for (Index r = 0; r < sig.rows(); ++r) out.set(r, c, sig(r, c));
    return out;
}

struct Runner {
    const LdScheme& sc;
    const std::vector<int>& msg;
    int n, p, T;
    Index total;
    GfMatrix m;
    SimReport rep;
    // per destination: observation maps and values, 1-based by time
    std::array<std::vector<GfMatrix>, 2> ysym;
    std::array<std::vector<GfMatrix>, 2> ynum;

    Runner(const LdScheme& s, const std::vector<int>& messages)
        : sc(s), msg(messages), n(s.channel.n()), p(s.channel.p), T(s.horizon),
          total(static_cast<Index>(s.symbols.size())), m(column(messages, s.channel.p))
    {
        for (auto& v : ysym) v.resize(static_cast<std::size_t>(T) + 1);
        for (auto& v : ynum) v.resize(static_cast<std::size_t>(T) + 1);
        rep.horizon = T;
        rep.blocks = T;
    }

    bool fail(int d, const std::string& step, const std::string& why)
    {
        rep.failure = DecodeFailure{d + 3, step, why};
        return false;
    }

    GfMatrix known_values(int d, const std::vector<int>& ids) const
    {
        std::vector<int> v;
        for (int id : ids) v.push_back(rep.decoded[static_cast<std::size_t>(d)].at(id));
        return column(v, p);
    }

    bool all_decoded(int d, const std::vector<int>& ids) const
    {
        const auto& got = rep.decoded[static_cast<std::size_t>(d)];
        return std::all_of(ids.begin(), ids.end(), [&](int id) { return got.count(id) > 0; });
    }

    // Relay output of destination d at time t: symbolic and as computed by
    // the node from its own observations and decoded symbols.
    bool relay(int d, int t, GfMatrix& xs, GfMatrix& xn)
    {
        xs = GfMatrix(n, total, p);
        xn = GfMatrix(n, 1, p);
        const auto& prog = sc.nodes[static_cast<std::size_t>(2 + d)];
        if (!prog.relay) return true;
        for (const auto& tap : prog.relay(t)) {
            if (tap.time < 1 || tap.time >= t) throw std::logic_error("relay tap is not causal");
            if (!all_decoded(d, tap.cancel)) return fail(d, "relay at t=" + std::to_string(t), "cancels an undecoded symbol");
            const auto tt = static_cast<std::size_t>(tap.time);
            const GfMatrix& ys = ysym[static_cast<std::size_t>(d)][tt];
            GfMatrix part = restricted(ys, tap.cancel);
            xs += tap.gain * (ys - part);
            GfMatrix residual = ynum[static_cast<std::size_t>(d)][tt];
            if (!tap.cancel.empty()) residual -= part * (rows_of(tap.cancel, total, p).transpose() * known_values(d, tap.cancel));
            xn += tap.gain * residual;
        }
        return true;
    }

    bool decode(int d, const DecodeStep& step)
    {
        if (!all_decoded(d, step.cancel)) return fail(d, step.label, "cancels an undecoded symbol");
        std::vector<GfMatrix> known_maps, known_vals;
        for (const auto& o : step.observe) {
            if (o.time < 1 || o.time > step.after_time) throw std::logic_error("decode step reads a future observation");
            const auto tt = static_cast<std::size_t>(o.time);
            known_maps.push_back(ysym[static_cast<std::size_t>(d)][tt].row_range(o.first_level, o.levels));
            known_vals.push_back(ynum[static_cast<std::size_t>(d)][tt].row_range(o.first_level, o.levels));
        }
        if (!step.cancel.empty()) {
            known_maps.push_back(rows_of(step.cancel, total, p));
            known_vals.push_back(known_values(d, step.cancel));
        }
        if (known_maps.empty()) return fail(d, step.label, "no observations");
        auto recovery = solve_determined(vstack(known_maps), rows_of(step.targets, total, p));
        if (!recovery) return fail(d, step.label, "targets are not determined by the observations");
        const auto got = values(*recovery * vstack(known_vals));
        for (std::size_t i = 0; i < step.targets.size(); ++i) {
            const int id = step.targets[i];
            if (got[i] != msg[static_cast<std::size_t>(id)]) return fail(d, step.label, "recovered value differs from the message");
            rep.decoded[static_cast<std::size_t>(d)][id] = got[i];
        }
        return true;
    }

    SimReport run()
    {
        const auto& ch = sc.channel;
        auto g = [&](int level) { return shift_matrix(n, n - level, p); };
        const GfMatrix g13 = g(ch.n13), g23 = g(ch.n23), g14 = g(ch.n14), g24 = g(ch.n24), gc = g(ch.nC);

        bool ok = true;
        for (int t = 1; t <= T && ok; ++t) {
            std::array<GfMatrix, 6> sym;
            std::array<GfMatrix, 6> num;
            for (int k = 0; k < 2; ++k) {
                const auto& prog = sc.nodes[static_cast<std::size_t>(k)];
                sym[k] = prog.encode ? prog.encode(t) : GfMatrix(n, total, p);
                for (Index c = 0; c < total; ++c) {
                    if (sc.symbols[static_cast<std::size_t>(c)].user == k) continue;
                    for (Index r = 0; r < n; ++r)
                        if (sym[k](r, c) != 0) throw std::logic_error("source encodes the other user's message");
                }
                num[k] = sym[k] * m;
            }
            for (int d = 0; d < 2 && ok; ++d) ok = relay(d, t, sym[2 + d], num[2 + d]);
            if (!ok) break;
            sym[4] = g13 * sym[0] + g23 * sym[1] + gc * sym[3];
            sym[5] = g14 * sym[0] + g24 * sym[1] + gc * sym[2];
            num[4] = g13 * num[0] + g23 * num[1] + gc * num[3];
            num[5] = g14 * num[0] + g24 * num[1] + gc * num[2];
            for (int d = 0; d < 2; ++d) {
                ysym[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] = sym[4 + d];
                ynum[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] = num[4 + d];
            }
            SignalSet row;
            for (std::size_t i = 0; i < 6; ++i) row[i] = values(num[i]);
            rep.trace.push_back(std::move(row));
            rep.symbolic.push_back(sym);

            for (int d = 0; d < 2 && ok; ++d)
                for (const auto& step : sc.nodes[static_cast<std::size_t>(2 + d)].schedule)
                    if (step.after_time == t && !(ok = decode(d, step))) break;
        }

        const int mid = (T + 1) / 2;
        std::array<int, 2> delivered{};
        bool complete = ok;
        for (std::size_t id = 0; id < sc.symbols.size(); ++id) {
            const auto& s = sc.symbols[id];
            const auto k = static_cast<std::size_t>(s.user);
            if (s.block == mid) ++rep.steady_rates[k];
            if (rep.decoded[k].count(static_cast<int>(id)))
                ++delivered[k];
            else
                complete = false;
        }
        for (std::size_t k = 0; k < 2; ++k) rep.achieved_rates[k] = T > 0 ? double(delivered[k]) / T : 0.0;
        rep.success = complete;
        if (ok && !complete) rep.failure = DecodeFailure{0, "end of transmission", "an intended symbol was never decoded"};
        return std::move(rep);
    }
};

// ---------------------------------------------------------------- scheme construction

struct Band {
    std::string layer;
    int row = 0;        // top level of the band in the transmit vector
    int width = 0;
    int first_block = 1;
    int tail_shift = 0;  // > 0: anti-causal sum of shifted future blocks
    int last_block = 0;  // 0: through the horizon
    /// n x width placement map; empty means the identity on rows [row, row + width)
    GfMatrix code{};
};

class Builder {
public:
    Builder(std::string name, const LdChannel& ch, int horizon)
    {
        ch.validate();
        if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
        sc_.name = std::move(name);
        sc_.channel = ch;
        sc_.horizon = horizon;
    }

    int n() const { return sc_.channel.n(); }
    int p() const { return sc_.channel.p; }
    int horizon() const { return sc_.horizon; }

    void add_band(int user, Band b)
    {
        if (b.width <= 0) return;
        if (b.row < 0 || b.row + b.width > n()) throw std::logic_error("band outside the transmit vector");
        const int last = b.last_block > 0 ? b.last_block : horizon();
        for (int j = b.first_block; j <= last; ++j) {
            auto& ids = ids_[{user, b.layer, j}];
            for (int i = 0; i < b.width; ++i) {
                ids.push_back(static_cast<int>(sc_.symbols.size()));
                sc_.symbols.push_back({user, b.layer, j, i});
            }
        }
        bands_[static_cast<std::size_t>(user)].push_back(std::move(b));
    }

    const std::vector<int>& ids(int user, const std::string& layer, int block) const
    {
        static const std::vector<int> none;
        auto it = ids_.find({user, layer, block});
        return it == ids_.end() ? none : it->second;
    }

    NodeProgram& node(int i) { return sc_.nodes[static_cast<std::size_t>(i)]; }

    // Decode step that cancels everything this destination decoded before.
    void decode(int dest, std::string label, int after, std::vector<int> targets, std::vector<Observation> obs)
    {
        if (targets.empty()) return;
        auto& known = known_[static_cast<std::size_t>(dest)];
        node(2 + dest).schedule.push_back({std::move(label), after, targets, std::move(obs), known});
        known.insert(known.end(), targets.begin(), targets.end());
    }

    LdScheme finish()
    {
        LdScheme out = sc_;
        for (int k = 0; k < 2; ++k) {
            auto bands = bands_[static_cast<std::size_t>(k)];
            auto ids = ids_;
            const int nn = n(), pp = p(), T = horizon();
            const auto total = static_cast<Index>(sc_.symbols.size());
            out.nodes[static_cast<std::size_t>(k)].encode = [=](int t) {
                GfMatrix x(nn, total, pp);
                for (const auto& b : bands) {
                    for (int m = 0;; ++m) {
                        const int j = t + m;
                        const int shift = m * b.tail_shift;
                        if (j > T || shift >= nn || (m > 0 && b.tail_shift <= 0)) break;
                        auto it = ids.find({k, b.layer, j});
                        if (it == ids.end()) continue;
                        if (b.code.rows() > 0) {
                            for (std::size_t i = 0; i < it->second.size(); ++i)
                                for (int r = 0; r < nn; ++r) {
                                    const int c = it->second[i];
                                    x.set(r, c, x(r, c) + b.code(r, static_cast<Index>(i)));
                                }
                            continue;
                        }
                        for (std::size_t i = 0; i < it->second.size(); ++i) {
                            const int r = b.row + static_cast<int>(i) + shift;
                            const int c = it->second[i];
                            if (r < nn) x.set(r, c, x(r, c) + 1);
                        }
                    }
                }
                return x;
            };
        }
        return out;
    }

private:
    LdScheme sc_;
    std::array<std::vector<Band>, 2> bands_;
    std::map<std::tuple<int, std::string, int>, std::vector<int>> ids_;
    std::array<std::vector<int>, 2> known_;
};

int level(const LdChannel& ch, int src, int dst)
{
    if (src == 0) return dst == 0 ? ch.n13 : ch.n14;
    return dst == 0 ? ch.n23 : ch.n24;
}

// First block carrying cooperative private symbols: earlier blocks would
// leave a visible anti-causal tail at the other destination before any
// relay signal exists to null it.
int first_coop_block(int n_c, int tail_shift) { return 1 + (n_c + tail_shift - 1) / tail_shift; }

// Layout of a user that uses the nulling relay of the other destination.
Band public_band(const LdChannel& ch, int width, unsigned seed, int user);

void add_coop_user(Builder& b, const LdChannel& ch, int k, const UserRates& r, int tail_shift, unsigned code_seed = 0)
{
    const int direct = level(ch, k, k), cross = level(ch, k, 1 - k), incoming = level(ch, 1 - k, k);
    b.add_band(k, public_band(ch, int(r.u), code_seed, k));
    b.add_band(k, {"s", cross - ch.nC, int(r.s), first_coop_block(ch.nC, tail_shift), tail_shift});
    b.add_band(k, {"z_up", cross, int(r.z_up)});
    b.add_band(k, {"z_dn", direct + ch.nC - incoming, int(r.z_dn)});
}

GfMatrix relay_gain(const LdChannel& ch, int dest)
{
    // -S^{-(n - level of the interfering link into this destination)}
    return -shift_matrix(ch.n(), -(ch.n() - level(ch, 1 - dest, dest)), ch.p);
}

std::vector<int> concat(std::initializer_list<std::reference_wrapper<const std::vector<int>>> parts)
{
    std::vector<int> out;
    for (const auto& v : parts) out.insert(out.end(), v.get().begin(), v.get().end());
    return out;
}

// Relay of destination `dest` forwarding its phase-1 residual; `two_hop`
// also removes the own symbols echoed back by the other destination.
void attach_nulling_relay(Builder& b, const LdChannel& ch, int dest, bool two_hop)
{
    const int k = dest;
    std::map<int, std::vector<int>> cancel;
    for (int t = 2; t <= b.horizon(); ++t) {
        cancel[t] = concat({b.ids(k, "u", t - 1), b.ids(k, "s", t - 1), b.ids(k, "z_up", t - 1)});
        if (two_hop && t >= 3) {
            auto older = concat({b.ids(k, "u", t - 2), b.ids(k, "z_up", t - 2)});
            cancel[t].insert(cancel[t].end(), older.begin(), older.end());
        }
    }
    const GfMatrix gain = relay_gain(ch, dest);
    b.node(2 + dest).relay = [gain, cancel](int t) {
        std::vector<RelayTap> taps;
        if (t >= 2) taps.push_back({t - 1, gain, cancel.at(t)});
        return taps;
    };
}

Observation whole(int t, int n) { return {t, 0, n}; }

std::vector<Observation> everything(int upto, int n)
{
    std::vector<Observation> obs;
    for (int t = 1; t <= upto; ++t) obs.push_back(whole(t, n));
    return obs;
}

void phase1(Builder& b, int dest, int t)
{
    const int n = b.n();
    const std::string tag = "[" + std::to_string(t) + "]";
    b.decode(dest, "phase1 u" + tag, t, b.ids(dest, "u", t), {whole(t, n)});
    b.decode(dest, "phase1 s" + tag, t, b.ids(dest, "s", t), {whole(t, n)});
    b.decode(dest, "phase1 z_up" + tag, t, b.ids(dest, "z_up", t), {whole(t, n)});
}

void phase2(Builder& b, int dest)
{
    const int T = b.horizon(), n = b.n();
    for (int j = 1; j <= T; ++j) {
        const std::string tag = "[" + std::to_string(j) + "]";
        b.decode(dest, "phase2 other u" + tag, T, b.ids(1 - dest, "u", j), everything(T, n));
        b.decode(dest, "phase2 z_dn" + tag, T, b.ids(dest, "z_dn", j), everything(T, n));
    }
}

} // namespace

// ---------------------------------------------------------------- run

SimReport run_ld_network(const LdScheme& scheme, const std::vector<int>& messages)
{
    scheme.channel.validate();
    if (messages.size() != scheme.symbols.size()) throw std::invalid_argument("message length does not match the scheme");
    for (int v : messages)
        if (v < 0 || v >= scheme.channel.p) throw std::invalid_argument("message symbol outside the field");
    if (scheme.channel.n() < 1) {
        SimReport r;
        r.horizon = r.blocks = scheme.horizon;
        r.success = scheme.symbols.empty();
        return r;
    }
    Runner run(scheme, messages);
    return run.run();
}

std::vector<int> random_messages(const LdScheme& scheme, unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> sym(0, scheme.channel.p - 1);
    std::vector<int> m(scheme.symbols.size());
    for (auto& v : m) v = sym(rng);
    return m;
}

// ---------------------------------------------------------------- builders

LdScheme build_example1_scheme(const LdChannel& ch, int horizon)
{
    if (ch.n13 != 5 || ch.n23 != 2 || ch.n14 != 2 || ch.n24 != 5 || ch.nC != 1)
        throw std::invalid_argument("example 1 needs the channel (5,2,2,5,1)");
    Builder b("example1", ch, horizon);
    const UserRates one{1, 1, 1, 1};
    for (int k = 0; k < 2; ++k) add_coop_user(b, ch, k, one, 2);
    // the residual keeps the echoed public symbol on the bottom level; that
    // level never reaches the other destination
    for (int d = 0; d < 2; ++d) attach_nulling_relay(b, ch, d, false);

    const int T = horizon;
    for (int t = 1; t <= T; ++t) {
        for (int d = 0; d < 2; ++d) {
            const std::string tag = "[" + std::to_string(t) + "]";
            // phase 1 reads the top three levels of the current observation
            b.decode(d, "phase1 u" + tag, t, b.ids(d, "u", t), {{t, 0, 1}});
            b.decode(d, "phase1 s" + tag, t, b.ids(d, "s", t), {{t, 1, 1}});
            b.decode(d, "phase1 z_up" + tag, t, b.ids(d, "z_up", t), {{t, 2, 1}});
            // phase 2 for the previous use, once its cooperative symbol is known
            for (int j : {t - 1, t}) {
                if (j < 1 || (j == t && t != T)) continue;
                const std::string jt = "[" + std::to_string(j) + "]";
                b.decode(d, "phase2 other u" + jt, t, b.ids(1 - d, "u", j), {{j, 3, 1}});
                b.decode(d, "phase2 z_dn" + jt, t, b.ids(d, "z_dn", j), {{j, 4, 1}});
            }
        }
    }
    return b.finish();
}

LdScheme build_example2_scheme(const LdChannel& ch, int horizon)
{
    if (ch.n13 != 2 || ch.n23 != 1 || ch.n14 != 1 || ch.n24 != 2 || ch.nC != 3)
        throw std::invalid_argument("example 2 needs the channel (2,1,1,2,3)");
    Builder b("example2", ch, horizon);
    const int T = horizon;
    for (int k = 0; k < 2; ++k) {
        // the last public symbol would have nobody to forward it
        b.add_band(k, {"u", 0, 1, 1, 0, T - 1});
        b.add_band(k, {"z", 1, 1});
    }
    // forward the level carrying the own public symbol, moved to the top
    GfMatrix lift(3, 3, ch.p);
    lift.set(0, 1, 1);
    for (int d = 0; d < 2; ++d)
        b.node(2 + d).relay = [lift](int t) {
            std::vector<RelayTap> taps;
            if (t >= 2) taps.push_back({t - 1, lift, {}});
            return taps;
        };
    for (int t = 1; t <= T; ++t)
        for (int d = 0; d < 2; ++d) {
            const std::string tag = "[" + std::to_string(t) + "]";
            b.decode(d, "own u" + tag, t, b.ids(d, "u", t), {{t, 1, 1}});
            if (t >= 2) {
                const std::string prev = "[" + std::to_string(t - 1) + "]";
                b.decode(d, "other u" + prev, t, b.ids(1 - d, "u", t - 1), {{t, 0, 1}});
                b.decode(d, "z" + prev, t, b.ids(d, "z", t - 1), {{t - 1, 2, 1}});
            }
            if (t == T) b.decode(d, "z" + tag, t, b.ids(d, "z", t), {{t, 2, 1}});
        }
    return b.finish();
}

namespace {

// Public band on the top levels; with a nonzero seed the levels below also
// carry random combinations of the public symbols (a systematic linear code).
Band public_band(const LdChannel& ch, int width, unsigned seed, int user)
{
    Band b{"u", 0, width};
    if (seed == 0 || width == 0) return b;
    const int n = ch.n();
    b.code = GfMatrix(n, width, ch.p);
    std::mt19937 rng(seed * 2 + static_cast<unsigned>(user));
    std::uniform_int_distribution<int> coef(0, ch.p - 1);
    for (int i = 0; i < width; ++i) b.code.set(i, i, 1);
    for (int r = width; r < n; ++r)
        for (int i = 0; i < width; ++i) b.code.set(r, i, coef(rng));
    return b;
}

LdScheme regime1_scheme(const LdChannel& ch, int horizon, const Regime1LdAllocation& alloc, unsigned code_seed)
{
    Builder b("regime1-" + to_string(alloc.kind), ch, horizon);
    const int T = horizon, n = ch.n();
    switch (alloc.kind) {
    case Regime1Case::NoCoop:
        break;
    case Regime1Case::A:
        for (int k = 0; k < 2; ++k)
            add_coop_user(b, ch, k, alloc.user[static_cast<std::size_t>(k)], alloc.precoder_shift[static_cast<std::size_t>(k)], code_seed);
        for (int d = 0; d < 2; ++d) attach_nulling_relay(b, ch, d, true);
        for (int t = 1; t <= T; ++t)
            for (int d = 0; d < 2; ++d) phase1(b, d, t);
        for (int d = 0; d < 2; ++d) phase2(b, d);
        break;
    case Regime1Case::B:
    case Regime1Case::BMirrored: {
        const int k = alloc.kind == Regime1Case::B ? 0 : 1, o = 1 - k;
        const auto& rk = alloc.user[static_cast<std::size_t>(k)];
        const auto& ro = alloc.user[static_cast<std::size_t>(o)];
        add_coop_user(b, ch, k, rk, alloc.precoder_shift[static_cast<std::size_t>(k)], code_seed);
        b.add_band(o, public_band(ch, int(ro.u), code_seed, o));
        b.add_band(o, {"z_dn", level(ch, o, k), int(ro.z_dn)});
        attach_nulling_relay(b, ch, k, false);
        for (int t = 1; t <= T; ++t) {
            phase1(b, k, t);
            const std::string tag = "[" + std::to_string(t) + "]";
            b.decode(o, "public pair" + tag, t, concat({b.ids(o, "u", t), b.ids(k, "u", t)}), {whole(t, n)});
            b.decode(o, "z_dn" + tag, t, b.ids(o, "z_dn", t), {whole(t, n)});
        }
        phase2(b, k);
        break;
    }
    }
    return b.finish();
}

} // namespace

LdScheme build_regime1_scheme(const LdChannel& ch, int horizon)
{
    auto alloc = regime1_ld_rates(ch);
    for (const auto& u : alloc.user)
        for (double r : {u.u, u.s, u.z_up, u.z_dn})
            if (r != static_cast<int>(r) || r < 0) throw std::invalid_argument("rates must be nonnegative integers");

    // Plain level placement first. When two public layers collide on the
    // same received level, retry with seeded systematic codes on the public
    // layers; decodability does not depend on the message values.
    constexpr unsigned attempts = 64;
    LdScheme first = regime1_scheme(ch, horizon, alloc, 0);
    if (ch.n() < 1) return first;
    const std::vector<int> zeros(first.symbols.size(), 0);
    if (run_ld_network(first, zeros).success) return first;
    for (unsigned seed = 1; seed <= attempts; ++seed) {
        LdScheme coded = regime1_scheme(ch, horizon, alloc, seed);
        if (run_ld_network(coded, zeros).success) {
            coded.name += "-coded";
            return coded;
        }
    }
    return first;
}

std::string trace_csv(const SimReport& report)
{
    std::ostringstream out;
    out << "t,node,level,value\n";
    for (std::size_t t = 0; t < report.trace.size(); ++t)
        for (std::size_t s = 0; s < 6; ++s)
            for (std::size_t l = 0; l < report.trace[t][s].size(); ++l)
                out << t + 1 << ',' << signal_names[s] << ',' << l + 1 << ',' << report.trace[t][s][l] << '\n';
    return out.str();
}

} // namespace dcic
