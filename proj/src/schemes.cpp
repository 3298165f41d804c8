#include "dcic/schemes.hpp"

#include "dcic/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace dcic {

namespace {

int pos(int v) { return std::max(v, 0); }
double pos(double v) { return std::max(v, 0.0); }
double sq(double v) { return v * v; }

// Names of one destination's view; the other destination uses the mirror.
struct Side {
    std::string u_own, u_other, x_own_src, x_relay_own, x_relay_other, y_own, v_other, y_other;
    std::string r_u_own, r_u_other, r_x_own, r_relay_other;
};

const Side side3{"U1", "U2", "X1", "X3", "X4", "Y3", "V4", "Y4", "r_U1", "r_U2", "r_X1", "r4"};
const Side side4{"U2", "U1", "X2", "X4", "X3", "Y4", "V3", "Y3", "r_U2", "r_U1", "r_X2", "r3"};

void add_destination(ConstraintSystem& sys, const MiOracle& mi, const Side& s)
{
    const auto &U1 = s.u_own, &U2 = s.u_other, &X1 = s.x_own_src, &X3 = s.x_relay_own, &X4 = s.x_relay_other;
    const auto &Y3 = s.y_own, &V4 = s.v_other, &Y4 = s.y_other;
    const auto &rU1 = s.r_u_own, &rU2 = s.r_u_other, &rX1 = s.r_x_own, &r4 = s.r_relay_other;

    const Rational d = mi({Y4}, {V4}, {X3, X4, U1, U2, Y3});

    sys.add({{rX1, 1}}, mi({X1}, {Y3}, {X4, U1, U2}));
    sys.add({{rU2, 1}}, mi({U2}, {Y3, V4}, {X3, X4, U1}));
    sys.add({{rU2, 1}, {r4, -1}}, mi({U2}, {Y3}, {X3, X4, U1}) - d);
    sys.add({{rU1, 1}}, mi({U1}, {Y3, V4}, {X3, X4, U2}));
    sys.add({{rU1, 1}, {r4, -1}}, mi({U1}, {Y3}, {X3, X4, U2}) - d);
    // conditioning kept exactly as stated, without X3
    sys.add({{r4, 1}}, mi({X4}, {Y3}, {U1, U2}));
    sys.add({{rU1, 1}, {rU2, 1}}, mi({U1, U2}, {Y3, V4}, {X3, X4}));
    sys.add({{rU1, 1}, {rU2, 1}, {r4, -1}}, mi({U1, U2}, {Y3}, {X3, X4}) - d);
    sys.add({{r4, 1}, {rU1, 1}}, mi({X4, U1}, {Y3, V4}, {X3, U2}));
    sys.add({{rU1, 1}}, mi({X4, U1}, {Y3}, {X3, U2}) - d);
    sys.add({{rU2, 1}, {r4, 1}}, mi({U2, X4}, {Y3, V4}, {X3, U1}));
    sys.add({{rU2, 1}}, mi({U2, X4}, {Y3}, {X3, U1}) - d);
    sys.add({{rU1, 1}, {rU2, 1}, {r4, 1}}, mi({U1, U2, X4}, {Y3, V4}, {X3}));
    sys.add({{rU1, 1}, {rU2, 1}}, mi({U1, U2, X4}, {Y3}, {X3}) - d);
}

ConstraintSystem rate_system()
{
    ConstraintSystem sys;
    for (const auto& name : cf_rate_names) sys.add_variable(name);
    return sys;
}

Rational max_sum(const ConstraintSystem& sys)
{
    auto m = max_linear(sys, cf_objective(sys));
    if (!m.bounded) throw std::logic_error("compress-and-forward region is unbounded");
    return m.value;
}

GfMatrix embed_below(int n, int top, int p)
{
    // n x (n - top) map placing a free vector on the levels below `top`
    GfMatrix e(n, n - top, p);
    for (int i = 0; i < n - top; ++i) e.set(top + i, i, 1);
    return e;
}

} // namespace

std::string to_string(Regime1Case c)
{
    switch (c) {
    case Regime1Case::A: return "a";
    case Regime1Case::B: return "b";
    case Regime1Case::BMirrored: return "b-mirrored";
    case Regime1Case::NoCoop: return "no-coop";
    }
    return "?";
}

// ---------------------------------------------------------------- regime (i), LD

namespace {

UserRates case_a_user(const LdChannel& ch)
{
    const int n13 = ch.n13, n23 = ch.n23, n14 = ch.n14, nC = ch.nC;
    UserRates r;
    r.u = std::min(pos(n14 - nC), nC);
    r.s = pos(nC - pos(n23 - (n13 - n14)));
    r.z_up = pos(n13 - n14 - n23);
    r.z_dn = pos(n23 - nC);
    return r;
}

// Case (b): user 1 cooperates through destination 3 only, user 2 sends a
// public and a delayed private layer.
Regime1LdAllocation case_b(const LdChannel& ch)
{
    const int n13 = ch.n13, n23 = ch.n23, n14 = ch.n14, n24 = ch.n24, nC = ch.nC;
    const int d2 = pos(n24 - n23);
    Regime1LdAllocation a;
    a.kind = Regime1Case::B;
    a.user[0] = case_a_user(ch);
    a.user[0].u = std::min(pos(n14 - nC), pos(n14 - d2));
    a.user[1].u = std::min({nC, n23, n24});
    const int joint = std::max(n24, n14) - d2;
    if (a.user[0].u + a.user[1].u > joint) a.user[1].u = pos(joint - int(a.user[0].u));
    a.user[1].z_dn = d2;
    a.precoder_shift = {n13 + nC - n14 - n23, 0};
    a.relay_shift = {ch.n() - n23, 0};
    a.relay_silent = {false, true};
    a.sum = std::min({n13 + d2, n13 - n14 + std::max(n14, n24), n13 + nC});
    return a;
}

} // namespace

Regime1LdAllocation regime1_ld_rates(const LdChannel& ch)
{
    ch.validate();
    if (ch.nC > ch.n_min()) throw std::invalid_argument("not regime (i)");
    const int n13 = ch.n13, n23 = ch.n23, n14 = ch.n14, n24 = ch.n24, nC = ch.nC;
    const int cross = n14 + n23;

    LdChannel plain = ch;
    plain.nC = 0;
    const auto b0 = ld_bound_set(plain);
    const bool helps = b0.u[0] < std::min({b0.u[1], b0.u[2], b0.u[3], b0.u[4]});
    const bool first = cross < n13 + nC;
    const bool second = cross < n24 + nC;

    if (!helps || (!first && !second)) {
        Regime1LdAllocation a;
        a.sum = int(b0.min_bound);
        return a;
    }
    if (first && second) {
        Regime1LdAllocation a;
        a.kind = Regime1Case::A;
        a.user[0] = case_a_user(ch);
        a.user[1] = case_a_user(ch.mirrored());
        a.precoder_shift = {n13 + nC - cross, n24 + nC - cross};
        a.relay_shift = {ch.n() - n23, ch.n() - n14};
        a.relay_silent = {false, false};
        a.sum = std::min({n13 - n14 + nC + n24 - n23 + nC, n13 + n24 - n14, n13 + n24 - n23});
        return a;
    }
    if (first) return case_b(ch);
    auto m = case_b(ch.mirrored());
    m.kind = Regime1Case::BMirrored;
    std::swap(m.user[0], m.user[1]);
    std::swap(m.precoder_shift[0], m.precoder_shift[1]);
    std::swap(m.relay_shift[0], m.relay_shift[1]);
    std::swap(m.relay_silent[0], m.relay_silent[1]);
    return m;
}

// ---------------------------------------------------------------- compress-and-forward region

ConstraintSystem cf_constraints(const MiOracle& mi)
{
    auto sys = rate_system();
    add_destination(sys, mi, side3);
    add_destination(sys, mi, side4);
    return sys;
}

std::vector<Rational> cf_objective(const ConstraintSystem& sys)
{
    return sys.objective({{"r_U1", 1}, {"r_X1", 1}, {"r_U2", 1}, {"r_X2", 1}});
}

LinearRvSystem ld_regime3_system(const LdChannel& ch)
{
    ch.validate();
    const int n = ch.n(), p = ch.p;
    if (n < 1) throw std::invalid_argument("channel has no levels");
    LinearRvSystem sys({{"U1", n}, {"U2", n}, {"Z1", n - ch.n14}, {"Z2", n - ch.n23}, {"X3", n}, {"X4", n}}, p);
    auto g = [&](int level) { return shift_matrix(n, n - level, p); };
    GfMatrix x1 = sys.var("U1") + embed_below(n, ch.n14, p) * sys.var("Z1");
    GfMatrix x2 = sys.var("U2") + embed_below(n, ch.n23, p) * sys.var("Z2");
    GfMatrix y3 = g(ch.n13) * x1 + g(ch.n23) * x2 + g(ch.nC) * sys.var("X4");
    GfMatrix y4 = g(ch.n14) * x1 + g(ch.n24) * x2 + g(ch.nC) * sys.var("X3");
    sys.define("X1", x1);
    sys.define("X2", x2);
    sys.define("Y3", y3);
    sys.define("Y4", y4);
    sys.define("V3", shift_matrix(n, pos(ch.n13 - ch.n14), p) * y3);
    sys.define("V4", shift_matrix(n, pos(ch.n24 - ch.n23), p) * y4);
    return sys;
}

ConstraintSystem cf_constraints(const LinearRvSystem& sys)
{
    return cf_constraints([&sys](const VarSet& a, const VarSet& b, const VarSet& c) {
        return Rational(sys.mutual_info_symbols(a, b, c));
    });
}

GaussRvSystem gauss_regime3_system(const GaussChannel& ch)
{
    ch.validate();
    const double half = 0.5;
    const double q3 = std::max(1.0, std::max(1.0, sq(ch.g13)) / std::max(1.0, sq(ch.g14)));
    const double q4 = std::max(1.0, std::max(1.0, sq(ch.g24)) / std::max(1.0, sq(ch.g23)));
    GaussRvSystem sys({{"U1", half},
                       {"U2", half},
                       {"Z1", half / std::max(1.0, sq(ch.g14))},
                       {"Z2", half / std::max(1.0, sq(ch.g23))},
                       {"X3", 1.0},
                       {"X4", 1.0},
                       {"N3", 1.0},
                       {"N4", 1.0},
                       {"Q3", q3},
                       {"Q4", q4}});
    const std::complex<double> rot = std::polar(1.0, ch.theta / 2);
    GaussRvSystem::Row x1 = sys.seed("U1") + sys.seed("Z1");
    GaussRvSystem::Row x2 = sys.seed("U2") + sys.seed("Z2");
    GaussRvSystem::Row y3 = ch.g13 * x1 + (ch.g23 * rot) * x2 + ch.gC * sys.seed("X4") + sys.seed("N3");
    GaussRvSystem::Row y4 = (ch.g14 * rot) * x1 + ch.g24 * x2 + ch.gC * sys.seed("X3") + sys.seed("N4");
    sys.define("X1", x1);
    sys.define("X2", x2);
    sys.define("Y3", y3);
    sys.define("Y4", y4);
    sys.define("V3", y3 + sys.seed("Q3"));
    sys.define("V4", y4 + sys.seed("Q4"));
    return sys;
}

ConstraintSystem cf_constraints(const GaussRvSystem& sys)
{
    return cf_constraints([&sys](const VarSet& a, const VarSet& b, const VarSet& c) {
        return exact_rational(gauss_cond_mutual_info(sys, a, b, c));
    });
}

Regime3LdResult regime3_ld_sum(const LdChannel& ch)
{
    ch.validate();
    if (ch.nC <= std::min(ch.n13, ch.n24)) throw std::invalid_argument("not regime (iii)");
    Regime3LdResult r;
    Rational best = max_sum(cf_constraints(ld_regime3_system(ch)));
    if (best.get_den() != 1) throw std::logic_error("deterministic region has a fractional vertex");
    r.fm_sum = int(best.get_num().get_si());
    const auto b = ld_bound_set(ch);
    r.closed_form = int(std::min({b.u[1], b.u[2], b.u[3], b.u[4]}));
    return r;
}

// ---------------------------------------------------------------- regime (i), Gaussian

namespace {

constexpr double K9 = 9.0;

double lg(double snr) { return std::log2(1 + snr); }
double level(double g) { return g > 1 ? std::log2(g * g) : 0.0; }

// Five case-(a) constraints for the user whose direct gain is g13,
// cross gain g14, incoming interference g23.
void case_a_user(double g13, double g23, double g14, double gC, UserRates& r, std::vector<RateConstraint>& out,
                 const std::string& tag)
{
    const double a = sq(g13), b = sq(g14), c = sq(g23), C = sq(gC), K = K9;
    const double u_dest = lg((a / K) / (2 * a * C / (K * b) + a / (K * b) + 2 * c / (K * C) + 2 * c / K + 2 / K + 2));
    const double u_other = lg((b / K) / (b / (K * C) + 2 / K + 2 / K + 2));
    const double s = lg((a * C / (K * b)) / (2 * c / K + a / (K * b) + 2 * c / (K * C) + 2 * c / K + 2 / K + 2));
    const double z_up = lg((a / (K * b)) / (2 * c / K + 2 * c / (K * C) + 2 * c / K + 2 / K + 2));
    const double z_dn = lg((c / (K * C)) / (2 / K + 2));

    const double n13 = level(g13), n23 = level(g23), n14 = level(g14), nC = level(gC);
    out.push_back({"r_U" + tag + " (own destination)", u_dest, (n14 - nC) - 4});
    out.push_back({"r_U" + tag + " (other destination)", u_other, nC - 4});
    out.push_back({"r_S" + tag, s, nC - pos(n23 - (n13 - n14)) - 4});
    out.push_back({"r_Zup" + tag, z_up, pos(n13 - n14 - n23) - 4});
    out.push_back({"r_Zdn" + tag, z_dn, pos(n23 - nC) - 5});
    r.u = std::min(u_dest, u_other);
    r.s = s;
    r.z_up = z_up;
    r.z_dn = z_dn;
}

// Case (b): only destination 3 relays; user 2 sends public + delayed private.
void case_b(double g13, double g23, double g14, double g24, double gC, std::array<UserRates, 2>& r,
            std::vector<RateConstraint>& out, const std::string& t1, const std::string& t2)
{
    const double a = sq(g13), b = sq(g14), c = sq(g23), d = sq(g24), C = sq(gC), K = K9;
    const double u1_3 = lg((a / K) / (2 * a * C / (K * b) + a / (K * b) + c / (K * C) + c + 1));
    const double s1 = lg((a * C / (K * b)) / (2 * c / K + a / (K * b) + c / (K * C) + c + 1));
    const double z1_up = lg((a / (K * b)) / (2 * c / K + c / (K * C) + c + 1));
    const double u2_3 = lg((c / K) / (c / (K * C) + 1 + 1));
    const double z1_dn = lg((c / (K * C)) / (1 + 1));
    const double noise4 = d / (K * c) + 1 / K + 3 / (2 * K) + 1.5;
    const double u2_4 = lg((d / K) / noise4);
    const double u1_4 = lg((b / K) / noise4);
    const double joint = lg((d / K + b / K) / noise4);
    const double z2_dn = lg((d / (K * c)) / (1 / K + 3 / (2 * K) + 1.5));

    const double n13 = level(g13), n23 = level(g23), n14 = level(g14), n24 = level(g24), nC = level(gC);
    const double d2 = pos(n24 - n23);
    out.push_back({"r_U" + t1 + " (own destination)", u1_3, (n14 - nC) - 4});
    out.push_back({"r_U" + t2 + " (relaying destination)", u2_3, nC - 4});
    out.push_back({"r_S" + t1, s1, nC - pos(n23 - (n13 - n14)) - 4});
    out.push_back({"r_Zup" + t1, z1_up, pos(n13 - n14 - n23) - 4});
    out.push_back({"r_Zdn" + t1, z1_dn, pos(n23 - nC) - 5});
    out.push_back({"r_U" + t2 + " (own destination)", u2_4, std::min(n23, n24) - 5});
    out.push_back({"r_U" + t1 + " (silent destination)", u1_4, (n14 - d2) - 5});
    out.push_back({"r_U" + t1 + "+r_U" + t2, joint, std::max(n24, n14) - d2 - 5});
    out.push_back({"r_Zdn" + t2, z2_dn, d2 - 4});

    const double cap1 = std::min(u1_3, u1_4), cap2 = std::min(u2_3, u2_4);
    r[0] = {cap1, s1, z1_up, z1_dn};
    r[1] = {cap2, 0, 0, z2_dn};
    if (cap1 + cap2 > joint) r[1].u = std::max(0.0, joint - cap1);
}

} // namespace

Regime1GaussResult regime1_gauss_at(const GaussChannel& ch, double gC)
{
    Regime1GaussResult res;
    res.reduced_gC = gC;
    const double g13 = ch.g13, g23 = ch.g23, g14 = ch.g14, g24 = ch.g24;
    const double a1 = (g13 > 0 && gC > 0) ? g14 * g23 / (g13 * gC) : INFINITY;
    const double a2 = (g24 > 0 && gC > 0) ? g14 * g23 / (g24 * gC) : INFINITY;
    if (gC <= 1 || (a1 >= 0.5 && a2 >= 0.5)) {
        res.sum = hk_noncoop_sum(ch);
        return res;
    }
    res.fallback_hk = false;
    if (a1 < 0.5 && a2 < 0.5) {
        res.kind = Regime1Case::A;
        case_a_user(g13, g23, g14, gC, res.user[0], res.constraints, "1");
        case_a_user(g24, g14, g23, gC, res.user[1], res.constraints, "2");
    } else if (a1 < 0.5) {
        res.kind = Regime1Case::B;
        case_b(g13, g23, g14, g24, gC, res.user, res.constraints, "1", "2");
    } else {
        res.kind = Regime1Case::BMirrored;
        case_b(g24, g14, g23, g13, gC, res.user, res.constraints, "2", "1");
        std::swap(res.user[0], res.user[1]);
    }
    res.sum = res.user[0].total() + res.user[1].total();
    return res;
}

Regime1GaussResult regime1_gauss_rates(const GaussChannel& ch)
{
    ch.validate();
    const double cap = std::min({ch.gC, ch.g14 / 2, ch.g23 / 2, ch.g13, ch.g24});
    Regime1GaussResult best = regime1_gauss_at(ch, std::max(cap, 0.0));
    if (cap > 1) {
        const double top = level(cap);
        for (double l = 0.5; l < top; l += 0.5) {
            auto r = regime1_gauss_at(ch, std::pow(2.0, l / 2));
            if (r.sum > best.sum) best = std::move(r);
        }
    }
    return best;
}

// ---------------------------------------------------------------- regime (iii), Gaussian

namespace {

// Simplified closed-form list for one destination; `ch` is seen from that
// destination (mirror it for the other side).
void add_printed_destination(ConstraintSystem& sys, const GaussChannel& ch, const Side& s)
{
    const auto l = derive_levels(ch);
    const double n13 = l.n13, n23 = l.n23, n14 = l.n14, n24 = l.n24, nC = l.nC;
    const double d1 = pos(n13 - n14), d2 = pos(n24 - n23);
    const double l36 = std::log2(36.0);
    const double al1 = std::max(1.0, std::max(1.0, sq(ch.g13)) / std::max(1.0, sq(ch.g14)));
    const double al2 = std::max(1.0, std::max(1.0, sq(ch.g24)) / std::max(1.0, sq(ch.g23)));
    const double cross = sq(ch.g13 * ch.g24) / (al1 * al2) + sq(ch.g14 * ch.g23) / (al1 * al2) -
                         2 * ch.g13 * ch.g24 * ch.g14 * ch.g23 / (al1 * al2) * std::cos(ch.theta);
    const double base = 1 + sq(ch.g13) / al1 + sq(ch.g24) / al2 + sq(ch.g14) / al2 + sq(ch.g23) / al1 + cross;
    const double with_relay = base + sq(ch.gC) / al1 + sq(ch.gC * ch.g14) / (al1 * al2) + sq(ch.gC * ch.g24) / (al1 * al2);

    const auto &rU1 = s.r_u_own, &rU2 = s.r_u_other, &rX1 = s.r_x_own, &r4 = s.r_relay_other;
    // rhs of plain mutual-information rows cannot drop below 0, rows that
    // subtract the quantizer term cannot drop below -1
    auto mi = [](double v) { return exact_rational(std::max(v, 0.0)); };
    auto net = [](double v) { return exact_rational(std::max(v, -1.0)); };

    sys.add({{rX1, 1}}, mi(d1 - 2));
    sys.add({{rU1, 1}}, mi(std::max(n13 - d1, n14 - d2) - l36));
    sys.add({{rU1, 1}, {r4, -1}}, net(n13 - d1 - 3));
    sys.add({{rU2, 1}}, mi(std::max(n23 - d1, n24 - d2) - l36));
    sys.add({{rU2, 1}, {r4, -1}}, net(pos(n23 - d1) - 3));
    sys.add({{r4, 1}}, mi(pos(nC - d1) - 1));
    sys.add({{rU1, 1}, {rU2, 1}}, mi(std::log2(std::max(base, 1.0)) - l36));
    sys.add({{rU1, 1}, {rU2, 1}, {r4, -1}}, net(std::max(n13, n23) - d1 - 3));
    sys.add({{rU1, 1}, {r4, 1}}, mi(std::max(std::max(n13, nC) - d1, pos(n14 - d2) + pos(nC - d1)) - l36));
    sys.add({{rU1, 1}}, net(n13 - d1 - 3));
    sys.add({{rU2, 1}, {r4, 1}}, mi(std::max(std::max(n23, nC) - d1, (n24 - d2) + pos(nC - d1)) - l36));
    sys.add({{rU2, 1}}, net(pos(n23 - d1) - 3));
    sys.add({{rU1, 1}, {rU2, 1}, {r4, 1}}, mi(std::log2(std::max(with_relay, 1.0)) - l36));
    sys.add({{rU1, 1}, {rU2, 1}}, net(std::max({n13, n23, nC}) - d1 - 3));
}

double feasible_max(const ConstraintSystem& sys)
{
    try {
        return max_sum(sys).get_d();
    } catch (const std::domain_error&) {
        return 0.0;  // scheme not usable with these parameters
    }
}

} // namespace

double cf_gauss_sum(const GaussChannel& ch)
{
    return feasible_max(cf_constraints(gauss_regime3_system(ch)));
}

Regime3GaussResult regime3_gauss_sum(const GaussChannel& ch)
{
    ch.validate();
    const auto l = derive_levels(ch);
    if (l.nC <= std::min(l.n13, l.n24)) throw std::invalid_argument("not regime (iii)");
    Regime3GaussResult r;
    r.exact_path = cf_gauss_sum(ch);
    auto sys = rate_system();
    add_printed_destination(sys, ch, side3);
    add_printed_destination(sys, ch.mirrored(), side4);
    r.printed_path = feasible_max(sys);
    r.sum = std::max(r.exact_path, r.printed_path);
    return r;
}

// ---------------------------------------------------------------- no cooperation

double hk_noncoop_sum(const GaussChannel& ch)
{
    ch.validate();
    // user k: public power w_k, private power q_k
    const double q1 = 1 / std::max(1.0, sq(ch.g14)), q2 = 1 / std::max(1.0, sq(ch.g23));
    const double w1 = 1 - q1, w2 = 1 - q2;

    ConstraintSystem sys;
    for (auto name : {"w1", "p1", "w2", "p2"}) sys.add_variable(name);

    struct Receiver {
        std::string w_own, p_own, w_other;
        double gain_own, gain_other, pw_own, pp_own, pw_other, pp_other;
    };
    const Receiver rx[] = {{"w1", "p1", "w2", ch.g13, ch.g23, w1, q1, w2, q2},
                           {"w2", "p2", "w1", ch.g24, ch.g14, w2, q2, w1, q1}};
    for (const auto& r : rx) {
        const double noise = 1 + sq(r.gain_other) * r.pp_other;
        const double sw = sq(r.gain_own) * r.pw_own, sp = sq(r.gain_own) * r.pp_own, so = sq(r.gain_other) * r.pw_other;
        // every error event in which an own layer is wrong
        for (int mask = 1; mask < 8; ++mask) {
            if ((mask & 3) == 0) continue;
            std::map<std::string, Rational> terms;
            double power = 0;
            if (mask & 1) terms[r.w_own] = 1, power += sw;
            if (mask & 2) terms[r.p_own] = 1, power += sp;
            if (mask & 4) terms[r.w_other] = 1, power += so;
            sys.add(terms, exact_rational(lg(power / noise)));
        }
    }
    auto m = max_linear(sys, sys.objective({{"w1", 1}, {"p1", 1}, {"w2", 1}, {"p2", 1}}));
    return m.value.get_d();
}

// ---------------------------------------------------------------- composition

Achievable ld_achievable(const LdChannel& ch)
{
    ch.validate();
    Achievable best;
    LdChannel plain = ch;
    plain.nC = 0;
    best.sum = ld_bound_set(plain).min_bound;
    best.scheme = "hk";
    best.rates = {{"cooperation_level", 0}};

    for (int c = 0; c <= std::min(ch.nC, ch.n_min()); ++c) {
        LdChannel at = ch;
        at.nC = c;
        auto a = regime1_ld_rates(at);
        if (a.kind == Regime1Case::NoCoop || a.sum <= best.sum) continue;
        best.sum = a.sum;
        best.scheme = a.kind == Regime1Case::A ? "regime1a" : "regime1b";
        nlohmann::json users = nlohmann::json::array();
        for (const auto& u : a.user) users.push_back({{"u", u.u}, {"s", u.s}, {"z_up", u.z_up}, {"z_dn", u.z_dn}});
        best.rates = {{"cooperation_level", c}, {"case", to_string(a.kind)}, {"users", users}};
    }
    if (ch.nC > std::min(ch.n13, ch.n24)) {
        auto r = regime3_ld_sum(ch);
        if (r.fm_sum > best.sum) {
            best.sum = r.fm_sum;
            best.scheme = "regime3";
            best.rates = {{"fm_sum", r.fm_sum}, {"closed_form", r.closed_form}};
        }
    }
    return best;
}

int ld_achievable_sum(const LdChannel& ch) { return int(ld_achievable(ch).sum); }

Achievable gauss_achievable(const GaussChannel& ch)
{
    ch.validate();
    Achievable best;
    best.sum = hk_noncoop_sum(ch);
    best.scheme = "hk";
    best.rates = nlohmann::json::object();

    auto r1 = regime1_gauss_rates(ch);
    if (!r1.fallback_hk && r1.sum > best.sum) {
        best.sum = r1.sum;
        best.scheme = r1.kind == Regime1Case::A ? "regime1a" : "regime1b";
        nlohmann::json users = nlohmann::json::array();
        for (const auto& u : r1.user) users.push_back({{"u", u.u}, {"s", u.s}, {"z_up", u.z_up}, {"z_dn", u.z_dn}});
        best.rates = {{"reduced_gC", r1.reduced_gC}, {"case", to_string(r1.kind)}, {"users", users}};
    }
    const auto l = derive_levels(ch);
    if (l.nC > std::min(l.n13, l.n24)) {
        auto r3 = regime3_gauss_sum(ch);
        if (r3.sum > best.sum) {
            best.sum = r3.sum;
            best.scheme = "regime3";
            best.rates = {{"exact_path", r3.exact_path}, {"printed_path", r3.printed_path}};
        }
    }
    return best;
}

double gauss_achievable_sum(const GaussChannel& ch) { return gauss_achievable(ch).sum; }

} // namespace dcic
