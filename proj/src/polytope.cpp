#include "dcic/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcic {

Rational exact_rational(double v)
{
    if (!std::isfinite(v)) throw std::invalid_argument("cannot convert non-finite value to a rational");
    Rational q(v);  // GMP converts doubles exactly
    return q;
}

std::size_t ConstraintSystem::add_variable(const std::string& name, bool nonnegative)
{
    if (has_variable(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
    vars_.push_back(name);
    for (auto& r : rows_) r.coeffs.emplace_back(0);
    const std::size_t col = vars_.size() - 1;
    if (nonnegative) {
        Inequality row{std::vector<Rational>(vars_.size(), 0), 0};
        row.coeffs[col] = -1;
        rows_.push_back(std::move(row));
    }
    return col;
}

std::size_t ConstraintSystem::index_of(const std::string& name) const
{
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw std::invalid_argument("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - vars_.begin());
}

bool ConstraintSystem::has_variable(const std::string& name) const
{
    return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

void ConstraintSystem::add(const std::map<std::string, Rational>& terms, const Rational& rhs)
{
    Inequality row{std::vector<Rational>(vars_.size(), 0), rhs};
    for (const auto& [name, c] : terms) row.coeffs[index_of(name)] += c;
    rows_.push_back(std::move(row));
}

void ConstraintSystem::add_row(Inequality row)
{
    if (row.coeffs.size() != vars_.size()) throw std::invalid_argument("row length does not match variable count");
    rows_.push_back(std::move(row));
}

std::vector<Rational> ConstraintSystem::objective(const std::map<std::string, Rational>& terms) const
{
    std::vector<Rational> obj(vars_.size(), 0);
    for (const auto& [name, c] : terms) obj[index_of(name)] += c;
    return obj;
}

void ConstraintSystem::normalize()
{
    std::map<std::vector<Rational>, Rational> best;
    std::optional<Rational> contradiction;
    for (auto& row : rows_) {
        auto lead = std::find_if(row.coeffs.begin(), row.coeffs.end(), [](const Rational& c) { return c != 0; });
        if (lead == row.coeffs.end()) {
            if (row.rhs < 0 && (!contradiction || row.rhs < *contradiction)) contradiction = row.rhs;
            continue;
        }
        Rational scale = abs(*lead);
        if (scale != 1) {
            for (auto& c : row.coeffs) c /= scale;
            row.rhs /= scale;
        }
        auto [it, inserted] = best.emplace(std::move(row.coeffs), row.rhs);
        if (!inserted && row.rhs < it->second) it->second = row.rhs;
    }
    rows_.clear();
    if (contradiction) rows_.push_back({std::vector<Rational>(vars_.size(), 0), *contradiction});
    for (auto& [coeffs, rhs] : best) rows_.push_back({coeffs, rhs});
}

namespace {

ConstraintSystem eliminate_column(const ConstraintSystem& sys, std::size_t col)
{
    std::vector<const Inequality*> pos, neg, zero;
    for (const auto& r : sys.rows()) {
        int s = sgn(r.coeffs[col]);
        (s > 0 ? pos : s < 0 ? neg : zero).push_back(&r);
    }

    ConstraintSystem out;
    for (std::size_t j = 0; j < sys.variables().size(); ++j)
        if (j != col) out.add_variable(sys.variables()[j], false);

    auto drop_col = [col](const std::vector<Rational>& c) {
        std::vector<Rational> d;
        d.reserve(c.size() - 1);
        for (std::size_t j = 0; j < c.size(); ++j)
            if (j != col) d.push_back(c[j]);
        return d;
    };

    for (const auto* r : zero) out.add_row({drop_col(r->coeffs), r->rhs});
    for (const auto* p : pos) {
        for (const auto* n : neg) {
            // p / a_p + n / |a_n| cancels the column
            Rational wp = -n->coeffs[col];
            Rational wn = p->coeffs[col];
            std::vector<Rational> c(p->coeffs.size());
            for (std::size_t j = 0; j < c.size(); ++j) c[j] = wp * p->coeffs[j] + wn * n->coeffs[j];
            out.add_row({drop_col(c), wp * p->rhs + wn * n->rhs});
        }
    }
    out.normalize();
    return out;
}

std::size_t cheapest_column(const ConstraintSystem& sys, std::size_t skip)
{
    std::size_t best = sys.variables().size();
    std::size_t best_cost = 0;
    for (std::size_t j = 0; j < sys.variables().size(); ++j) {
        if (j == skip) continue;
        std::size_t p = 0, n = 0;
        for (const auto& r : sys.rows()) {
            int s = sgn(r.coeffs[j]);
            p += s > 0;
            n += s < 0;
        }
        std::size_t cost = p * n;
        if (best == sys.variables().size() || cost < best_cost) {
            best = j;
            best_cost = cost;
        }
    }
    return best;
}

} // namespace

ConstraintSystem fm_eliminate(const ConstraintSystem& sys, const std::string& var)
{
    return eliminate_column(sys, sys.index_of(var));
}

LinearMax max_linear(const ConstraintSystem& sys, const std::vector<Rational>& objective,
                     const std::optional<std::vector<std::string>>& order)
{
    if (objective.size() != sys.variables().size()) throw std::invalid_argument("objective length mismatch");
    static const std::string level = "\x01objective";
    ConstraintSystem work = sys;
    const std::size_t t = work.add_variable(level, false);
    Inequality link{std::vector<Rational>(work.variables().size(), 0), 0};
    for (std::size_t j = 0; j < objective.size(); ++j) link.coeffs[j] = -objective[j];
    link.coeffs[t] = 1;
    work.add_row(std::move(link));
    work.normalize();

    if (order) {
        for (const auto& name : *order) work = fm_eliminate(work, name);
    }
    while (work.variables().size() > 1) {
        std::size_t skip = work.index_of(level);
        work = eliminate_column(work, cheapest_column(work, skip));
    }
    if (work.variables().size() != 1 || work.variables()[0] != level)
        throw std::invalid_argument("elimination order must cover every variable");

    std::optional<Rational> upper, lower;
    for (const auto& r : work.rows()) {
        const Rational& a = r.coeffs[0];
        if (a == 0) {
            if (r.rhs < 0) throw std::domain_error("empty polytope");
            continue;
        }
        Rational b = r.rhs / a;
        if (a > 0) {
            if (!upper || b < *upper) upper = b;
        } else if (!lower || b > *lower) {
            lower = b;
        }
    }
    if (upper && lower && *lower > *upper) throw std::domain_error("empty polytope");
    if (!upper) return {false, 0};
    return {true, *upper};
}

} // namespace dcic
