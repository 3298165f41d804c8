#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dcic {

using Rational = mpq_class;

/// Exact rational from a binary double (no rounding).
Rational exact_rational(double v);

/// coeffs . x <= rhs
struct Inequality {
    std::vector<Rational> coeffs;
    Rational rhs;
};

/// A system of rational linear inequalities over named variables.
class ConstraintSystem {
public:
    ConstraintSystem() = default;

    /// Adds a variable (with -x <= 0 when `nonnegative`). Existing rows get a
    /// zero coefficient. Returns its column.
    std::size_t add_variable(const std::string& name, bool nonnegative = true);
    std::size_t index_of(const std::string& name) const;
    bool has_variable(const std::string& name) const;

    /// Sparse form: sum coeff[name] * name <= rhs.
    void add(const std::map<std::string, Rational>& terms, const Rational& rhs);
    void add_row(Inequality row);

    const std::vector<std::string>& variables() const { return vars_; }
    const std::vector<Inequality>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    /// Objective vector from a sparse map over variable names.
    std::vector<Rational> objective(const std::map<std::string, Rational>& terms) const;

    /// Scales each row, drops tautologies, duplicates and rows dominated by a
    /// row with equal coefficients and smaller rhs.
    void normalize();

private:
    std::vector<std::string> vars_;
    std::vector<Inequality> rows_;
};

/// Projects out one variable by pairing rows of opposite sign.
ConstraintSystem fm_eliminate(const ConstraintSystem& sys, const std::string& var);

struct LinearMax {
    bool bounded = false;
    Rational value;  // meaningful when bounded
};

/// Exact maximum of objective . x over the feasible set. The default order
/// eliminates the variable with fewest (positive x negative) pairings first;
/// `order` forces a sequence of variable names instead.
/// Throws std::domain_error("empty polytope") when infeasible.
LinearMax max_linear(const ConstraintSystem& sys, const std::vector<Rational>& objective,
                     const std::optional<std::vector<std::string>>& order = std::nullopt);

} // namespace dcic
