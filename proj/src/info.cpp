#include "dcic/info.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcic {

namespace {

constexpr double pivot_threshold = 1e-12;
constexpr double clamp_tolerance = 1e-9;

VarSet merge(std::initializer_list<const VarSet*> sets)
{
    VarSet out;
    for (const auto* s : sets)
        for (const auto& name : *s)
            if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    return out;
}

[[noreturn]] void unknown(const std::string& name)
{
    throw std::invalid_argument("unknown variable '" + name + "'");
}

} // namespace

LinearRvSystem::LinearRvSystem(std::vector<std::pair<std::string, int>> seeds, int p)
    : p_(p)
{
    if (!is_prime(p)) throw std::invalid_argument("field size must be prime");
    for (const auto& [name, len] : seeds) {
        if (len < 0) throw std::invalid_argument("negative seed length for '" + name + "'");
        total_ += len;
    }
    Index offset = 0;
    for (const auto& [name, len] : seeds) {
        GfMatrix sel(len, total_, p);
        for (Index r = 0; r < len; ++r) sel.set(r, offset + r, 1);
        if (!vars_.emplace(name, sel).second) throw std::invalid_argument("duplicate seed '" + name + "'");
        offset += len;
    }
}

const GfMatrix& LinearRvSystem::var(const std::string& name) const
{
    auto it = vars_.find(name);
    if (it == vars_.end()) unknown(name);
    return it->second;
}

void LinearRvSystem::define(const std::string& name, const GfMatrix& map)
{
    if (map.cols() != total_ || map.p() != p_) throw std::invalid_argument("variable '" + name + "' has wrong shape");
    vars_.insert_or_assign(name, map);
}

GfMatrix LinearRvSystem::stack(const VarSet& names) const
{
    std::vector<GfMatrix> parts;
    parts.reserve(names.size() + 1);
    parts.emplace_back(0, total_, p_);
    for (const auto& n : names) parts.push_back(var(n));
    return vstack(parts);
}

int LinearRvSystem::cond_entropy_symbols(const VarSet& targets, const VarSet& given) const
{
    return rank(stack(merge({&targets, &given}))) - rank(stack(given));
}

int LinearRvSystem::mutual_info_symbols(const VarSet& a, const VarSet& b, const VarSet& given) const
{
    return cond_entropy_symbols(a, given) - cond_entropy_symbols(a, merge({&b, &given}));
}

double ld_cond_entropy(const LinearRvSystem& sys, const VarSet& targets, const VarSet& given)
{
    return sys.cond_entropy_symbols(targets, given) * std::log2(double(sys.p()));
}

double ld_mutual_info(const LinearRvSystem& sys, const VarSet& a, const VarSet& b, const VarSet& given)
{
    return sys.mutual_info_symbols(a, b, given) * std::log2(double(sys.p()));
}

GaussRvSystem::GaussRvSystem(std::vector<std::pair<std::string, double>> seeds)
    : variances_(static_cast<Index>(seeds.size()))
{
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& [name, v] = seeds[i];
        if (!(v >= 0)) throw std::invalid_argument("seed '" + name + "' needs a nonnegative variance");
        auto idx = static_cast<Index>(i);
        variances_(idx) = v;
        if (!seed_index_.emplace(name, idx).second) throw std::invalid_argument("duplicate seed '" + name + "'");
        Row r = Row::Zero(static_cast<Index>(seeds.size()));
        r(idx) = 1.0;
        vars_.emplace(name, r);
    }
}

GaussRvSystem::Row GaussRvSystem::seed(const std::string& name) const
{
    auto it = seed_index_.find(name);
    if (it == seed_index_.end()) unknown(name);
    return vars_.at(name);
}

void GaussRvSystem::define(const std::string& name, const Row& combination)
{
    if (combination.size() != seed_count()) throw std::invalid_argument("variable '" + name + "' has wrong length");
    vars_.insert_or_assign(name, combination);
}

const GaussRvSystem::Row& GaussRvSystem::var(const std::string& name) const
{
    auto it = vars_.find(name);
    if (it == vars_.end()) unknown(name);
    return it->second;
}

Eigen::MatrixXcd GaussRvSystem::covariance(const VarSet& names) const
{
    Eigen::MatrixXcd m(static_cast<Index>(names.size()), seed_count());
    for (std::size_t i = 0; i < names.size(); ++i) m.row(static_cast<Index>(i)) = var(names[i]);
    return m * variances_.cast<std::complex<double>>().asDiagonal() * m.adjoint();
}

double GaussRvSystem::log2_det(const VarSet& names) const
{
    if (names.empty()) return 0.0;
    // K = B^H B with B = D^{1/2} M^H, so log det K = 2 sum log |R_ii| from B = QR.
    // Working on the generator keeps the condition number at its square root.
    const auto k = static_cast<Index>(names.size());
    Eigen::MatrixXcd b(seed_count(), k);
    const Eigen::VectorXd sd = variances_.cwiseSqrt();
    for (Index i = 0; i < k; ++i) b.col(i) = (sd.cast<std::complex<double>>().asDiagonal() * var(names[static_cast<std::size_t>(i)]).adjoint());
    if (b.rows() < k) throw std::domain_error("degenerate covariance in log-det");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
    const Eigen::MatrixXcd& r = qr.matrixQR();
    double acc = 0;
    for (Index i = 0; i < k; ++i) {
        const double diag = std::abs(r(i, i));
        if (diag <= pivot_threshold * std::max(1e-300, b.col(i).norm())) throw std::domain_error("degenerate covariance in log-det");
        acc += 2 * std::log2(diag);
    }
    return acc;
}

double gauss_cond_mutual_info(const GaussRvSystem& sys, const VarSet& a, const VarSet& b, const VarSet& given)
{
    const double ac = sys.log2_det(merge({&a, &given}));
    const double bc = sys.log2_det(merge({&b, &given}));
    const double abc = sys.log2_det(merge({&a, &b, &given}));
    const double c = sys.log2_det(given);
    const double value = ac + bc - abc - c;
    const double tol = clamp_tolerance * (1 + std::max({std::abs(ac), std::abs(bc), std::abs(abc), std::abs(c)}));
    if (std::abs(value) < tol) return 0.0;
    return value;
}

} // namespace dcic
