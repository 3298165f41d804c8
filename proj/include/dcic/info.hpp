#pragma once

#include "dcic/gf.hpp"

#include <Eigen/Core>

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dcic {

using VarSet = std::vector<std::string>;

/// Random variables that are linear functions of independent uniform seed
/// vectors over F_p. Seeds are also variables (their own selector map).
class LinearRvSystem {
public:
    LinearRvSystem(std::vector<std::pair<std::string, int>> seeds, int p = 2);

    int p() const { return p_; }
    Index seed_length() const { return total_; }
    /// Selector of one seed block: maps the concatenated seed to that seed.
    const GfMatrix& var(const std::string& name) const;
    /// Defines (or replaces) a variable; `map` must have seed_length() columns.
    void define(const std::string& name, const GfMatrix& map);
    bool has(const std::string& name) const { return vars_.count(name) > 0; }

    GfMatrix stack(const VarSet& names) const;
    /// H(targets | given) in field symbols, i.e. a rank difference.
    int cond_entropy_symbols(const VarSet& targets, const VarSet& given) const;
    int mutual_info_symbols(const VarSet& a, const VarSet& b, const VarSet& given) const;

private:
    int p_;
    Index total_ = 0;
    std::map<std::string, GfMatrix> vars_;
};

/// H(targets | given) in bits.
double ld_cond_entropy(const LinearRvSystem& sys, const VarSet& targets, const VarSet& given);
/// I(a; b | given) in bits.
double ld_mutual_info(const LinearRvSystem& sys, const VarSet& a, const VarSet& b, const VarSet& given);

/// Zero-mean circularly-symmetric complex Gaussians built as linear
/// combinations of independent seeds with given variances.
class GaussRvSystem {
public:
    using Row = Eigen::RowVectorXcd;

    explicit GaussRvSystem(std::vector<std::pair<std::string, double>> seeds);

    Index seed_count() const { return static_cast<Index>(variances_.size()); }
    /// Unit row selecting one seed.
    Row seed(const std::string& name) const;
    void define(const std::string& name, const Row& combination);
    const Row& var(const std::string& name) const;

    /// Covariance of the stacked variables (Hermitian PSD).
    Eigen::MatrixXcd covariance(const VarSet& names) const;
    /// log2 det of the covariance; 0 for the empty set. Throws
    /// std::domain_error when a pivot falls below the degeneracy threshold.
    double log2_det(const VarSet& names) const;

private:
    Eigen::VectorXd variances_;
    std::map<std::string, Index> seed_index_;
    std::map<std::string, Row> vars_;
};

/// I(a; b | given) in bits via four log-determinants. Slightly negative
/// round-off is clamped to 0.
double gauss_cond_mutual_info(const GaussRvSystem& sys, const VarSet& a, const VarSet& b, const VarSet& given);

} // namespace dcic
