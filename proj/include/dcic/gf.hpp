#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>

namespace dcic {

using GfStorage = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Dense matrix over the prime field F_p. Entries are always kept in [0, p).
/// A column vector is simply a matrix with one column.
class GfMatrix {
public:
    GfMatrix() = default;
    GfMatrix(Index rows, Index cols, int p = 2);

    static GfMatrix zero(Index rows, Index cols, int p = 2) { return GfMatrix(rows, cols, p); }
    static GfMatrix identity(Index n, int p = 2);
    /// Rows of the identity selecting the given coordinates of an `n`-vector.
    static GfMatrix selector(Index n, std::span<const Index> coords, int p = 2);
    /// Wraps arbitrary integers, reducing each entry mod p.
    static GfMatrix from_storage(const GfStorage& raw, int p);

    Index rows() const { return data_.rows(); }
    Index cols() const { return data_.cols(); }
    int p() const { return p_; }

    std::int32_t operator()(Index r, Index c) const { return data_(r, c); }
    void set(Index r, Index c, std::int64_t v);

    const GfStorage& data() const { return data_; }

    GfMatrix transpose() const;
    GfMatrix block(Index r0, Index c0, Index nr, Index nc) const;
    GfMatrix row_range(Index r0, Index nr) const { return block(r0, 0, nr, cols()); }
    GfMatrix col_range(Index c0, Index nc) const { return block(0, c0, rows(), nc); }
    bool is_zero() const;

    GfMatrix operator-() const;
    GfMatrix& operator+=(const GfMatrix& rhs);
    GfMatrix& operator-=(const GfMatrix& rhs);

    friend GfMatrix operator+(GfMatrix a, const GfMatrix& b) { return a += b; }
    friend GfMatrix operator-(GfMatrix a, const GfMatrix& b) { return a -= b; }
    friend GfMatrix operator*(const GfMatrix& a, const GfMatrix& b);
    friend GfMatrix operator*(std::int64_t k, const GfMatrix& a);
    friend bool operator==(const GfMatrix& a, const GfMatrix& b);

private:
    void check_same_shape(const GfMatrix& other) const;

    GfStorage data_;
    int p_ = 2;
};

/// Stacks matrices vertically. All parts must share column count and field.
GfMatrix vstack(std::span<const GfMatrix> parts);
GfMatrix vstack(const GfMatrix& top, const GfMatrix& bottom);
GfMatrix hstack(const GfMatrix& left, const GfMatrix& right);

/// S^k for the n x n down-shift matrix S. Negative k gives the transpose of
/// S^|k|; |k| >= n gives the zero matrix.
GfMatrix shift_matrix(int n, int k, int p = 2);

/// Rank over F_p by exact elimination.
int rank(const GfMatrix& m);

/// Returns R with R * known == target when every row of `target` lies in the
/// row space of `known`, std::nullopt otherwise.
/// Throws std::invalid_argument on column-count or field mismatch.
std::optional<GfMatrix> solve_determined(const GfMatrix& known, const GfMatrix& target);

bool is_prime(int p);

} // namespace dcic
