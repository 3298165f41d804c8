#include "dcic/gf.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dcic {

namespace {

std::int32_t reduce(std::int64_t v, int p)
{
    auto r = v % p;
    return static_cast<std::int32_t>(r < 0 ? r + p : r);
}

std::int32_t inverse(std::int32_t a, int p)
{
    // Fermat: a^(p-2) mod p.
    std::int64_t result = 1;
    std::int64_t base = a;
    for (int e = p - 2; e > 0; e >>= 1) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
    }
    return static_cast<std::int32_t>(result);
}

// Row echelon reduction in place. Pivots are chosen leftmost column first,
// topmost available row within that column. Optionally applies every row
// operation to `track` as well.
struct Echelon {
    std::vector<Index> pivot_cols;  // pivot column of row i, for i < rank
};

void axpy_row(GfStorage& m, Index dst, Index src, std::int32_t factor, int p)
{
    if (factor == 0) return;
    auto d = m.row(dst);
    auto s = m.row(src);
    for (Index c = 0; c < m.cols(); ++c) {
        if (s(c) != 0) d(c) = static_cast<std::int32_t>((d(c) + std::int64_t(factor) * s(c)) % p);
    }
}

void scale_row(GfStorage& m, Index r, std::int32_t factor, int p)
{
    auto row = m.row(r);
    for (Index c = 0; c < m.cols(); ++c) row(c) = static_cast<std::int32_t>(std::int64_t(row(c)) * factor % p);
}

Echelon reduce_to_echelon(GfStorage& m, int p, GfStorage* track)
{
    Echelon ech;
    Index next_row = 0;
    for (Index c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        Index pivot = -1;
        for (Index r = next_row; r < m.rows(); ++r) {
            if (m(r, c) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != next_row) {
            m.row(pivot).swap(m.row(next_row));
            if (track) track->row(pivot).swap(track->row(next_row));
        }
        auto inv = inverse(m(next_row, c), p);
        if (inv != 1) {
            scale_row(m, next_row, inv, p);
            if (track) scale_row(*track, next_row, inv, p);
        }
        for (Index r = 0; r < m.rows(); ++r) {
            if (r == next_row || m(r, c) == 0) continue;
            auto factor = static_cast<std::int32_t>(p - m(r, c));
            axpy_row(m, r, next_row, factor, p);
            if (track) axpy_row(*track, r, next_row, factor, p);
        }
        ech.pivot_cols.push_back(c);
        ++next_row;
    }
    return ech;
}

void check_field(int p)
{
    if (!is_prime(p)) throw std::invalid_argument("field size must be prime, got " + std::to_string(p));
}

} // namespace

bool is_prime(int p)
{
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

GfMatrix::GfMatrix(Index rows, Index cols, int p)
    : data_(GfStorage::Zero(rows, cols))
    , p_(p)
{
    check_field(p);
}

GfMatrix GfMatrix::identity(Index n, int p)
{
    GfMatrix m(n, n, p);
    m.data_.setIdentity();
    return m;
}

GfMatrix GfMatrix::selector(Index n, std::span<const Index> coords, int p)
{
    GfMatrix m(static_cast<Index>(coords.size()), n, p);
    for (Index r = 0; r < m.rows(); ++r) m.data_(r, coords[static_cast<std::size_t>(r)]) = 1;
    return m;
}

GfMatrix GfMatrix::from_storage(const GfStorage& raw, int p)
{
    GfMatrix m(raw.rows(), raw.cols(), p);
    for (Index r = 0; r < raw.rows(); ++r)
        for (Index c = 0; c < raw.cols(); ++c) m.data_(r, c) = reduce(raw(r, c), p);
    return m;
}

void GfMatrix::set(Index r, Index c, std::int64_t v) { data_(r, c) = reduce(v, p_); }

GfMatrix GfMatrix::transpose() const
{
    GfMatrix t(cols(), rows(), p_);
    t.data_ = data_.transpose();
    return t;
}

GfMatrix GfMatrix::block(Index r0, Index c0, Index nr, Index nc) const
{
    GfMatrix b(nr, nc, p_);
    b.data_ = data_.block(r0, c0, nr, nc);
    return b;
}

bool GfMatrix::is_zero() const { return (data_.array() == 0).all(); }

GfMatrix GfMatrix::operator-() const
{
    GfMatrix n(rows(), cols(), p_);
    n.data_ = data_.unaryExpr([p = p_](std::int32_t v) { return v == 0 ? 0 : p - v; });
    return n;
}

void GfMatrix::check_same_shape(const GfMatrix& other) const
{
    if (rows() != other.rows() || cols() != other.cols() || p_ != other.p_)
        throw std::invalid_argument("GfMatrix shape or field mismatch");
}

GfMatrix& GfMatrix::operator+=(const GfMatrix& rhs)
{
    check_same_shape(rhs);
    data_ = (data_ + rhs.data_).unaryExpr([p = p_](std::int32_t v) { return v >= p ? v - p : v; });
    return *this;
}

GfMatrix& GfMatrix::operator-=(const GfMatrix& rhs) { return *this += -rhs; }

GfMatrix operator*(const GfMatrix& a, const GfMatrix& b)
{
    if (a.cols() != b.rows() || a.p_ != b.p_) throw std::invalid_argument("GfMatrix product dimension mismatch");
    using Wide = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
    Wide prod = a.data_.cast<std::int64_t>() * b.data_.cast<std::int64_t>();
    GfMatrix out(a.rows(), b.cols(), a.p_);
    out.data_ = prod.unaryExpr([p = a.p_](std::int64_t v) { return reduce(v, p); });
    return out;
}

GfMatrix operator*(std::int64_t k, const GfMatrix& a)
{
    GfMatrix out(a.rows(), a.cols(), a.p_);
    auto kr = reduce(k, a.p_);
    out.data_ = a.data_.unaryExpr([kr, p = a.p_](std::int32_t v) { return reduce(std::int64_t(v) * kr, p); });
    return out;
}

bool operator==(const GfMatrix& a, const GfMatrix& b)
{
    return a.p_ == b.p_ && a.rows() == b.rows() && a.cols() == b.cols() && a.data_ == b.data_;
}

GfMatrix vstack(std::span<const GfMatrix> parts)
{
    if (parts.empty()) throw std::invalid_argument("vstack of nothing");
    Index rows = 0;
    for (const auto& m : parts) {
        if (m.cols() != parts[0].cols() || m.p() != parts[0].p())
            throw std::invalid_argument("vstack column or field mismatch");
        rows += m.rows();
    }
    GfStorage out(rows, parts[0].cols());
    Index r = 0;
    for (const auto& m : parts) {
        out.middleRows(r, m.rows()) = m.data();
        r += m.rows();
    }
    return GfMatrix::from_storage(out, parts[0].p());
}

GfMatrix vstack(const GfMatrix& top, const GfMatrix& bottom)
{
    const GfMatrix parts[] = {top, bottom};
    return vstack(parts);
}

GfMatrix hstack(const GfMatrix& left, const GfMatrix& right)
{
    if (left.rows() != right.rows() || left.p() != right.p()) throw std::invalid_argument("hstack row or field mismatch");
    GfStorage out(left.rows(), left.cols() + right.cols());
    out.leftCols(left.cols()) = left.data();
    out.rightCols(right.cols()) = right.data();
    return GfMatrix::from_storage(out, left.p());
}

GfMatrix shift_matrix(int n, int k, int p)
{
    if (n < 1) throw std::invalid_argument("shift_matrix needs n >= 1");
    GfMatrix s(n, n, p);
    int a = k < 0 ? -k : k;
    for (int r = a; r < n; ++r) {
        if (k >= 0)
            s.set(r, r - a, 1);
        else
            s.set(r - a, r, 1);
    }
    return s;
}

int rank(const GfMatrix& m)
{
    GfStorage work = m.data();
    return static_cast<int>(reduce_to_echelon(work, m.p(), nullptr).pivot_cols.size());
}

std::optional<GfMatrix> solve_determined(const GfMatrix& known, const GfMatrix& target)
{
    if (known.cols() != target.cols()) throw std::invalid_argument("solve_determined: column count mismatch");
    if (known.p() != target.p()) throw std::invalid_argument("solve_determined: field mismatch");
    const int p = known.p();

    GfStorage work = known.data();
    GfStorage track = GfStorage::Identity(known.rows(), known.rows());
    auto ech = reduce_to_echelon(work, p, &track);

    GfStorage recovery = GfStorage::Zero(target.rows(), known.rows());
    for (Index t = 0; t < target.rows(); ++t) {
        Eigen::Matrix<std::int32_t, 1, Eigen::Dynamic> rem = target.data().row(t);
        for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) {
            auto c = ech.pivot_cols[i];
            auto coef = rem(c);
            if (coef == 0) continue;
            auto pr = static_cast<Index>(i);
            for (Index j = 0; j < rem.cols(); ++j)
                rem(j) = reduce(rem(j) - std::int64_t(coef) * work(pr, j), p);
            for (Index j = 0; j < recovery.cols(); ++j)
                recovery(t, j) = reduce(recovery(t, j) + std::int64_t(coef) * track(pr, j), p);
        }
        if ((rem.array() != 0).any()) return std::nullopt;
    }
    return GfMatrix::from_storage(recovery, p);
}

} // namespace dcic
