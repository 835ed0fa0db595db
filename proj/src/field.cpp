#include "defring/field.hpp"

#include "defring/error.hpp"

#include <string>
#include <utility>

namespace defring {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(Scalar prime) : p(prime)
{
    if (!is_prime(prime))
        throw ValidationError("unsupported field: " + std::to_string(prime) + " is not prime");
    if (prime >= (1u << 31))
        throw ValidationError("prime too large: " + std::to_string(prime));
}

Scalar Field::pow(Scalar a, std::uint64_t e) const
{
    Scalar r = 1 % p;
    Scalar b = a % p;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

Scalar Field::inv(Scalar a) const
{
    if (a % p == 0) throw UsageError("inverse of zero");
    return pow(a, p - 2);
}

Scalar Field::from_int(long long v) const
{
    long long m = v % static_cast<long long>(p);
    if (m < 0) m += p;
    return static_cast<Scalar>(m);
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vec>& cols)
{
    Matrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows) throw UsageError("from_columns: column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

Matrix Matrix::from_rows(std::size_t cols, const std::vector<Vec>& rws)
{
    Matrix m(rws.size(), cols);
    for (std::size_t r = 0; r < rws.size(); ++r) {
        if (rws[r].size() != cols) throw UsageError("from_rows: row length mismatch");
        std::copy(rws[r].begin(), rws[r].end(), m.a.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    return m;
}

Vec Matrix::column(std::size_t c) const
{
    Vec v(rows);
    for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
}

Vec Matrix::row(std::size_t r) const
{
    return Vec(a.begin() + static_cast<std::ptrdiff_t>(r * cols),
               a.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
}

Matrix Matrix::transpose() const
{
    Matrix t(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool Matrix::is_zero() const
{
    for (Scalar x : a)
        if (x) return false;
    return true;
}

RrefResult rref(const Field& F, Matrix m)
{
    RrefResult out;
    std::size_t prow = 0;
    const std::size_t R = m.rows, C = m.cols;
    for (std::size_t c = 0; c < C && prow < R; ++c) {
        std::size_t sel = R;
        for (std::size_t r = prow; r < R; ++r)
            if (m(r, c)) { sel = r; break; }
        if (sel == R) continue;
        if (sel != prow)
            for (std::size_t k = c; k < C; ++k) std::swap(m(sel, k), m(prow, k));
        Scalar iv = F.inv(m(prow, c));
        Scalar* pr = &m.a[prow * C];
        for (std::size_t k = c; k < C; ++k) pr[k] = F.mul(pr[k], iv);
        for (std::size_t r = 0; r < R; ++r) {
            if (r == prow) continue;
            Scalar f = m(r, c);
            if (!f) continue;
            Scalar nf = F.neg(f);
            Scalar* rr = &m.a[r * C];
            for (std::size_t k = c; k < C; ++k)
                if (pr[k]) rr[k] = static_cast<Scalar>((rr[k] + static_cast<std::uint64_t>(nf) * pr[k]) % F.p);
        }
        out.pivots.push_back(c);
        ++prow;
    }
    out.rank = prow;
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const Field& F, const Matrix& m)
{
    if (m.rows > m.cols) return rref(F, m.transpose()).rank;
    return rref(F, m).rank;
}

std::vector<Vec> kernel_basis(const Field& F, const Matrix& a)
{
    RrefResult rr = rref(F, a);
    std::vector<char> is_piv(a.cols, 0);
    for (auto c : rr.pivots) is_piv[c] = 1;
    std::vector<Vec> out;
    for (std::size_t fc = 0; fc < a.cols; ++fc) {
        if (is_piv[fc]) continue;
        Vec v(a.cols, 0);
        v[fc] = 1;
        for (std::size_t k = 0; k < rr.pivots.size(); ++k)
            v[rr.pivots[k]] = F.neg(rr.reduced(k, fc));
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<AffineSolution> solve_affine(const Field& F, const Matrix& a, const Vec& b)
{
    if (b.size() != a.rows)
        throw UsageError("solve_affine: dimension mismatch (" + std::to_string(a.rows) + " rows vs rhs of length " +
                         std::to_string(b.size()) + ")");
    Matrix aug(a.rows, a.cols + 1);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t c = 0; c < a.cols; ++c) aug(r, c) = a(r, c);
        aug(r, a.cols) = b[r];
    }
    RrefResult rr = rref(F, std::move(aug));
    if (!rr.pivots.empty() && rr.pivots.back() == a.cols) return std::nullopt;
    AffineSolution s;
    s.particular.assign(a.cols, 0);
    for (std::size_t k = 0; k < rr.pivots.size(); ++k) s.particular[rr.pivots[k]] = rr.reduced(k, a.cols);
    s.nullspace = kernel_basis(F, a);
    return s;
}

bool EchelonSpan::insert(Vec v)
{
    if (v.size() != dim_) throw UsageError("EchelonSpan: vector length mismatch");
    v = reduce(std::move(v));
    std::size_t c = 0;
    while (c < dim_ && v[c] == 0) ++c;
    if (c == dim_) return false;
    Scalar iv = F_.inv(v[c]);
    for (auto& x : v) x = F_.mul(x, iv);
    rows_.push_back(std::move(v));
    piv_.push_back(c);
    return true;
}

Vec EchelonSpan::reduce(Vec v) const
{
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        Scalar f = v[piv_[k]];
        if (!f) continue;
        vaxpy(F_, v, F_.neg(f), rows_[k]);
    }
    return v;
}

std::vector<Vec> split_complement(const Field& F, std::size_t ambient_dim, const std::vector<Vec>& subspace,
                                  const std::vector<Vec>& priority)
{
    EchelonSpan span(F, ambient_dim);
    for (const auto& s : subspace) {
        if (s.size() != ambient_dim) throw UsageError("split_complement: subspace vector length mismatch");
        if (!span.insert(s)) throw ValidationError("split_complement: subspace columns are dependent");
    }
    std::vector<Vec> out;
    for (const auto& c : priority) {
        if (span.rank() == ambient_dim) break;
        if (span.insert(c)) out.push_back(c);
    }
    if (span.rank() != ambient_dim) throw ValidationError("split_complement: priority list does not span the ambient space");
    return out;
}

std::vector<Vec> standard_basis(std::size_t n, bool reversed)
{
    std::vector<Vec> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec e(n, 0);
        e[reversed ? n - 1 - k : k] = 1;
        out.push_back(std::move(e));
    }
    return out;
}

Matrix multiply(const Field& F, const Matrix& x, const Matrix& y)
{
    if (x.cols != y.rows) throw UsageError("multiply: inner dimension mismatch");
    Matrix z(x.rows, y.cols);
    std::vector<std::uint64_t> acc(y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < x.cols; ++k) {
            Scalar xv = x(i, k);
            if (!xv) continue;
            const Scalar* yr = &y.a[k * y.cols];
            for (std::size_t j = 0; j < y.cols; ++j) {
                acc[j] += static_cast<std::uint64_t>(xv) * yr[j];
                if (acc[j] >= (1ull << 62)) acc[j] %= F.p;
            }
        }
        for (std::size_t j = 0; j < y.cols; ++j) z(i, j) = static_cast<Scalar>(acc[j] % F.p);
    }
    return z;
}

Vec apply(const Field& F, const Matrix& x, const Vec& v)
{
    if (x.cols != v.size()) throw UsageError("apply: dimension mismatch");
    Vec out(x.rows, 0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        std::uint64_t acc = 0;
        const Scalar* xr = &x.a[i * x.cols];
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (!v[k] || !xr[k]) continue;
            acc += static_cast<std::uint64_t>(xr[k]) * v[k];
            if (acc >= (1ull << 62)) acc %= F.p;
        }
        out[i] = static_cast<Scalar>(acc % F.p);
    }
    return out;
}

Matrix add(const Field& F, const Matrix& x, const Matrix& y)
{
    if (x.rows != y.rows || x.cols != y.cols) throw UsageError("add: shape mismatch");
    Matrix z(x.rows, x.cols);
    for (std::size_t k = 0; k < x.a.size(); ++k) z.a[k] = F.add(x.a[k], y.a[k]);
    return z;
}

Matrix sub(const Field& F, const Matrix& x, const Matrix& y)
{
    if (x.rows != y.rows || x.cols != y.cols) throw UsageError("sub: shape mismatch");
    Matrix z(x.rows, x.cols);
    for (std::size_t k = 0; k < x.a.size(); ++k) z.a[k] = F.sub(x.a[k], y.a[k]);
    return z;
}

std::optional<Matrix> inverse(const Field& F, const Matrix& m)
{
    if (m.rows != m.cols) throw UsageError("inverse: non-square matrix");
    const std::size_t n = m.rows;
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    RrefResult rr = rref(F, std::move(aug));
    if (rr.rank < n || (n > 0 && rr.pivots[n - 1] != n - 1)) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = rr.reduced(r, n + c);
    return inv;
}

Vec vadd(const Field& F, const Vec& x, const Vec& y)
{
    Vec z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = F.add(x[k], y[k]);
    return z;
}

Vec vsub(const Field& F, const Vec& x, const Vec& y)
{
    Vec z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = F.sub(x[k], y[k]);
    return z;
}

Vec vscale(const Field& F, Scalar c, const Vec& x)
{
    Vec z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = F.mul(c, x[k]);
    return z;
}

void vaxpy(const Field& F, Vec& y, Scalar c, const Vec& x)
{
    if (!c) return;
    for (std::size_t k = 0; k < y.size(); ++k)
        if (x[k]) y[k] = static_cast<Scalar>((y[k] + static_cast<std::uint64_t>(c) * x[k]) % F.p);
}

bool vzero(const Vec& x)
{
    for (Scalar s : x)
        if (s) return false;
    return true;
}

} // namespace defring
