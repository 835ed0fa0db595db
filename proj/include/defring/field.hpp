#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace defring {

using Scalar = std::uint32_t;
using Vec = std::vector<Scalar>;

// Arithmetic in Z/p.  Passed by value or const ref; never global.
struct Field {
    Scalar p = 2;

    Field() = default;
    explicit Field(Scalar prime);

    Scalar add(Scalar a, Scalar b) const { Scalar s = a + b; return s >= p ? s - p : s; }
    Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p - b; }
    Scalar neg(Scalar a) const { return a == 0 ? 0 : p - a; }
    Scalar mul(Scalar a, Scalar b) const {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p);
    }
    Scalar inv(Scalar a) const;
    Scalar pow(Scalar a, std::uint64_t e) const;
    Scalar from_int(long long v) const;
    Scalar sign(long long e) const { return (e % 2 == 0) ? 1 : p - 1; }
};

bool is_prime(std::uint64_t n);

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Scalar> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Scalar& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    Scalar operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static Matrix identity(std::size_t n);
    static Matrix from_columns(std::size_t rows, const std::vector<Vec>& cols);
    static Matrix from_rows(std::size_t cols, const std::vector<Vec>& rows);
    Vec column(std::size_t c) const;
    Vec row(std::size_t r) const;
    Matrix transpose() const;
    bool is_zero() const;
    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

struct AffineSolution {
    Vec particular;
    std::vector<Vec> nullspace;
};

RrefResult rref(const Field& F, Matrix m);
std::size_t rank(const Field& F, const Matrix& m);
std::optional<AffineSolution> solve_affine(const Field& F, const Matrix& a, const Vec& b);
std::vector<Vec> kernel_basis(const Field& F, const Matrix& a);
std::vector<Vec> split_complement(const Field& F, std::size_t ambient_dim,
                                  const std::vector<Vec>& subspace,
                                  const std::vector<Vec>& priority);
std::vector<Vec> standard_basis(std::size_t n, bool reversed = false);

Matrix multiply(const Field& F, const Matrix& x, const Matrix& y);
Vec apply(const Field& F, const Matrix& x, const Vec& v);
Matrix add(const Field& F, const Matrix& x, const Matrix& y);
Matrix sub(const Field& F, const Matrix& x, const Matrix& y);
std::optional<Matrix> inverse(const Field& F, const Matrix& m);

Vec vadd(const Field& F, const Vec& x, const Vec& y);
Vec vsub(const Field& F, const Vec& x, const Vec& y);
Vec vscale(const Field& F, Scalar c, const Vec& x);
void vaxpy(const Field& F, Vec& y, Scalar c, const Vec& x);  // y += c x
bool vzero(const Vec& x);

// Incremental echelon basis: membership tests and reduction against a span.
class EchelonSpan {
public:
    EchelonSpan(const Field& F, std::size_t dim) : F_(F), dim_(dim) {}
    // Returns true when v was independent of the current span.
    bool insert(Vec v);
    Vec reduce(Vec v) const;
    bool contains(const Vec& v) const { return vzero(reduce(v)); }
    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }
    const std::vector<Vec>& basis() const { return rows_; }

private:
    Field F_;
    std::size_t dim_;
    std::vector<Vec> rows_;           // each row normalized, pivot entry 1
    std::vector<std::size_t> piv_;
};

} // namespace defring
