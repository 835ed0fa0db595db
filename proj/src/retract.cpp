#include "defring/transfer.hpp"

#include "defring/error.hpp"

#include <stdexcept>
#include <string>

namespace defring {

namespace {

Matrix submatrix(const Matrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
{
    Matrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
    return s;
}

void require(bool ok, const std::string& what)
{
    if (!ok) throw std::logic_error("retract identity failed: " + what);
}

} // namespace

Retract build_retract(const CochainComplex& cx, Priority priority)
{
    const Field& F = cx.F;
    const int top = cx.dmax;
    const int nblk = cx.L.r * cx.L.r;
    const bool rev = priority == Priority::Reversed;
    Retract R;
    R.top = top;
    R.priority = priority;

    // per block, per degree pieces in local coordinates
    struct Piece {
        std::vector<Vec> B, H, L;
        Matrix pH, hB;   // rows of M^{-1} for the H and B segments
    };
    std::vector<std::vector<Piece>> pieces(nblk, std::vector<Piece>(top + 1));
    std::vector<std::vector<std::vector<std::size_t>>> S(nblk, std::vector<std::vector<std::size_t>>(top + 1));

    for (int b = 0; b < nblk; ++b) {
        for (int n = 0; n <= top; ++n) S[b][n] = cx.coords_in_block(n, b);
        for (int n = 0; n <= top; ++n) {
            Piece& P = pieces[b][n];
            const std::size_t m = S[b][n].size();
            if (m == 0) continue;
            if (n > 0) {
                Matrix dprev = submatrix(cx.d[n - 1], S[b][n], S[b][n - 1]);
                for (const auto& l : pieces[b][n - 1].L) P.B.push_back(apply(F, dprev, l));
            }
            std::vector<Vec> cols = P.B;
            if (n < top) {
                Matrix dn = submatrix(cx.d[n], S[b][n + 1], S[b][n]);
                auto Z = kernel_basis(F, dn);
                Matrix Zm = Matrix::from_columns(m, Z);
                std::vector<Vec> Bz;
                for (const auto& bv : P.B) {
                    auto s = solve_affine(F, Zm, bv);
                    if (!s) throw std::logic_error("coboundary outside cocycles");
                    Bz.push_back(s->particular);
                }
                for (const auto& hz : split_complement(F, Z.size(), Bz, standard_basis(Z.size(), rev)))
                    P.H.push_back(apply(F, Zm, hz));
                P.L = split_complement(F, m, Z, standard_basis(m, rev));
                cols.insert(cols.end(), P.H.begin(), P.H.end());
                cols.insert(cols.end(), P.L.begin(), P.L.end());
            } else {
                auto Q = split_complement(F, m, P.B, standard_basis(m, rev));
                cols.insert(cols.end(), Q.begin(), Q.end());
            }
            // the tail of cols is a set J of standard vectors, so the B and H rows of M^{-1}
            // come from inverting [B|H] on the rows outside J
            const std::size_t nb = P.B.size(), nh = P.H.size(), k = nb + nh;
            std::vector<char> inJ(m, 0);
            for (std::size_t c = k; c < cols.size(); ++c)
                for (std::size_t q = 0; q < m; ++q)
                    if (cols[c][q]) inJ[q] = 1;
            std::vector<std::size_t> keep;
            for (std::size_t q = 0; q < m; ++q)
                if (!inJ[q]) keep.push_back(q);
            if (keep.size() != k) throw std::logic_error("complement is not spanned by standard vectors");
            Matrix sq(k, k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t c = 0; c < k; ++c) sq(a, c) = cols[c][keep[a]];
            auto Sinv = inverse(F, sq);
            if (!Sinv) throw std::logic_error("decomposition basis is singular");
            P.hB = Matrix(nb, m);
            P.pH = Matrix(nh, m);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t c = 0; c < k; ++c) {
                    if (a < nb) P.hB(a, keep[c]) = (*Sinv)(a, c);
                    else P.pH(a - nb, keep[c]) = (*Sinv)(a, c);
                }
        }
    }

    // assemble full matrices; H^n basis ordered by block id
    R.hdim.assign(top, 0);
    R.hblock.assign(top, {});
    R.i.resize(top);
    R.p.resize(top);
    R.h.resize(top + 1);
    for (int n = 0; n < top; ++n) {
        int total = 0;
        for (int b = 0; b < nblk; ++b) total += static_cast<int>(pieces[b][n].H.size());
        R.hdim[n] = total;
        R.i[n] = Matrix(cx.dims[n], total);
        R.p[n] = Matrix(total, cx.dims[n]);
        int k0 = 0;
        for (int b = 0; b < nblk; ++b) {
            const Piece& P = pieces[b][n];
            for (std::size_t k = 0; k < P.H.size(); ++k) {
                for (std::size_t c = 0; c < S[b][n].size(); ++c) {
                    R.i[n](S[b][n][c], k0 + k) = P.H[k][c];
                    R.p[n](k0 + k, S[b][n][c]) = P.pH(k, c);
                }
                R.hblock[n].push_back(b);
            }
            k0 += static_cast<int>(P.H.size());
        }
    }
    R.h[0] = Matrix(0, cx.dims[0]);
    for (int n = 1; n <= top; ++n) {
        R.h[n] = Matrix(cx.dims[n - 1], cx.dims[n]);
        for (int b = 0; b < nblk; ++b) {
            const Piece& P = pieces[b][n];
            const auto& Lprev = pieces[b][n - 1].L;
            if (P.B.empty()) continue;
            // h = L_{n-1} * (B rows of M^{-1})
            for (std::size_t k = 0; k < P.B.size(); ++k)
                for (std::size_t c = 0; c < S[b][n].size(); ++c) {
                    Scalar w = P.hB(k, c);
                    if (!w) continue;
                    for (std::size_t q = 0; q < S[b][n - 1].size(); ++q) {
                        Scalar l = Lprev[k][q];
                        if (!l) continue;
                        Scalar& dst = R.h[n](S[b][n - 1][q], S[b][n][c]);
                        dst = F.add(dst, F.mul(w, l));
                    }
                }
        }
    }
    verify_retract(cx, R);
    return R;
}

void verify_retract(const CochainComplex& cx, const Retract& R)
{
    const Field& F = cx.F;
    const int top = R.top;
    for (int n = 0; n < top; ++n) {
        const std::string deg = " in degree " + std::to_string(n);
        require(multiply(F, R.p[n], R.i[n]) == Matrix::identity(R.hdim[n]), "p i = id" + deg);
        require(multiply(F, cx.d[n], R.i[n]).is_zero(), "d i = 0" + deg);
        if (n > 0) {
            require(multiply(F, R.p[n], cx.d[n - 1]).is_zero(), "p d = 0" + deg);
            require(multiply(F, R.h[n], R.i[n]).is_zero(), "h i = 0" + deg);
            require(multiply(F, R.p[n - 1], R.h[n]).is_zero(), "p h = 0" + deg);
        }
        if (n > 1) require(multiply(F, R.h[n - 1], R.h[n]).is_zero(), "h h = 0" + deg);
        Matrix sum = multiply(F, R.i[n], R.p[n]);
        sum = add(F, sum, multiply(F, R.h[n + 1], cx.d[n]));
        if (n > 0) sum = add(F, sum, multiply(F, cx.d[n - 1], R.h[n]));
        require(sum == Matrix::identity(cx.dims[n]), "i p + d h + h d = id" + deg);
    }
    if (top > 1) require(multiply(F, R.h[top - 1], R.h[top]).is_zero(), "h h = 0 in degree " + std::to_string(top));
    // block preservation
    for (int n = 0; n < top; ++n)
        for (std::size_t c = 0; c < R.i[n].rows; ++c)
            for (std::size_t k = 0; k < R.i[n].cols; ++k)
                if (R.i[n](c, k)) require(cx.block_of(c) == R.hblock[n][k], "i preserves blocks");
    for (int n = 1; n <= top; ++n)
        for (std::size_t r = 0; r < R.h[n].rows; ++r)
            for (std::size_t c = 0; c < R.h[n].cols; ++c)
                if (R.h[n](r, c)) require(cx.block_of(r) == cx.block_of(c), "h preserves blocks");
}

} // namespace defring
