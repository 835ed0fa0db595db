#include "defring/cochain.hpp"

#include "defring/error.hpp"

#include <cstdlib>
#include <string>
#include <utility>

namespace defring {

BlockLayout::BlockLayout(const std::vector<int>& block_dims) : dims(block_dims)
{
    r = static_cast<int>(dims.size());
    d = 0;
    for (int x : dims) {
        offset.push_back(d);
        d += x;
    }
    dd = d * d;
    index_of.assign(dd, -1);
    block_coords.assign(static_cast<std::size_t>(r) * r, {});
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int a = 0; a < dims[i]; ++a)
                for (int b = 0; b < dims[j]; ++b) {
                    int R = offset[i] + a, C = offset[j] + b;
                    int q = static_cast<int>(coord_row.size());
                    coord_row.push_back(R);
                    coord_col.push_back(C);
                    coord_blk.push_back(i * r + j);
                    index_of[R * d + C] = q;
                    block_coords[i * r + j].push_back(q);
                }
}

std::vector<std::size_t> CochainComplex::coords_in_block(int n, int blk) const
{
    std::vector<std::size_t> out;
    const auto& bc = L.block_coords[blk];
    out.reserve(tuples[n] * bc.size());
    for (std::size_t t = 0; t < tuples[n]; ++t)
        for (int q : bc) out.push_back(t * L.dd + q);
    return out;
}

std::size_t memory_cap_bytes()
{
    if (const char* env = std::getenv("DEFRING_CAP_BYTES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(2) << 30;
}

namespace {

enum class Action { Bimodule, Conjugation };

using ProductList = std::vector<std::vector<std::pair<int, Scalar>>>;

ProductList group_products(const FiniteGroup& G)
{
    ProductList pl(static_cast<std::size_t>(G.order) * G.order);
    for (int a = 0; a < G.order; ++a)
        for (int b = 0; b < G.order; ++b) pl[a * G.order + b].push_back({G.mul(a, b), 1});
    return pl;
}

ProductList algebra_products(const FiniteDimAlgebra& A)
{
    ProductList pl(static_cast<std::size_t>(A.dim) * A.dim);
    for (int a = 0; a < A.dim; ++a)
        for (int b = 0; b < A.dim; ++b)
            for (int k = 0; k < A.dim; ++k)
                if (A.c(a, b, k)) pl[a * A.dim + b].push_back({k, A.c(a, b, k)});
    return pl;
}

CochainComplex skeleton(const Representation& rep, int dmax, int nb)
{
    if (dmax < 1) throw UsageError("D_max must be at least 1");
    CochainComplex cx;
    cx.F = rep.F;
    cx.rep = rep;
    cx.nb = nb;
    cx.L = BlockLayout(rep.block_dims);
    cx.dmax = dmax;
    std::size_t t = 1;
    long double bytes = 0;
    for (int n = 0; n <= dmax; ++n) {
        cx.tuples.push_back(t);
        cx.dims.push_back(t * cx.L.dd);
        t *= static_cast<std::size_t>(nb);
    }
    for (int n = 0; n < dmax; ++n)
        bytes += static_cast<long double>(cx.dims[n]) * cx.dims[n + 1] * sizeof(Scalar);
    // retract matrices are of comparable size; budget twice the differentials
    if (bytes * 3 > static_cast<long double>(memory_cap_bytes()))
        throw CapExceeded("memory guard: |G|^D_max * d^2 = " + std::to_string(cx.dims[dmax]) +
                          " too large for the configured cap (DEFRING_CAP_BYTES)");
    return cx;
}

void fill_differentials(CochainComplex& cx, const ProductList& prod, Action action)
{
    const Field& F = cx.F;
    const int nb = cx.nb, d = cx.L.d, dd = cx.L.dd;
    const auto& rho = cx.rep.rho;
    std::vector<Matrix> rho_inv;
    if (action == Action::Conjugation) {
        for (const auto& m : rho) {
            auto inv = inverse(F, m);
            if (!inv) throw ValidationError("conjugation complex needs invertible matrices");
            rho_inv.push_back(*inv);
        }
    }
    for (int n = 0; n < cx.dmax; ++n) {
        Matrix D(cx.dims[n + 1], cx.dims[n]);
        std::vector<int> g(n + 1);
        for (std::size_t t = 0; t < cx.tuples[n + 1]; ++t) {
            std::size_t rem = t;
            for (int k = n; k >= 0; --k) {
                g[k] = static_cast<int>(rem % nb);
                rem /= nb;
            }
            const std::size_t tail = t % cx.tuples[n];   // (g_2..g_{n+1})
            const std::size_t head = t / nb;             // (g_1..g_n)
            for (int q = 0; q < dd; ++q) {
                const int R = cx.L.coord_row[q], C = cx.L.coord_col[q];
                const std::size_t row = t * dd + q;
                // first term
                if (action == Action::Bimodule) {
                    for (int K = 0; K < d; ++K) {
                        Scalar c = rho[g[0]](R, K);
                        if (!c) continue;
                        std::size_t col = tail * dd + cx.L.index_of[K * d + C];
                        D(row, col) = F.add(D(row, col), c);
                    }
                } else {
                    for (int K = 0; K < d; ++K)
                        for (int K2 = 0; K2 < d; ++K2) {
                            Scalar c = F.mul(rho[g[0]](R, K), rho_inv[g[0]](K2, C));
                            if (!c) continue;
                            std::size_t col = tail * dd + cx.L.index_of[K * d + K2];
                            D(row, col) = F.add(D(row, col), c);
                        }
                }
                // inner faces
                for (int j = 1; j <= n; ++j) {
                    const Scalar sgn = F.sign(j);
                    for (const auto& [k, c] : prod[static_cast<std::size_t>(g[j - 1]) * nb + g[j]]) {
                        std::size_t idx = 0;
                        for (int m = 0; m <= n; ++m) {
                            if (m == j) continue;
                            idx = idx * nb + (m == j - 1 ? k : g[m]);
                        }
                        std::size_t col = idx * dd + q;
                        D(row, col) = F.add(D(row, col), F.mul(sgn, c));
                    }
                }
                // last term
                const Scalar sgn = F.sign(n + 1);
                if (action == Action::Bimodule) {
                    for (int K = 0; K < d; ++K) {
                        Scalar c = rho[g[n]](K, C);
                        if (!c) continue;
                        std::size_t col = head * dd + cx.L.index_of[R * d + K];
                        D(row, col) = F.add(D(row, col), F.mul(sgn, c));
                    }
                } else {
                    std::size_t col = head * dd + q;
                    D(row, col) = F.add(D(row, col), sgn);
                }
            }
        }
        cx.d.push_back(std::move(D));
    }
    for (int n = 0; n + 1 < cx.dmax; ++n)
        if (!multiply(F, cx.d[n + 1], cx.d[n]).is_zero())
            throw std::logic_error("d o d != 0 in degree " + std::to_string(n));
}

} // namespace

CochainComplex build_group_complex(const Representation& rep, int dmax)
{
    if (!rep.is_group()) throw UsageError("build_group_complex needs a group representation");
    CochainComplex cx = skeleton(rep, dmax, rep.group->order);
    fill_differentials(cx, group_products(*rep.group), Action::Bimodule);
    return cx;
}

CochainComplex build_hochschild_complex(const Representation& rep, int dmax)
{
    if (rep.is_group()) throw UsageError("build_hochschild_complex needs an algebra representation");
    CochainComplex cx = skeleton(rep, dmax, rep.algebra->dim);
    cx.hochschild = true;
    fill_differentials(cx, algebra_products(*rep.algebra), Action::Bimodule);
    return cx;
}

CochainComplex build_conjugation_complex(const Representation& rep, int dmax)
{
    if (!rep.is_group()) throw UsageError("conjugation complex needs a group representation");
    CochainComplex cx = skeleton(rep, dmax, rep.group->order);
    fill_differentials(cx, group_products(*rep.group), Action::Conjugation);
    return cx;
}

Vec cup(const CochainComplex& cx, const Vec& u, int du, const Vec& v, int dv)
{
    if (du < 0 || dv < 0 || du + dv > cx.dmax)
        throw UsageError("cup: degree overflow (" + std::to_string(du) + "+" + std::to_string(dv) + " > D_max)");
    if (u.size() != cx.dims[du] || v.size() != cx.dims[dv]) throw UsageError("cup: cochain length mismatch");
    const Field& F = cx.F;
    const int d = cx.L.d, dd = cx.L.dd;
    const std::size_t tu = cx.tuples[du], tv = cx.tuples[dv];
    Vec out(cx.dims[du + dv], 0);
    std::vector<std::uint64_t> acc(dd);
    for (std::size_t a = 0; a < tu; ++a) {
        const Scalar* U = &u[a * dd];
        bool uz = true;
        for (int q = 0; q < dd; ++q)
            if (U[q]) { uz = false; break; }
        if (uz) continue;
        for (std::size_t b = 0; b < tv; ++b) {
            const Scalar* V = &v[b * dd];
            std::fill(acc.begin(), acc.end(), 0);
            bool any = false;
            for (int q1 = 0; q1 < dd; ++q1) {
                if (!U[q1]) continue;
                const int R = cx.L.coord_row[q1], K = cx.L.coord_col[q1];
                for (int C = 0; C < d; ++C) {
                    const int q2 = cx.L.index_of[K * d + C];
                    if (!V[q2]) continue;
                    acc[cx.L.index_of[R * d + C]] += static_cast<std::uint64_t>(U[q1]) * V[q2];
                    any = true;
                }
            }
            if (!any) continue;
            Scalar* O = &out[(a * tv + b) * dd];
            for (int q = 0; q < dd; ++q) O[q] = static_cast<Scalar>(acc[q] % F.p);
        }
    }
    return out;
}

Vec differential(const CochainComplex& cx, const Vec& u, int du)
{
    if (du < 0 || du >= cx.dmax) throw UsageError("differential: degree out of range");
    return apply(cx.F, cx.d[du], u);
}

Vec unit_cochain(const CochainComplex& cx)
{
    Vec u(cx.dims[0], 0);
    for (int R = 0; R < cx.L.d; ++R) u[cx.L.index_of[R * cx.L.d + R]] = 1;
    return u;
}

namespace {

Matrix submatrix(const Matrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
{
    Matrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
    return s;
}

} // namespace

CohomologyResult cohomology(const CochainComplex& cx, int n)
{
    if (n < 0 || n >= cx.dmax) throw UsageError("cohomology: need n < D_max");
    const Field& F = cx.F;
    const int r = cx.L.r;
    CohomologyResult out;
    out.degree = n;
    out.per_block.assign(r, std::vector<int>(r, 0));
    for (int b = 0; b < r * r; ++b) {
        auto Sn = cx.coords_in_block(n, b);
        if (Sn.empty()) continue;
        auto Sn1 = cx.coords_in_block(n + 1, b);
        auto Z = kernel_basis(F, submatrix(cx.d[n], Sn1, Sn));
        std::vector<Vec> Bv;
        if (n > 0) {
            auto Sm = cx.coords_in_block(n - 1, b);
            Matrix dm = submatrix(cx.d[n - 1], Sn, Sm);
            RrefResult rr = rref(F, dm);
            for (auto c : rr.pivots) Bv.push_back(dm.column(c));
        }
        // complement of B inside Z, in Z coordinates
        Matrix Zm = Matrix::from_columns(Sn.size(), Z);
        std::vector<Vec> Bz;
        for (const auto& bv : Bv) {
            auto s = solve_affine(F, Zm, bv);
            if (!s) throw std::logic_error("coboundary outside cocycles");
            Bz.push_back(s->particular);
        }
        auto H = split_complement(F, Z.size(), Bz, standard_basis(Z.size()));
        out.per_block[cx.L.blk_row(b)][cx.L.blk_col(b)] = static_cast<int>(H.size());
        for (const auto& hz : H) {
            Vec local = apply(F, Zm, hz);
            Vec full(cx.dims[n], 0);
            for (std::size_t k = 0; k < Sn.size(); ++k) full[Sn[k]] = local[k];
            out.lifts.push_back(std::move(full));
            out.lift_block.push_back(b);
        }
    }
    out.dim = static_cast<int>(out.lifts.size());
    return out;
}

HochschildComparison compare_hochschild_group(const Representation& rep, int dmax)
{
    if (!rep.is_group()) throw UsageError("compare_hochschild_group needs a group representation");
    if (rep.group->order > 4 || dmax > 2)
        throw CapExceeded("compare_hochschild_group: size guard (|G| <= 4, D_max <= 2)");
    HochschildComparison out;
    CochainComplex g = build_group_complex(rep, dmax + 1);
    CochainComplex h = build_hochschild_complex(as_algebra_rep(rep), dmax + 1);
    CochainComplex c = build_conjugation_complex(rep, dmax + 1);
    out.differentials_match = true;
    for (int n = 0; n <= dmax; ++n)
        if (!(g.d[n] == h.d[n])) out.differentials_match = false;
    for (int n = 0; n <= dmax; ++n) {
        out.dims_group.push_back(cohomology(g, n).dim);
        out.dims_hochschild.push_back(cohomology(h, n).dim);
        out.dims_conjugation.push_back(cohomology(c, n).dim);
    }
    out.dims_agree = out.dims_group == out.dims_hochschild && out.dims_group == out.dims_conjugation;
    return out;
}

} // namespace defring
