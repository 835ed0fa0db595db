#include "defring/transfer.hpp"

#include "defring/error.hpp"

#include <string>

namespace defring {

std::optional<Block> AInfStructure::compose(const Tuple& t) const
{
    if (t.empty()) return std::nullopt;
    int first = h1_block[t[0]].first, cur = h1_block[t[0]].second;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (h1_block[t[k]].first != cur) return std::nullopt;
        cur = h1_block[t[k]].second;
    }
    return Block{first, cur};
}

Vec AInfStructure::m_value(const Tuple& t) const
{
    auto it = m.find(t);
    if (it != m.end()) return it->second;
    if (!compose(t)) return Vec(h2(), 0);
    if (static_cast<int>(t.size()) > max_arity)
        throw Refusal("m_" + std::to_string(t.size()) + " requested beyond computed arity " + std::to_string(max_arity));
    return Vec(h2(), 0);
}

std::vector<Tuple> composable_tuples(const std::vector<Block>& blocks, int arity)
{
    std::vector<Tuple> cur;
    if (arity < 1) return cur;
    for (int e = 0; e < static_cast<int>(blocks.size()); ++e) cur.push_back({e});
    for (int k = 2; k <= arity; ++k) {
        std::vector<Tuple> next;
        for (const auto& t : cur)
            for (int e = 0; e < static_cast<int>(blocks.size()); ++e)
                if (blocks[e].first == blocks[t.back()].second) {
                    Tuple u = t;
                    u.push_back(e);
                    next.push_back(std::move(u));
                }
        cur = std::move(next);
    }
    return cur;
}

namespace {

constexpr std::size_t kTupleCap = 400000;

Block block_pair(const CochainComplex& cx, int b) { return {cx.L.blk_row(b), cx.L.blk_col(b)}; }

struct Lambda {
    Vec value;
    int degree;
};

} // namespace

AInfStructure transfer_products(const CochainComplex& cx, const Retract& R, int N, DegreeProfile profile)
{
    if (N < 2) throw UsageError("transfer_products: N must be at least 2");
    if (R.top < 3) throw UsageError("transfer_products: complex must be built to D_max >= 3");
    if (profile.extended && R.top < 4)
        throw UsageError("transfer_products: the extended profile needs the complex built one degree past H^3");
    const Field& F = cx.F;
    AInfStructure A;
    A.F = F;
    A.r = cx.L.r;
    A.max_arity = N;
    A.extended = profile.extended;
    for (int b : R.hblock[1]) A.h1_block.push_back(block_pair(cx, b));
    for (int b : R.hblock[2]) A.h2_block.push_back(block_pair(cx, b));
    if (R.top > 3)
        for (int b : R.hblock[3]) A.h3_block.push_back(block_pair(cx, b));

    std::vector<Vec> i1, i2;
    for (int k = 0; k < R.hdim[1]; ++k) i1.push_back(R.i[1].column(k));
    for (int k = 0; k < R.hdim[2]; ++k) i2.push_back(R.i[2].column(k));

    // lambda_1 = -id, lambda_k = h o mtilde_k
    std::map<Tuple, Lambda> lam;
    auto input_degree = [](int x) { return x >= 0 ? 1 : 2; };
    auto lambda_single = [&](int x) -> Lambda {
        if (x >= 0) return {vscale(F, F.neg(1), i1[x]), 1};
        return {vscale(F, F.neg(1), i2[-1 - x]), 2};
    };
    auto get_lambda = [&](const Tuple& t) -> const Lambda& {
        auto it = lam.find(t);
        if (it == lam.end()) throw std::logic_error("transfer: missing lower-arity value");
        return it->second;
    };
    for (int x = 0; x < A.h1(); ++x) lam.emplace(Tuple{x}, lambda_single(x));
    if (profile.extended)
        for (int y = 0; y < A.h2(); ++y) lam.emplace(Tuple{-1 - y}, lambda_single(-1 - y));

    auto mtilde_of = [&](const Tuple& t, int out_degree) {
        const int n = static_cast<int>(t.size());
        Vec acc(cx.dims[out_degree], 0);
        int deg_prefix = 0;
        for (int s = 1; s < n; ++s) {
            deg_prefix += input_degree(t[s - 1]);
            const int tt = n - s;
            Tuple left(t.begin(), t.begin() + s), right(t.begin() + s, t.end());
            const Lambda& L = get_lambda(left);
            const Lambda& Rr = get_lambda(right);
            // (-1)^{s+1} and the Koszul sign of passing lambda_t (degree 1 - t) over the first s inputs
            const long long e = (s + 1) + static_cast<long long>(1 - tt) * deg_prefix;
            Vec prod = cup(cx, L.value, L.degree, Rr.value, Rr.degree);
            vaxpy(F, acc, F.sign(e), prod);
        }
        return acc;
    };

    std::size_t total = 0;
    for (int n = 2; n <= N; ++n) {
        auto tuples = composable_tuples(A.h1_block, n);
        total += tuples.size();
        if (total > kTupleCap) throw CapExceeded("transfer_products: arity cap exceeded at arity " + std::to_string(n));
        for (const auto& t : tuples) {
            Vec mt = mtilde_of(t, 2);
            A.m[t] = apply(F, R.p[2], mt);
            Vec l = apply(F, R.h[2], mt);
            A.f[t] = vscale(F, F.neg(1), l);
            A.mtilde[t] = mt;
            lam.emplace(t, Lambda{std::move(l), 1});
        }
    }
    for (int x = 0; x < A.h1(); ++x) A.f[Tuple{x}] = i1[x];

    if (profile.extended) {
        // tuples with one degree-2 slot; the block of H^2 element y is A.h2_block[y]
        for (int n = 2; n <= profile.mixed_arity; ++n) {
            for (int pos = 0; pos < n; ++pos) {
                for (int y = 0; y < A.h2(); ++y) {
                    std::vector<Tuple> lefts = pos == 0 ? std::vector<Tuple>{Tuple{}} : composable_tuples(A.h1_block, pos);
                    std::vector<Tuple> rights =
                        pos == n - 1 ? std::vector<Tuple>{Tuple{}} : composable_tuples(A.h1_block, n - 1 - pos);
                    for (const auto& lt : lefts) {
                        if (!lt.empty() && A.h1_block[lt.back()].second != A.h2_block[y].first) continue;
                        for (const auto& rt : rights) {
                            if (!rt.empty() && A.h1_block[rt.front()].first != A.h2_block[y].second) continue;
                            Tuple t = lt;
                            t.push_back(-1 - y);
                            t.insert(t.end(), rt.begin(), rt.end());
                            Vec mt = mtilde_of(t, 3);
                            A.m_mixed[t] = apply(F, R.p[3], mt);
                            lam.emplace(t, Lambda{apply(F, R.h[3], mt), 2});
                        }
                    }
                }
            }
        }
    }
    return A;
}

StasheffReport check_stasheff(const AInfStructure& A, const std::vector<int>& arities)
{
    if (!A.extended) throw UsageError("check_stasheff: transfer must run with the extended degree profile");
    const Field& F = A.F;
    StasheffReport rep;
    rep.arities = arities;
    const int h3 = static_cast<int>(A.h3_block.size());
    for (int n : arities) {
        if (n > A.max_arity) throw Refusal("check_stasheff: arity " + std::to_string(n) + " beyond computed arity");
        for (const auto& t : composable_tuples(A.h1_block, n)) {
            ++rep.tuples_checked;
            Vec total(h3, 0);
            for (int s = 2; s <= n; ++s)
                for (int r = 0; r + s <= n; ++r) {
                    const int tt = n - r - s;
                    const int u = r + 1 + tt;
                    if (u < 2) continue;
                    Tuple inner(t.begin() + r, t.begin() + r + s);
                    Vec ms = A.m_value(inner);
                    // sign (-1)^{r + s t} and Koszul (-1)^{(2 - s) r} from passing m_s over r degree-1 inputs
                    const long long e = r + static_cast<long long>(s) * tt + static_cast<long long>(2 - s) * r;
                    for (int k = 0; k < A.h2(); ++k) {
                        if (!ms[k]) continue;
                        Tuple outer(t.begin(), t.begin() + r);
                        outer.push_back(-1 - k);
                        outer.insert(outer.end(), t.begin() + r + s, t.end());
                        auto it = A.m_mixed.find(outer);
                        if (it == A.m_mixed.end()) {
                            if (u > 3) throw Refusal("check_stasheff: mixed arity " + std::to_string(u) + " not computed");
                            continue;  // block-incompatible, value zero
                        }
                        vaxpy(F, total, F.mul(F.sign(e), ms[k]), it->second);
                    }
                }
            if (!vzero(total)) rep.violations.push_back({t, total});
        }
    }
    return rep;
}

} // namespace defring
