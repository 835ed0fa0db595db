#include "defring/transfer.hpp"

#include "defring/error.hpp"

#include <string>

namespace defring {

MasseyValue massey_power(const CochainComplex& cx, const Retract& R, const Vec& a, const std::vector<Vec>& system)
{
    const Field& F = cx.F;
    if (system.empty()) throw ValidationError("defining system is empty");
    if (R.top < 3) throw UsageError("massey_power: retract must cover degree 2");
    for (std::size_t k = 0; k < system.size(); ++k)
        if (system[k].size() != cx.dims[1])
            throw ValidationError("defining system: tau_" + std::to_string(k + 1) + " has wrong length");
    if (a.size() != cx.dims[1]) throw ValidationError("massey_power: a has wrong length");
    if (!vzero(differential(cx, a, 1))) throw ValidationError("massey_power: a is not a cocycle");
    if (system[0] != a) throw ValidationError("defining system: tau_1 differs from a");
    auto products = [&](std::size_t n) {
        // sum_{j=1}^{n-1} tau_j tau_{n-j}, 1-based
        Vec s(cx.dims[2], 0);
        for (std::size_t j = 1; j < n; ++j) s = vadd(F, s, cup(cx, system[j - 1], 1, system[n - j - 1], 1));
        return s;
    };
    for (std::size_t i = 2; i <= system.size(); ++i)
        if (differential(cx, system[i - 1], 1) != products(i))
            throw ValidationError("defining system: relation fails at tau_" + std::to_string(i));
    MasseyValue out;
    out.c = products(system.size() + 1);
    if (!vzero(differential(cx, out.c, 2))) throw std::logic_error("massey_power: c is not a cocycle");
    out.cls = apply(F, R.p[2], out.c);
    return out;
}

MasseyFromAInf massey_from_ainf(const CochainComplex& cx, const Retract& R, const AInfStructure& A, const Tuple& tuple)
{
    const Field& F = A.F;
    const int n = static_cast<int>(tuple.size());
    if (n < 2) throw UsageError("massey_from_ainf: tuple must have at least two entries");
    if (n > A.max_arity) throw Refusal("massey_from_ainf: arity " + std::to_string(n) + " beyond computed arity");
    for (int x : tuple)
        if (x < 0 || x >= A.h1()) throw UsageError("massey_from_ainf: H^1 index out of range");
    if (!A.compose(tuple)) throw UsageError("massey_from_ainf: tuple is not block-composable");

    // hypothesis: every proper consecutive sub-product vanishes
    for (int k = 2; k < n; ++k)
        for (int i = 0; i + k <= n; ++i) {
            Tuple sub(tuple.begin() + i, tuple.begin() + i + k);
            if (!vzero(A.m_value(sub)))
                throw Refusal("massey_from_ainf: m_" + std::to_string(k) + " is nonzero on entries " + std::to_string(i + 1) +
                              ".." + std::to_string(i + k));
        }

    MasseyFromAInf out;
    // sigma(i,j) = s_k f_k(a_i..a_j), s_k = (-1)^{k + k(k+1)/2}
    auto sigma = [&](int i, int j) {
        const int k = j - i + 1;
        Tuple sub(tuple.begin() + (i - 1), tuple.begin() + j);
        return vscale(F, F.sign(k + k * (k + 1) / 2), A.f.at(sub));
    };
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            if (!(i == 1 && j == n)) out.system[{i, j}] = sigma(i, j);

    for (const auto& [ij, s] : out.system) {
        auto [i, j] = ij;
        Vec rhs(cx.dims[2], 0);
        for (int l = i; l < j; ++l) rhs = vadd(F, rhs, cup(cx, out.system.at({i, l}), 1, out.system.at({l + 1, j}), 1));
        if (differential(cx, s, 1) != rhs)
            throw std::logic_error("massey_from_ainf: induced system fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }

    out.c = Vec(cx.dims[2], 0);
    for (int l = 1; l < n; ++l) out.c = vadd(F, out.c, cup(cx, out.system.at({1, l}), 1, out.system.at({l + 1, n}), 1));
    out.value = apply(F, R.p[2], out.c);
    out.b = (n + 1) * (n + 2) / 2;
    const Scalar sb = F.sign(out.b);
    out.expected = vscale(F, sb, A.m_value(tuple));
    out.sign_checked = out.value == out.expected;

    out.primitive = apply(F, R.h[2], out.c);
    Vec lhs = vsub(F, out.c, vscale(F, sb, apply(F, R.i[2], A.m_value(tuple))));
    out.coboundary_checked = lhs == differential(cx, out.primitive, 1);
    auto mt = A.mtilde.find(tuple);
    out.matches_mtilde = mt != A.mtilde.end() && out.c == vscale(F, sb, mt->second);
    return out;
}

} // namespace defring
