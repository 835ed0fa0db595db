#include "defring/present.hpp"

#include "defring/error.hpp"

#include <algorithm>
#include <memory>

namespace defring {

std::string generator_name(int r, const std::vector<Block>& blocks, int k)
{
    if (r == 1) return blocks.size() == 1 ? "x" : "x_" + std::to_string(k + 1);
    const Block b = blocks[k];
    int same = 0, pos = 0;
    for (int j = 0; j < static_cast<int>(blocks.size()); ++j)
        if (blocks[j] == b) {
            if (j == k) pos = same;
            ++same;
        }
    std::string base = "x" + std::to_string(b.first + 1) + std::to_string(b.second + 1);
    return same == 1 ? base : base + "_" + std::to_string(pos + 1);
}

PresentationTruncation relations_from_ainf(const AInfStructure& A, int N)
{
    if (N < 2) throw UsageError("presentation: truncation must be at least 2");
    if (N > A.max_arity)
        throw Refusal("presentation: truncation " + std::to_string(N) + " exceeds computed arity " + std::to_string(A.max_arity));
    const Field& F = A.F;
    PresentationTruncation P;
    P.F = F;
    P.r = A.r;
    P.N = N;
    for (int k = 0; k < A.h1(); ++k) P.gens.push_back({generator_name(A.r, A.h1_block, k), A.h1_block[k]});
    for (int y = 0; y < A.h2(); ++y) {
        Relation rel;
        rel.label = A.h2() == 1 ? "r" : "r_" + std::to_string(y + 1);
        rel.block = A.h2_block[y];
        P.rels.push_back(std::move(rel));
    }
    for (int n = 2; n <= N; ++n) {
        const Scalar sg = F.sign(static_cast<long long>(n) * (n + 1) / 2);
        for (const auto& t : composable_tuples(A.h1_block, n)) {
            const Vec mv = A.m_value(t);
            for (int y = 0; y < A.h2(); ++y) {
                if (!mv[y]) continue;
                if (*A.compose(t) != A.h2_block[y]) throw std::logic_error("relation term outside its block");
                P.rels[y].terms.push_back({F.mul(sg, mv[y]), t});
            }
        }
    }
    return P;
}

PresentationTruncation abelianize(const PresentationTruncation& P)
{
    PresentationTruncation Q = P;
    Q.commutative = true;
    for (auto& rel : Q.rels) {
        std::map<std::pair<std::size_t, Word>, Scalar> acc;
        for (auto t : rel.terms) {
            std::sort(t.word.begin(), t.word.end());
            auto& c = acc[{t.word.size(), t.word}];
            c = P.F.add(c, t.coeff);
        }
        rel.terms.clear();
        for (const auto& [key, c] : acc)
            if (c) rel.terms.push_back({c, key.second});
    }
    return Q;
}

PresentationTruncation gma_coordinate_ring(const AInfStructure& A, int N, bool multiplicity_free)
{
    if (!multiplicity_free) throw Refusal("GMA coordinate ring needs a multiplicity-free residual representation");
    auto Q = abelianize(relations_from_ainf(A, N));
    Q.cyclic_completed = true;
    return Q;
}

PresentationTruncation corrupt_relation_sign(const PresentationTruncation& P)
{
    PresentationTruncation Q = P;
    for (auto& rel : Q.rels)
        if (rel.terms.size() >= 2) {
            rel.terms[0].coeff = Q.F.neg(rel.terms[0].coeff);
            return Q;
        }
    throw UsageError("negative control: no relation with two or more terms");
}

namespace {

int word_len(const Word& w) { return (w.size() == 1 && w[0] < 0) ? 0 : static_cast<int>(w.size()); }

struct WordSpace {
    std::map<Word, std::size_t> index;
    std::vector<Word> keys;
    std::vector<int> deg;
    std::unique_ptr<EchelonSpan> ideal;

    void add(const Word& w)
    {
        index.emplace(w, keys.size());
        keys.push_back(w);
        deg.push_back(word_len(w));
    }
};

void multisets(int ngen, int len, int start, Word& cur, std::vector<Word>& out)
{
    if (static_cast<int>(cur.size()) == len) {
        out.push_back(cur);
        return;
    }
    for (int g = start; g < ngen; ++g) {
        cur.push_back(g);
        multisets(ngen, len, g, cur, out);
        cur.pop_back();
    }
}

std::vector<Block> gen_blocks(const PresentationTruncation& P)
{
    std::vector<Block> b;
    for (const auto& g : P.gens) b.push_back(g.block);
    return b;
}

// Basis of words (free) or monomials (commutative) up to degree N, ordered by degree, with the
// span of the truncated two-sided ideal.
WordSpace build_space(const PresentationTruncation& P, int N)
{
    WordSpace S;
    const auto blocks = gen_blocks(P);
    const int ng = static_cast<int>(P.gens.size());
    std::vector<std::vector<Word>> by_len(N + 1);
    if (P.commutative) {
        by_len[0].push_back({});
        for (int L = 1; L <= N; ++L) {
            Word cur;
            multisets(ng, L, 0, cur, by_len[L]);
        }
    } else {
        for (int i = 0; i < P.r; ++i) by_len[0].push_back({-(i + 1)});
        for (int L = 1; L <= N; ++L) by_len[L] = composable_tuples(blocks, L);
    }
    for (const auto& ws : by_len)
        for (const auto& w : ws) S.add(w);
    S.ideal = std::make_unique<EchelonSpan>(P.F, S.keys.size());

    const Field& F = P.F;
    for (const auto& rel : P.rels) {
        int minlen = N + 1;
        for (const auto& t : rel.terms) minlen = std::min(minlen, static_cast<int>(t.word.size()));
        if (minlen > N) continue;
        auto emit = [&](const Word& u, const Word& v) {
            Vec vec(S.keys.size(), 0);
            bool any = false;
            for (const auto& t : rel.terms) {
                Word w;
                if (P.commutative) {
                    w = u;
                    w.insert(w.end(), t.word.begin(), t.word.end());
                    std::sort(w.begin(), w.end());
                } else {
                    w = u;
                    w.insert(w.end(), t.word.begin(), t.word.end());
                    w.insert(w.end(), v.begin(), v.end());
                }
                if (static_cast<int>(w.size()) > N) continue;
                auto it = S.index.find(w);
                if (it == S.index.end()) throw std::logic_error("ideal element outside the word basis");
                vec[it->second] = F.add(vec[it->second], t.coeff);
                any = true;
            }
            if (any) S.ideal->insert(std::move(vec));
        };
        const int room = N - minlen;
        if (P.commutative) {
            for (int L = 0; L <= room; ++L)
                for (const auto& u : by_len[L]) emit(u, {});
        } else {
            const int a = rel.block.first, b = rel.block.second;
            for (int lu = 0; lu <= room; ++lu)
                for (const auto& u : by_len[lu]) {
                    if (lu == 0 ? (-u[0] - 1) != a : blocks[u.back()].second != a) continue;
                    for (int lv = 0; lu + lv <= room; ++lv)
                        for (const auto& v : by_len[lv]) {
                            if (lv == 0 ? (-v[0] - 1) != b : blocks[v.front()].first != b) continue;
                            emit(lu == 0 ? Word{} : u, lv == 0 ? Word{} : v);
                        }
                }
        }
    }
    return S;
}

} // namespace

std::vector<long long> hilbert_function(const PresentationTruncation& P, int max_degree)
{
    if (max_degree > P.N)
        throw UsageError("hilbert_function: degree " + std::to_string(max_degree) + " exceeds truncation " + std::to_string(P.N));
    WordSpace S = build_space(P, P.N);
    std::vector<long long> h(max_degree + 1, 0);
    for (std::size_t k = 0; k < S.keys.size(); ++k)
        if (S.deg[k] <= max_degree) ++h[S.deg[k]];
    // leftmost pivots sit in the lowest degree of each ideal element: initial forms
    for (std::size_t c : S.ideal->pivots())
        if (S.deg[c] <= max_degree) --h[S.deg[c]];
    return h;
}

UniversalRepCoeffs universal_rep_coeffs(const CochainComplex& cx, const AInfStructure& A, int N)
{
    if (N > A.max_arity) throw Refusal("universal representation: truncation exceeds computed arity");
    const Field& F = cx.F;
    const int d = cx.L.d, dd = cx.L.dd;
    UniversalRepCoeffs U;
    U.d = d;
    U.nb = cx.nb;
    U.N = N;
    for (int i = 0; i < cx.L.r; ++i) {
        std::vector<Matrix> ms;
        for (int x = 0; x < cx.nb; ++x) {
            Matrix m(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    if (cx.rep.block_of[a] == i && cx.rep.block_of[b] == i) m(a, b) = cx.rep.rho[x](a, b);
            ms.push_back(std::move(m));
        }
        U.coeff[{-(i + 1)}] = std::move(ms);
    }
    for (int n = 1; n <= N; ++n) {
        // eps_n = -(-1)^{n(n+1)/2}
        const Scalar eps = F.neg(F.sign(static_cast<long long>(n) * (n + 1) / 2));
        for (const auto& t : composable_tuples(A.h1_block, n)) {
            const Vec& f = A.f.at(t);
            if (vzero(f)) continue;
            std::vector<Matrix> ms;
            for (int x = 0; x < cx.nb; ++x) {
                Matrix m(d, d);
                for (int q = 0; q < dd; ++q) m(cx.L.coord_row[q], cx.L.coord_col[q]) = F.mul(eps, f[static_cast<std::size_t>(x) * dd + q]);
                ms.push_back(std::move(m));
            }
            U.coeff[t] = std::move(ms);
        }
    }
    return U;
}

UniversalHomReport verify_universal_hom(const CochainComplex& cx, const UniversalRepCoeffs& U, const PresentationTruncation& P)
{
    if (P.commutative) throw UsageError("verify_universal_hom: needs the free presentation");
    if (P.N != U.N) throw UsageError("verify_universal_hom: truncation mismatch");
    const Field& F = cx.F;
    WordSpace S = build_space(P, P.N);
    UniversalHomReport rep;
    rep.ideal_rank = S.ideal->rank();
    const auto blocks = gen_blocks(P);
    auto start = [&](const Word& w) { return w[0] < 0 ? -w[0] - 1 : blocks[w.front()].first; };
    auto end = [&](const Word& w) { return w[0] < 0 ? -w[0] - 1 : blocks[w.back()].second; };
    const int d = U.d, nb = U.nb;

    // products in the source: x * y = sum_k c_k e_k
    auto products = [&](int x, int y) {
        std::vector<std::pair<int, Scalar>> out;
        if (cx.rep.is_group()) out.push_back({cx.rep.group->mul(x, y), 1});
        else
            for (int k = 0; k < nb; ++k)
                if (Scalar c = cx.rep.algebra->c(x, y, k)) out.push_back({k, c});
        return out;
    };

    std::vector<const std::pair<const Word, std::vector<Matrix>>*> entries;
    for (const auto& kv : U.coeff) entries.push_back(&kv);

    for (int x = 0; x < nb; ++x)
        for (int y = 0; y < nb; ++y) {
            ++rep.pairs_checked;
            std::vector<Vec> defect(static_cast<std::size_t>(d) * d, Vec(S.keys.size(), 0));
            auto add_matrix = [&](const Word& w, const Matrix& m, Scalar s) {
                auto it = S.index.find(w);
                if (it == S.index.end()) throw std::logic_error("universal coefficient on an unknown word");
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        if (m(a, b)) {
                            Scalar& dst = defect[static_cast<std::size_t>(a) * d + b][it->second];
                            dst = F.add(dst, F.mul(s, m(a, b)));
                        }
            };
            for (const auto* e1 : entries) {
                const Word& w1 = e1->first;
                const int l1 = word_len(w1);
                for (const auto* e2 : entries) {
                    const Word& w2 = e2->first;
                    if (l1 + word_len(w2) > P.N) continue;
                    if (end(w1) != start(w2)) continue;
                    Word w;
                    if (w1[0] < 0) w = w2;
                    else if (w2[0] < 0) w = w1;
                    else {
                        w = w1;
                        w.insert(w.end(), w2.begin(), w2.end());
                    }
                    add_matrix(w, multiply(F, e1->second[x], e2->second[y]), 1);
                }
            }
            for (const auto& [k, c] : products(x, y))
                for (const auto* e : entries) add_matrix(e->first, e->second[k], F.neg(c));
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    ++rep.entries_checked;
                    Vec red = S.ideal->reduce(defect[static_cast<std::size_t>(a) * d + b]);
                    if (vzero(red) || !rep.pass) continue;
                    rep.pass = false;
                    rep.x = x;
                    rep.y = y;
                    rep.row = a;
                    rep.col = b;
                    for (std::size_t k = 0; k < red.size(); ++k)
                        if (red[k]) {
                            rep.word = S.keys[k];
                            rep.residue = red[k];
                            break;
                        }
                }
        }
    return rep;
}

std::size_t count_points(const PresentationTruncation& P, const TestRing& R)
{
    if (P.commutative && !R.commutative) throw UsageError("count_points: commutative presentation needs a commutative ring");
    if (R.nilpotency - 1 > P.N) throw Refusal("count_points: truncation too short for " + R.label);
    const int ng = static_cast<int>(P.gens.size()), m = R.mdim();
    const std::uint64_t nvar = static_cast<std::uint64_t>(ng) * m;
    std::uint64_t total = 1;
    for (std::uint64_t k = 0; k < nvar; ++k) {
        if (total > (1ull << 24) / R.F.p) throw CapExceeded("count_points: too many candidates");
        total *= R.F.p;
    }
    std::size_t count = 0;
    std::vector<Vec> val(ng, Vec(R.dim, 0));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (int g = ng - 1; g >= 0; --g)
            for (int t = m - 1; t >= 0; --t) {
                val[g][1 + t] = static_cast<Scalar>(rem % R.F.p);
                rem /= R.F.p;
            }
        bool ok = true;
        for (const auto& rel : P.rels) {
            Vec s(R.dim, 0);
            for (const auto& t : rel.terms) {
                Vec prod = R.one();
                for (int g : t.word) prod = R.mul(prod, val[g]);
                vaxpy(R.F, s, t.coeff, prod);
            }
            if (!vzero(s)) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
    }
    return count;
}

} // namespace defring
