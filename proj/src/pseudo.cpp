#include "defring/pseudo.hpp"

#include "defring/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace defring {

namespace {

using Counts = std::vector<int>;   // arrow multiplicities

Counts counts_of(std::size_t nA, const std::vector<int>& arrows)
{
    Counts c(nA, 0);
    for (int a : arrows) ++c[a];
    return c;
}

void add_to(Counts& x, const Counts& y)
{
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
}

int total(const Counts& c) { return std::accumulate(c.begin(), c.end(), 0); }

std::vector<std::vector<int>> arrows_between(const Quiver& q)
{
    std::vector<std::vector<int>> out(static_cast<std::size_t>(q.r) * q.r);
    for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a) out[q.arrows[a].from * q.r + q.arrows[a].to].push_back(a);
    return out;
}

// min/max number of simple cycles in a decomposition of an arrow multiset
class Decomposer {
public:
    Decomposer(std::size_t nA, const CycleData& cd) : nA_(nA), cd_(cd), by_arrow_(nA)
    {
        for (int c = 0; c < static_cast<int>(cd.cycles.size()); ++c)
            for (int a : cd.cycles[c]) by_arrow_[a].push_back(c);
    }

    struct Info {
        int lo = -1, hi = -1;      // -1: not decomposable
        Word witness;              // a decomposition of degree lo
    };

    const Info& info(const Counts& alpha)
    {
        auto it = memo_.find(alpha);
        if (it != memo_.end()) return it->second;
        Info out;
        std::size_t a0 = 0;
        while (a0 < nA_ && alpha[a0] == 0) ++a0;
        if (a0 == nA_) {
            out.lo = out.hi = 0;
        } else {
            for (int c : by_arrow_[a0]) {
                Counts rest = alpha;
                bool fits = true;
                for (int a : cd_.cycles[c])
                    if (--rest[a] < 0) fits = false;
                if (!fits) continue;
                const Info sub = info(rest);   // copy: the memo may rehash
                if (sub.lo < 0) continue;
                if (out.lo < 0 || sub.lo + 1 < out.lo) {
                    out.lo = sub.lo + 1;
                    out.witness = sub.witness;
                    out.witness.push_back(c);
                    std::sort(out.witness.begin(), out.witness.end());
                }
                out.hi = std::max(out.hi, sub.hi + 1);
            }
        }
        return memo_.emplace(alpha, std::move(out)).first->second;
    }

private:
    std::size_t nA_;
    const CycleData& cd_;
    std::vector<std::vector<int>> by_arrow_;
    std::map<Counts, Info> memo_;
};

// multisets of {0..n-1} of size exactly d, lexicographic
void multisets(int n, int d, int start, Word& cur, const std::function<void(const Word&)>& emit)
{
    if (static_cast<int>(cur.size()) == d) {
        emit(cur);
        return;
    }
    for (int g = start; g < n; ++g) {
        cur.push_back(g);
        multisets(n, d, g, cur, emit);
        cur.pop_back();
    }
}

std::uint64_t binom_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

Counts cycle_counts(std::size_t nA, const CycleData& cd, const Word& mon)
{
    Counts c(nA, 0);
    for (int y : mon)
        for (int a : cd.cycles[y]) ++c[a];
    return c;
}

std::vector<int> weight_of(const Quiver& q, const Counts& c)
{
    std::vector<int> w(q.r, 0);
    for (std::size_t a = 0; a < c.size(); ++a) {
        w[q.arrows[a].from] += c[a];
        w[q.arrows[a].to] -= c[a];
    }
    return w;
}

struct Walk {
    Counts arrows;
    Scalar coeff = 0;
};

struct Family {
    std::string label;
    Block block;
    std::vector<int> kappa;
    std::vector<Walk> walks;
};

std::string path_name(const Quiver& q, const std::vector<int>& p)
{
    std::string s;
    for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "*" : "") + q.arrows[p[k]].name;
    return s;
}

std::vector<Family> build_families(const Quiver& q, const CycleData& cd)
{
    const std::size_t nA = q.arrows.size();
    std::vector<Family> out;
    for (const auto& rel : q.relations) {
        if (rel.terms.empty()) continue;
        auto it = cd.complements.find(rel.block);
        if (it == cd.complements.end()) continue;
        for (const auto& kappa : it->second) {
            Family f;
            f.label = rel.label + (kappa.empty() ? "" : "." + path_name(q, kappa));
            f.block = rel.block;
            f.kappa = kappa;
            std::map<Counts, Scalar> acc;
            const Counts kc = counts_of(nA, kappa);
            for (const auto& t : rel.terms) {
                Counts c = counts_of(nA, t.word);
                add_to(c, kc);
                acc[c] = q.F.add(acc[c], t.coeff);
            }
            for (auto& [c, v] : acc)
                if (v) f.walks.push_back({c, v});
            if (!f.walks.empty()) out.push_back(std::move(f));
        }
    }
    return out;
}

Matrix linear_parts(const Quiver& q, const CycleData& cd, const std::vector<Family>& fams)
{
    std::map<Counts, int> single;
    for (int c = 0; c < static_cast<int>(cd.cycles.size()); ++c) single[counts_of(q.arrows.size(), cd.cycles[c])] = c;
    Matrix L(fams.size(), cd.cycles.size());
    for (std::size_t f = 0; f < fams.size(); ++f)
        for (const auto& w : fams[f].walks) {
            auto it = single.find(w.arrows);
            if (it != single.end()) L(f, it->second) = q.F.add(L(f, it->second), w.coeff);
        }
    return L;
}

std::size_t column_rank(const Field& F, const Matrix& L, const std::vector<int>& cols)
{
    if (cols.empty() || L.rows == 0) return 0;
    Matrix sub(L.rows, cols.size());
    for (std::size_t i = 0; i < L.rows; ++i)
        for (std::size_t k = 0; k < cols.size(); ++k) sub(i, k) = L(i, cols[k]);
    return rank(F, sub);
}

// truncated power series in eps
using Poly = Vec;

Poly pmul(const Field& F, const Poly& x, const Poly& y)
{
    Poly z(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) continue;
        for (std::size_t j = 0; i + j < z.size(); ++j)
            if (y[j]) z[i + j] = F.add(z[i + j], F.mul(x[i], y[j]));
    }
    return z;
}

Poly cycle_value(const PseudoHom& h, int c, std::size_t len)
{
    Poly v(len, 0);
    for (std::size_t k = 0; k < h.values[c].size() && k + 1 < len; ++k) v[k + 1] = h.values[c][k];
    return v;
}

Poly monomial_value(const Field& F, const PseudoHom& h, const Word& mon, std::size_t len)
{
    Poly v(len, 0);
    v[0] = 1;
    for (int c : mon) v = pmul(F, v, cycle_value(h, c, len));
    return v;
}

} // namespace

int Quiver::h1(int i, int j) const
{
    int n = 0;
    for (const auto& a : arrows)
        if (a.from == i && a.to == j) ++n;
    return n;
}

Quiver build_quiver(const AInfStructure& A, int arity)
{
    Quiver q;
    q.F = A.F;
    q.r = A.r;
    for (int k = 0; k < A.h1(); ++k) q.arrows.push_back({generator_name(A.r, A.h1_block, k), A.h1_block[k].first, A.h1_block[k].second});
    q.h2.assign(A.r, std::vector<int>(A.r, 0));
    for (const auto& b : A.h2_block) ++q.h2[b.first][b.second];
    q.relations = relations_from_ainf(A, arity).rels;
    q.relation_arity = arity;
    return q;
}

namespace {

void check_table(const std::vector<std::vector<int>>& t, int r, const char* what)
{
    if (static_cast<int>(t.size()) != r) throw ValidationError(std::string("quiver: ") + what + " must be r x r");
    for (const auto& row : t) {
        if (static_cast<int>(row.size()) != r) throw ValidationError(std::string("quiver: ") + what + " must be r x r");
        for (int v : row)
            if (v < 0) throw ValidationError(std::string("quiver: ") + what + " entries must be nonnegative");
    }
}

void name_arrows(Quiver& q)
{
    std::vector<Block> blocks;
    for (const auto& a : q.arrows) blocks.push_back({a.from, a.to});
    for (std::size_t k = 0; k < q.arrows.size(); ++k) q.arrows[k].name = generator_name(q.r, blocks, static_cast<int>(k));
}

} // namespace

Quiver build_quiver(const Field& F, const std::vector<std::vector<int>>& h1, const std::vector<std::vector<int>>& h2)
{
    const int r = static_cast<int>(h1.size());
    if (r < 1) throw ValidationError("quiver: r must be at least 1");
    check_table(h1, r, "h1");
    Quiver q;
    q.F = F;
    q.r = r;
    if (h2.empty())
        q.h2.assign(r, std::vector<int>(r, 0));
    else {
        check_table(h2, r, "h2");
        q.h2 = h2;
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < h1[i][j]; ++k) q.arrows.push_back({"", i, j});
    name_arrows(q);
    q.relation_arity = -1;
    return q;
}

Quiver load_quiver(const nlohmann::json& j)
{
    if (!j.is_object()) throw ValidationError("quiver: document must be an object");
    for (const char* key : {"prime", "r", "h1"})
        if (!j.contains(key)) throw ValidationError(std::string("quiver: missing field '") + key + "'");
    const auto p = j.at("prime").get<long long>();
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw ValidationError("quiver: prime is not prime");
    const Field F(static_cast<Scalar>(p));
    const int r = j.at("r").get<int>();
    if (r < 1) throw ValidationError("quiver: r must be at least 1");
    auto h1 = j.at("h1").get<std::vector<std::vector<int>>>();
    std::vector<std::vector<int>> h2;
    if (j.contains("h2")) h2 = j.at("h2").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(h1.size()) != r) throw ValidationError("quiver: h1 must be r x r");
    Quiver q = build_quiver(F, h1, h2);

    std::map<std::string, int> by_name;
    for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a) by_name[q.arrows[a].name] = a;
    std::map<Block, int> used;
    if (j.contains("relations")) {
        int idx = 0;
        for (const auto& jr : j.at("relations")) {
            ++idx;
            const std::string where = "quiver: relation " + std::to_string(idx);
            auto bl = jr.at("block").get<std::vector<int>>();
            if (bl.size() != 2 || bl[0] < 1 || bl[0] > r || bl[1] < 1 || bl[1] > r) throw ValidationError(where + ": bad block");
            Relation rel;
            rel.block = {bl[0] - 1, bl[1] - 1};
            rel.label = jr.value("label", "r_" + std::to_string(idx));
            if (++used[rel.block] > q.h2[rel.block.first][rel.block.second])
                throw ValidationError(where + ": more relations in block than h2 allows");
            for (const auto& jt : jr.at("terms")) {
                Term t;
                t.coeff = F.from_int(jt.at("coeff").get<long long>());
                for (const auto& nm : jt.at("word")) {
                    auto it = by_name.find(nm.get<std::string>());
                    if (it == by_name.end()) throw ValidationError(where + ": unknown arrow '" + nm.get<std::string>() + "'");
                    t.word.push_back(it->second);
                }
                if (t.word.size() < 2) throw ValidationError(where + ": words need at least two arrows");
                int at = rel.block.first;
                for (int a : t.word) {
                    if (q.arrows[a].from != at) throw ValidationError(where + ": word is not a path");
                    at = q.arrows[a].to;
                }
                if (at != rel.block.second) throw ValidationError(where + ": word does not end at the block column");
                if (t.coeff) rel.terms.push_back(std::move(t));
            }
            q.relations.push_back(std::move(rel));
        }
    }
    return q;
}

std::vector<std::vector<int>> strongly_connected_components(const Quiver& q)
{
    const int r = q.r;
    std::vector<std::vector<char>> reach(r, std::vector<char>(r, 0));
    for (int i = 0; i < r; ++i) reach[i][i] = 1;
    for (const auto& a : q.arrows) reach[a.from][a.to] = 1;
    for (int k = 0; k < r; ++k)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    std::vector<int> comp(r, -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < r; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> c;
        for (int j = i; j < r; ++j)
            if (reach[i][j] && reach[j][i]) {
                comp[j] = static_cast<int>(out.size());
                c.push_back(j);
            }
        out.push_back(std::move(c));
    }
    return out;
}

CycleData enumerate_cycles(const Quiver& q, std::size_t cap)
{
    const int r = q.r;
    const auto between = arrows_between(q);
    auto has = [&](int i, int j) { return !between[i * r + j].empty(); };
    CycleData cd;

    std::vector<int> path;
    std::vector<char> on(r, 0);
    std::function<void(int, int)> grow = [&](int s, int v) {
        for (int w = s; w < r; ++w) {
            if (!has(v, w)) continue;
            if (w == s) {
                cd.vertex_cycles.push_back(path);
                if (cd.vertex_cycles.size() > cap) throw CapExceeded("cycle enumeration exceeds cap");
                continue;
            }
            if (on[w]) continue;
            on[w] = 1;
            path.push_back(w);
            grow(s, w);
            path.pop_back();
            on[w] = 0;
        }
    };
    for (int s = 0; s < r; ++s) {
        path = {s};
        on[s] = 1;
        grow(s, s);
        on[s] = 0;
    }
    std::stable_sort(cd.vertex_cycles.begin(), cd.vertex_cycles.end(),
                     [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });

    for (int g = 0; g < static_cast<int>(cd.vertex_cycles.size()); ++g) {
        const auto& vc = cd.vertex_cycles[g];
        const std::size_t l = vc.size();
        cd.closed_paths += l;
        std::vector<int> cur;
        std::function<void(std::size_t)> pick = [&](std::size_t k) {
            if (k == l) {
                cd.cycles.push_back(cur);
                cd.cycle_of.push_back(g);
                cd.names.push_back(path_name(q, cur));
                if (cd.cycles.size() > cap) throw CapExceeded("cycle enumeration exceeds cap");
                return;
            }
            for (int a : between[vc[k] * r + vc[(k + 1) % l]]) {
                cur.push_back(a);
                pick(k + 1);
                cur.pop_back();
            }
        };
        pick(0);
    }

    // closing paths b -> a for each block (a,b)
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            auto& lst = cd.complements[{a, b}];
            if (a == b) {
                lst.push_back({});
                continue;
            }
            std::vector<char> seen(r, 0);
            std::vector<int> cur;
            std::function<void(int)> walk = [&](int v) {
                if (v == a) {
                    lst.push_back(cur);
                    if (lst.size() > cap) throw CapExceeded("closing path enumeration exceeds cap");
                    return;
                }
                for (int w = 0; w < r; ++w) {
                    if (seen[w] || !has(v, w)) continue;
                    seen[w] = 1;
                    for (int arr : between[v * r + w]) {
                        cur.push_back(arr);
                        walk(w);
                        cur.pop_back();
                    }
                    seen[w] = 0;
                }
            };
            seen[b] = 1;
            walk(b);
        }
    return cd;
}

namespace {

// Cycle multisets grouped by arrow multiset, up to the given arrow degree.
std::map<Counts, std::vector<Word>> fibers_to(const Quiver& q, const CycleData& cd, int bound, std::size_t cap, bool& partial)
{
    const std::size_t nA = q.arrows.size();
    const int nc = static_cast<int>(cd.cycles.size());
    std::map<Counts, std::vector<Word>> fib;
    std::size_t seen = 0;
    Word cur;
    Counts acc(nA, 0);
    std::function<void(int, int)> rec = [&](int start, int len) {
        if (!cur.empty()) {
            fib[acc].push_back(cur);
            if (++seen > cap) {
                partial = true;
                return;
            }
        }
        for (int c = start; c < nc && !partial; ++c) {
            const int l = static_cast<int>(cd.length(c));
            if (len + l > bound) continue;
            cur.push_back(c);
            for (int a : cd.cycles[c]) ++acc[a];
            rec(c, len + l);
            for (int a : cd.cycles[c]) --acc[a];
            cur.pop_back();
        }
    };
    rec(0, 0);
    return fib;
}

bool share(const Word& u, const Word& v)
{
    std::size_t i = 0, j = 0;
    while (i < u.size() && j < v.size()) {
        if (u[i] == v[j]) return true;
        if (u[i] < v[j]) ++i; else ++j;
    }
    return false;
}

} // namespace

H2Generators h2_monoid_generators(const Quiver& q, const CycleData& cd, int bound, std::size_t cap)
{
    H2Generators out;
    out.bound = bound > 0 ? bound : 2 * q.r;
    auto fib = fibers_to(q, cd, out.bound, cap, out.partial);
    for (const auto& [alpha, members] : fib) {
        if (members.size() < 2) continue;
        ++out.fibers;
        const std::size_t s = members.size();
        std::vector<std::size_t> parent(s);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i + 1; j < s; ++j)
                if (share(members[i], members[j])) parent[find(i)] = find(j);
        std::map<std::size_t, Word> rep;   // component root -> smallest member
        for (std::size_t i = 0; i < s; ++i) {
            auto& w = rep[find(i)];
            if (w.empty() || members[i] < w) w = members[i];
        }
        std::vector<Word> reps;
        for (auto& [root, w] : rep) reps.push_back(w);
        std::sort(reps.begin(), reps.end());
        for (std::size_t k = 1; k < reps.size(); ++k) out.generators.push_back({reps[0], reps[k], total(alpha)});
    }
    std::stable_sort(out.generators.begin(), out.generators.end(), [](const auto& a, const auto& b) {
        return a.arrow_degree != b.arrow_degree ? a.arrow_degree < b.arrow_degree : std::tie(a.lhs, a.rhs) < std::tie(b.lhs, b.rhs);
    });
    return out;
}

namespace {

struct CycleRing {
    std::vector<Word> mons;            // degree ordered
    std::vector<int> mdeg;
    std::vector<int> prefix;           // index of mons[k] without its last cycle
    std::vector<int> alpha_of;         // basis index, -1 when the monomial lies in m^{N+1} modulo K
    std::vector<Counts> alphas;        // arrow multisets with max decomposition degree <= N
    std::vector<int> adeg;             // that max degree; alphas sorted by it
    std::vector<std::vector<int>> members;
    std::vector<long long> hilbert, kernel;
};

CycleRing build_ring(const Quiver& q, const CycleData& cd, Decomposer& dec, int N, std::uint64_t cap)
{
    const std::size_t nA = q.arrows.size();
    const int nc = static_cast<int>(cd.cycles.size());
    if (binom_capped(static_cast<std::uint64_t>(nc) + N, N, cap) > cap)
        throw CapExceeded("cycle monomials of degree <= " + std::to_string(N) + " exceed cap");
    CycleRing R;
    std::map<Word, int> index;
    for (int d = 0; d <= N; ++d) {
        Word cur;
        multisets(nc, d, 0, cur, [&](const Word& w) {
            index[w] = static_cast<int>(R.mons.size());
            R.mons.push_back(w);
            R.mdeg.push_back(d);
            R.prefix.push_back(d == 0 ? -1 : index.at(Word(w.begin(), w.end() - 1)));
        });
    }
    std::map<Counts, std::vector<int>> groups;
    for (int k = 0; k < static_cast<int>(R.mons.size()); ++k) groups[cycle_counts(nA, cd, R.mons[k])].push_back(k);
    std::vector<std::pair<int, Counts>> keep;
    for (const auto& [alpha, mem] : groups) {
        const int hi = dec.info(alpha).hi;
        if (hi <= N) keep.push_back({hi, alpha});
    }
    std::stable_sort(keep.begin(), keep.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    R.alpha_of.assign(R.mons.size(), -1);
    R.hilbert.assign(N + 1, 0);
    R.kernel.assign(N + 1, 0);
    for (const auto& [hi, alpha] : keep) {
        const int id = static_cast<int>(R.alphas.size());
        R.alphas.push_back(alpha);
        R.adeg.push_back(hi);
        R.members.push_back(groups.at(alpha));
        for (int k : groups.at(alpha)) R.alpha_of[k] = id;
        ++R.hilbert[hi];
    }
    for (int d : R.mdeg) ++R.kernel[d];
    for (int n = 0; n <= N; ++n) R.kernel[n] -= R.hilbert[n];
    return R;
}

std::size_t kmk_rank(const Quiver& q, const CycleData& cd, int bound, bool& partial)
{
    auto fib = fibers_to(q, cd, bound, 200000, partial);
    std::size_t total_dim = 0;
    const Field& F = q.F;
    for (const auto& [alpha, mem] : fib) {
        const std::size_t s = mem.size();
        if (s < 2) continue;
        // (m K)_alpha = span of differences of members sharing a cycle
        EchelonSpan mk(F, s);
        std::set<int> cyc;
        for (const auto& u : mem) cyc.insert(u.begin(), u.end());
        for (int c : cyc) {
            int first = -1;
            for (std::size_t i = 0; i < s; ++i) {
                if (!std::binary_search(mem[i].begin(), mem[i].end(), c)) continue;
                if (first < 0) {
                    first = static_cast<int>(i);
                    continue;
                }
                Vec v(s, 0);
                v[i] = 1;
                v[first] = F.neg(1);
                mk.insert(std::move(v));
            }
        }
        total_dim += (s - 1) - mk.rank();
    }
    return total_dim;
}

} // namespace

R1DReport r1d_presentation(const Quiver& q, const CycleData& cd, int N, int bound)
{
    if (N < 1) throw UsageError("r1d_presentation: truncation must be at least 1");
    R1DReport out;
    out.N = N;
    out.generators = cd.cycles.size();
    Decomposer dec(q.arrows.size(), cd);
    auto R = build_ring(q, cd, dec, N, 2000000);
    out.hilbert = R.hilbert;
    out.kernel_dims = R.kernel;
    auto h2 = h2_monoid_generators(q, cd, bound);
    out.bound = h2.bound;
    out.h2_count = h2.generators.size();
    bool partial = false;
    out.k_mod_mk = kmk_rank(q, cd, h2.bound, partial);
    out.agree = !partial && !h2.partial && out.k_mod_mk == out.h2_count;
    return out;
}

KrullR1D krull_dim_r1d(const Quiver& q)
{
    KrullR1D out;
    out.components = strongly_connected_components(q);
    for (const auto& c : out.components) {
        long long d = 1 - static_cast<long long>(c.size());
        for (int i : c)
            for (int j : c) d += q.h1(i, j);
        out.dims.push_back(d);
        out.total += d;
    }
    return out;
}

namespace {

std::optional<GmaCheck> gma_check(const Quiver& q, const std::vector<Family>& fams, int D)
{
    const std::size_t nA = q.arrows.size();
    if (binom_capped(nA + D, D, 40000) > 40000) return std::nullopt;
    const Field& F = q.F;
    std::vector<Word> mons;
    for (int d = 0; d <= D; ++d) {
        Word cur;
        multisets(static_cast<int>(nA), d, 0, cur, [&](const Word& w) { mons.push_back(w); });
    }
    std::map<Counts, int> zero_index;
    std::vector<int> zdeg;
    std::map<std::vector<int>, std::vector<Counts>> by_weight;
    for (const auto& m : mons) {
        Counts c = counts_of(nA, m);
        auto w = weight_of(q, c);
        if (std::all_of(w.begin(), w.end(), [](int x) { return x == 0; })) {
            zero_index[c] = static_cast<int>(zdeg.size());
            zdeg.push_back(static_cast<int>(m.size()));
        }
        by_weight[w].push_back(std::move(c));
    }
    const std::size_t dim = zdeg.size();
    EchelonSpan inv(F, dim), pres(F, dim), joint(F, dim);
    auto place = [&](const Counts& base, const std::vector<std::pair<Counts, Scalar>>& terms) {
        Vec v(dim, 0);
        for (const auto& [c, s] : terms) {
            Counts x = base;
            add_to(x, c);
            if (total(x) > D) continue;
            auto it = zero_index.find(x);
            if (it == zero_index.end()) throw std::logic_error("GMA check: product is not weight zero");
            v[it->second] = F.add(v[it->second], s);
        }
        return v;
    };
    for (const auto& rel : q.relations) {
        if (rel.terms.empty()) continue;
        std::vector<std::pair<Counts, Scalar>> terms;
        for (const auto& t : rel.terms) terms.push_back({counts_of(nA, t.word), t.coeff});
        std::vector<int> need(q.r, 0);
        need[rel.block.second] += 1;
        need[rel.block.first] -= 1;
        auto it = by_weight.find(need);
        if (it == by_weight.end()) continue;
        for (const auto& u : it->second) {
            Vec v = place(u, terms);
            if (vzero(v)) continue;
            inv.insert(v);
            joint.insert(v);
        }
    }
    const auto& zeros = by_weight[std::vector<int>(q.r, 0)];
    for (const auto& f : fams) {
        std::vector<std::pair<Counts, Scalar>> terms;
        for (const auto& w : f.walks) terms.push_back({w.arrows, w.coeff});
        for (const auto& v0 : zeros) {
            Vec v = place(v0, terms);
            if (vzero(v)) continue;
            pres.insert(v);
            joint.insert(v);
        }
    }
    GmaCheck g;
    g.arrow_degree = D;
    g.invariant_rank = inv.rank();
    g.presentation_rank = pres.rank();
    g.joint_rank = joint.rank();
    g.agree = g.invariant_rank == g.presentation_rank && g.joint_rank == g.invariant_rank;
    g.hilbert.assign(D + 1, 0);
    for (int d : zdeg) ++g.hilbert[d];
    for (std::size_t c : inv.pivots()) --g.hilbert[zdeg[c]];
    return g;
}

} // namespace

PseudoPresentation rd_presentation(const Quiver& q, int N, int gma_degree, int h2_bound)
{
    if (N < 1) throw UsageError("rd_presentation: truncation must be at least 1");
    if (q.relation_arity >= 0 && q.relation_arity < N)
        throw Refusal("rd_presentation: relation arity " + std::to_string(q.relation_arity) + " below truncation " + std::to_string(N));
    const Field& F = q.F;
    const std::size_t nA = q.arrows.size();
    PseudoPresentation P;
    P.F = F;
    P.r = q.r;
    P.N = N;
    P.complete = q.relation_arity < 0 || q.relation_arity >= q.r * N;
    P.cd = enumerate_cycles(q);
    P.h2 = h2_monoid_generators(q, P.cd, h2_bound);
    Decomposer dec(nA, P.cd);
    auto R = build_ring(q, P.cd, dec, N, 2000000);
    P.monomials = R.mons;
    P.mdeg = R.mdeg;
    P.r1d_hilbert = R.hilbert;

    auto fams = build_families(q, P.cd);
    P.linear = linear_parts(q, P.cd, fams);
    for (const auto& f : fams) {
        RelationFamily rf;
        rf.label = f.label;
        rf.block = f.block;
        rf.kappa = f.kappa;
        for (const auto& w : f.walks) {
            const auto& info = dec.info(w.arrows);
            if (info.lo < 0) throw std::logic_error("relation walk is not a union of cycles");
            if (info.hi > N) continue;
            rf.poly[info.witness] = F.add(rf.poly[info.witness], w.coeff);
        }
        P.families.push_back(std::move(rf));
    }

    // ideal in R1D/m^{N+1}, coordinates = arrow multisets with max degree <= N
    std::map<Counts, int> aidx;
    for (int k = 0; k < static_cast<int>(R.alphas.size()); ++k) aidx[R.alphas[k]] = k;
    const std::size_t dim = R.alphas.size();
    if (static_cast<double>(dim) * static_cast<double>(fams.size()) * static_cast<double>(dim) > 4e9)
        throw CapExceeded("relation ideal exceeds cap");
    EchelonSpan ideal(F, dim);
    std::vector<Counts> mult = R.alphas;
    for (const auto& f : fams)
        for (const auto& u : mult) {
            Vec v(dim, 0);
            for (const auto& w : f.walks) {
                Counts x = u;
                add_to(x, w.arrows);
                auto it = aidx.find(x);
                if (it == aidx.end()) continue;   // max degree beyond N, or beyond every enumerated multiset
                v[it->second] = F.add(v[it->second], w.coeff);
            }
            if (!vzero(v)) ideal.insert(std::move(v));
        }
    P.hilbert = R.hilbert;
    for (std::size_t c : ideal.pivots()) --P.hilbert[R.adeg[c]];
    P.ideal = ideal.basis();
    P.alpha_of = R.alpha_of;
    P.alpha_deg = R.adeg;
    for (const auto& m : R.members) P.alpha_first.push_back(m.front());
    if (gma_degree >= 0) P.gma = gma_check(q, fams, gma_degree == 0 ? N : gma_degree);
    return P;
}

TangentReport tangent_space(const Quiver& q, const CycleData& cd)
{
    std::size_t maxlen = 0;
    for (const auto& c : cd.cycles) maxlen = std::max(maxlen, c.size());
    if (q.relation_arity >= 0 && q.relation_arity < static_cast<int>(maxlen))
        throw Refusal("tangent_space: relation arity " + std::to_string(q.relation_arity) + " below longest cycle " +
                      std::to_string(maxlen));
    const Field& F = q.F;
    const Matrix L = linear_parts(q, cd, build_families(q, cd));
    TangentReport out;
    std::vector<int> all(cd.cycles.size());
    std::iota(all.begin(), all.end(), 0);
    out.total = all.size() - column_rank(F, L, all);
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= maxlen; ++k) {
        std::vector<int> cols;
        for (int c : all)
            if (cd.length(c) <= k) cols.push_back(c);
        const std::size_t fil = cols.size() - column_rank(F, L, cols);
        out.filtration.push_back(fil - prev);
        prev = fil;
    }
    for (int g = 0; g < static_cast<int>(cd.vertex_cycles.size()); ++g) {
        std::vector<int> cols;
        for (int c : all)
            if (cd.cycle_of[c] == g) cols.push_back(c);
        out.per_cycle_domain.push_back(cols.size());
        out.per_cycle.push_back(cols.size() - column_rank(F, L, cols));
    }
    return out;
}

DimensionBounds dimension_bounds(const Quiver& q, const CycleData& cd)
{
    DimensionBounds out;
    const auto comps = strongly_connected_components(q);
    std::vector<int> comp_of(q.r, 0);
    for (int k = 0; k < static_cast<int>(comps.size()); ++k)
        for (int v : comps[k]) comp_of[v] = k;
    const auto kr = krull_dim_r1d(q);
    std::vector<long long> sub(comps.size(), 0);
    out.tangent_upper = static_cast<long long>(cd.cycles.size());
    long long tsub = 0;
    for (const auto& vc : cd.vertex_cycles) {
        const int l = static_cast<int>(vc.size());
        long long s = 0;
        // arc of k arrows from position st; its complement closes it
        for (int st = 0; st < l; ++st)
            for (int k = 1; k <= l; ++k) {
                const int a = vc[st], b = vc[(st + k) % l];
                long long h1c = 1;
                for (int t = k; t < l; ++t) h1c *= q.h1(vc[(st + t) % l], vc[(st + t + 1) % l]);
                s += q.h2[a][b] * h1c;
            }
        tsub += s;
        sub[comp_of[vc[0]]] += s;
    }
    out.tangent_lower = out.tangent_upper - tsub;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        out.krull_upper.push_back(kr.dims[k]);
        out.krull_lower.push_back(kr.dims[k] - sub[k]);
        out.krull_upper_total += kr.dims[k];
        out.krull_lower_total += kr.dims[k] - sub[k];
    }
    return out;
}

namespace {

void check_shape(const PseudoPresentation& P, const PseudoHom& h)
{
    if (h.n < 0) throw ValidationError("pseudo hom: negative order");
    if (h.values.size() != P.cd.cycles.size()) throw ValidationError("pseudo hom: one value per cycle generator expected");
    for (const auto& v : h.values)
        if (static_cast<int>(v.size()) != h.n) throw ValidationError("pseudo hom: values need n coefficients");
        else
            for (Scalar s : v)
                if (s >= P.F.p) throw ValidationError("pseudo hom: coefficient outside the field");
}

std::vector<Poly> monomial_values(const PseudoPresentation& P, const PseudoHom& h, std::size_t len)
{
    std::vector<Poly> val(P.monomials.size());
    for (std::size_t k = 0; k < P.monomials.size(); ++k) {
        if (P.mdeg[k] == 0) {
            val[k] = Poly(len, 0);
            val[k][0] = 1;
            continue;
        }
        Word pre(P.monomials[k].begin(), P.monomials[k].end() - 1);
        const Poly& base = val[std::lower_bound(P.monomials.begin(), P.monomials.begin() + k, pre,
                                                [](const Word& a, const Word& b) {
                                                    return a.size() != b.size() ? a.size() < b.size() : a < b;
                                                }) - P.monomials.begin()];
        val[k] = pmul(P.F, base, cycle_value(h, P.monomials[k].back(), len));
    }
    return val;
}

// coefficients [from, to) of K + m^{N+1} and of every relation ideal row
bool rows_vanish(const PseudoPresentation& P, const std::vector<Poly>& val, std::size_t from, std::size_t to)
{
    for (std::size_t k = 0; k < val.size(); ++k) {
        const int a = P.alpha_of[k];
        for (std::size_t e = from; e < to; ++e)
            if (a < 0 ? val[k][e] != 0 : val[k][e] != val[P.alpha_first[a]][e]) return false;
    }
    for (const auto& row : P.ideal)
        for (std::size_t e = from; e < to; ++e) {
            Scalar s = 0;
            for (std::size_t a = 0; a < row.size(); ++a)
                if (row[a]) s = P.F.add(s, P.F.mul(row[a], val[P.alpha_first[a]][e]));
            if (s) return false;
        }
    return true;
}

std::vector<PseudoHom> extensions(const PseudoPresentation& P, const PseudoHom& h, std::uint64_t cap)
{
    const std::size_t nc = P.cd.cycles.size();
    std::uint64_t count = 1;
    for (std::size_t c = 0; c < nc; ++c) {
        count *= P.F.p;
        if (count > cap) throw CapExceeded("extension search exceeds cap");
    }
    const std::size_t len = static_cast<std::size_t>(h.n) + 2;
    PseudoHom ext = h;
    ext.n = h.n + 1;
    for (auto& v : ext.values) v.push_back(0);
    auto base = monomial_values(P, ext, len);
    std::vector<PseudoHom> out;
    Vec delta(nc, 0);
    std::vector<std::size_t> single(nc);
    for (std::size_t k = 0; k < P.monomials.size(); ++k)
        if (P.mdeg[k] == 1) single[P.monomials[k][0]] = k;
    // only the top coefficient of the generators moves
    Vec top(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) top[k] = base[k][len - 1];
    const Field& F = P.F;
    for (std::uint64_t it = 0; it < count; ++it) {
        for (std::size_t c = 0; c < nc; ++c) top[single[c]] = delta[c];
        bool ok = true;
        for (std::size_t k = 0; k < top.size() && ok; ++k) {
            const int a = P.alpha_of[k];
            ok = a < 0 ? top[k] == 0 : top[k] == top[P.alpha_first[a]];
        }
        for (std::size_t i = 0; i < P.ideal.size() && ok; ++i) {
            const Vec& row = P.ideal[i];
            Scalar s = 0;
            for (std::size_t a = 0; a < row.size(); ++a)
                if (row[a]) s = F.add(s, F.mul(row[a], top[P.alpha_first[a]]));
            ok = s == 0;
        }
        if (ok) {
            PseudoHom e = ext;
            for (std::size_t c = 0; c < nc; ++c) e.values[c].back() = delta[c];
            out.push_back(std::move(e));
        }
        for (std::size_t c = 0; c < nc; ++c) {
            if (++delta[c] < P.F.p) break;
            delta[c] = 0;
        }
    }
    return out;
}

} // namespace

bool is_valid_hom(const PseudoPresentation& P, const PseudoHom& h)
{
    check_shape(P, h);
    if (h.n > P.N) throw UsageError("pseudo hom: order exceeds truncation");
    const std::size_t len = static_cast<std::size_t>(h.n) + 1;
    return rows_vanish(P, monomial_values(P, h, len), 1, len);
}

ObstructionReport evaluate_obstructions(const PseudoPresentation& P, const PseudoHom& h, std::uint64_t cap)
{
    if (h.n + 1 > P.N) throw UsageError("evaluate_obstructions: truncation must exceed the order");
    if (!is_valid_hom(P, h)) throw ValidationError("evaluate_obstructions: map does not kill the presentation ideal");
    const Field& F = P.F;
    const std::size_t len = static_cast<std::size_t>(h.n) + 2;
    PseudoHom lift = h;
    lift.n = h.n + 1;
    for (auto& v : lift.values) v.push_back(0);

    ObstructionReport out;
    out.n = h.n;
    for (const auto& g : P.h2.generators) {
        const Poly a = monomial_value(F, lift, g.lhs, len), b = monomial_value(F, lift, g.rhs, len);
        out.alpha.push_back(F.sub(a[len - 1], b[len - 1]));
        out.alpha_degree.push_back(g.arrow_degree);
    }
    out.alpha_zero = vzero(out.alpha);
    if (out.alpha_zero) {
        Vec b(P.families.size(), 0);
        for (std::size_t f = 0; f < P.families.size(); ++f)
            for (const auto& [mon, c] : P.families[f].poly) b[f] = F.add(b[f], F.mul(c, monomial_value(F, lift, mon, len)[len - 1]));
        EchelonSpan img(F, P.families.size());
        for (std::size_t c = 0; c < P.linear.cols; ++c) img.insert(P.linear.column(c));
        out.beta = img.reduce(b);
        out.beta_zero = vzero(*out.beta);
    }
    out.extensions_found = extensions(P, h, cap).size();
    out.consistent = (out.alpha_zero && out.beta_zero) == (out.extensions_found > 0);
    return out;
}

std::vector<PseudoHom> all_homs(const PseudoPresentation& P, int n, std::uint64_t cap)
{
    if (n > P.N) throw UsageError("all_homs: order exceeds truncation");
    PseudoHom zero;
    zero.n = 0;
    zero.values.assign(P.cd.cycles.size(), Vec{});
    std::vector<PseudoHom> level{zero};
    for (int k = 1; k <= n; ++k) {
        std::vector<PseudoHom> next;
        for (const auto& h : level) {
            auto e = extensions(P, h, cap);
            next.insert(next.end(), e.begin(), e.end());
            if (next.size() > cap) throw CapExceeded("hom enumeration exceeds cap");
        }
        level = std::move(next);
    }
    return level;
}

Quiver random_quiver(std::mt19937& rng, const Field& F, int r, int max_h1, bool with_h2)
{
    std::uniform_int_distribution<int> h1d(0, max_h1), coin(0, 9), coef(1, static_cast<int>(F.p) - 1);
    std::vector<std::vector<int>> h1(r, std::vector<int>(r, 0)), h2(r, std::vector<int>(r, 0));
    for (auto& row : h1)
        for (auto& v : row) v = h1d(rng);
    if (with_h2)
        for (auto& row : h2)
            for (auto& v : row) v = coin(rng) < 3 ? 1 : 0;
    Quiver q = build_quiver(F, h1, h2);
    const auto between = arrows_between(q);
    int label = 0;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            if (!q.h2[a][b]) continue;
            Relation rel;
            rel.block = {a, b};
            rel.label = "r_" + std::to_string(++label);
            std::uniform_int_distribution<int> nterms(1, 4), lend(2, std::max(2, r));
            const int want = nterms(rng);
            std::set<Word> used;
            for (int attempt = 0; attempt < 60 && static_cast<int>(rel.terms.size()) < want; ++attempt) {
                const int len = lend(rng);
                Word w;
                int at = a;
                bool ok = true;
                for (int s = 0; s < len && ok; ++s) {
                    std::vector<int> choices;
                    for (int v = 0; v < r; ++v) {
                        if (s == len - 1 && v != b) continue;
                        for (int arr : between[at * r + v]) choices.push_back(arr);
                    }
                    if (choices.empty()) {
                        ok = false;
                        break;
                    }
                    const int arr = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
                    w.push_back(arr);
                    at = q.arrows[arr].to;
                }
                if (!ok || !used.insert(w).second) continue;
                rel.terms.push_back({static_cast<Scalar>(coef(rng)), w});
            }
            q.relations.push_back(std::move(rel));
        }
    return q;
}

Quiver disjoint_union(const Quiver& a, const Quiver& b)
{
    if (a.F.p != b.F.p) throw UsageError("disjoint_union: fields differ");
    Quiver q;
    q.F = a.F;
    q.r = a.r + b.r;
    q.h2.assign(q.r, std::vector<int>(q.r, 0));
    for (int i = 0; i < a.r; ++i)
        for (int j = 0; j < a.r; ++j) q.h2[i][j] = a.h2[i][j];
    for (int i = 0; i < b.r; ++i)
        for (int j = 0; j < b.r; ++j) q.h2[a.r + i][a.r + j] = b.h2[i][j];
    // arrows stay grouped by block so names follow the usual scheme
    std::vector<std::pair<Block, int>> order;   // (block, old global index)
    for (int k = 0; k < static_cast<int>(a.arrows.size()); ++k) order.push_back({{a.arrows[k].from, a.arrows[k].to}, k});
    for (int k = 0; k < static_cast<int>(b.arrows.size()); ++k)
        order.push_back({{a.r + b.arrows[k].from, a.r + b.arrows[k].to}, static_cast<int>(a.arrows.size()) + k});
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<int> remap(order.size());
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
        remap[order[k].second] = k;
        q.arrows.push_back({"", order[k].first.first, order[k].first.second});
    }
    name_arrows(q);
    auto copy_rel = [&](const Relation& rel, int shift, int arrow_shift, const std::string& prefix) {
        Relation out = rel;
        out.label = prefix + rel.label;
        out.block = {rel.block.first + shift, rel.block.second + shift};
        for (auto& t : out.terms)
            for (auto& w : t.word) w = remap[w + arrow_shift];
        q.relations.push_back(std::move(out));
    };
    for (const auto& rel : a.relations) copy_rel(rel, 0, 0, "a.");
    for (const auto& rel : b.relations) copy_rel(rel, a.r, static_cast<int>(a.arrows.size()), "b.");
    q.relation_arity = (a.relation_arity < 0 || b.relation_arity < 0) ? -1 : std::min(a.relation_arity, b.relation_arity);
    return q;
}

} // namespace defring
