#include "defring/deform.hpp"

#include "defring/error.hpp"

#include <algorithm>
#include <map>
#include <thread>

namespace defring {

using nlohmann::json;

// ---------------------------------------------------------------- test rings

Vec TestRing::mul(const Vec& x, const Vec& y) const
{
    std::vector<std::uint64_t> acc(dim, 0);
    for (int a = 0; a < dim; ++a) {
        if (!x[a]) continue;
        for (int b = 0; b < dim; ++b) {
            if (!y[b]) continue;
            const std::uint64_t w = static_cast<std::uint64_t>(x[a]) * y[b] % F.p;
            const Scalar* row = &c[(static_cast<std::size_t>(a) * dim + b) * dim];
            for (int k = 0; k < dim; ++k)
                if (row[k]) acc[k] += w * row[k];
        }
    }
    Vec out(dim);
    for (int k = 0; k < dim; ++k) out[k] = static_cast<Scalar>(acc[k] % F.p);
    return out;
}

Vec TestRing::one() const
{
    Vec e(dim, 0);
    e[0] = 1;
    return e;
}

namespace {

Vec basis_vec(int dim, int k)
{
    Vec e(dim, 0);
    e[k] = 1;
    return e;
}

// validates and fills commutative / nilpotency
void finish_ring(TestRing& R)
{
    const int n = R.dim;
    if (n < 1) throw ValidationError("test ring: empty basis");
    if (R.c.size() != static_cast<std::size_t>(n) * n * n) throw ValidationError("test ring: structure constants have wrong size");
    for (int b = 0; b < n; ++b)
        for (int k = 0; k < n; ++k)
            if (R.coef(0, b, k) != (b == k) || R.coef(b, 0, k) != (b == k))
                throw ValidationError("test ring: basis[0] is not a two-sided unit");
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b)
            if (R.coef(a, b, 0))
                throw ValidationError("test ring: product of " + R.names[a] + " and " + R.names[b] + " leaves the maximal ideal");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int e = 0; e < n; ++e) {
                Vec l = R.mul(R.mul(basis_vec(n, a), basis_vec(n, b)), basis_vec(n, e));
                Vec r = R.mul(basis_vec(n, a), R.mul(basis_vec(n, b), basis_vec(n, e)));
                if (l != r)
                    throw ValidationError("test ring: not associative at (" + R.names[a] + ", " + R.names[b] + ", " + R.names[e] + ")");
            }
    R.commutative = true;
    for (int a = 0; a < n && R.commutative; ++a)
        for (int b = 0; b < n; ++b)
            if (R.mul(basis_vec(n, a), basis_vec(n, b)) != R.mul(basis_vec(n, b), basis_vec(n, a))) {
                R.commutative = false;
                break;
            }
    if (R.graded()) {
        if (static_cast<int>(R.degree.size()) != n || R.degree[0] != 0)
            throw ValidationError("test ring: degrees must list one entry per basis element, unit in degree 0");
        for (int a = 1; a < n; ++a)
            if (R.degree[a] < 1) throw ValidationError("test ring: ideal basis elements need degree >= 1");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int k = 0; k < n; ++k)
                    if (R.coef(a, b, k) && R.degree[k] != R.degree[a] + R.degree[b])
                        throw ValidationError("test ring: structure constants are not homogeneous");
    }
    // powers of the maximal ideal
    std::vector<Vec> cur;
    for (int a = 1; a < n; ++a) cur.push_back(basis_vec(n, a));
    int k = 1;
    while (true) {
        EchelonSpan span(R.F, n);
        for (const auto& v : cur) span.insert(v);
        if (span.rank() == 0) break;
        if (k > n) throw ValidationError("test ring: maximal ideal is not nilpotent");
        std::vector<Vec> next;
        EchelonSpan nspan(R.F, n);
        for (const auto& v : cur)
            for (int a = 1; a < n; ++a) {
                Vec w = R.mul(v, basis_vec(n, a));
                if (nspan.insert(w)) next.push_back(w);
            }
        cur = std::move(next);
        ++k;
    }
    R.nilpotency = k;
}

} // namespace

TestRing eps_ring(const Field& F, int n)
{
    if (n < 0) throw UsageError("eps ring: order must be non-negative");
    TestRing R;
    R.F = F;
    R.dim = n + 1;
    R.label = "eps:" + std::to_string(n);
    for (int k = 0; k <= n; ++k) {
        R.names.push_back(k == 0 ? "1" : k == 1 ? "e" : "e^" + std::to_string(k));
        R.degree.push_back(k);
    }
    R.c.assign(static_cast<std::size_t>(R.dim) * R.dim * R.dim, 0);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) R.c[(static_cast<std::size_t>(a) * R.dim + b) * R.dim + a + b] = 1;
    finish_ring(R);
    return R;
}

TestRing xy_square_zero(const Field& F)
{
    TestRing R;
    R.F = F;
    R.dim = 3;
    R.label = "xy2";
    R.names = {"1", "x", "y"};
    R.degree = {0, 1, 1};
    R.c.assign(27, 0);
    for (int b = 0; b < 3; ++b) {
        R.c[(0 * 3 + b) * 3 + b] = 1;
        R.c[(b * 3 + 0) * 3 + b] = 1;
    }
    finish_ring(R);
    return R;
}

TestRing load_test_ring(const Field& F, const json& j)
{
    TestRing R;
    R.F = F;
    if (j.contains("prime") && j.at("prime").get<long long>() != static_cast<long long>(F.p))
        throw ValidationError("test ring: prime does not match the input document");
    if (!j.contains("basis") || !j.contains("table")) throw ValidationError("test ring: needs `basis` and `table`");
    R.names = j.at("basis").get<std::vector<std::string>>();
    R.dim = static_cast<int>(R.names.size());
    R.label = j.value("label", std::string("file"));
    const auto& t = j.at("table");
    if (!t.is_array() || static_cast<int>(t.size()) != R.dim) throw ValidationError("test ring: table must be dim x dim");
    R.c.assign(static_cast<std::size_t>(R.dim) * R.dim * R.dim, 0);
    for (int a = 0; a < R.dim; ++a) {
        if (static_cast<int>(t[a].size()) != R.dim) throw ValidationError("test ring: table must be dim x dim");
        for (int b = 0; b < R.dim; ++b) {
            auto v = t[a][b].get<std::vector<long long>>();
            if (static_cast<int>(v.size()) != R.dim) throw ValidationError("test ring: product vector has wrong length");
            for (int k = 0; k < R.dim; ++k) R.c[(static_cast<std::size_t>(a) * R.dim + b) * R.dim + k] = F.from_int(v[k]);
        }
    }
    if (j.contains("degrees")) R.degree = j.at("degrees").get<std::vector<int>>();
    finish_ring(R);
    return R;
}

TestRing parse_ring_spec(const Field& F, const std::string& spec)
{
    if (spec.rfind("eps:", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(spec.substr(4));
        } catch (const std::exception&) {
            throw UsageError("ring spec: bad order in '" + spec + "'");
        }
        if (n < 1) throw UsageError("ring spec: eps order must be >= 1");
        return eps_ring(F, n);
    }
    if (spec == "xy2") return xy_square_zero(F);
    if (spec.rfind("file:", 0) == 0) return load_test_ring(F, read_document(spec.substr(5)));
    throw UsageError("ring spec: expected eps:n, xy2 or file:<path>, got '" + spec + "'");
}

// ---------------------------------------------------------------- matrices over A

namespace {

// d x d matrix over A, entry (i, j) at [(i * d + j) * dim]
struct AMat {
    int d = 0, n = 0;
    Vec e;
    AMat() = default;
    AMat(int d_, int n_) : d(d_), n(n_), e(static_cast<std::size_t>(d_) * d_ * n_, 0) {}
    Scalar* at(int i, int j) { return &e[(static_cast<std::size_t>(i) * d + j) * n]; }
    const Scalar* at(int i, int j) const { return &e[(static_cast<std::size_t>(i) * d + j) * n]; }
    bool operator==(const AMat& o) const { return e == o.e; }
    bool operator<(const AMat& o) const { return e < o.e; }
};

AMat amul(const TestRing& A, const AMat& x, const AMat& y)
{
    const int d = x.d, n = A.dim;
    AMat z(d, n);
    std::vector<std::uint64_t> acc(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int k = 0; k < d; ++k) {
                const Scalar* u = x.at(i, k);
                const Scalar* v = y.at(k, j);
                for (int a = 0; a < n; ++a) {
                    if (!u[a]) continue;
                    for (int b = 0; b < n; ++b) {
                        if (!v[b]) continue;
                        const std::uint64_t w = static_cast<std::uint64_t>(u[a]) * v[b] % A.F.p;
                        const Scalar* row = &A.c[(static_cast<std::size_t>(a) * n + b) * n];
                        for (int q = 0; q < n; ++q)
                            if (row[q]) acc[q] += w * row[q];
                    }
                }
            }
            Scalar* o = z.at(i, j);
            for (int q = 0; q < n; ++q) o[q] = static_cast<Scalar>(acc[q] % A.F.p);
        }
    return z;
}

AMat aadd(const Field& F, const AMat& x, const AMat& y)
{
    AMat z = x;
    for (std::size_t k = 0; k < z.e.size(); ++k) z.e[k] = F.add(x.e[k], y.e[k]);
    return z;
}

AMat asub(const Field& F, const AMat& x, const AMat& y)
{
    AMat z = x;
    for (std::size_t k = 0; k < z.e.size(); ++k) z.e[k] = F.sub(x.e[k], y.e[k]);
    return z;
}

AMat lift_matrix(const Matrix& m, int n)
{
    AMat z(static_cast<int>(m.rows), n);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) z.at(static_cast<int>(i), static_cast<int>(j))[0] = m(i, j);
    return z;
}

AMat aidentity(int d, int n)
{
    AMat z(d, n);
    for (int i = 0; i < d; ++i) z.at(i, i)[0] = 1;
    return z;
}

bool anilpotent_zero(const AMat& x) { return std::all_of(x.e.begin(), x.e.end(), [](Scalar s) { return s == 0; }); }

// (1 - g)^{-1} for g with entries in m_A
AMat inverse_one_minus(const TestRing& A, const AMat& g)
{
    AMat sum = aidentity(g.d, A.dim), pw = aidentity(g.d, A.dim);
    for (int k = 0; k <= A.nilpotency; ++k) {
        pw = amul(A, pw, g);
        if (anilpotent_zero(pw)) break;
        sum = aadd(A.F, sum, pw);
    }
    return sum;
}

// element of M_d(m_A) from digit block
AMat ideal_matrix(int d, const TestRing& A, const std::vector<Scalar>& digits, std::size_t off)
{
    AMat z(d, A.dim);
    const int m = A.mdim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < m; ++t) z.at(i, j)[1 + t] = digits[off + (static_cast<std::size_t>(i) * d + j) * m + t];
    return z;
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t e, std::uint64_t cap)
{
    std::uint64_t v = 1;
    for (std::uint64_t k = 0; k < e; ++k) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

void decode(std::uint64_t idx, Scalar p, std::vector<Scalar>& digits)
{
    for (std::size_t k = digits.size(); k-- > 0;) {
        digits[k] = static_cast<Scalar>(idx % p);
        idx /= p;
    }
}

// Runs keep(idx, out) over [0, total) in contiguous chunks; results stay in index order.
template <class Fn>
std::vector<Vec> parallel_filter(std::uint64_t total, int threads, Fn keep)
{
    threads = std::max(1, threads);
    if (total < 1024) threads = 1;
    std::vector<std::vector<Vec>> parts(threads);
    auto work = [&](int w) {
        const std::uint64_t lo = total * w / threads, hi = total * (w + 1) / threads;
        Vec out;
        for (std::uint64_t i = lo; i < hi; ++i)
            if (keep(i, out)) parts[w].push_back(out);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    std::vector<Vec> all;
    for (auto& p : parts)
        for (auto& v : p) all.push_back(std::move(v));
    return all;
}

// cochain xi -> per-element matrices xi(x) over A
std::vector<AMat> xi_matrices(const CochainComplex& cx, const TestRing& A, const Vec& xi)
{
    const int d = cx.L.d, dd = cx.L.dd, m = A.mdim();
    std::vector<AMat> out(cx.nb, AMat(d, A.dim));
    for (int x = 0; x < cx.nb; ++x)
        for (int q = 0; q < dd; ++q)
            for (int t = 0; t < m; ++t)
                out[x].at(cx.L.coord_row[q], cx.L.coord_col[q])[1 + t] = xi[(static_cast<std::size_t>(x) * dd + q) * m + t];
    return out;
}

Vec xi_from_matrices(const CochainComplex& cx, const TestRing& A, const std::vector<AMat>& mats)
{
    const int dd = cx.L.dd, m = A.mdim();
    Vec xi(cx.dims[1] * m, 0);
    for (int x = 0; x < cx.nb; ++x)
        for (int q = 0; q < dd; ++q) {
            const Scalar* v = mats[x].at(cx.L.coord_row[q], cx.L.coord_col[q]);
            if (v[0]) throw std::logic_error("MC element has a unit component");
            for (int t = 0; t < m; ++t) xi[(static_cast<std::size_t>(x) * dd + q) * m + t] = v[1 + t];
        }
    return xi;
}

struct HomEnumeration {
    std::vector<std::vector<AMat>> gens;   // generator images
    std::vector<std::vector<AMat>> full;   // images of all elements
    std::uint64_t candidates = 0;
};

// Lifts of rho: generator images rho(s) + M_s with (.)^{ord s} = 1, propagated along words, table-checked.
HomEnumeration enumerate_homs(const Representation& rep, const TestRing& A, const EnumOptions& opt)
{
    if (!rep.is_group()) throw UsageError("generator enumeration needs a group");
    const FiniteGroup& G = *rep.group;
    const int d = rep.d, n = A.dim;
    const std::uint64_t per = static_cast<std::uint64_t>(d) * d * A.mdim();
    HomEnumeration H;
    std::vector<std::vector<AMat>> options(G.generators.size());
    for (std::size_t s = 0; s < G.generators.size(); ++s) {
        const int g = G.generators[s];
        const int ord = G.element_order(g);
        const std::uint64_t total = checked_power(A.F.p, per, opt.cap);
        if (total > opt.cap) throw CapExceeded("generator enumeration: p^" + std::to_string(per) + " candidates per generator exceeds the cap");
        H.candidates += total;
        const AMat base = lift_matrix(rep.rho[g], n);
        auto kept = parallel_filter(total, opt.threads, [&](std::uint64_t idx, Vec& out) {
            std::vector<Scalar> digits(per);
            decode(idx, A.F.p, digits);
            AMat X = aadd(A.F, base, ideal_matrix(d, A, digits, 0));
            AMat pw = X;
            for (int k = 1; k < ord; ++k) pw = amul(A, pw, X);
            if (!(pw == aidentity(d, n))) return false;
            out = X.e;
            return true;
        });
        for (auto& e : kept) {
            AMat X(d, n);
            X.e = std::move(e);
            options[s].push_back(std::move(X));
        }
    }
    std::uint64_t combos = 1;
    for (const auto& o : options) {
        if (o.empty()) return H;
        if (combos > opt.cap / o.size()) throw CapExceeded("generator enumeration: too many generator combinations");
        combos *= o.size();
    }
    H.candidates += combos;
    std::vector<std::size_t> pick(options.size(), 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
        std::uint64_t rem = c;
        for (std::size_t s = options.size(); s-- > 0;) {
            pick[s] = rem % options[s].size();
            rem /= options[s].size();
        }
        std::vector<AMat> img(G.order);
        for (int g = 0; g < G.order; ++g) {
            AMat X = aidentity(d, n);
            for (int s : G.words[g]) X = amul(A, X, options[s][pick[s]]);
            img[g] = std::move(X);
        }
        bool ok = true;
        for (int a = 0; a < G.order && ok; ++a)
            for (int b = 0; b < G.order; ++b)
                if (!(amul(A, img[a], img[b]) == img[G.mul(a, b)])) {
                    ok = false;
                    break;
                }
        if (!ok) continue;
        std::vector<AMat> gi;
        for (std::size_t s = 0; s < options.size(); ++s) gi.push_back(options[s][pick[s]]);
        H.gens.push_back(std::move(gi));
        H.full.push_back(std::move(img));
    }
    return H;
}

Vec flatten(const std::vector<AMat>& ms)
{
    Vec v;
    for (const auto& m : ms) v.insert(v.end(), m.e.begin(), m.e.end());
    return v;
}

// block scalars (lambda_b) from an index
std::vector<Scalar> torus_element(const Field& F, int r, std::uint64_t idx)
{
    std::vector<Scalar> lam(r);
    for (int b = r - 1; b >= 0; --b) {
        lam[b] = static_cast<Scalar>(1 + idx % (F.p - 1));
        idx /= (F.p - 1);
    }
    return lam;
}

AMat torus_conj(const Field& F, const std::vector<int>& block_of, const std::vector<Scalar>& lam, const AMat& X)
{
    AMat Y = X;
    for (int i = 0; i < X.d; ++i)
        for (int j = 0; j < X.d; ++j) {
            const Scalar s = F.mul(lam[block_of[i]], F.inv(lam[block_of[j]]));
            Scalar* v = Y.at(i, j);
            for (int q = 0; q < X.n; ++q) v[q] = F.mul(v[q], s);
        }
    return Y;
}

std::uint64_t torus_size(const Field& F, int r) { return checked_power(F.p - 1, r, ~0ull >> 1); }

} // namespace

// ---------------------------------------------------------------- dg MC

bool is_mc_dg(const CochainComplex& cx, const TestRing& A, const Vec& xi)
{
    const int m = A.mdim();
    if (cx.dmax < 2) throw UsageError("MC check needs the complex through degree 2");
    if (xi.size() != cx.dims[1] * m) throw UsageError("MC element has wrong length");
    std::vector<Vec> comp(m, Vec(cx.dims[1], 0));
    std::vector<bool> nz(m, false);
    for (std::size_t c = 0; c < cx.dims[1]; ++c)
        for (int t = 0; t < m; ++t)
            if ((comp[t][c] = xi[c * m + t])) nz[t] = true;
    std::vector<Vec> out(A.dim, Vec(cx.dims[2], 0));
    for (int t = 0; t < m; ++t)
        if (nz[t]) out[1 + t] = differential(cx, comp[t], 1);
    for (int s = 0; s < m; ++s) {
        if (!nz[s]) continue;
        for (int t = 0; t < m; ++t) {
            if (!nz[t]) continue;
            bool any = false;
            for (int k = 0; k < A.dim; ++k)
                if (A.coef(1 + s, 1 + t, k)) any = true;
            if (!any) continue;
            Vec c = cup(cx, comp[s], 1, comp[t], 1);
            for (int k = 0; k < A.dim; ++k)
                if (Scalar w = A.coef(1 + s, 1 + t, k)) vaxpy(A.F, out[k], w, c);
        }
    }
    for (const auto& v : out)
        if (!vzero(v)) return false;
    return true;
}

MCSolutions enumerate_mc_dg(const CochainComplex& cx, const TestRing& A, const EnumOptions& opt)
{
    MCSolutions S;
    const std::uint64_t nvar = cx.dims[1] * A.mdim();
    const std::uint64_t total = checked_power(A.F.p, nvar, opt.cap);
    if (total <= opt.cap && !opt.force_generator_mode) {
        S.mode = "full";
        S.candidates = total;
        S.xi = parallel_filter(total, opt.threads, [&](std::uint64_t idx, Vec& out) {
            out.assign(nvar, 0);
            decode(idx, A.F.p, out);
            return is_mc_dg(cx, A, out);
        });
    } else {
        if (!cx.rep.is_group())
            throw CapExceeded("MC enumeration: p^" + std::to_string(nvar) +
                              " candidates exceeds the cap and generator mode needs a group input");
        S.mode = "generator";
        auto H = enumerate_homs(cx.rep, A, opt);
        S.candidates = H.candidates;
        for (const auto& img : H.full) {
            std::vector<AMat> xi;
            for (int g = 0; g < cx.nb; ++g) xi.push_back(asub(A.F, img[g], lift_matrix(cx.rep.rho[g], A.dim)));
            Vec v = xi_from_matrices(cx, A, xi);
            if (!is_mc_dg(cx, A, v)) throw std::logic_error("table-checked lift fails the MC equation");
            S.xi.push_back(std::move(v));
        }
    }
    std::sort(S.xi.begin(), S.xi.end());
    return S;
}

ClassCount gauge_classes_dg(const CochainComplex& cx, const TestRing& A, const std::vector<Vec>& solutions)
{
    ClassCount out;
    out.solutions = solutions.size();
    std::map<Vec, std::size_t> index;
    for (std::size_t k = 0; k < solutions.size(); ++k) index.emplace(solutions[k], k);
    const int d = cx.L.d;
    const std::uint64_t per = static_cast<std::uint64_t>(d) * d * A.mdim();
    const std::uint64_t ngauge = checked_power(A.F.p, per, 1ull << 24);
    if (ngauge > (1ull << 24)) throw CapExceeded("gauge group too large to enumerate");
    std::vector<AMat> gammas, inv;
    for (std::uint64_t g = 0; g < ngauge; ++g) {
        std::vector<Scalar> digits(per);
        decode(g, A.F.p, digits);
        gammas.push_back(ideal_matrix(d, A, digits, 0));
        inv.push_back(inverse_one_minus(A, gammas.back()));
    }
    std::vector<AMat> rho;
    for (const auto& m : cx.rep.rho) rho.push_back(lift_matrix(m, A.dim));
    const int r = cx.L.r;
    std::vector<int> block_of = cx.rep.block_of;

    auto act = [&](const std::vector<AMat>& xi, std::size_t g) {
        // xi - (1-gamma)^{-1} (xi gamma - gamma xi + rho gamma - gamma rho)
        const AMat& G = gammas[g];
        std::vector<AMat> res;
        for (int x = 0; x < cx.nb; ++x) {
            AMat t = asub(A.F, amul(A, xi[x], G), amul(A, G, xi[x]));
            t = aadd(A.F, t, asub(A.F, amul(A, rho[x], G), amul(A, G, rho[x])));
            res.push_back(asub(A.F, xi[x], amul(A, inv[g], t)));
        }
        return res;
    };
    auto locate = [&](const Vec& v) {
        auto it = index.find(v);
        if (it == index.end()) throw std::logic_error("gauge image is not among the enumerated solutions");
        return it->second;
    };

    std::vector<char> seen(solutions.size(), 0), dseen(solutions.size(), 0);
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        if (seen[s]) continue;
        ++out.strict_classes;
        out.strict_reps.push_back(solutions[s]);
        auto xi = xi_matrices(cx, A, solutions[s]);
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            Vec img = xi_from_matrices(cx, A, act(xi, g));
            if (!is_mc_dg(cx, A, img)) throw std::logic_error("gauge image fails the MC equation");
            ++out.gauge_images_checked;
            seen[locate(img)] = 1;
        }
    }
    const std::uint64_t nt = torus_size(A.F, r);
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        if (dseen[s]) continue;
        ++out.deformation_classes;
        out.deformation_reps.push_back(solutions[s]);
        auto xi = xi_matrices(cx, A, solutions[s]);
        for (std::uint64_t t = 0; t < nt; ++t) {
            auto lam = torus_element(A.F, r, t);
            std::vector<AMat> tx;
            for (const auto& m : xi) tx.push_back(torus_conj(A.F, block_of, lam, m));
            for (std::size_t g = 0; g < gammas.size(); ++g) dseen[locate(xi_from_matrices(cx, A, act(tx, g)))] = 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------- minimal MC

Vec mc_minimal_value(const AInfStructure& A, const TestRing& R, const Vec& xi)
{
    const int h1 = A.h1(), h2 = A.h2(), m = R.mdim(), n = R.dim;
    if (xi.size() != static_cast<std::size_t>(h1) * m) throw UsageError("minimal MC element has wrong length");
    std::vector<Vec> el(h1, Vec(n, 0));
    for (int k = 0; k < h1; ++k)
        for (int t = 0; t < m; ++t) el[k][1 + t] = xi[static_cast<std::size_t>(k) * m + t];
    Vec out(static_cast<std::size_t>(h2) * n, 0);
    Tuple t;
    // depth-first over composable tuples with running product in A
    auto rec = [&](auto&& self, const Vec& prod, int end_vertex) -> void {
        const int len = static_cast<int>(t.size());
        if (len >= 2) {
            const Vec mv = A.m_value(t);
            const Scalar sg = R.F.sign(static_cast<long long>(len) * (len + 1) / 2);
            for (int y = 0; y < h2; ++y) {
                if (!mv[y]) continue;
                const Scalar w = R.F.mul(sg, mv[y]);
                for (int q = 0; q < n; ++q)
                    if (prod[q]) out[static_cast<std::size_t>(y) * n + q] = R.F.add(out[static_cast<std::size_t>(y) * n + q], R.F.mul(w, prod[q]));
            }
        }
        if (len == A.max_arity) return;
        for (int k = 0; k < h1; ++k) {
            if (len > 0 && A.h1_block[k].first != end_vertex) continue;
            if (vzero(el[k])) continue;
            Vec next = len == 0 ? el[k] : R.mul(prod, el[k]);
            if (vzero(next)) continue;
            t.push_back(k);
            self(self, next, A.h1_block[k].second);
            t.pop_back();
        }
    };
    rec(rec, R.one(), -1);
    return out;
}

MinimalSolutions solve_mc_minimal(const AInfStructure& A, const TestRing& R, const EnumOptions& opt)
{
    if (R.nilpotency - 1 > A.max_arity)
        throw Refusal("minimal MC: products of " + std::to_string(R.nilpotency - 1) + " ideal elements survive in " + R.label +
                      " but the structure is truncated at arity " + std::to_string(A.max_arity));
    MinimalSolutions S;
    const int m = R.mdim(), h1 = A.h1();
    const std::uint64_t nvar = static_cast<std::uint64_t>(h1) * m;
    const std::uint64_t total = checked_power(R.F.p, nvar, opt.cap);
    if (total <= opt.cap && !(opt.force_layered && R.graded())) {
        S.mode = "full";
        S.candidates = total;
        S.xi = parallel_filter(total, opt.threads, [&](std::uint64_t idx, Vec& out) {
            out.assign(nvar, 0);
            decode(idx, R.F.p, out);
            return vzero(mc_minimal_value(A, R, out));
        });
    } else {
        if (!R.graded()) throw CapExceeded("minimal MC: enumeration exceeds the cap and the ring has no grading");
        S.mode = "layered";
        int top = *std::max_element(R.degree.begin(), R.degree.end());
        std::vector<std::vector<int>> layer(top + 1);
        for (int t = 1; t < R.dim; ++t) layer[R.degree[t]].push_back(t);
        std::vector<Vec> partial{Vec(nvar, 0)};
        for (int e = 1; e <= top; ++e) {
            const std::uint64_t lv = static_cast<std::uint64_t>(h1) * layer[e].size();
            const std::uint64_t per = checked_power(R.F.p, lv, opt.cap);
            if (per > opt.cap || per * partial.size() > opt.cap) throw CapExceeded("minimal MC: layered search exceeds the cap");
            std::vector<Vec> next;
            for (const auto& base : partial) {
                S.candidates += per;
                std::vector<Scalar> digits(lv);
                for (std::uint64_t idx = 0; idx < per; ++idx) {
                    decode(idx, R.F.p, digits);
                    Vec x = base;
                    for (int k = 0; k < h1; ++k)
                        for (std::size_t l = 0; l < layer[e].size(); ++l)
                            x[static_cast<std::size_t>(k) * m + layer[e][l] - 1] = digits[k * layer[e].size() + l];
                    Vec v = mc_minimal_value(A, R, x);
                    bool ok = true;
                    for (int y = 0; y < A.h2() && ok; ++y)
                        for (int t : layer[e])
                            if (v[static_cast<std::size_t>(y) * R.dim + t]) {
                                ok = false;
                                break;
                            }
                    if (ok) next.push_back(std::move(x));
                }
            }
            partial = std::move(next);
        }
        S.xi = std::move(partial);
    }
    std::sort(S.xi.begin(), S.xi.end());
    return S;
}

ClassCount minimal_classes(const AInfStructure& A, const TestRing& R, const std::vector<Vec>& solutions, bool h0_ok)
{
    ClassCount out;
    out.solutions = solutions.size();
    out.supported = h0_ok;
    if (!h0_ok) out.note = "H^0 is not F^r; only the reduced gauge action is implemented";
    const int m = R.mdim(), n = R.dim, h1 = A.h1(), r = A.r;
    std::map<Vec, std::size_t> index;
    for (std::size_t k = 0; k < solutions.size(); ++k) index.emplace(solutions[k], k);

    // unipotent part (1 + m_A)^r and its inverses
    const std::uint64_t per = static_cast<std::uint64_t>(m) * r;
    const std::uint64_t nu = checked_power(R.F.p, per, 1ull << 22);
    if (nu > (1ull << 22)) throw CapExceeded("minimal gauge group too large to enumerate");
    std::vector<std::vector<Vec>> U, Uinv;
    for (std::uint64_t g = 0; g < nu; ++g) {
        std::vector<Scalar> digits(per);
        decode(g, R.F.p, digits);
        std::vector<Vec> u(r), ui(r);
        for (int b = 0; b < r; ++b) {
            Vec nil(n, 0);
            for (int t = 0; t < m; ++t) nil[1 + t] = digits[static_cast<std::size_t>(b) * m + t];
            u[b] = vadd(R.F, R.one(), nil);
            // (1 + x)^{-1} = sum (-x)^k
            Vec neg = vscale(R.F, R.F.neg(1), nil), pw = R.one(), sum = R.one();
            for (int k = 0; k <= R.nilpotency; ++k) {
                pw = R.mul(pw, neg);
                if (vzero(pw)) break;
                sum = vadd(R.F, sum, pw);
            }
            ui[b] = sum;
        }
        U.push_back(std::move(u));
        Uinv.push_back(std::move(ui));
    }
    auto act = [&](const Vec& xi, std::size_t g, const std::vector<Scalar>& lam) {
        Vec res(xi.size(), 0);
        for (int k = 0; k < h1; ++k) {
            Vec a(n, 0);
            for (int t = 0; t < m; ++t) a[1 + t] = xi[static_cast<std::size_t>(k) * m + t];
            const auto [i, j] = A.h1_block[k];
            Vec b = R.mul(R.mul(U[g][i], a), Uinv[g][j]);
            b = vscale(R.F, R.F.mul(lam[i], R.F.inv(lam[j])), b);
            if (b[0]) throw std::logic_error("gauge action left the maximal ideal");
            for (int t = 0; t < m; ++t) res[static_cast<std::size_t>(k) * m + t] = b[1 + t];
        }
        return res;
    };
    auto locate = [&](const Vec& v) {
        auto it = index.find(v);
        if (it == index.end()) throw std::logic_error("minimal gauge image is not among the solutions");
        return it->second;
    };
    const std::vector<Scalar> ones(r, 1);
    std::vector<char> seen(solutions.size(), 0), dseen(solutions.size(), 0);
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        if (seen[s]) continue;
        ++out.strict_classes;
        out.strict_reps.push_back(solutions[s]);
        for (std::size_t g = 0; g < U.size(); ++g) {
            Vec img = act(solutions[s], g, ones);
            if (!vzero(mc_minimal_value(A, R, img))) throw std::logic_error("minimal gauge image fails the MC equation");
            ++out.gauge_images_checked;
            seen[locate(img)] = 1;
        }
    }
    const std::uint64_t nt = torus_size(R.F, r);
    for (std::size_t s = 0; s < solutions.size(); ++s) {
        if (dseen[s]) continue;
        ++out.deformation_classes;
        out.deformation_reps.push_back(solutions[s]);
        for (std::uint64_t t = 0; t < nt; ++t) {
            auto lam = torus_element(R.F, r, t);
            for (std::size_t g = 0; g < U.size(); ++g) dseen[locate(act(solutions[s], g, lam))] = 1;
        }
    }
    return out;
}

bool h0_is_diagonal(const CochainComplex& cx)
{
    const auto h0 = cohomology(cx, 0);
    for (int i = 0; i < cx.L.r; ++i)
        for (int j = 0; j < cx.L.r; ++j)
            if (h0.per_block[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

// ---------------------------------------------------------------- oracle

OracleResult oracle_lift_classes(const Representation& rep, const TestRing& A, const EnumOptions& opt)
{
    OracleResult out;
    auto H = enumerate_homs(rep, A, opt);
    out.candidates = H.candidates;
    out.homomorphisms = H.gens.size();
    const int d = rep.d;
    std::map<Vec, std::size_t> index;
    for (std::size_t k = 0; k < H.gens.size(); ++k) index.emplace(flatten(H.gens[k]), k);
    const std::uint64_t per = static_cast<std::uint64_t>(d) * d * A.mdim();
    const std::uint64_t ng = checked_power(A.F.p, per, 1ull << 24);
    if (ng > (1ull << 24)) throw CapExceeded("oracle: conjugating group too large to enumerate");
    std::vector<AMat> P, Pinv;
    for (std::uint64_t g = 0; g < ng; ++g) {
        std::vector<Scalar> digits(per);
        decode(g, A.F.p, digits);
        AMat gam = ideal_matrix(d, A, digits, 0);
        // 1 + gamma and its inverse (1 - (-gamma))^{-1}
        P.push_back(aadd(A.F, aidentity(d, A.dim), gam));
        AMat neg = gam;
        for (auto& v : neg.e) v = A.F.neg(v);
        Pinv.push_back(inverse_one_minus(A, neg));
    }
    auto conj = [&](const std::vector<AMat>& gens, std::size_t g, const std::vector<Scalar>& lam) {
        std::vector<AMat> res;
        for (const auto& X : gens) res.push_back(torus_conj(A.F, rep.block_of, lam, amul(A, amul(A, P[g], X), Pinv[g])));
        return flatten(res);
    };
    auto locate = [&](const Vec& v) {
        auto it = index.find(v);
        if (it == index.end()) throw std::logic_error("oracle: conjugate of a lift is not a lift");
        return it->second;
    };
    const std::vector<Scalar> ones(rep.r(), 1);
    std::vector<char> seen(H.gens.size(), 0), dseen(H.gens.size(), 0);
    for (std::size_t s = 0; s < H.gens.size(); ++s) {
        if (seen[s]) continue;
        ++out.strict_classes;
        for (std::size_t g = 0; g < P.size(); ++g) seen[locate(conj(H.gens[s], g, ones))] = 1;
    }
    const std::uint64_t nt = torus_size(A.F, rep.r());
    for (std::size_t s = 0; s < H.gens.size(); ++s) {
        if (dseen[s]) continue;
        ++out.deformation_classes;
        std::vector<Vec> rep_images;
        for (const auto& X : H.gens[s]) rep_images.push_back(X.e);
        out.representatives.push_back(std::move(rep_images));
        for (std::uint64_t t = 0; t < nt; ++t) {
            auto lam = torus_element(A.F, rep.r(), t);
            for (std::size_t g = 0; g < P.size(); ++g) dseen[locate(conj(H.gens[s], g, lam))] = 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------- lift extension

LiftExtension extend_lift(const CochainComplex& cx, const Retract& R, const std::vector<Vec>& sigma)
{
    const Field& F = cx.F;
    if (sigma.empty()) throw ValidationError("extend_lift: empty lift");
    for (std::size_t k = 0; k < sigma.size(); ++k)
        if (sigma[k].size() != cx.dims[1]) throw ValidationError("extend_lift: sigma_" + std::to_string(k + 1) + " has wrong length");
    auto rhs = [&](std::size_t n) {
        Vec s(cx.dims[2], 0);
        for (std::size_t j = 1; j < n; ++j) s = vadd(F, s, cup(cx, sigma[j - 1], 1, sigma[n - j - 1], 1));
        return s;
    };
    for (std::size_t n = 1; n <= sigma.size(); ++n)
        if (differential(cx, sigma[n - 1], 1) != rhs(n))
            throw ValidationError("extend_lift: lift equation fails in degree " + std::to_string(n));
    LiftExtension out;
    Vec b = rhs(sigma.size() + 1);
    auto sol = solve_affine(F, cx.d[1], b);
    if (sol) {
        out.extends = true;
        out.particular = sol->particular;
        out.cocycles = sol->nullspace;
    } else {
        out.obstruction = apply(F, R.p[2], b);
        if (vzero(out.obstruction)) throw std::logic_error("unsolvable lift with zero obstruction class");
    }
    return out;
}

} // namespace defring
