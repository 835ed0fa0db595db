#include "defring/inputs.hpp"

#include "defring/error.hpp"

#include <toml.hpp>

#include <deque>
#include <fstream>
#include <sstream>

namespace defring {

using nlohmann::json;

int FiniteGroup::element_order(int g) const
{
    int k = 1, x = g;
    while (x != 0) {
        x = mul(x, g);
        ++k;
        if (k > order) throw ValidationError("element order exceeds group order");
    }
    return k;
}

namespace {

template <class T>
T get_field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(where + ": field '" + key + "' has the wrong shape (" + e.what() + ")");
    }
}

std::string triple(int a, int b, int c)
{
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

} // namespace

FiniteGroup load_group(const json& spec)
{
    FiniteGroup G;
    G.order = get_field<int>(spec, "order", "group");
    if (G.order < 1) throw ValidationError("group: order must be positive");
    auto table = get_field<std::vector<std::vector<int>>>(spec, "table", "group");
    if (static_cast<int>(table.size()) != G.order) throw ValidationError("group: table must have `order` rows");
    const int n = G.order;
    G.table.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(table[a].size()) != n)
            throw ValidationError("group: table row " + std::to_string(a) + " has wrong length");
        for (int b = 0; b < n; ++b) {
            int v = table[a][b];
            if (v < 0 || v >= n)
                throw ValidationError("group: table entry (" + std::to_string(a) + "," + std::to_string(b) +
                                      ") out of range");
            G.table[static_cast<std::size_t>(a) * n + b] = v;
        }
    }
    for (int a = 0; a < n; ++a)
        if (G.mul(0, a) != a || G.mul(a, 0) != a)
            throw ValidationError("group: missing identity: element 0 is not a two-sided identity (fails at " +
                                  std::to_string(a) + ")");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (G.mul(a, G.mul(b, c)) != G.mul(G.mul(a, b), c))
                    throw ValidationError("group: associativity failure at triple " + triple(a, b, c));
    G.inverse.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (G.mul(a, b) == 0 && G.mul(b, a) == 0) { G.inverse[a] = b; break; }
        if (G.inverse[a] < 0) throw ValidationError("group: missing inverse for element " + std::to_string(a));
    }
    G.generators = get_field<std::vector<int>>(spec, "generators", "group");
    for (int s : G.generators)
        if (s < 0 || s >= n) throw ValidationError("group: generator index " + std::to_string(s) + " out of range");

    // breadth-first closure
    std::vector<std::vector<int>> words(n);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    std::deque<int> q{0};
    while (!q.empty()) {
        int g = q.front();
        q.pop_front();
        for (std::size_t s = 0; s < G.generators.size(); ++s) {
            int h = G.mul(g, G.generators[s]);
            if (seen[h]) continue;
            seen[h] = 1;
            words[h] = words[g];
            words[h].push_back(static_cast<int>(s));
            q.push_back(h);
        }
    }
    for (int a = 0; a < n; ++a)
        if (!seen[a]) throw ValidationError("group: generators do not generate (element " + std::to_string(a) +
                                            " unreachable)");

    if (spec.contains("words")) {
        auto given = get_field<std::vector<std::vector<int>>>(spec, "words", "group");
        if (static_cast<int>(given.size()) != n) throw ValidationError("group: words must list one word per element");
        for (int a = 0; a < n; ++a) {
            int x = 0;
            for (int s : given[a]) {
                if (s < 0 || s >= static_cast<int>(G.generators.size()))
                    throw ValidationError("group: word for element " + std::to_string(a) + " uses unknown generator");
                x = G.mul(x, G.generators[s]);
            }
            if (x != a) throw ValidationError("group: word for element " + std::to_string(a) + " evaluates to " +
                                              std::to_string(x));
        }
        G.words = std::move(given);
    } else {
        G.words = std::move(words);
    }
    return G;
}

FiniteDimAlgebra load_algebra(const Field& F, const json& spec)
{
    FiniteDimAlgebra A;
    A.dim = get_field<int>(spec, "dim", "algebra");
    if (A.dim < 1) throw ValidationError("algebra: dim must be positive");
    const int n = A.dim;
    auto cons = get_field<std::vector<std::vector<std::vector<long long>>>>(spec, "constants", "algebra");
    if (static_cast<int>(cons.size()) != n) throw ValidationError("algebra: constants must be dim x dim x dim");
    A.constants.assign(static_cast<std::size_t>(n) * n * n, 0);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(cons[a].size()) != n) throw ValidationError("algebra: constants must be dim x dim x dim");
        for (int b = 0; b < n; ++b) {
            if (static_cast<int>(cons[a][b].size()) != n)
                throw ValidationError("algebra: constants must be dim x dim x dim");
            for (int k = 0; k < n; ++k)
                A.constants[(static_cast<std::size_t>(a) * n + b) * n + k] = F.from_int(cons[a][b][k]);
        }
    }
    auto unit = get_field<std::vector<long long>>(spec, "unit", "algebra");
    if (static_cast<int>(unit.size()) != n) throw ValidationError("algebra: unit must have length dim");
    A.unit.resize(n);
    for (int k = 0; k < n; ++k) A.unit[k] = F.from_int(unit[k]);

    auto prod = [&](const Vec& x, const Vec& y) {
        Vec z(n, 0);
        for (int a = 0; a < n; ++a) {
            if (!x[a]) continue;
            for (int b = 0; b < n; ++b) {
                if (!y[b]) continue;
                Scalar xy = F.mul(x[a], y[b]);
                for (int k = 0; k < n; ++k) z[k] = F.add(z[k], F.mul(xy, A.c(a, b, k)));
            }
        }
        return z;
    };
    auto basis = [&](int a) { Vec e(n, 0); e[a] = 1; return e; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec ab = prod(basis(a), basis(b));
            for (int c = 0; c < n; ++c)
                if (prod(ab, basis(c)) != prod(basis(a), prod(basis(b), basis(c))))
                    throw ValidationError("algebra: associativity failure at triple " + triple(a, b, c));
        }
    for (int a = 0; a < n; ++a)
        if (prod(A.unit, basis(a)) != basis(a) || prod(basis(a), A.unit) != basis(a))
            throw ValidationError("algebra: no unit (given unit fails on basis element " + std::to_string(a) + ")");
    return A;
}

Matrix matrix_from_grid(const Field& F, const std::vector<std::vector<long long>>& grid)
{
    std::size_t rows = grid.size();
    std::size_t cols = rows ? grid[0].size() : 0;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (grid[r].size() != cols) throw ValidationError("matrix rows have unequal lengths");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = F.from_int(grid[r][c]);
    }
    return m;
}

Representation load_representation(const Field& F, std::shared_ptr<const FiniteGroup> group,
                                   std::shared_ptr<const FiniteDimAlgebra> algebra, const std::vector<int>& block_dims,
                                   const std::vector<std::vector<std::vector<long long>>>& matrices)
{
    if (static_cast<bool>(group) == static_cast<bool>(algebra))
        throw UsageError("representation needs exactly one source (group or algebra)");
    Representation R;
    R.F = F;
    R.group = group;
    R.algebra = algebra;
    R.block_dims = block_dims;
    if (block_dims.empty()) throw ValidationError("representation: blocks must be nonempty");
    for (int b : block_dims)
        if (b < 1) throw ValidationError("representation: block dimensions must be positive");
    R.d = 0;
    for (std::size_t i = 0; i < block_dims.size(); ++i) {
        R.block_offset.push_back(R.d);
        for (int k = 0; k < block_dims[i]; ++k) R.block_of.push_back(static_cast<int>(i));
        R.d += block_dims[i];
    }
    const std::size_t expect = group ? group->generators.size() : static_cast<std::size_t>(algebra->dim);
    if (matrices.size() != expect)
        throw ValidationError("representation: expected " + std::to_string(expect) + " matrices, got " +
                              std::to_string(matrices.size()) + " (size mismatch)");
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        Matrix m = matrix_from_grid(F, matrices[k]);
        if (m.rows != static_cast<std::size_t>(R.d) || m.cols != static_cast<std::size_t>(R.d))
            throw ValidationError("representation: matrix " + std::to_string(k) + " is not " + std::to_string(R.d) +
                                  "x" + std::to_string(R.d) + " (size mismatch)");
        for (int r = 0; r < R.d; ++r)
            for (int c = 0; c < R.d; ++c)
                if (m(r, c) && R.block_of[r] != R.block_of[c])
                    throw ValidationError("representation: matrix " + std::to_string(k) +
                                          " has a nonzero off-block entry at (" + std::to_string(r) + "," +
                                          std::to_string(c) + "): residual is not block diagonal");
        R.given.push_back(std::move(m));
    }

    if (group) {
        const FiniteGroup& G = *group;
        R.rho.resize(G.order);
        for (int g = 0; g < G.order; ++g) {
            Matrix m = Matrix::identity(R.d);
            for (int s : G.words[g]) m = multiply(F, m, R.given[s]);
            R.rho[g] = std::move(m);
        }
        for (std::size_t s = 0; s < G.generators.size(); ++s)
            if (!(R.rho[G.generators[s]] == R.given[s]))
                throw ValidationError("representation: homomorphism failure: generator " + std::to_string(s) +
                                      " disagrees with the matrix of its word");
        for (int a = 0; a < G.order; ++a)
            for (int b = 0; b < G.order; ++b)
                if (!(multiply(F, R.rho[a], R.rho[b]) == R.rho[G.mul(a, b)]))
                    throw ValidationError("representation: homomorphism failure at pair (" + std::to_string(a) + "," +
                                          std::to_string(b) + ")");
    } else {
        const FiniteDimAlgebra& A = *algebra;
        R.rho = R.given;
        for (int a = 0; a < A.dim; ++a)
            for (int b = 0; b < A.dim; ++b) {
                Matrix rhs(R.d, R.d);
                for (int k = 0; k < A.dim; ++k) {
                    Scalar c = A.c(a, b, k);
                    if (!c) continue;
                    for (std::size_t q = 0; q < rhs.a.size(); ++q) rhs.a[q] = F.add(rhs.a[q], F.mul(c, R.rho[k].a[q]));
                }
                if (!(multiply(F, R.rho[a], R.rho[b]) == rhs))
                    throw ValidationError("representation: homomorphism failure at pair (" + std::to_string(a) + "," +
                                          std::to_string(b) + ")");
            }
        Matrix u(R.d, R.d);
        for (int k = 0; k < A.dim; ++k)
            for (std::size_t q = 0; q < u.a.size(); ++q) u.a[q] = F.add(u.a[q], F.mul(A.unit[k], R.rho[k].a[q]));
        if (!(u == Matrix::identity(R.d))) throw ValidationError("representation: unit does not act as the identity");
    }
    return R;
}

MultiplicityReport check_multiplicity_free(const Representation& rep)
{
    const Field& F = rep.F;
    const int r = rep.r();
    MultiplicityReport out;
    out.table.assign(r, std::vector<int>(r, 0));
    // the generating matrices suffice for intertwiners
    const std::vector<Matrix>& gens = rep.given;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const int di = rep.block_dims[i], dj = rep.block_dims[j];
            const int oi = rep.block_offset[i], oj = rep.block_offset[j];
            // unknown M (di x dj), equations M rho_j(g) - rho_i(g) M = 0
            Matrix sys(gens.size() * di * dj, static_cast<std::size_t>(di) * dj);
            std::size_t row = 0;
            for (const Matrix& g : gens)
                for (int a = 0; a < di; ++a)
                    for (int b = 0; b < dj; ++b, ++row) {
                        for (int k = 0; k < dj; ++k) {
                            std::size_t var = static_cast<std::size_t>(a) * dj + k;
                            sys(row, var) = F.add(sys(row, var), g(oj + k, oj + b));
                        }
                        for (int k = 0; k < di; ++k) {
                            std::size_t var = static_cast<std::size_t>(k) * dj + b;
                            sys(row, var) = F.sub(sys(row, var), g(oi + a, oi + k));
                        }
                    }
            out.table[i][j] = static_cast<int>(kernel_basis(F, sys).size());
        }
    out.verdict = true;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (out.table[i][j] != (i == j ? 1 : 0)) out.verdict = false;
    if (!out.verdict) {
        for (int i = 0; i < r; ++i)
            if (out.table[i][i] > 1) {
                out.message = "block " + std::to_string(i + 1) +
                              " has endomorphism algebra of dimension > 1 (not absolutely irreducible over F_p); "
                              "unsupported";
                break;
            }
        if (out.message.empty()) out.message = "summands are not pairwise non-isomorphic absolutely irreducible";
    }
    return out;
}

FiniteDimAlgebra group_algebra(const Field& F, const FiniteGroup& G)
{
    (void)F;
    FiniteDimAlgebra A;
    A.dim = G.order;
    const std::size_t n = G.order;
    A.constants.assign(n * n * n, 0);
    for (int a = 0; a < G.order; ++a)
        for (int b = 0; b < G.order; ++b) A.constants[(a * n + b) * n + G.mul(a, b)] = 1;
    A.unit.assign(n, 0);
    A.unit[0] = 1;
    return A;
}

Representation as_algebra_rep(const Representation& rep)
{
    if (!rep.is_group()) return rep;
    Representation R = rep;
    R.algebra = std::make_shared<FiniteDimAlgebra>(group_algebra(rep.F, *rep.group));
    R.group.reset();
    R.given = rep.rho;
    return R;
}

namespace {

json toml_to_json(const toml::node& n)
{
    if (auto t = n.as_table()) {
        json o = json::object();
        for (auto&& [k, v] : *t) o[std::string(k.str())] = toml_to_json(v);
        return o;
    }
    if (auto a = n.as_array()) {
        json o = json::array();
        for (auto&& v : *a) o.push_back(toml_to_json(v));
        return o;
    }
    if (auto v = n.as_integer()) return json(v->get());
    if (auto v = n.as_boolean()) return json(v->get());
    if (auto v = n.as_string()) return json(v->get());
    if (auto v = n.as_floating_point()) return json(v->get());
    throw ValidationError("unsupported TOML value type");
}

bool ends_with(const std::string& s, const std::string& suf)
{
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

} // namespace

json read_document(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input document: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (ends_with(path, ".toml")) {
        try {
            toml::table t = toml::parse(text, path);
            return toml_to_json(t);
        } catch (const toml::parse_error& e) {
            std::ostringstream msg;
            msg << path << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
            throw ValidationError(msg.str());
        }
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

InputDocument load_input(const json& doc, const std::string& path)
{
    InputDocument D;
    D.path = path;
    const long long prime = get_field<long long>(doc, "prime", "document");
    if (prime < 2 || prime > 2147483647LL) throw ValidationError("unsupported field: prime out of range");
    D.F = Field(static_cast<Scalar>(prime));
    std::shared_ptr<const FiniteGroup> G;
    std::shared_ptr<const FiniteDimAlgebra> A;
    if (doc.contains("group") && doc.contains("algebra"))
        throw ValidationError("document: give either `group` or `algebra`, not both");
    if (doc.contains("group")) G = std::make_shared<FiniteGroup>(load_group(doc.at("group")));
    else if (doc.contains("algebra")) A = std::make_shared<FiniteDimAlgebra>(load_algebra(D.F, doc.at("algebra")));
    else throw ValidationError("document: missing `group` or `algebra`");
    if (!doc.contains("representation")) throw ValidationError("document: missing field 'representation'");
    const json& rj = doc.at("representation");
    auto blocks = get_field<std::vector<int>>(rj, "blocks", "representation");
    auto mats = get_field<std::vector<std::vector<std::vector<long long>>>>(rj, "matrices", "representation");
    D.rep = load_representation(D.F, G, A, blocks, mats);
    if (doc.contains("debug")) D.debug = doc.at("debug");
    return D;
}

InputDocument load_input_file(const std::string& path)
{
    return load_input(read_document(path), path);
}

} // namespace defring
