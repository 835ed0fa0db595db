#include "defring/error.hpp"
#include "defring/inputs.hpp"
#include "defring/pseudo.hpp"

#include <doctest.h>

#include <fstream>
#include <string>

using namespace defring;

static Quiver quiver_of(const char* f)
{
    std::ifstream in(std::string(DEFRING_DATA_DIR) + "/" + f);
    return load_quiver(nlohmann::json::parse(in));
}

static AInfStructure ainf_of(const char* f, int N)
{
    auto doc = load_input_file(std::string(DEFRING_DATA_DIR) + "/" + f);
    auto cx = build_group_complex(doc.rep, 3);
    auto R = build_retract(cx);
    return transfer_products(cx, R, N);
}

static std::vector<long long> convolve(const std::vector<long long>& a, const std::vector<long long>& b, int N)
{
    std::vector<long long> c(N + 1, 0);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j) c[i + j] += a[i] * b[j];
    return c;
}

TEST_CASE("quiver construction")
{
    auto q = quiver_of("quadric.json");
    CHECK(q.arrows.size() == 4);
    CHECK(q.arrows[0].name == "x12_1");
    CHECK(q.h1(0, 1) == 2);
    auto z3 = build_quiver(ainf_of("z3_p3.json", 3), 3);
    REQUIRE(z3.arrows.size() == 1);
    CHECK(z3.arrows[0].from == 0);
    CHECK(z3.arrows[0].to == 0);
    CHECK(z3.h2[0][0] == 1);
    auto tri = quiver_of("triangle.json");
    CHECK(tri.arrows.size() == 6);
    nlohmann::json bad = {{"prime", 3}, {"r", 2}, {"h1", {{0, 1}, {1, 0}}}, {"h2", {{0, 0}, {0, 0}}},
                          {"relations", {{{"block", {1, 1}}, {"terms", {{{"coeff", 1}, {"word", {"x12", "x21"}}}}}}}}};
    CHECK_THROWS_AS(load_quiver(bad), ValidationError);
    bad["h2"] = {{1, 0}, {0, 0}};
    CHECK_NOTHROW(load_quiver(bad));
    bad["relations"][0]["terms"][0]["word"] = {"x21", "x12"};
    CHECK_THROWS_AS(load_quiver(bad), ValidationError);
}

TEST_CASE("strongly connected components")
{
    const Field F(3);
    CHECK(strongly_connected_components(build_quiver(F, {{0, 1}, {1, 0}}, {})).size() == 1);
    CHECK(strongly_connected_components(build_quiver(F, {{0, 1}, {0, 0}}, {})).size() == 2);
    auto c = strongly_connected_components(build_quiver(F, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}, {}));
    REQUIRE(c.size() == 1);
    CHECK(c[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("cycle enumeration")
{
    auto cd = enumerate_cycles(quiver_of("quadric.json"));
    CHECK(cd.cycles.size() == 4);
    CHECK(cd.vertex_cycles.size() == 1);
    CHECK(cd.closed_paths == 2);
    CHECK(cd.complements.at({0, 1}).size() == 2);
    CHECK(cd.complements.at({0, 0}).size() == 1);
    auto tri = enumerate_cycles(quiver_of("triangle.json"));
    CHECK(tri.cycles.size() == 5);
    std::size_t two = 0, three = 0;
    for (int c = 0; c < 5; ++c) (tri.length(c) == 2 ? two : three) += 1;
    CHECK(two == 3);
    CHECK(three == 2);
    auto loop = enumerate_cycles(build_quiver(Field(3), {{1}}, {}));
    REQUIRE(loop.cycles.size() == 1);
    CHECK(loop.length(0) == 1);
}

TEST_CASE("monoid generators and K/mK")
{
    auto q = quiver_of("quadric.json");
    auto cd = enumerate_cycles(q);
    auto g = h2_monoid_generators(q, cd);
    REQUIRE(g.generators.size() == 1);
    // W + Z ~ X + Y with W = a1 b1, X = a1 b2, Y = a2 b1, Z = a2 b2
    CHECK(g.generators[0].lhs == Word{0, 3});
    CHECK(g.generators[0].rhs == Word{1, 2});
    auto r1 = r1d_presentation(q, cd, 4);
    CHECK(r1.k_mod_mk == 1);
    CHECK(r1.agree);
    CHECK(r1.kernel_dims == std::vector<long long>{0, 0, 1, 4, 10});
    CHECK(r1.hilbert == std::vector<long long>{1, 4, 9, 16, 25});

    auto t = quiver_of("triangle.json");
    auto tcd = enumerate_cycles(t);
    auto tg = h2_monoid_generators(t, tcd);
    REQUIRE(tg.generators.size() == 1);
    CHECK(tg.generators[0].lhs.size() + tg.generators[0].rhs.size() == 5);
    auto tr = r1d_presentation(t, tcd, 3);
    CHECK(tr.k_mod_mk == 1);
    CHECK(tr.agree);

    auto loop = build_quiver(Field(3), {{1}}, {});
    auto lcd = enumerate_cycles(loop);
    CHECK(h2_monoid_generators(loop, lcd).generators.empty());
    auto lr = r1d_presentation(loop, lcd, 4);
    CHECK(lr.hilbert == std::vector<long long>{1, 1, 1, 1, 1});
    CHECK(lr.k_mod_mk == 0);
}

TEST_CASE("Krull dimension of the invariant ring")
{
    auto k = krull_dim_r1d(quiver_of("quadric.json"));
    CHECK(k.total == 3);
    CHECK(krull_dim_r1d(build_quiver(Field(3), {{1}}, {})).total == 1);
    auto d = krull_dim_r1d(quiver_of("one_way.json"));
    CHECK(d.components.size() == 2);
    CHECK(d.dims == std::vector<long long>{0, 0});
    CHECK(d.total == 0);
}

TEST_CASE("quadric cone presentation")
{
    auto q = quiver_of("quadric.json");
    auto P = rd_presentation(q, 4);
    CHECK(P.hilbert == std::vector<long long>{1, 4, 9, 16, 25});
    CHECK(P.families.empty());
    REQUIRE(P.gma);
    CHECK(P.gma->agree);
    auto t = tangent_space(q, P.cd);
    CHECK(t.total == 4);
    CHECK(t.filtration == std::vector<std::size_t>{0, 4});
    auto b = dimension_bounds(q, P.cd);
    CHECK(b.tangent_lower == 4);
    CHECK(b.tangent_upper == 4);
    CHECK(b.krull_upper_total == 3);
}

TEST_CASE("r = 1 pseudodeformations agree with the abelianized presentation")
{
    for (auto f : {"z3_p3.json", "z2_p2.json", "z5_p5.json", "z3xz3_p3.json"}) {
        const int N = 4;
        auto A = ainf_of(f, N);
        auto q = build_quiver(A, N);
        auto P = rd_presentation(q, N);
        CHECK(P.complete);
        CHECK(P.hilbert == hilbert_function(abelianize(relations_from_ainf(A, N)), N));
        REQUIRE(P.gma);
        CHECK(P.gma->agree);
    }
    auto A = ainf_of("z3_p3.json", 4);
    auto q = build_quiver(A, 4);
    auto P = rd_presentation(q, 4);
    CHECK(P.hilbert == std::vector<long long>{1, 1, 1, 0, 0});
    auto t = tangent_space(q, P.cd);
    CHECK(t.total == 1);
    CHECK(t.filtration == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(rd_presentation(build_quiver(A, 3), 4), Refusal);
}

TEST_CASE("relations from an Ext^2 class are tensored with closing paths")
{
    auto q = quiver_of("quadric_h2.json");
    auto P = rd_presentation(q, 4);
    REQUIRE(P.families.size() == 1);
    CHECK(P.families[0].block == Block{0, 0});
    CHECK(P.families[0].kappa.empty());
    // the linear relation W - Z cuts one tangent direction
    auto t = tangent_space(q, P.cd);
    CHECK(t.total == 3);
    CHECK(P.hilbert[1] == 3);
    auto b = dimension_bounds(q, P.cd);
    CHECK(b.tangent_upper == 4);
    CHECK(b.tangent_lower <= 3);
    REQUIRE(P.gma);
    CHECK(P.gma->agree);

    // Ext^2 in an off-diagonal block: the relation is closed by each arrow back
    const Field F(3);
    Quiver off = build_quiver(F, {{1, 1}, {1, 0}}, {{0, 1}, {0, 0}});
    Relation rel;
    rel.label = "r";
    rel.block = {0, 1};
    rel.terms.push_back({1, {0, 1}});   // loop then arrow 1 -> 2
    off.relations.push_back(rel);
    auto Po = rd_presentation(off, 3);
    REQUIRE(Po.families.size() == 1);
    CHECK(Po.families[0].kappa.size() == 1);
    CHECK(Po.families[0].poly.size() == 1);
    CHECK(Po.families[0].poly.begin()->first.size() == 2);   // loop times the 2-cycle
}

TEST_CASE("tangent dimensions stay within the bounds on random quivers")
{
    std::mt19937 rng(20240611);
    const Field F(3);
    for (int trial = 0; trial < 24; ++trial) {
        const int r = 1 + trial % 4;
        auto q = random_quiver(rng, F, r, 2, trial % 3 != 0);
        auto cd = enumerate_cycles(q);
        auto t = tangent_space(q, cd);
        auto b = dimension_bounds(q, cd);
        CHECK(static_cast<long long>(t.total) <= b.tangent_upper);
        CHECK(static_cast<long long>(t.total) >= b.tangent_lower);
        std::size_t fsum = 0, psum = 0;
        for (auto v : t.filtration) fsum += v;
        for (auto v : t.per_cycle) psum += v;
        CHECK(fsum == t.total);
        CHECK(psum <= t.total);
        CHECK(static_cast<long long>(psum) >= b.tangent_lower);
        bool no_h2 = true;
        for (const auto& row : q.h2)
            for (int v : row) no_h2 = no_h2 && v == 0;
        if (no_h2) CHECK(b.tangent_lower == b.tangent_upper);
        if (cd.cycles.size() <= 30) {
            auto P = rd_presentation(q, 2, -1);
            CHECK(P.hilbert[1] == static_cast<long long>(t.total));
        }
    }
}

TEST_CASE("disconnected quivers: Hilbert functions convolve")
{
    std::mt19937 rng(7);
    const Field F(3);
    for (int trial = 0; trial < 6; ++trial) {
        auto a = random_quiver(rng, F, 1 + trial % 2, 2, false);
        auto b = random_quiver(rng, F, 1 + (trial / 2) % 2, 1, false);
        auto u = disjoint_union(a, b);
        const int N = 3;
        auto ha = rd_presentation(a, N, -1).hilbert, hb = rd_presentation(b, N, -1).hilbert;
        CHECK(rd_presentation(u, N, -1).hilbert == convolve(ha, hb, N));
        auto ka = krull_dim_r1d(a).total, kb = krull_dim_r1d(b).total;
        CHECK(krull_dim_r1d(u).total == ka + kb);
    }
}

TEST_CASE("obstructions")
{
    SUBCASE("quadric: alpha detects WZ - XY")
    {
        auto P = rd_presentation(quiver_of("quadric.json"), 4);
        PseudoHom h;
        h.n = 1;
        h.values = {{1}, {0}, {0}, {1}};
        auto o = evaluate_obstructions(P, h);
        CHECK_FALSE(o.alpha_zero);
        CHECK(o.alpha == Vec{1});
        CHECK(o.extensions_found == 0);
        CHECK(o.consistent);
        h.values = {{1}, {1}, {1}, {1}};
        auto o2 = evaluate_obstructions(P, h);
        CHECK(o2.alpha_zero);
        CHECK(o2.beta_zero);
        CHECK(o2.extensions_found > 0);
    }
    SUBCASE("Z/3: beta detects t^3")
    {
        auto A = ainf_of("z3_p3.json", 4);
        auto P = rd_presentation(build_quiver(A, 4), 4);
        PseudoHom h;
        h.n = 2;
        h.values = {{1, 0}};
        auto o = evaluate_obstructions(P, h);
        CHECK(o.alpha_zero);
        REQUIRE(o.beta);
        CHECK_FALSE(o.beta_zero);
        CHECK(o.extensions_found == 0);
        CHECK(o.consistent);
        CHECK(all_homs(P, 1).size() == 3);
        CHECK(all_homs(P, 2).size() == 9);
        CHECK(all_homs(P, 3).size() == 9);
    }
    SUBCASE("invalid maps are refused")
    {
        auto P = rd_presentation(quiver_of("quadric.json"), 4);
        PseudoHom h;
        h.n = 2;
        h.values = {{1, 0}, {0, 0}, {0, 0}, {1, 0}};
        CHECK_FALSE(is_valid_hom(P, h));
        CHECK_THROWS_AS(evaluate_obstructions(P, h), ValidationError);
    }
    SUBCASE("every map to eps_n, n <= 3")
    {
        for (int which = 0; which < 2; ++which) {
            PseudoPresentation P = which == 0 ? rd_presentation(quiver_of("quadric.json"), 4)
                                              : rd_presentation(build_quiver(ainf_of("z3_p3.json", 4), 4), 4);
            for (int n = 1; n <= 3; ++n)
                for (const auto& h : all_homs(P, n)) CHECK(evaluate_obstructions(P, h).consistent);
        }
    }
}
