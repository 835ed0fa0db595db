#include "defring/error.hpp"
#include "defring/present.hpp"

#include <doctest.h>

#include <string>

using namespace defring;

static InputDocument doc_of(const char* f) { return load_input_file(std::string(DEFRING_DATA_DIR) + "/" + f); }

struct Pipeline {
    CochainComplex cx;
    Retract R;
    AInfStructure A;
};

static Pipeline run(const char* f, int N, Priority pr = Priority::Standard)
{
    auto cx = build_group_complex(doc_of(f).rep, 3);
    auto R = build_retract(cx, pr);
    auto A = transfer_products(cx, R, N);
    return {std::move(cx), std::move(R), std::move(A)};
}

TEST_CASE("cyclic relations")
{
    auto z3 = run("z3_p3.json", 3);
    auto P = relations_from_ainf(z3.A, 3);
    REQUIRE(P.gens.size() == 1);
    CHECK(P.gens[0].name == "x");
    REQUIRE(P.rels.size() == 1);
    REQUIRE(P.rels[0].terms.size() == 1);
    CHECK(P.rels[0].terms[0].word == Word{0, 0, 0});
    auto z2 = run("z2_p2.json", 2);
    auto P2 = relations_from_ainf(z2.A, 2);
    REQUIRE(P2.rels[0].terms.size() == 1);
    CHECK(P2.rels[0].terms[0].word == Word{0, 0});
    auto ac = run("z2_p3.json", 2);
    auto P0 = relations_from_ainf(ac.A, 2);
    CHECK(P0.gens.empty());
    CHECK(P0.rels.empty());
    CHECK_THROWS_AS(relations_from_ainf(z3.A, 4), Refusal);
}

TEST_CASE("Hilbert functions of the group algebras")
{
    struct Case { const char* file; int p, N; };
    for (auto c : {Case{"z2_p2.json", 2, 4}, Case{"z3_p3.json", 3, 5}, Case{"z5_p5.json", 5, 6}}) {
        auto pl = run(c.file, c.N);
        auto h = hilbert_function(abelianize(relations_from_ainf(pl.A, c.N)), c.N);
        std::vector<long long> want(c.N + 1, 0);
        for (int k = 0; k < c.p; ++k) want[k] = 1;
        CHECK(h == want);
    }
}

TEST_CASE("Hilbert function of a polynomial ring and the elementary abelian group")
{
    PresentationTruncation P;
    P.F = Field(3);
    P.N = 3;
    P.commutative = true;
    for (int k = 0; k < 4; ++k) P.gens.push_back({"w" + std::to_string(k), {0, 0}});
    CHECK(hilbert_function(P, 3) == std::vector<long long>{1, 4, 10, 20});
    Relation q{"q", {0, 0}, {{1, {0, 3}}, {2, {1, 2}}}};   // wz - xy
    P.rels.push_back(q);
    P.N = 4;
    CHECK(hilbert_function(P, 4) == std::vector<long long>{1, 4, 9, 16, 25});
    CHECK_THROWS_AS(hilbert_function(P, 5), UsageError);

    auto zz = run("z3xz3_p3.json", 5);
    auto Pa = abelianize(relations_from_ainf(zz.A, 5));
    CHECK(hilbert_function(Pa, 5) == std::vector<long long>{1, 2, 3, 2, 1, 0});
}

TEST_CASE("free presentation over two vertices")
{
    auto pl = run("s3_triv_sgn_p3.json", 4);
    auto P = relations_from_ainf(pl.A, 4);
    REQUIRE(P.gens.size() == 2);
    CHECK(P.gens[0].name == "x12");
    CHECK(P.gens[1].name == "x21");
    for (const auto& rel : P.rels)
        for (const auto& t : rel.terms) CHECK(*pl.A.compose(t.word) == rel.block);
    auto h = hilbert_function(P, 2);
    CHECK(h[0] == 2);
    auto Ab = abelianize(P);
    for (const auto& rel : Ab.rels)
        for (const auto& t : rel.terms) CHECK(std::is_sorted(t.word.begin(), t.word.end()));
}

TEST_CASE("abelianization merges block-cyclic words")
{
    PresentationTruncation P;
    P.F = Field(3);
    P.r = 2;
    P.N = 2;
    P.gens = {{"x12", {0, 1}}, {"x21", {1, 0}}};
    P.rels = {{"a", {0, 0}, {{1, {0, 1}}}}, {"b", {1, 1}, {{2, {1, 0}}}}};
    auto Q = abelianize(P);
    CHECK(Q.rels[0].terms[0].word == Word{0, 1});
    CHECK(Q.rels[1].terms[0].word == Word{0, 1});
}

TEST_CASE("universal homomorphism certificate")
{
    struct Case { const char* file; int N; };
    for (auto c : {Case{"z2_p2.json", 4}, Case{"z3_p3.json", 3}, Case{"z4_p2.json", 4}, Case{"z5_p5.json", 5},
                   Case{"z3xz3_p3.json", 4}, Case{"s3_triv_sgn_p3.json", 4}, Case{"s3_std_p2.json", 3}}) {
        CAPTURE(c.file);
        auto pl = run(c.file, c.N);
        auto P = relations_from_ainf(pl.A, c.N);
        auto U = universal_rep_coeffs(pl.cx, pl.A, c.N);
        auto rep = verify_universal_hom(pl.cx, U, P);
        CHECK(rep.pass);
        CHECK(rep.pairs_checked == static_cast<std::size_t>(pl.cx.nb * pl.cx.nb));
    }
}

TEST_CASE("corrupted relation sign is caught")
{
    auto pl = run("z3xz3_p3.json", 3);
    auto P = relations_from_ainf(pl.A, 3);
    auto bad = corrupt_relation_sign(P);
    auto rep = verify_universal_hom(pl.cx, universal_rep_coeffs(pl.cx, pl.A, 3), bad);
    CHECK_FALSE(rep.pass);
    CHECK(rep.x >= 0);
    CHECK_FALSE(rep.word.empty());
}

TEST_CASE("points of the presentation match minimal MC solutions")
{
    for (const char* f : {"z3_p3.json", "z3xz3_p3.json", "s3_triv_sgn_p3.json"}) {
        auto pl = run(f, 3);
        auto P = relations_from_ainf(pl.A, 3);
        for (int n = 1; n <= 3; ++n) {
            auto ring = eps_ring(pl.cx.F, n);
            CHECK(count_points(P, ring) == solve_mc_minimal(pl.A, ring).xi.size());
        }
    }
}

TEST_CASE("retract choice leaves Hilbert functions unchanged")
{
    for (const char* f : {"z3xz3_p3.json", "z4_p2.json", "s3_triv_sgn_p3.json"}) {
        auto a = run(f, 4, Priority::Standard), b = run(f, 4, Priority::Reversed);
        CHECK(hilbert_function(abelianize(relations_from_ainf(a.A, 4)), 4) ==
              hilbert_function(abelianize(relations_from_ainf(b.A, 4)), 4));
    }
}

TEST_CASE("universal coefficients")
{
    auto pl = run("z3_p3.json", 3);
    auto U = universal_rep_coeffs(pl.cx, pl.A, 3);
    // length one: the cocycle lift itself
    for (int x = 0; x < 3; ++x) CHECK(U.coeff.at({0})[x](0, 0) == pl.R.i[1](x, 0));
    // identity element: positive-length terms only from the relation degree on (they lie in the ideal)
    for (const auto& [w, ms] : U.coeff)
        if (w[0] >= 0 && w.size() < 3) CHECK(ms[0].is_zero());
    // with reversed priority the homotopy avoids the identity coordinates entirely
    auto rv = run("z3_p3.json", 3, Priority::Reversed);
    for (const auto& [w, ms] : universal_rep_coeffs(rv.cx, rv.A, 3).coeff)
        if (w[0] >= 0) CHECK(ms[0].is_zero());
    CHECK_THROWS_AS(gma_coordinate_ring(pl.A, 3, false), Refusal);
    auto G = gma_coordinate_ring(pl.A, 3, true);
    CHECK(G.cyclic_completed);
}
