#include "defring/error.hpp"
#include "defring/inputs.hpp"
#include "defring/transfer.hpp"

#include <doctest.h>

#include <string>

using namespace defring;

static CochainComplex complex_of(const char* f, int dmax)
{
    return build_group_complex(load_input_file(std::string(DEFRING_DATA_DIR) + "/" + f).rep, dmax);
}

static Tuple power(int n) { return Tuple(n, 0); }

TEST_CASE("retract identities, both priorities")
{
    for (const char* f : {"z2_p2.json", "z3_p3.json", "s3_triv_sgn_p3.json", "z3xz3_p3.json"}) {
        auto cx = complex_of(f, 3);
        CHECK_NOTHROW(build_retract(cx, Priority::Standard));
        CHECK_NOTHROW(build_retract(cx, Priority::Reversed));
    }
}

TEST_CASE("acyclic complex contracts")
{
    auto cx = complex_of("z2_p3.json", 3);
    auto R = build_retract(cx);
    CHECK(R.hdim[1] == 0);
    CHECK(R.hdim[2] == 0);
    CHECK(R.i[1].cols == 0);
}

TEST_CASE("m2 agrees with cup modulo coboundaries")
{
    for (const char* f : {"z2_p2.json", "z3xz3_p3.json", "s3_triv_sgn_p3.json"}) {
        auto cx = complex_of(f, 3);
        auto R = build_retract(cx);
        auto A = transfer_products(cx, R, 2);
        for (const auto& t : composable_tuples(A.h1_block, 2)) {
            Vec c = cup(cx, R.i[1].column(t[0]), 1, R.i[1].column(t[1]), 1);
            CHECK(apply(cx.F, R.p[2], c) == A.m.at(t));
        }
        for (const auto& kv : A.m) CHECK(kv.first.size() >= 2);
    }
}

TEST_CASE("cyclic groups: first nonzero power")
{
    struct Case { const char* file; int first; };
    for (auto c : {Case{"z2_p2.json", 2}, Case{"z3_p3.json", 3}, Case{"z5_p5.json", 5}}) {
        auto cx = complex_of(c.file, 3);
        auto R = build_retract(cx);
        auto A = transfer_products(cx, R, c.first);
        REQUIRE(A.h1() == 1);
        for (int n = 2; n < c.first; ++n) CHECK(vzero(A.m.at(power(n))));
        CHECK_FALSE(vzero(A.m.at(power(c.first))));
    }
}

TEST_CASE("Stasheff relations")
{
    auto z3 = complex_of("z3_p3.json", 4);
    auto A3 = transfer_products(z3, build_retract(z3), 4, {true, 3});
    auto rep3 = check_stasheff(A3, {3, 4});
    CHECK(rep3.tuples_checked == 2);
    CHECK(rep3.pass());
    auto z2 = complex_of("z2_p2.json", 4);
    auto A2 = transfer_products(z2, build_retract(z2), 4, {true, 3});
    CHECK(check_stasheff(A2, {3, 4}).pass());
    auto zz = complex_of("z3xz3_p3.json", 4);
    auto Az = transfer_products(zz, build_retract(zz), 4, {true, 3});
    auto repz = check_stasheff(Az, {3, 4});
    CHECK(repz.tuples_checked == 8 + 16);
    CHECK(repz.pass());
    CHECK_THROWS_AS(check_stasheff(transfer_products(z3, build_retract(z3), 3), {3}), UsageError);
}

TEST_CASE("Stasheff on two blocks")
{
    auto cx = complex_of("s3_triv_sgn_p3.json", 4);
    auto A = transfer_products(cx, build_retract(cx), 4, {true, 3});
    CHECK(check_stasheff(A, {3, 4}).pass());
}

TEST_CASE("massey power of the standard cocycle")
{
    auto cx = complex_of("z3_p3.json", 3);
    auto R = build_retract(cx);
    auto A = transfer_products(cx, R, 3);
    Vec a = R.i[1].column(0);
    auto s = solve_affine(cx.F, cx.d[1], cup(cx, a, 1, a, 1));
    REQUIRE(s.has_value());
    auto mv = massey_power(cx, R, a, {a, s->particular});
    CHECK_FALSE(vzero(mv.cls));
    Vec m3 = A.m.at(power(3));
    CHECK((mv.cls == m3 || mv.cls == vscale(cx.F, cx.F.neg(1), m3)));
    Vec b = a;
    b[1] = cx.F.add(b[1], 1);
    CHECK_THROWS_AS(massey_power(cx, R, a, {b, s->particular}), ValidationError);
    CHECK_THROWS_WITH(massey_power(cx, R, a, {a, a}), doctest::Contains("tau_2"));
}

TEST_CASE("massey power on an acyclic complex")
{
    auto cx = complex_of("z2_p3.json", 3);
    auto R = build_retract(cx);
    Vec a = apply(cx.F, cx.d[0], Vec{1});
    auto s = solve_affine(cx.F, cx.d[1], cup(cx, a, 1, a, 1));
    REQUIRE(s.has_value());
    auto mv = massey_power(cx, R, a, {a, s->particular});
    CHECK(mv.cls.empty());
}

TEST_CASE("massey products from the A-infinity structure")
{
    for (auto [f, n] : {std::pair{"z3_p3.json", 3}, std::pair{"z5_p5.json", 5}}) {
        auto cx = complex_of(f, 3);
        auto R = build_retract(cx);
        auto A = transfer_products(cx, R, n);
        auto M = massey_from_ainf(cx, R, A, power(n));
        CHECK(M.sign_checked);
        CHECK(M.coboundary_checked);
        CHECK(M.matches_mtilde);
        CHECK_FALSE(vzero(M.value));
    }
    auto cx = complex_of("z2_p2.json", 3);
    auto R = build_retract(cx);
    auto A = transfer_products(cx, R, 3);
    CHECK_THROWS_AS(massey_from_ainf(cx, R, A, power(3)), Refusal);
}

TEST_CASE("retract choice changes values but not vanishing pattern")
{
    auto cx = complex_of("z3_p3.json", 3);
    auto A = transfer_products(cx, build_retract(cx, Priority::Standard), 3);
    auto B = transfer_products(cx, build_retract(cx, Priority::Reversed), 3);
    CHECK(vzero(B.m.at(power(2))));
    CHECK_FALSE(vzero(B.m.at(power(3))));
    CHECK(vzero(A.m.at(power(2))));
}
