#include "defring/deform.hpp"
#include "defring/error.hpp"

#include <doctest.h>

#include <string>

using namespace defring;
using nlohmann::json;

static Representation rep_of(const char* f)
{
    return load_input_file(std::string(DEFRING_DATA_DIR) + "/" + f).rep;
}

TEST_CASE("test rings")
{
    Field F(3);
    auto e3 = eps_ring(F, 3);
    CHECK(e3.nilpotency == 4);
    CHECK(e3.commutative);
    CHECK(xy_square_zero(F).nilpotency == 2);
    json bad = {{"basis", {"1", "x"}}, {"table", {{{1, 0}, {0, 1}}, {{0, 1}, {0, 1}}}}};
    CHECK_THROWS_AS(load_test_ring(F, bad), ValidationError);   // x^2 = x is not nilpotent
    json nc = {{"basis", {"1", "x", "y", "xy"}},
               {"table", {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
                          {{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}},
                          {{0, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}},
                          {{0, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}}}};
    auto R = load_test_ring(F, nc);
    CHECK_FALSE(R.commutative);
    CHECK(R.nilpotency == 3);
    CHECK_THROWS_AS(parse_ring_spec(F, "eps:x"), UsageError);
    CHECK(parse_ring_spec(F, "eps:2").dim == 3);
}

TEST_CASE("Z/3: dg solutions, minimal solutions and the oracle agree")
{
    auto rep = rep_of("z3_p3.json");
    auto cx = build_group_complex(rep, 3);
    auto R = build_retract(cx);
    auto A = transfer_products(cx, R, 3);
    const int expected[] = {3, 9, 9};
    for (int n = 1; n <= 3; ++n) {
        auto ring = eps_ring(cx.F, n);
        auto dg = enumerate_mc_dg(cx, ring);
        CHECK(dg.mode == "full");
        CHECK(dg.xi.size() == static_cast<std::size_t>(expected[n - 1]));
        auto cls = gauge_classes_dg(cx, ring, dg.xi);
        CHECK(cls.deformation_classes == static_cast<std::size_t>(expected[n - 1]));
        auto mn = solve_mc_minimal(A, ring);
        auto mcls = minimal_classes(A, ring, mn.xi, h0_is_diagonal(cx));
        CHECK(mcls.deformation_classes == static_cast<std::size_t>(expected[n - 1]));
        auto orc = oracle_lift_classes(rep, ring);
        CHECK(orc.deformation_classes == static_cast<std::size_t>(expected[n - 1]));
    }
}

TEST_CASE("generator mode reproduces full enumeration")
{
    auto rep = rep_of("z4_p2.json");
    auto cx = build_group_complex(rep, 2);
    auto ring = eps_ring(cx.F, 2);
    auto full = enumerate_mc_dg(cx, ring);
    EnumOptions opt;
    opt.force_generator_mode = true;
    auto gen = enumerate_mc_dg(cx, ring, opt);
    CHECK(gen.mode == "generator");
    CHECK(full.xi == gen.xi);
    opt.force_generator_mode = false;
    opt.threads = 4;
    CHECK(enumerate_mc_dg(cx, ring, opt).xi == full.xi);
}

TEST_CASE("layered minimal search matches full search")
{
    auto cx = build_group_complex(rep_of("z3xz3_p3.json"), 3);
    auto A = transfer_products(cx, build_retract(cx), 3);
    auto ring = eps_ring(cx.F, 3);
    auto full = solve_mc_minimal(A, ring);
    EnumOptions opt;
    opt.force_layered = true;
    auto lay = solve_mc_minimal(A, ring, opt);
    CHECK(lay.mode == "layered");
    CHECK(full.xi == lay.xi);
    CHECK_THROWS_AS(solve_mc_minimal(transfer_products(cx, build_retract(cx), 2), ring), Refusal);
}

TEST_CASE("Z/2 over eps_2 has two classes")
{
    auto rep = rep_of("z2_p2.json");
    CHECK(oracle_lift_classes(rep, eps_ring(Field(2), 2)).deformation_classes == 2);
    auto cx = build_group_complex(rep, 3);
    auto A = transfer_products(cx, build_retract(cx), 2);
    CHECK(solve_mc_minimal(A, eps_ring(cx.F, 2)).xi.size() == 2);
}

TEST_CASE("acyclic complex has one class")
{
    auto cx = build_group_complex(rep_of("z2_p3.json"), 2);
    for (int n = 1; n <= 3; ++n) {
        auto ring = eps_ring(cx.F, n);
        auto cls = gauge_classes_dg(cx, ring, enumerate_mc_dg(cx, ring).xi);
        CHECK(cls.deformation_classes == 1);
        CHECK(cls.strict_classes == 1);
    }
    auto s3 = rep_of("s3_std_p2.json");
    auto cs = build_group_complex(s3, 2);
    auto ring = eps_ring(cs.F, 2);
    auto sol = enumerate_mc_dg(cs, ring);
    CHECK(sol.mode == "generator");
    auto cls = gauge_classes_dg(cs, ring, sol.xi);
    CHECK(cls.strict_classes == 1);
    CHECK(cls.gauge_images_checked > 0);
    CHECK(oracle_lift_classes(s3, ring).deformation_classes == 1);
}

TEST_CASE("two blocks: strict and deformation classes")
{
    auto rep = rep_of("s3_triv_sgn_p3.json");
    auto cx = build_group_complex(rep, 3);
    auto A = transfer_products(cx, build_retract(cx), 2);
    auto ring = eps_ring(cx.F, 1);
    auto orc = oracle_lift_classes(rep, ring);
    auto mn = solve_mc_minimal(A, ring);
    CHECK(mn.xi.size() == 9);   // (H^1 tensor eps F_3), h^1 = 2
    auto mcls = minimal_classes(A, ring, mn.xi, h0_is_diagonal(cx));
    CHECK(mcls.supported);
    CHECK(mcls.deformation_classes == orc.deformation_classes);
    CHECK(mcls.strict_classes == orc.strict_classes);
    auto dg = gauge_classes_dg(cx, ring, enumerate_mc_dg(cx, ring).xi);
    CHECK(dg.deformation_classes == orc.deformation_classes);
    CHECK(dg.strict_classes == orc.strict_classes);
}

TEST_CASE("extend_lift")
{
    auto cx = build_group_complex(rep_of("z3_p3.json"), 3);
    auto R = build_retract(cx);
    Vec a = R.i[1].column(0);
    auto e2 = extend_lift(cx, R, {a});
    REQUIRE(e2.extends);
    CHECK(e2.cocycles.size() == 1);
    auto e3 = extend_lift(cx, R, {a, e2.particular});
    CHECK_FALSE(e3.extends);
    CHECK_FALSE(vzero(e3.obstruction));
    Vec z(cx.dims[1], 0);
    auto e0 = extend_lift(cx, R, {z, z});
    CHECK(e0.extends);
    CHECK(vzero(e0.particular));
    CHECK_THROWS_WITH(extend_lift(cx, R, {a, a}), doctest::Contains("degree 2"));
}
