#include "defring/cochain.hpp"
#include "defring/inputs.hpp"

#include <doctest.h>

#include <string>

using namespace defring;

static Representation rep_of(const char* f)
{
    return load_input_file(std::string(DEFRING_DATA_DIR) + "/" + f).rep;
}

static int hdim(const CochainComplex& cx, int n) { return cohomology(cx, n).dim; }

TEST_CASE("cyclic group cohomology with trivial coefficients")
{
    // H^n(Z/m, F_p) = F_p when p | m, zero in positive degrees otherwise
    auto z2 = build_group_complex(rep_of("z2_p2.json"), 4);
    for (int n = 0; n < 4; ++n) CHECK(hdim(z2, n) == 1);
    auto z23 = build_group_complex(rep_of("z2_p3.json"), 3);
    CHECK(hdim(z23, 0) == 1);
    CHECK(hdim(z23, 1) == 0);
    CHECK(hdim(z23, 2) == 0);
    auto z4 = build_group_complex(rep_of("z4_p2.json"), 3);
    CHECK(hdim(z4, 1) == 1);
    CHECK(hdim(z4, 2) == 1);
}

TEST_CASE("elementary abelian rank two")
{
    auto cx = build_group_complex(rep_of("z3xz3_p3.json"), 3);
    CHECK(hdim(cx, 1) == 2);
    CHECK(hdim(cx, 2) == 3);
}

TEST_CASE("S3 blocks")
{
    auto proj = build_group_complex(rep_of("s3_std_p2.json"), 3);
    CHECK(hdim(proj, 0) == 1);
    CHECK(hdim(proj, 1) == 0);
    CHECK(hdim(proj, 2) == 0);
    auto cx = build_group_complex(rep_of("s3_triv_sgn_p3.json"), 3);
    auto h1 = cohomology(cx, 1), h2 = cohomology(cx, 2);
    CHECK(h1.per_block == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
    CHECK(h2.per_block == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
    CHECK(cohomology(cx, 0).per_block == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
}

TEST_CASE("cup is compatible with the differential")
{
    auto cx = build_group_complex(rep_of("z3_p3.json"), 3);
    auto h1 = cohomology(cx, 1);
    REQUIRE(h1.dim == 1);
    const Vec& a = h1.lifts[0];
    CHECK(vzero(differential(cx, cup(cx, a, 1, a, 1), 2)));
    // d(u v) = du v - u dv with u of degree 0
    Vec u(cx.dims[0], 0);
    u[0] = 2;
    Vec lhs = differential(cx, cup(cx, u, 0, a, 1), 1);
    Vec rhs = cup(cx, differential(cx, u, 0), 1, a, 1);
    CHECK(lhs == rhs);
    CHECK(cup(cx, unit_cochain(cx), 0, a, 1) == a);
}

TEST_CASE("group and Hochschild complexes agree")
{
    auto cmp = compare_hochschild_group(rep_of("z3_p3.json"), 2);
    CHECK(cmp.differentials_match);
    CHECK(cmp.dims_agree);
    auto cmp2 = compare_hochschild_group(rep_of("z2_p2.json"), 2);
    CHECK(cmp2.differentials_match);
    CHECK(cmp2.dims_agree);
}
