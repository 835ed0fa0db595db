#include "defring/error.hpp"
#include "defring/field.hpp"

#include <doctest.h>

using namespace defring;

TEST_CASE("field arithmetic")
{
    Field F(7);
    CHECK(F.mul(3, 5) == 1);
    CHECK(F.inv(3) == 5);
    CHECK(F.from_int(-1) == 6);
    CHECK(F.pow(3, 6) == 1);
    CHECK(F.sign(3) == 6);
    CHECK(F.sign(-2) == 1);
    CHECK_THROWS_WITH(Field(4), doctest::Contains("not prime"));
    CHECK(is_prime(2147483647ULL));
    CHECK_FALSE(is_prime(1));
}

TEST_CASE("rref picks the leftmost pivot and is reduced")
{
    Field F(5);
    Matrix m = Matrix::from_rows(3, {{0, 2, 4}, {1, 1, 1}, {1, 3, 1}});
    auto r = rref(F, m);
    CHECK(r.rank == 3);
    CHECK(r.reduced == Matrix::identity(3));
    Matrix sing = Matrix::from_rows(3, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
    CHECK(rank(F, sing) == 2);
    CHECK_FALSE(inverse(F, sing).has_value());
}

TEST_CASE("inverse round trip")
{
    Field F(3);
    Matrix m = Matrix::from_rows(3, {{1, 2, 0}, {0, 1, 1}, {1, 0, 2}});
    auto inv = inverse(F, m);
    REQUIRE(inv.has_value());
    CHECK(multiply(F, m, *inv) == Matrix::identity(3));
    CHECK(multiply(F, *inv, m) == Matrix::identity(3));
}

TEST_CASE("solve_affine and kernel")
{
    Field F(3);
    Matrix a = Matrix::from_rows(3, {{1, 1, 0}, {0, 1, 1}});
    auto s = solve_affine(F, a, {2, 1});
    REQUIRE(s.has_value());
    CHECK(apply(F, a, s->particular) == Vec{2, 1});
    REQUIRE(s->nullspace.size() == 1);
    CHECK(vzero(apply(F, a, s->nullspace[0])));
    Matrix b = Matrix::from_rows(2, {{1, 1}, {1, 1}});
    CHECK_FALSE(solve_affine(F, b, {1, 0}).has_value());
    CHECK_THROWS_AS(solve_affine(F, b, {1, 0, 0}), UsageError);
    CHECK(kernel_basis(F, b).size() == 1);
}

TEST_CASE("split_complement respects priority")
{
    Field F(2);
    std::vector<Vec> sub = {{1, 1, 0}};
    auto c = split_complement(F, 3, sub, standard_basis(3));
    REQUIRE(c.size() == 2);
    CHECK(c[0] == Vec{1, 0, 0});
    CHECK(c[1] == Vec{0, 0, 1});
    auto rc = split_complement(F, 3, sub, standard_basis(3, true));
    CHECK(rc[0] == Vec{0, 0, 1});
    CHECK(rc[1] == Vec{0, 1, 0});
    CHECK_THROWS_AS(split_complement(F, 3, {{1, 1, 0}, {1, 1, 0}}, standard_basis(3)), ValidationError);
}

TEST_CASE("echelon span membership")
{
    Field F(5);
    EchelonSpan S(F, 3);
    CHECK(S.insert({1, 2, 3}));
    CHECK(S.insert({0, 1, 1}));
    CHECK_FALSE(S.insert({2, 0, 2}));   // 2*(1,2,3) - 4*(0,1,1)
    CHECK(S.contains({1, 3, 4}));
    CHECK(S.rank() == 2);
}
