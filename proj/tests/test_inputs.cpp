#include "defring/error.hpp"
#include "defring/inputs.hpp"

#include <doctest.h>

#include <string>

using namespace defring;
using nlohmann::json;

static std::string data(const char* f) { return std::string(DEFRING_DATA_DIR) + "/" + f; }

TEST_CASE("fixtures load")
{
    auto D = load_input_file(data("s3_triv_sgn_p3.json"));
    CHECK(D.F.p == 3);
    CHECK(D.rep.r() == 2);
    CHECK(D.rep.group->order == 6);
    CHECK(D.rep.rho.size() == 6);
    auto mf = check_multiplicity_free(D.rep);
    CHECK(mf.verdict);
    CHECK(mf.table[0][1] == 0);
}

TEST_CASE("toml and json agree")
{
    auto a = load_input_file(data("z2_p2.json"));
    auto b = load_input_file(data("z2_p2.toml"));
    CHECK(a.rep.group->table == b.rep.group->table);
    CHECK(a.rep.rho[1] == b.rep.rho[1]);
}

TEST_CASE("non-associative table is rejected")
{
    json g = {{"order", 3}, {"table", {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}}, {"generators", {1}}};
    CHECK_THROWS_AS(load_group(g), ValidationError);
}

TEST_CASE("non-homomorphism is rejected")
{
    json doc = {{"prime", 3},
                {"group", {{"order", 2}, {"table", {{0, 1}, {1, 0}}}, {"generators", {1}}}},
                {"representation", {{"blocks", {1}}, {"matrices", {{{2}}}}}}};
    CHECK_NOTHROW(load_input(doc));
    doc["representation"]["matrices"] = {{{2}}};
    doc["prime"] = 5;   // 2^2 = 4 != 1 mod 5
    CHECK_THROWS_AS(load_input(doc), ValidationError);
}

TEST_CASE("non-prime field and repeated block are refused")
{
    json doc = {{"prime", 4},
                {"group", {{"order", 2}, {"table", {{0, 1}, {1, 0}}}, {"generators", {1}}}},
                {"representation", {{"blocks", {1}}, {"matrices", {{{1}}}}}}};
    CHECK_THROWS_WITH(load_input(doc), doctest::Contains("unsupported field"));
    doc["prime"] = 3;
    doc["representation"] = {{"blocks", {1, 1}}, {"matrices", {{{1, 0}, {0, 1}}}}};
    auto D = load_input(doc);
    CHECK_FALSE(check_multiplicity_free(D.rep).verdict);
}
