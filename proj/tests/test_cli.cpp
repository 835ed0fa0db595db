#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
    nlohmann::json doc;
};

Run cli(const std::string& args, bool merge_stderr = false)
{
    Run r;
    const std::string cmd = std::string(DEFRING_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    if (!merge_stderr && !r.out.empty() && r.out[0] == '{') r.doc = nlohmann::json::parse(r.out);
    return r;
}

std::string data(const char* f) { return std::string(DEFRING_DATA_DIR) + "/" + f; }

using V = std::vector<long long>;

} // namespace

TEST_CASE("cohomology")
{
    auto z3 = cli("cohomology --input " + data("z3_p3.json"));
    CHECK(z3.code == 0);
    CHECK(z3.doc["schema_version"] == 1);
    CHECK(z3.doc["result"]["h"].get<V>() == V{1, 1, 1});
    CHECK(cli("cohomology --input " + data("z2_p3.json")).doc["result"]["h"].get<V>() == V{1, 0, 0});
    auto bad = cli("cohomology --input " + data("bad_table.json"), true);
    CHECK(bad.code == 2);
    CHECK(bad.out.find("triple (1,1,1)") != std::string::npos);
    CHECK(cli("cohomology").code == 2);
    auto txt = cli("cohomology --input " + data("z3_p3.json") + " --format text");
    CHECK(txt.out.find("result.h: [1,1,1]") != std::string::npos);
}

TEST_CASE("present")
{
    auto z3 = cli("present --input " + data("z3_p3.json") + " --truncate 3 --abelian");
    CHECK(z3.code == 0);
    CHECK(z3.doc["result"]["hilbert"].get<V>() == V{1, 1, 1, 0});
    const auto& rels = z3.doc["result"]["presentation"]["relations"];
    REQUIRE(rels.size() == 1);
    REQUIRE(rels[0]["terms"].size() == 1);
    CHECK(rels[0]["terms"][0]["word"].size() == 3);
    CHECK(rels[0]["terms"][0]["coeff"] != 0);
    CHECK(z3.doc["result"]["universal_hom"]["pass"] == true);
    auto z2 = cli("present --input " + data("z2_p2.json") + " --truncate 2 --abelian");
    CHECK(z2.doc["result"]["hilbert"].get<V>() == V{1, 1, 0});
    CHECK(cli("present --input " + data("z2_dup_p3.json")).code == 3);
    CHECK(cli("present --input " + data("s3_triv_sgn_p3.json") + " --gma").code == 0);
}

TEST_CASE("pseudo")
{
    auto q = cli("pseudo --quiver " + data("quadric.json"));
    CHECK(q.code == 0);
    CHECK(q.doc["result"]["krull"]["total"] == 3);
    CHECK(q.doc["result"]["h2_count"] == 1);
    auto from_group = cli("pseudo --input " + data("z3_p3.json") + " --truncate 4");
    auto abel = cli("present --input " + data("z3_p3.json") + " --truncate 4 --abelian");
    CHECK(from_group.doc["result"]["relations"]["hilbert"] == abel.doc["result"]["hilbert"]);
    auto two = cli("pseudo --quiver " + data("two_components.json") + " --truncate 3");
    REQUIRE(two.doc["result"]["components"].size() == 2);
    CHECK(two.doc["result"]["components"][0]["krull"] == 3);
    CHECK(two.doc["result"]["components"][1]["krull"] == 1);
    CHECK(two.doc["result"]["relations"]["hilbert"].get<V>() == V{1, 5, 14, 30});
}

TEST_CASE("check")
{
    for (const char* f : {"z3_p3.json", "z2_p2.json"}) {
        auto r = cli(std::string("check --input ") + data(f));
        CHECK(r.code == 0);
        CHECK(r.doc["result"]["all_pass"] == true);
    }
    auto bad = cli("check --input " + data("z3xz3_p3_corrupt.json"));
    CHECK(bad.code == 1);
    bool witnessed = false;
    for (const auto& c : bad.doc["result"]["checks"])
        if (c["name"] == "universal_hom") witnessed = c["pass"] == false && c["detail"].contains("witness");
    CHECK(witnessed);
}

TEST_CASE("oracle, massey, products")
{
    auto o = cli("oracle --input " + data("z3_p3.json") + " --ring eps:2");
    CHECK(o.code == 0);
    CHECK(o.doc["result"]["oracle"]["deformation_classes"] == 9);
    CHECK(cli("oracle --input " + data("z3_p3.json") + " --ring nope").code == 2);
    auto m = cli("massey --input " + data("z3_p3.json"));
    CHECK(m.code == 0);
    CHECK(m.doc["result"]["first_nonzero_arity"] == 3);
    auto p = cli("products --input " + data("z2_p2.json") + " --truncate 2");
    CHECK(p.doc["result"]["m"].size() == 1);
}
