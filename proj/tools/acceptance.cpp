// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "defring/deform.hpp"
#include "defring/error.hpp"
#include "defring/present.hpp"
#include "defring/pseudo.hpp"
#include "defring/report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace defring;

namespace {

const std::string kData = DEFRING_DATA_DIR;
const std::string kCli = DEFRING_CLI_PATH;

InputDocument fixture(const std::string& name) { return load_input_file(kData + "/" + name); }

Quiver quiver_file(const std::string& name)
{
    return load_quiver(read_document(kData + "/" + name));
}

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            if (pass) note << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

std::string join(const std::vector<long long>& v)
{
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void c1_cyclic(Outcome& o)
{
    for (auto [p, file] : {std::pair{2, "z2_p2.json"}, {3, "z3_p3.json"}, {5, "z5_p5.json"}}) {
        auto t0 = std::chrono::steady_clock::now();
        const int N = p + 1;
        auto pl = build_pipeline(fixture(file), 3, N);
        o.require(pl.A.h1() == 1 && pl.A.h2() == 1, "Z/" + std::to_string(p) + ": h1 = h2 = 1");
        for (int i = 2; i < p; ++i)
            o.require(vzero(pl.A.m_value(Tuple(i, 0))), "Z/" + std::to_string(p) + ": m_" + std::to_string(i) + " = 0");
        o.require(!vzero(pl.A.m_value(Tuple(p, 0))), "Z/" + std::to_string(p) + ": m_p != 0");
        auto h = hilbert_function(abelianize(relations_from_ainf(pl.A, N)), N);
        std::vector<long long> want(N + 1, 0);
        for (int k = 0; k < p; ++k) want[k] = 1;
        o.require(h == want, "Z/" + std::to_string(p) + ": hilbert " + join(h));
        const double s = seconds_since(t0);
        o.require(s < 60, "Z/" + std::to_string(p) + " runtime");
        o.note << "p=" << p << " hilbert " << join(h) << " " << s << "s; ";
    }
}

void c2_oracle(Outcome& o)
{
    auto t0 = std::chrono::steady_clock::now();
    for (const char* file : {"z2_p2.json", "z3_p3.json", "z4_p2.json", "s3_std_p2.json"}) {
        auto doc = fixture(file);
        auto pl = build_pipeline(doc, 3, 3);
        std::vector<TestRing> rings = {eps_ring(doc.F, 1), eps_ring(doc.F, 2), eps_ring(doc.F, 3), xy_square_zero(doc.F)};
        std::vector<std::size_t> counts;
        for (const auto& ring : rings) {
            auto orc = oracle_lift_classes(doc.rep, ring);
            auto dg = enumerate_mc_dg(pl.cx, ring);
            auto dgc = gauge_classes_dg(pl.cx, ring, dg.xi);
            auto mn = solve_mc_minimal(pl.A, ring);
            auto mnc = minimal_classes(pl.A, ring, mn.xi, h0_is_diagonal(pl.cx));
            o.require(dgc.supported && mnc.supported, std::string(file) + " " + ring.label + ": supported");
            o.require(orc.deformation_classes == dgc.deformation_classes &&
                          orc.deformation_classes == mnc.deformation_classes,
                      std::string(file) + " " + ring.label + ": counts " + std::to_string(orc.deformation_classes) + "/" +
                          std::to_string(dgc.deformation_classes) + "/" + std::to_string(mnc.deformation_classes));
            counts.push_back(orc.deformation_classes);
        }
        o.note << file << " [";
        for (std::size_t k = 0; k < counts.size(); ++k) o.note << (k ? "," : "") << counts[k];
        o.note << "] ";
        if (std::string(file) == "z3_p3.json")
            o.require(counts[0] == 3 && counts[1] == 9 && counts[2] == 9, "Z/3 reference counts 3, 9, 9");
    }
    const double s = seconds_since(t0);
    o.require(s < 300, "runtime");
    o.note << s << "s";
}

const std::vector<std::string> kGroupFixtures = {"z2_p2.json", "z3_p3.json", "z4_p2.json", "z5_p5.json",
                                                 "z3xz3_p3.json", "s3_std_p2.json", "s3_triv_sgn_p3.json"};

void c3_universal(Outcome& o)
{
    for (const auto& file : kGroupFixtures) {
        const int N = 3;
        auto pl = build_pipeline(fixture(file), 3, N);
        auto v = verify_universal_hom(pl.cx, universal_rep_coeffs(pl.cx, pl.A, N), relations_from_ainf(pl.A, N));
        o.require(v.pass, file);
        o.note << file << " " << v.pairs_checked << " pairs; ";
    }
    // negative control must be caught
    auto bad = build_pipeline(fixture("z3xz3_p3_corrupt.json"), 3, 3);
    auto v = verify_universal_hom(bad.cx, universal_rep_coeffs(bad.cx, bad.A, 3),
                                  corrupt_relation_sign(relations_from_ainf(bad.A, 3)));
    o.require(!v.pass, "corrupted relation detected");
}

void c4_stasheff(Outcome& o)
{
    for (const char* file : {"z3_p3.json", "z5_p5.json"}) {
        auto pl = build_pipeline(fixture(file), 3, 4, Priority::Standard, true);
        auto s = check_stasheff(pl.A, {3, 4});
        o.require(s.pass(), file);
        o.note << file << " " << s.tuples_checked << " tuples, " << s.violations.size() << " violations; ";
    }
}

void c5_massey(Outcome& o)
{
    for (auto [n, file] : {std::pair{3, "z3_p3.json"}, {5, "z5_p5.json"}}) {
        auto pl = build_pipeline(fixture(file), 3, n);
        auto M = massey_from_ainf(pl.cx, pl.R, pl.A, Tuple(n, 0));
        o.require(!vzero(M.value), std::string(file) + ": Massey power nonzero");
        o.require(M.sign_checked, std::string(file) + ": sign");
        o.require(M.coboundary_checked, std::string(file) + ": coboundary");
        o.note << file << " n=" << n << " b=" << M.b << "; ";
    }
}

void c6_retract(Outcome& o)
{
    for (const auto& file : kGroupFixtures) {
        auto doc = fixture(file);
        const int N = 3;
        auto a = build_pipeline(doc, 3, N, Priority::Standard);
        auto b = build_pipeline(doc, 3, N, Priority::Reversed);
        auto ha = hilbert_function(abelianize(relations_from_ainf(a.A, N)), N);
        auto hb = hilbert_function(abelianize(relations_from_ainf(b.A, N)), N);
        o.require(ha == hb, file + ": hilbert " + join(ha) + " vs " + join(hb));
        for (int n = 1; n <= 2; ++n) {
            auto ring = eps_ring(doc.F, n);
            auto orc = oracle_lift_classes(doc.rep, ring);
            auto ma = solve_mc_minimal(a.A, ring), mb = solve_mc_minimal(b.A, ring);
            auto ca = minimal_classes(a.A, ring, ma.xi, h0_is_diagonal(a.cx));
            auto cb = minimal_classes(b.A, ring, mb.xi, h0_is_diagonal(b.cx));
            o.require(ca.deformation_classes == orc.deformation_classes &&
                          cb.deformation_classes == orc.deformation_classes,
                      file + " eps_" + std::to_string(n) + ": counts");
        }
    }
    o.note << kGroupFixtures.size() << " fixtures, hilbert to degree 3, eps_1 and eps_2 counts";
}

long long binom(long long n, long long k)
{
    if (k < 0 || n < k) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void c7_quadric(Outcome& o)
{
    auto t0 = std::chrono::steady_clock::now();
    auto q = quiver_file("quadric.json");
    auto P = rd_presentation(q, 4);
    auto r1 = r1d_presentation(q, P.cd, 4, P.h2.bound);
    auto kr = krull_dim_r1d(q);
    o.require(P.cd.cycles.size() == 4, "4 simple cycles");
    o.require(P.h2.generators.size() == 1, "one monoid generator");
    o.require(r1.k_mod_mk == 1, "dim K/mK = 1");
    o.require(kr.total == 3 && kr.total == 1 - 2 + 4, "krull 3");
    std::vector<long long> want;
    for (int n = 0; n <= 4; ++n) want.push_back(binom(n + 3, 3) - binom(n + 1, 3));
    o.require(P.hilbert == want, "hilbert " + join(P.hilbert));
    o.require(P.gma && P.gma->agree, "coordinate-ring cross-check");
    const double s = seconds_since(t0);
    o.require(s < 10, "runtime");
    o.note << "cycles " << P.cd.cycles.size() << ", generators " << P.h2.generators.size() << ", K/mK "
           << r1.k_mod_mk << ", krull " << kr.total << ", hilbert " << join(P.hilbert) << ", " << s << "s";
}

std::vector<long long> convolve(const std::vector<long long>& a, const std::vector<long long>& b, int N)
{
    std::vector<long long> c(N + 1, 0);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j) c[i + j] += a[i] * b[j];
    return c;
}

void c8_bounds(Outcome& o)
{
    std::mt19937 rng(1);
    const Field F(3);
    int trials = 0, with_h2 = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int r = 1 + trial % 4;
        auto q = random_quiver(rng, F, r, 2, trial % 3 != 0);
        auto cd = enumerate_cycles(q);
        auto t = tangent_space(q, cd);
        auto b = dimension_bounds(q, cd);
        const long long tot = static_cast<long long>(t.total);
        const std::string tag = "quiver " + std::to_string(trial);
        o.require(b.tangent_lower <= tot && tot <= b.tangent_upper, tag + ": tangent within bounds");
        bool no_h2 = true;
        for (const auto& row : q.h2)
            for (int v : row) no_h2 = no_h2 && v == 0;
        if (no_h2)
            o.require(b.tangent_lower == b.tangent_upper && b.tangent_upper == tot, tag + ": equality without h2");
        else
            ++with_h2;
        auto kr = krull_dim_r1d(q);
        o.require(b.krull_lower_total <= kr.total && kr.total <= b.krull_upper_total, tag + ": krull within bounds");
        if (cd.cycles.size() <= 30) {
            auto P = rd_presentation(q, 2, -1);
            o.require(P.hilbert[1] == tot, tag + ": tangent equals degree-1 hilbert");
        }
        ++trials;
    }
    std::mt19937 rng2(2);
    int conv = 0;
    for (int trial = 0; trial < 6; ++trial) {
        auto a = random_quiver(rng2, F, 1 + trial % 2, 2, false);
        auto b = random_quiver(rng2, F, 1 + (trial / 2) % 2, 2, false);
        auto u = disjoint_union(a, b);
        const int N = 3;
        auto ha = rd_presentation(a, N, -1), hb = rd_presentation(b, N, -1), hu = rd_presentation(u, N, -1);
        o.require(hu.hilbert == convolve(ha.hilbert, hb.hilbert, N), "union " + std::to_string(trial) + ": R_D convolution");
        o.require(hu.r1d_hilbert == convolve(ha.r1d_hilbert, hb.r1d_hilbert, N), "union " + std::to_string(trial) + ": R1D convolution");
        ++conv;
    }
    o.note << trials << " quivers (" << with_h2 << " with h2), " << conv << " disjoint unions";
}

void c9_obstructions(Outcome& o)
{
    std::size_t homs = 0, obstructed = 0;
    for (int which = 0; which < 2; ++which) {
        auto P = which == 0 ? rd_presentation(quiver_file("quadric.json"), 4)
                            : rd_presentation(build_quiver(build_pipeline(fixture("z3_p3.json"), 3, 4).A, 4), 4);
        for (int n = 1; n <= 3; ++n)
            for (const auto& h : all_homs(P, n)) {
                auto rep = evaluate_obstructions(P, h);
                o.require(rep.consistent, std::string(which ? "Z/3" : "quadric") + " n=" + std::to_string(n));
                ++homs;
                if (rep.extensions_found == 0) ++obstructed;
            }
    }
    o.note << homs << " homomorphisms, " << obstructed << " obstructed";
}

std::string run_capture(const std::string& cmd)
{
    std::string out;
    FILE* f = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!f) return out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
    pclose(f);
    return out;
}

void c10_determinism(Outcome& o)
{
    const std::vector<std::string> cmds = {
        "cohomology --input " + kData + "/z3_p3.json",
        "products --input " + kData + "/z3xz3_p3.json",
        "present --input " + kData + "/s3_triv_sgn_p3.json --truncate 3",
        "present --input " + kData + "/z3xz3_p3.json --truncate 3 --abelian",
        "pseudo --quiver " + kData + "/quadric.json",
        "pseudo --quiver " + kData + "/two_components.json --truncate 3",
        "pseudo --input " + kData + "/z3_p3.json --truncate 4",
        "oracle --input " + kData + "/z4_p2.json --ring eps:3 --threads 4",
        "massey --input " + kData + "/z5_p5.json",
        "check --input " + kData + "/z3_p3.json",
    };
    for (const auto& c : cmds) {
        auto a = run_capture(kCli + " " + c), b = run_capture(kCli + " " + c);
        o.require(!a.empty() && a == b, c.substr(0, c.find(' ')));
    }
    o.note << cmds.size() << " invocations compared";
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"cyclic-group deformation rings", c1_cyclic},
        {"oracle equivalence", c2_oracle},
        {"universal homomorphism certificate", c3_universal},
        {"Stasheff relations", c4_stasheff},
        {"Massey comparison", c5_massey},
        {"retract independence", c6_retract},
        {"quadric cone", c7_quadric},
        {"tangent/Krull bounds", c8_bounds},
        {"obstruction semantics", c9_obstructions},
        {"determinism", c10_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.note << "exception: " << e.what();
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << (k + 1) << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[k].first << ": "
                  << o.note.str() << std::endl;
    }
    return failed ? 1 : 0;
}
