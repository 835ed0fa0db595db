#include "defring/report.hpp"

#include "defring/deform.hpp"
#include "defring/error.hpp"
#include "defring/present.hpp"

#include <fstream>
#include <sstream>

namespace defring {

using nlohmann::json;

CochainComplex build_complex(const Representation& rep, int dmax)
{
    return rep.is_group() ? build_group_complex(rep, dmax) : build_hochschild_complex(rep, dmax);
}

Pipeline build_pipeline(const InputDocument& doc, int dmax, int arity, Priority pr, bool extended)
{
    auto cx = build_complex(doc.rep, std::max(dmax, extended ? 4 : 3));
    auto R = build_retract(cx, pr);
    DegreeProfile prof;
    prof.extended = extended;
    auto A = transfer_products(cx, R, arity, prof);
    return {doc, std::move(cx), std::move(R), std::move(A)};
}

namespace {

json block_json(const Block& b) { return json::array({b.first + 1, b.second + 1}); }

json vec_json(const Vec& v)
{
    json a = json::array();
    for (Scalar s : v) a.push_back(s);
    return a;
}

json gen_names(const std::vector<Generator>& gens, const Word& w)
{
    json a = json::array();
    for (int g : w) a.push_back(g < 0 ? "e" + std::to_string(-g) : gens[g].name);
    return a;
}

json presentation_json(const PresentationTruncation& P)
{
    json gens = json::array(), rels = json::array();
    for (const auto& g : P.gens) gens.push_back({{"name", g.name}, {"block", block_json(g.block)}});
    for (const auto& r : P.rels) {
        json terms = json::array();
        for (const auto& t : r.terms) terms.push_back({{"coeff", t.coeff}, {"word", gen_names(P.gens, t.word)}});
        rels.push_back({{"label", r.label}, {"block", block_json(r.block)}, {"terms", terms}});
    }
    return {{"prime", P.F.p},
            {"r", P.r},
            {"truncation", P.N},
            {"commutative", P.commutative},
            {"cyclic_completed", P.cyclic_completed},
            {"generators", gens},
            {"relations", rels}};
}

InputDocument load_doc(const RunConfig& cfg)
{
    if (cfg.input.empty()) throw UsageError(cfg.command + ": --input is required");
    return load_input_file(cfg.input);
}

bool corrupt_requested(const InputDocument& doc)
{
    return doc.debug.is_object() && doc.debug.value("corrupt_relation_sign", false);
}

void gate_multiplicity_free(const Representation& rep)
{
    if (rep.r() <= 1) return;
    auto mf = check_multiplicity_free(rep);
    if (!mf.verdict) throw Refusal("multiplicity-free gate: " + mf.message);
}

json cmd_cohomology(const RunConfig& cfg, bool&)
{
    auto doc = load_doc(cfg);
    const int top = cfg.dmax > 0 ? cfg.dmax : 2;
    auto cx = build_complex(doc.rep, top + 1);
    json h = json::array(), blocks = json::array();
    for (int n = 0; n <= top; ++n) {
        auto c = cohomology(cx, n);
        h.push_back(c.dim);
        blocks.push_back(c.per_block);
    }
    auto mf = check_multiplicity_free(doc.rep);
    return {{"prime", cx.F.p},
            {"source", doc.rep.is_group() ? "group" : "algebra"},
            {"d", doc.rep.d},
            {"r", doc.rep.r()},
            {"h", h},
            {"per_block", blocks},
            {"multiplicity_free", mf.verdict},
            {"hom_table", mf.table}};
}

json cmd_products(const RunConfig& cfg, bool&)
{
    auto doc = load_doc(cfg);
    const int N = cfg.truncate > 0 ? cfg.truncate : 3;
    auto pl = build_pipeline(doc, cfg.dmax, cfg.max_arity > 0 ? cfg.max_arity : N);
    const auto& A = pl.A;
    std::vector<Generator> gens;
    for (int k = 0; k < A.h1(); ++k) gens.push_back({generator_name(A.r, A.h1_block, k), A.h1_block[k]});
    json m = json::array();
    for (const auto& [t, v] : A.m)
        if (!vzero(v)) m.push_back({{"arity", t.size()}, {"tuple", gen_names(gens, t)}, {"value", vec_json(v)}});
    json h1b = json::array(), h2b = json::array();
    for (const auto& b : A.h1_block) h1b.push_back(block_json(b));
    for (const auto& b : A.h2_block) h2b.push_back(block_json(b));
    return {{"prime", A.F.p}, {"max_arity", A.max_arity}, {"h1_blocks", h1b}, {"h2_blocks", h2b}, {"m", m}};
}

json cmd_present(const RunConfig& cfg, bool& ok)
{
    auto doc = load_doc(cfg);
    gate_multiplicity_free(doc.rep);
    const int N = cfg.truncate > 0 ? cfg.truncate : 3;
    auto pl = build_pipeline(doc, cfg.dmax, std::max(N, cfg.max_arity));
    auto free = relations_from_ainf(pl.A, N);
    if (corrupt_requested(doc)) free = corrupt_relation_sign(free);
    json out;
    auto U = universal_rep_coeffs(pl.cx, pl.A, N);
    auto v = verify_universal_hom(pl.cx, U, free);
    json uh = {{"pass", v.pass},
               {"pairs_checked", v.pairs_checked},
               {"entries_checked", v.entries_checked},
               {"ideal_rank", v.ideal_rank}};
    if (!v.pass)
        uh["witness"] = {{"x", v.x}, {"y", v.y}, {"row", v.row + 1}, {"col", v.col + 1},
                         {"word", gen_names(free.gens, v.word)}, {"residue", v.residue}};
    ok = ok && v.pass;
    PresentationTruncation shown = free;
    if (cfg.gma)
        shown = gma_coordinate_ring(pl.A, N, true);
    else if (cfg.abelian)
        shown = abelianize(free);
    out["presentation"] = presentation_json(shown);
    out["hilbert"] = hilbert_function(shown, N);
    out["universal_hom"] = uh;
    return out;
}

json cmd_massey(const RunConfig& cfg, bool& ok)
{
    auto doc = load_doc(cfg);
    const int N = cfg.truncate > 0 ? cfg.truncate : (cfg.max_arity > 0 ? cfg.max_arity : 5);
    auto pl = build_pipeline(doc, cfg.dmax, N);
    if (pl.A.h1() == 0) throw Refusal("massey: H^1 is zero");
    if (pl.A.h1_block[0].first != pl.A.h1_block[0].second)
        throw Refusal("massey: first H^1 basis vector is not in a diagonal block");
    int n = 0;
    for (int k = 2; k <= N && !n; ++k)
        if (!vzero(pl.A.m_value(Tuple(k, 0)))) n = k;
    json out = {{"generator", generator_name(pl.A.r, pl.A.h1_block, 0)}, {"searched_to", N}};
    if (!n) {
        out["first_nonzero_arity"] = nullptr;
        return out;
    }
    auto M = massey_from_ainf(pl.cx, pl.R, pl.A, Tuple(n, 0));
    ok = ok && M.sign_checked && M.coboundary_checked;
    out["first_nonzero_arity"] = n;
    out["b"] = M.b;
    out["value"] = vec_json(M.value);
    out["expected"] = vec_json(M.expected);
    out["sign_checked"] = M.sign_checked;
    out["coboundary_checked"] = M.coboundary_checked;
    out["matches_mtilde"] = M.matches_mtilde;
    return out;
}

json class_json(const ClassCount& c)
{
    json j = {{"solutions", c.solutions},
              {"strict_classes", c.strict_classes},
              {"deformation_classes", c.deformation_classes},
              {"supported", c.supported}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

struct OracleRun {
    json payload;
    bool agree = false;
};

OracleRun oracle_run(const InputDocument& doc, const TestRing& ring, int threads, Priority pr = Priority::Standard)
{
    EnumOptions opt;
    opt.threads = threads;
    const int arity = std::max(2, ring.nilpotency);
    auto pl = build_pipeline(doc, 3, arity, pr);
    auto orc = oracle_lift_classes(doc.rep, ring, opt);
    auto dg = enumerate_mc_dg(pl.cx, ring, opt);
    auto dgc = gauge_classes_dg(pl.cx, ring, dg.xi);
    auto mn = solve_mc_minimal(pl.A, ring, opt);
    auto mnc = minimal_classes(pl.A, ring, mn.xi, h0_is_diagonal(pl.cx));
    OracleRun out;
    out.agree = dgc.supported && mnc.supported && orc.deformation_classes == dgc.deformation_classes &&
                orc.deformation_classes == mnc.deformation_classes;
    json dj = class_json(dgc), mj = class_json(mnc);
    dj["mode"] = dg.mode;
    mj["mode"] = mn.mode;
    out.payload = {{"ring", ring.label},
                   {"oracle", {{"homomorphisms", orc.homomorphisms},
                               {"strict_classes", orc.strict_classes},
                               {"deformation_classes", orc.deformation_classes}}},
                   {"dg", dj},
                   {"minimal", mj},
                   {"agree", out.agree}};
    return out;
}

json cmd_oracle(const RunConfig& cfg, bool& ok)
{
    auto doc = load_doc(cfg);
    if (!doc.rep.is_group()) throw UsageError("oracle: needs a group input");
    auto ring = parse_ring_spec(doc.F, cfg.ring);
    auto r = oracle_run(doc, ring, cfg.threads);
    ok = ok && r.agree;
    return r.payload;
}

Quiver restrict_quiver(const Quiver& q, const std::vector<int>& verts)
{
    std::vector<int> pos(q.r, -1);
    for (int k = 0; k < static_cast<int>(verts.size()); ++k) pos[verts[k]] = k;
    const int r = static_cast<int>(verts.size());
    std::vector<std::vector<int>> h1(r, std::vector<int>(r, 0)), h2(r, std::vector<int>(r, 0));
    for (const auto& a : q.arrows)
        if (pos[a.from] >= 0 && pos[a.to] >= 0) ++h1[pos[a.from]][pos[a.to]];
    for (int i : verts)
        for (int j : verts) h2[pos[i]][pos[j]] = q.h2[i][j];
    return build_quiver(q.F, h1, h2);
}

json cycle_names(const CycleData& cd, const Word& w)
{
    json a = json::array();
    for (int c : w) a.push_back(cd.names[c]);
    return a;
}

} // namespace

json pseudo_payload(const Quiver& q, int N)
{
    auto P = rd_presentation(q, N);
    const auto& cd = P.cd;
    json cycles = json::array();
    for (std::size_t c = 0; c < cd.cycles.size(); ++c) {
        json arrows = json::array();
        for (int a : cd.cycles[c]) arrows.push_back(q.arrows[a].name);
        cycles.push_back({{"name", cd.names[c]}, {"length", cd.cycles[c].size()}, {"arrows", arrows}});
    }
    json gens = json::array();
    for (const auto& g : P.h2.generators)
        gens.push_back({{"lhs", cycle_names(cd, g.lhs)}, {"rhs", cycle_names(cd, g.rhs)}, {"arrow_degree", g.arrow_degree}});
    auto kr = krull_dim_r1d(q);
    auto r1 = r1d_presentation(q, cd, N, P.h2.bound);
    auto t = tangent_space(q, cd);
    auto b = dimension_bounds(q, cd);
    json fams = json::array();
    for (const auto& f : P.families) {
        json terms = json::array(), kappa = json::array();
        for (int a : f.kappa) kappa.push_back(q.arrows[a].name);
        for (const auto& [mon, c] : f.poly) terms.push_back({{"coeff", c}, {"monomial", cycle_names(cd, mon)}});
        fams.push_back({{"label", f.label}, {"block", block_json(f.block)}, {"closing_path", kappa}, {"terms", terms}});
    }
    json comps = json::array();
    for (std::size_t k = 0; k < kr.components.size(); ++k) {
        json verts = json::array();
        for (int v : kr.components[k]) verts.push_back(v + 1);
        auto sub = restrict_quiver(q, kr.components[k]);
        auto scd = enumerate_cycles(sub);
        comps.push_back({{"vertices", verts},
                         {"cycles", scd.cycles.size()},
                         {"krull", kr.dims[k]},
                         {"r1d_hilbert", r1d_presentation(sub, scd, N, P.h2.bound).hilbert}});
    }
    json out = {
        {"prime", q.F.p},
        {"r", q.r},
        {"arrows", q.arrows.size()},
        {"vertex_cycles", cd.vertex_cycles.size()},
        {"closed_paths", cd.closed_paths},
        {"cycles", cycles},
        {"h2_count", gens.size()},
        {"h2_generators", gens},
        {"h2_search", {{"arrow_degree_bound", P.h2.bound}, {"partial", P.h2.partial}}},
        {"r1d", {{"hilbert", r1.hilbert}, {"kernel_dims", r1.kernel_dims}, {"k_mod_mk", r1.k_mod_mk}, {"agrees_with_h2", r1.agree}}},
        {"krull", {{"components", kr.dims}, {"total", kr.total}}},
        {"components", comps},
        {"tangent", {{"total", t.total}, {"filtration", t.filtration}, {"per_cycle", t.per_cycle}}},
        {"bounds",
         {{"tangent", {t.total, b.tangent_lower, b.tangent_upper}},
          {"tangent_lower", b.tangent_lower},
          {"tangent_upper", b.tangent_upper},
          {"krull_lower", b.krull_lower_total},
          {"krull_upper", b.krull_upper_total}}},
        {"relations", {{"truncation", N}, {"complete", P.complete}, {"families", fams}, {"hilbert", P.hilbert}}},
    };
    out["bounds"].erase("tangent");
    if (P.gma)
        out["gma_check"] = {{"arrow_degree", P.gma->arrow_degree},
                            {"invariant_rank", P.gma->invariant_rank},
                            {"presentation_rank", P.gma->presentation_rank},
                            {"agree", P.gma->agree},
                            {"hilbert", P.gma->hilbert}};
    return out;
}

namespace {

json cmd_pseudo(const RunConfig& cfg, bool& ok)
{
    Quiver q;
    int N = cfg.truncate;
    if (!cfg.quiver.empty()) {
        std::ifstream in(cfg.quiver);
        if (!in) throw ValidationError("cannot open quiver file " + cfg.quiver);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ValidationError(cfg.quiver + ": " + e.what());
        }
        q = load_quiver(j);
        if (N <= 0) N = 4;
    } else {
        auto doc = load_doc(cfg);
        gate_multiplicity_free(doc.rep);
        if (N <= 0) N = 3;
        const int arity = cfg.max_arity > 0 ? cfg.max_arity : doc.rep.r() * N;
        q = build_quiver(build_pipeline(doc, cfg.dmax, arity).A, arity);
    }
    json out = pseudo_payload(q, N);
    const bool agree = out["r1d"]["agrees_with_h2"].get<bool>() && (!out.contains("gma_check") || out["gma_check"]["agree"].get<bool>());
    ok = ok && agree;
    return out;
}

struct Check {
    std::string name;
    bool pass = false;
    json detail;
};

json cmd_check(const RunConfig& cfg, bool& ok)
{
    auto doc = load_doc(cfg);
    std::vector<Check> checks;
    auto run = [&](const std::string& name, auto fn) {
        Check c;
        c.name = name;
        try {
            c.pass = fn(c.detail);
        } catch (const Refusal& e) {
            c.pass = true;
            c.detail["skipped"] = e.what();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail["error"] = e.what();
        }
        checks.push_back(std::move(c));
    };
    const int N = cfg.truncate > 0 ? cfg.truncate : 3;
    gate_multiplicity_free(doc.rep);
    auto pl = build_pipeline(doc, cfg.dmax, std::max(N, cfg.max_arity));

    run("retract", [&](json&) {
        verify_retract(pl.cx, pl.R);
        return true;
    });
    run("universal_hom", [&](json& d) {
        auto P = relations_from_ainf(pl.A, N);
        if (corrupt_requested(doc)) P = corrupt_relation_sign(P);
        auto v = verify_universal_hom(pl.cx, universal_rep_coeffs(pl.cx, pl.A, N), P);
        d["pairs_checked"] = v.pairs_checked;
        if (!v.pass)
            d["witness"] = {{"x", v.x}, {"y", v.y}, {"row", v.row + 1}, {"col", v.col + 1},
                            {"word", gen_names(P.gens, v.word)}, {"residue", v.residue}};
        return v.pass;
    });
    run("stasheff", [&](json& d) {
        auto ext = build_pipeline(doc, cfg.dmax, 4, Priority::Standard, true);
        auto s = check_stasheff(ext.A, {3, 4});
        d["tuples_checked"] = s.tuples_checked;
        d["violations"] = s.violations.size();
        return s.pass();
    });
    run("retract_independence", [&](json& d) {
        auto rev = build_pipeline(doc, cfg.dmax, std::max(N, cfg.max_arity), Priority::Reversed);
        auto h1 = hilbert_function(abelianize(relations_from_ainf(pl.A, N)), N);
        auto h2 = hilbert_function(abelianize(relations_from_ainf(rev.A, N)), N);
        d["standard"] = h1;
        d["reversed"] = h2;
        return h1 == h2;
    });
    if (doc.rep.is_group()) {
        run("oracle_equivalence", [&](json& d) {
            bool all = true;
            d = json::array();
            for (int n = 1; n <= 2; ++n) {
                auto r = oracle_run(doc, eps_ring(doc.F, n), cfg.threads);
                all = all && r.agree;
                d.push_back(r.payload);
            }
            return all;
        });
    }
    if (pl.A.h1() == 1 && pl.A.r == 1) {
        run("massey", [&](json& d) {
            const int top = std::max(N, 5);
            auto mp = build_pipeline(doc, cfg.dmax, top);
            int n = 0;
            for (int k = 2; k <= top && !n; ++k)
                if (!vzero(mp.A.m_value(Tuple(k, 0)))) n = k;
            if (!n) {
                d["skipped"] = "no nonzero power up to arity " + std::to_string(top);
                return true;
            }
            auto M = massey_from_ainf(mp.cx, mp.R, mp.A, Tuple(n, 0));
            d["arity"] = n;
            d["sign_checked"] = M.sign_checked;
            d["coboundary_checked"] = M.coboundary_checked;
            return M.sign_checked && M.coboundary_checked;
        });
    }
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        ok = ok && c.pass;
    }
    return {{"checks", arr}, {"all_pass", ok}};
}

json config_echo(const RunConfig& cfg)
{
    json c = {{"command", cfg.command}};
    if (!cfg.input.empty()) c["input"] = cfg.input;
    if (!cfg.quiver.empty()) c["quiver"] = cfg.quiver;
    if (cfg.truncate) c["truncate"] = cfg.truncate;
    if (cfg.max_arity) c["max_arity"] = cfg.max_arity;
    if (cfg.dmax) c["dmax"] = cfg.dmax;
    if (cfg.command == "oracle") c["ring"] = cfg.ring;
    if (cfg.abelian) c["abelian"] = true;
    if (cfg.gma) c["gma"] = true;
    return c;
}

void text_lines(const json& j, const std::string& prefix, std::ostringstream& os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) text_lines(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
        return;
    }
    if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_object(); })) {
        for (std::size_t k = 0; k < j.size(); ++k) text_lines(j[k], prefix + "[" + std::to_string(k) + "]", os);
        return;
    }
    os << prefix << ": " << j.dump() << "\n";
}

} // namespace

Report run_command(const RunConfig& cfg)
{
    Report rep;
    json result;
    if (cfg.command == "cohomology")
        result = cmd_cohomology(cfg, rep.ok);
    else if (cfg.command == "products")
        result = cmd_products(cfg, rep.ok);
    else if (cfg.command == "present")
        result = cmd_present(cfg, rep.ok);
    else if (cfg.command == "pseudo")
        result = cmd_pseudo(cfg, rep.ok);
    else if (cfg.command == "oracle")
        result = cmd_oracle(cfg, rep.ok);
    else if (cfg.command == "massey")
        result = cmd_massey(cfg, rep.ok);
    else if (cfg.command == "check")
        result = cmd_check(cfg, rep.ok);
    else
        throw UsageError("unknown command '" + cfg.command + "'");
    rep.doc = {{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"config", config_echo(cfg)},
               {"result", result}, {"ok", rep.ok}};
    return rep;
}

std::string render(const Report& rep, const std::string& format)
{
    if (format == "json") return rep.doc.dump(2) + "\n";
    if (format != "text") throw UsageError("unknown format '" + format + "'");
    std::ostringstream os;
    text_lines(rep.doc, "", os);
    return os.str();
}

} // namespace defring
