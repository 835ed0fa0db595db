#pragma once

#include "defring/field.hpp"
#include "defring/present.hpp"
#include "defring/transfer.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace defring {

// An arrow from vertex `from` to `to` is a basis vector of the (from, to) block of H^1.
struct Arrow {
    std::string name;
    int from = 0, to = 0;
};

struct Quiver {
    Field F;
    int r = 1;
    std::vector<Arrow> arrows;
    std::vector<std::vector<int>> h2;       // r x r
    // Relation in block (a,b): words are arrow paths a -> b. One relation per H^2 basis vector.
    std::vector<Relation> relations;
    int relation_arity = 0;                 // longest word length the relation list is complete for; -1 = explicit list

    int h1(int i, int j) const;
};

// Arrows are the H^1 basis in order; relations come from m_n for n <= arity.
Quiver build_quiver(const AInfStructure& A, int arity);
// Arrows named per block in basis order; no relations.
Quiver build_quiver(const Field& F, const std::vector<std::vector<int>>& h1, const std::vector<std::vector<int>>& h2);
// {"prime", "r", "h1", "h2", "relations": [{"block": [i,j], "terms": [{"coeff", "word": [names]}]}]}, 1-based blocks
Quiver load_quiver(const nlohmann::json& j);

// Vertex partition, components ordered by smallest vertex.
std::vector<std::vector<int>> strongly_connected_components(const Quiver& q);

struct CycleData {
    std::vector<std::vector<int>> vertex_cycles;     // start at the smallest vertex
    std::vector<std::vector<int>> cycles;            // arrow sequences, one per rotation class
    std::vector<int> cycle_of;                       // vertex cycle of each arrow-level cycle
    std::vector<std::string> names;
    std::size_t closed_paths = 0;                    // |SCP|: rotations counted separately
    // (a,b) -> arrow-level simple paths b -> a closing a block (a,b) path; {{}} when a == b
    std::map<Block, std::vector<std::vector<int>>> complements;
    std::size_t length(int c) const { return cycles[c].size(); }
};

CycleData enumerate_cycles(const Quiver& q, std::size_t cap = 200000);

struct MonoidGenerator {
    std::vector<int> lhs, rhs;     // multisets of cycle indices with equal arrow multisets
    int arrow_degree = 0;
};

struct H2Generators {
    std::vector<MonoidGenerator> generators;
    int bound = 0;                 // arrow-degree search bound
    bool partial = false;          // cap hit before the bound was exhausted
    std::size_t fibers = 0;
};

// bound <= 0 selects 2r
H2Generators h2_monoid_generators(const Quiver& q, const CycleData& cd, int bound = 0, std::size_t cap = 200000);

struct R1DReport {
    int N = 0;
    std::size_t generators = 0;
    std::vector<long long> hilbert;          // m-adic, cycle-degree 0..N
    std::vector<long long> kernel_dims;      // initial forms of K per cycle-degree
    std::size_t k_mod_mk = 0;                // linear algebra, arrow-degree <= bound
    std::size_t h2_count = 0;
    int bound = 0;
    bool agree = false;
};

R1DReport r1d_presentation(const Quiver& q, const CycleData& cd, int N, int bound = 0);

struct KrullR1D {
    std::vector<std::vector<int>> components;
    std::vector<long long> dims;
    long long total = 0;
};

KrullR1D krull_dim_r1d(const Quiver& q);

struct RelationFamily {
    std::string label;
    Block block;
    std::vector<int> kappa;                  // arrow path closing the block
    std::map<Word, Scalar> poly;             // cycle monomial (sorted cycle indices) -> coeff
};

struct GmaCheck {
    int arrow_degree = 0;
    std::size_t invariant_rank = 0;          // weight-0 part of the relation ideal
    std::size_t presentation_rank = 0;       // ideal of relation (x) closing path
    std::size_t joint_rank = 0;
    std::vector<long long> hilbert;          // invariant quotient per arrow degree
    bool agree = false;
};

struct PseudoPresentation {
    Field F;
    int r = 1;
    int N = 0;
    bool complete = true;                    // relation arity covers cycle-degree N
    CycleData cd;
    H2Generators h2;
    std::vector<RelationFamily> families;
    std::vector<Word> monomials;             // cycle monomials of degree <= N, degree ordered
    std::vector<int> mdeg;
    // R1D/m^{N+1} has basis the arrow multisets of max decomposition degree <= N
    std::vector<int> alpha_of;               // per monomial; -1 when it vanishes modulo K + m^{N+1}
    std::vector<int> alpha_first;            // a monomial representing each basis multiset
    std::vector<int> alpha_deg;
    std::vector<Vec> ideal;                  // echelon rows of the R_D ideal, basis-multiset coordinates
    std::vector<long long> r1d_hilbert, hilbert;
    Matrix linear;                           // families x cycles: linear parts
    std::optional<GmaCheck> gma;
};

// gma_degree < 0 skips the cross-check; 0 selects N.
PseudoPresentation rd_presentation(const Quiver& q, int N, int gma_degree = 0, int h2_bound = 0);

struct TangentReport {
    std::size_t total = 0;                   // common kernel
    std::vector<std::size_t> filtration;     // gr_k, k = 1..max cycle length
    std::vector<std::size_t> per_cycle;      // kernel of each vertex cycle's map on its own
    std::vector<std::size_t> per_cycle_domain;
};

TangentReport tangent_space(const Quiver& q, const CycleData& cd);

struct DimensionBounds {
    long long tangent_lower = 0, tangent_upper = 0;
    std::vector<long long> krull_lower, krull_upper;   // per component
    long long krull_lower_total = 0, krull_upper_total = 0;
};

DimensionBounds dimension_bounds(const Quiver& q, const CycleData& cd);

// Map to F[eps]/(eps^{n+1}): values[c] = coefficients of eps^1..eps^n for cycle c.
struct PseudoHom {
    int n = 1;
    std::vector<Vec> values;
};

struct ObstructionReport {
    int n = 0;
    Vec alpha;                               // eps^{n+1} coefficient per monoid generator
    std::vector<int> alpha_degree;
    bool alpha_zero = true;
    std::optional<Vec> beta;                 // per family, reduced mod the linear image
    bool beta_zero = false;
    std::size_t extensions_found = 0;        // direct search over top coefficients
    bool consistent = false;
};

bool is_valid_hom(const PseudoPresentation& P, const PseudoHom& h);
ObstructionReport evaluate_obstructions(const PseudoPresentation& P, const PseudoHom& h, std::uint64_t cap = 1u << 22);
// Every hom to F[eps]/(eps^{n+1}), built order by order.
std::vector<PseudoHom> all_homs(const PseudoPresentation& P, int n, std::uint64_t cap = 1u << 22);

// Synthetic quivers for property checks: h1 entries <= max_h1, h2 entries in {0,1}, random relations.
Quiver random_quiver(std::mt19937& rng, const Field& F, int r, int max_h1, bool with_h2);
Quiver disjoint_union(const Quiver& a, const Quiver& b);

} // namespace defring
