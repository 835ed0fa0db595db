#pragma once

#include "defring/cochain.hpp"
#include "defring/deform.hpp"
#include "defring/field.hpp"
#include "defring/transfer.hpp"

#include <map>
#include <string>
#include <vector>

namespace defring {

// A word is a sequence of generator indices; the empty path at vertex i is encoded as {-(i+1)}.
using Word = std::vector<int>;

struct Generator {
    std::string name;
    Block block;
};

struct Term {
    Scalar coeff = 0;
    Word word;       // generator indices; sorted when the presentation is commutative
};

struct Relation {
    std::string label;
    Block block;
    std::vector<Term> terms;
};

struct PresentationTruncation {
    Field F;
    int r = 1;
    int N = 2;
    bool commutative = false;
    bool cyclic_completed = false;
    std::vector<Generator> gens;
    std::vector<Relation> rels;
};

std::string generator_name(int r, const std::vector<Block>& blocks, int k);

PresentationTruncation relations_from_ainf(const AInfStructure& A, int N);
PresentationTruncation abelianize(const PresentationTruncation& P);
PresentationTruncation gma_coordinate_ring(const AInfStructure& A, int N, bool multiplicity_free);

// Negative control: flips the sign of the first term of the first relation with two or more terms.
PresentationTruncation corrupt_relation_sign(const PresentationTruncation& P);

// Degree n dimension of the associated graded of the truncated quotient, n = 0..max_degree.
std::vector<long long> hilbert_function(const PresentationTruncation& P, int max_degree);

struct UniversalRepCoeffs {
    int d = 0;
    int nb = 0;
    int N = 0;
    std::map<Word, std::vector<Matrix>> coeff;   // word -> matrix per source element
};

UniversalRepCoeffs universal_rep_coeffs(const CochainComplex& cx, const AInfStructure& A, int N);

struct UniversalHomReport {
    bool pass = true;
    std::size_t pairs_checked = 0;
    std::size_t entries_checked = 0;
    std::size_t ideal_rank = 0;
    // first witness
    int x = -1, y = -1, row = -1, col = -1;
    Word word;
    Scalar residue = 0;
};

UniversalHomReport verify_universal_hom(const CochainComplex& cx, const UniversalRepCoeffs& U,
                                        const PresentationTruncation& P);

// A-points of the truncated free presentation (relation bodies evaluated in A).
std::size_t count_points(const PresentationTruncation& P, const TestRing& R);

} // namespace defring
