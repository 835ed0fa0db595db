#pragma once

#include "defring/cochain.hpp"
#include "defring/field.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace defring {

enum class Priority { Standard, Reversed };

struct Retract {
    int top = 0;                              // complete data for n < top, homotopy only at n = top
    Priority priority = Priority::Standard;
    std::vector<int> hdim;                    // n < top
    std::vector<std::vector<int>> hblock;     // block id per H^n basis vector
    std::vector<Matrix> i, p;                 // i[n]: C^n x H^n, p[n]: H^n x C^n
    std::vector<Matrix> h;                    // h[n]: C^n -> C^{n-1}, n = 1..top (h[0] empty)
};

Retract build_retract(const CochainComplex& cx, Priority priority = Priority::Standard);

// Throws std::logic_error naming the first identity that fails.
void verify_retract(const CochainComplex& cx, const Retract& R);

using Tuple = std::vector<int>;
using Block = std::pair<int, int>;

struct AInfStructure {
    Field F;
    int r = 1;
    int max_arity = 0;
    bool synthetic = false;
    bool extended = false;
    std::vector<Block> h1_block, h2_block, h3_block;
    std::map<Tuple, Vec> m;        // all-degree-1 tuples -> H^2 coordinates
    std::map<Tuple, Vec> f;        // all-degree-1 tuples -> C^1 coordinates
    std::map<Tuple, Vec> mtilde;   // all-degree-1 tuples (arity >= 2) -> C^2 coordinates
    // one degree-2 slot, encoded as -1-k for H^2 basis index k; values in H^3 coordinates
    std::map<Tuple, Vec> m_mixed;

    int h1() const { return static_cast<int>(h1_block.size()); }
    int h2() const { return static_cast<int>(h2_block.size()); }
    std::optional<Block> compose(const Tuple& t) const;   // block of a degree-1 tuple, if composable
    // m_n(t) or the zero vector when t is not composable
    Vec m_value(const Tuple& t) const;
};

struct DegreeProfile {
    bool extended = false;     // add tuples with exactly one degree-2 slot
    int mixed_arity = 3;
};

AInfStructure transfer_products(const CochainComplex& cx, const Retract& R, int N,
                                DegreeProfile profile = {});

// Enumerate block-composable tuples of H^1 basis indices of the given arity.
std::vector<Tuple> composable_tuples(const std::vector<Block>& blocks, int arity);

struct StasheffViolation {
    Tuple tuple;
    Vec residual;
};

struct StasheffReport {
    std::vector<int> arities;
    std::size_t tuples_checked = 0;
    std::vector<StasheffViolation> violations;
    bool pass() const { return violations.empty(); }
};

StasheffReport check_stasheff(const AInfStructure& A, const std::vector<int>& arities);

struct MasseyValue {
    Vec c;        // degree-2 cochain
    Vec cls;      // H^2 coordinates
};

// system = (tau_1, ..., tau_{n-1}) with tau_1 = a
MasseyValue massey_power(const CochainComplex& cx, const Retract& R, const Vec& a, const std::vector<Vec>& system);

struct MasseyFromAInf {
    std::map<std::pair<int, int>, Vec> system;   // sigma(i,j), 1-based, (i,j) != (1,n)
    Vec c;
    Vec value;               // H^2 coordinates of the Massey product
    Vec expected;            // (-1)^b m_n(tuple)
    int b = 0;
    bool sign_checked = false;
    Vec primitive;           // h(c): c - (-1)^b i(m_n) = d(primitive)
    bool coboundary_checked = false;
    bool matches_mtilde = false;   // c == (-1)^b mtilde_n on the nose
};

MasseyFromAInf massey_from_ainf(const CochainComplex& cx, const Retract& R, const AInfStructure& A,
                                const Tuple& tuple);

} // namespace defring
