#pragma once

#include "defring/cochain.hpp"
#include "defring/field.hpp"
#include "defring/inputs.hpp"
#include "defring/transfer.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace defring {

// Local Artinian F_p-algebra. basis[0] is the unit; basis[1..] span the maximal ideal.
struct TestRing {
    Field F;
    int dim = 1;
    std::string label;
    std::vector<std::string> names;
    std::vector<Scalar> c;          // c[(a * dim + b) * dim + k]
    std::vector<int> degree;        // empty when ungraded; degree[0] = 0, others >= 1
    bool commutative = true;
    int nilpotency = 1;             // least k with m^k = 0

    int mdim() const { return dim - 1; }
    bool graded() const { return !degree.empty(); }
    Scalar coef(int a, int b, int k) const { return c[(static_cast<std::size_t>(a) * dim + b) * dim + k]; }
    Vec mul(const Vec& x, const Vec& y) const;
    Vec one() const;
};

// F[eps]/(eps^{n+1})
TestRing eps_ring(const Field& F, int n);
// F[x,y]/(x,y)^2
TestRing xy_square_zero(const Field& F);
// {"basis": [...], "table": [[[coeffs]...]...], "degrees": [...]} ; validated
TestRing load_test_ring(const Field& F, const nlohmann::json& j);
// "eps:n", "xy2" or "file:<path>"
TestRing parse_ring_spec(const Field& F, const std::string& spec);

struct EnumOptions {
    std::uint64_t cap = 1u << 22;     // candidate budget
    int threads = 1;
    bool force_generator_mode = false;
    bool force_layered = false;       // graded rings only
};

// MC elements in C^1 (x) m_A: coordinates [c * mdim + t] for C^1 coordinate c, ideal basis t.
struct MCSolutions {
    std::vector<Vec> xi;
    std::string mode;                 // "full" or "generator"
    std::uint64_t candidates = 0;
};

bool is_mc_dg(const CochainComplex& cx, const TestRing& A, const Vec& xi);
MCSolutions enumerate_mc_dg(const CochainComplex& cx, const TestRing& A, const EnumOptions& opt = {});

struct ClassCount {
    std::size_t solutions = 0;
    std::size_t strict_classes = 0;
    std::size_t deformation_classes = 0;
    std::vector<Vec> strict_reps, deformation_reps;
    std::size_t gauge_images_checked = 0;
    bool supported = true;
    std::string note;
};

ClassCount gauge_classes_dg(const CochainComplex& cx, const TestRing& A, const std::vector<Vec>& solutions);

// Homotopy MC elements in H^1 (x) m_A: coordinates [k * mdim + t].
struct MinimalSolutions {
    std::vector<Vec> xi;
    std::string mode;                 // "full" or "layered"
    std::uint64_t candidates = 0;
};

// H^2 (x) A coordinates of sum_n (-1)^{n(n+1)/2} m_n(xi, ..., xi)
Vec mc_minimal_value(const AInfStructure& A, const TestRing& R, const Vec& xi);
MinimalSolutions solve_mc_minimal(const AInfStructure& A, const TestRing& R, const EnumOptions& opt = {});
// h0_ok: H^0 is F^r (checked by the caller from the complex)
ClassCount minimal_classes(const AInfStructure& A, const TestRing& R, const std::vector<Vec>& solutions, bool h0_ok);

bool h0_is_diagonal(const CochainComplex& cx);

struct OracleResult {
    std::size_t homomorphisms = 0;
    std::size_t strict_classes = 0;
    std::size_t deformation_classes = 0;
    std::vector<std::vector<Vec>> representatives;   // per deformation class: generator images over A
    std::uint64_t candidates = 0;
};

OracleResult oracle_lift_classes(const Representation& rep, const TestRing& A, const EnumOptions& opt = {});

struct LiftExtension {
    bool extends = false;
    Vec particular;                 // a solution sigma_n when extends
    std::vector<Vec> cocycles;      // Z^1 basis: solutions form a torsor under its span
    Vec obstruction;                // H^2 class of the right-hand side otherwise
};

// sigma = (sigma_1, ..., sigma_{n-1}); solves d sigma_n = sum_j sigma_j sigma_{n-j}
LiftExtension extend_lift(const CochainComplex& cx, const Retract& R, const std::vector<Vec>& sigma);

} // namespace defring
