#pragma once

#include "defring/field.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace defring {

struct FiniteGroup {
    int order = 0;
    std::vector<int> table;                // table[a * order + b] = a*b
    std::vector<int> generators;
    std::vector<std::vector<int>> words;   // words[g] = generator positions (into `generators`)
    std::vector<int> inverse;

    int mul(int a, int b) const { return table[static_cast<std::size_t>(a) * order + b]; }
    int element_order(int g) const;
};

struct FiniteDimAlgebra {
    int dim = 0;
    std::vector<Scalar> constants;         // c[(a * dim + b) * dim + k]: coefficient of e_k in e_a e_b
    Vec unit;

    Scalar c(int a, int b, int k) const {
        return constants[(static_cast<std::size_t>(a) * dim + b) * dim + k];
    }
};

struct Representation {
    Field F;
    std::shared_ptr<const FiniteGroup> group;        // exactly one of group / algebra is set
    std::shared_ptr<const FiniteDimAlgebra> algebra;
    int d = 0;
    std::vector<int> block_dims;
    std::vector<int> block_offset;
    std::vector<int> block_of;                       // block index of each row/column
    std::vector<Matrix> given;                       // per generator or per algebra basis element
    std::vector<Matrix> rho;                         // per group element or algebra basis element

    int r() const { return static_cast<int>(block_dims.size()); }
    bool is_group() const { return static_cast<bool>(group); }
    int source_size() const { return is_group() ? group->order : algebra->dim; }
};

struct MultiplicityReport {
    std::vector<std::vector<int>> table;  // dim Hom_G(rho_i, rho_j)
    bool verdict = false;
    std::string message;
};

struct InputDocument {
    Field F;
    Representation rep;
    nlohmann::json debug;                  // optional debug switches
    std::string path;
};

FiniteGroup load_group(const nlohmann::json& spec);
FiniteDimAlgebra load_algebra(const Field& F, const nlohmann::json& spec);
Representation load_representation(const Field& F, std::shared_ptr<const FiniteGroup> group,
                                   std::shared_ptr<const FiniteDimAlgebra> algebra,
                                   const std::vector<int>& block_dims,
                                   const std::vector<std::vector<std::vector<long long>>>& matrices);
MultiplicityReport check_multiplicity_free(const Representation& rep);

// The group algebra F[G] with basis the group elements, unit e_0.
FiniteDimAlgebra group_algebra(const Field& F, const FiniteGroup& G);
// The same representation viewed as a module over F[G].
Representation as_algebra_rep(const Representation& rep);

nlohmann::json read_document(const std::string& path);  // JSON or TOML (by extension)
InputDocument load_input(const nlohmann::json& doc, const std::string& path = "");
InputDocument load_input_file(const std::string& path);

Matrix matrix_from_grid(const Field& F, const std::vector<std::vector<long long>>& grid);

} // namespace defring
