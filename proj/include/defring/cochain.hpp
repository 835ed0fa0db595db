#pragma once

#include "defring/field.hpp"
#include "defring/inputs.hpp"

#include <cstddef>
#include <vector>

namespace defring {

// Coordinates of End(rho): block (i,j) in i-major order, then row, column inside the block.
struct BlockLayout {
    int r = 0, d = 0, dd = 0;
    std::vector<int> dims, offset;
    std::vector<int> coord_row, coord_col, coord_blk;   // per End coordinate
    std::vector<int> index_of;                          // (R * d + C) -> End coordinate
    std::vector<std::vector<int>> block_coords;         // block id (i * r + j) -> End coordinates

    explicit BlockLayout(const std::vector<int>& block_dims = {});
    int blk(int i, int j) const { return i * r + j; }
    int blk_row(int b) const { return b / r; }
    int blk_col(int b) const { return b % r; }
};

struct CochainComplex {
    Field F;
    Representation rep;
    bool hochschild = false;
    int nb = 0;                       // |G| or dim E
    BlockLayout L;
    int dmax = 0;
    std::vector<std::size_t> dims;    // dims[n], n = 0..dmax
    std::vector<std::size_t> tuples;  // nb^n
    std::vector<Matrix> d;            // d[n] : C^n -> C^{n+1}, n = 0..dmax-1

    int block_of(std::size_t coord) const { return L.coord_blk[coord % L.dd]; }
    std::vector<std::size_t> coords_in_block(int n, int blk) const;
};

std::size_t memory_cap_bytes();

CochainComplex build_group_complex(const Representation& rep, int dmax);
CochainComplex build_hochschild_complex(const Representation& rep, int dmax);

// Inhomogeneous cochains with the conjugation action g.M = rho(g) M rho(g)^{-1}; used only for comparison.
CochainComplex build_conjugation_complex(const Representation& rep, int dmax);

Vec cup(const CochainComplex& cx, const Vec& u, int du, const Vec& v, int dv);
Vec differential(const CochainComplex& cx, const Vec& u, int du);
Vec unit_cochain(const CochainComplex& cx);

struct CohomologyResult {
    int degree = 0;
    int dim = 0;
    std::vector<Vec> lifts;
    std::vector<int> lift_block;
    std::vector<std::vector<int>> per_block;  // r x r
};

CohomologyResult cohomology(const CochainComplex& cx, int n);

struct HochschildComparison {
    bool differentials_match = false;
    std::vector<int> dims_group, dims_hochschild, dims_conjugation;
    bool dims_agree = false;
};

HochschildComparison compare_hochschild_group(const Representation& rep, int dmax);

} // namespace defring
