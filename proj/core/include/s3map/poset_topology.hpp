#pragma once

#include "s3map/arrangement.hpp"
#include "s3map/exactalg.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace s3map::poset_topology {

using arrangement::IntersectionPoset;
using exactalg::FGAbelianGroup;
using exactalg::Int;
using exactalg::IntegerMatrix;

// Ascending poset indices; ascending index means strictly ascending dimension.
using Chain = std::vector<int>;

struct OrderComplex {
    std::vector<int> vertices;                  // ascending
    std::vector<std::vector<Chain>> simplices;  // [k] = k-simplices, lexicographic

    int dim() const { return static_cast<int>(simplices.size()) - 1; }
    bool empty() const { return simplices.empty(); }
    std::size_t count(int k) const {
        return k >= 0 && k <= dim() ? simplices[k].size() : (k == -1 ? 1 : 0);
    }
    // Position of a k-simplex, or -1.
    long find(const Chain& s) const;
};

// All chains of the elements strictly containing p.
OrderComplex order_complex(const IntersectionPoset& P, std::size_t p);
// All chains of the subposet on the given vertices.
OrderComplex order_complex_on(const IntersectionPoset& P, std::vector<int> vertices);

// Column-sparse integer matrix with machine-size entries.
struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<std::pair<int, std::int64_t>>> col;  // sorted by row

    IntegerMatrix to_dense() const;
};

// boundary[k] is d_k : C_k -> C_{k-1} for k = 0..dim, with C_{-1} = Z spanned by
// the empty chain, so d_0 is the augmentation.
struct ChainComplex {
    std::vector<SparseMatrix> boundary;
};

ChainComplex chain_complex(const OrderComplex& c);

// Nonzero Smith invariants (absolute values, ascending) of a sparse matrix.
// Eliminates unit pivots sparsely and finishes the remainder densely.
std::vector<Int> sparse_smith_diagonal(const SparseMatrix& m);

// Integer chain: sorted (simplex, coefficient) terms with nonzero coefficients.
using Cycle = std::vector<std::pair<Chain, Int>>;

struct HomologyBasis {
    int degree = -1;
    FGAbelianGroup group;
    std::vector<Cycle> cycles;  // free generators
};

// Reduced homology in the given degree (>= -1). Cycles are computed only when
// requested; without them the result carries just the group.
HomologyBasis reduced_homology(const OrderComplex& c, int degree, bool with_cycles = true);

// Ranks of all reduced homology groups, degrees -1..dim.
std::vector<FGAbelianGroup> reduced_homology_all(const OrderComplex& c);

// Subcomplex spanned by the elements left after repeatedly deleting beat points
// (unique upper or unique lower cover). Deletion runs over whole orbits of the
// stabilizer of p so the result stays invariant under it.
OrderComplex prune_quillen(const IntersectionPoset& P, std::size_t p);
std::vector<int> prune_quillen_vertices(const IntersectionPoset& P, std::size_t p);

struct TorsionInLinkHomology : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GeneratorTransportFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkOptions {
    bool prune = true;
    // Unpruned homology is recomputed and compared up to this n.
    int shadow_check_max_n = 10;
};

struct Summand {
    std::size_t element = 0;
    int degree = -1;  // n - 5 - dim
    HomologyBasis homology;
    std::size_t offset = 0;  // flat index of the first generator
    std::size_t rep = 0;     // orbit representative
    arrangement::GroupElement from_rep;  // from_rep . rep == element
};

struct LinkHomology {
    std::vector<Summand> summands;  // one per poset element, in element order
    std::size_t rank = 0;
    std::vector<std::pair<std::size_t, std::size_t>> index;  // (element, local generator)

    // Coordinates of a top-degree cycle of element p in its generator basis.
    // Throws GeneratorTransportFailure when it is not a combination of them.
    std::vector<Int> coordinates(const IntersectionPoset& P, std::size_t p, const Cycle& z) const;

    struct RepData {
        std::vector<Chain> top;          // top simplices of the computing complex
        std::vector<std::size_t> pivot;  // per generator, a column where it is 1 and others 0
    };
    std::vector<RepData> rep_data;  // indexed by element; filled for representatives
};

LinkHomology zz_link_homology(const IntersectionPoset& P, const LinkOptions& opt = {});

// Image of a chain under a poset automorphism.
Cycle map_cycle(const std::vector<int>& perm, const Cycle& z);

}  // namespace s3map::poset_topology
