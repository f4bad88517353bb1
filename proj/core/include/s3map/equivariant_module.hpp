#pragma once

#include "s3map/arrangement.hpp"
#include "s3map/exactalg.hpp"
#include "s3map/poset_topology.hpp"

#include <vector>

namespace s3map::equivariant_module {

using arrangement::GroupElement;
using arrangement::GroupSpec;
using arrangement::IntersectionPoset;
using arrangement::Subspace;
using exactalg::FGAbelianGroup;
using exactalg::Int;
using exactalg::IntegerMatrix;
using exactalg::RationalMatrix;
using poset_topology::LinkHomology;

// Sign of det of g : p -> g.p in the canonical bases of p and g.p.
int stratum_sign(const GroupElement& g, const Subspace& p);
// Same, with explicit bases (rows) for the source and the target.
int transport_sign(const GroupElement& g, const RationalMatrix& source, const RationalMatrix& target);

// Matrix of g on the link homology (columns are images of generators).
IntegerMatrix induced_action(const LinkHomology& link, const IntersectionPoset& P, const GroupElement& g);

struct EquivariantModule {
    GroupSpec group;
    std::size_t rank = 0;
    std::vector<GroupElement> generators;
    std::vector<IntegerMatrix> action;  // one per generator
    bool twisted = false;               // det_ambient character applied

    const IntegerMatrix& of(const GroupElement& g) const;  // g must be a generator
};

// Primal module: the link homology with the induced action.
EquivariantModule link_module(const LinkHomology& link, const IntersectionPoset& P);

// The dual module H_2(M;Z): g acts by transpose(induced(g^-1)), times det_ambient(g)
// when twisted (the modified action).
EquivariantModule dualize(const LinkHomology& link, const IntersectionPoset& P, bool twist = true);

// Dual action of an arbitrary group element.
IntegerMatrix dual_action(const LinkHomology& link, const IntersectionPoset& P, const GroupElement& g,
                          bool twist = true);

// Flips the twist: multiplies each generator matrix by det_ambient.
EquivariantModule apply_twist(const EquivariantModule& m);

struct CoinvariantGroup {
    FGAbelianGroup group;
    // Rows: free coordinates first, then one row per torsion factor (ascending).
    IntegerMatrix projection;

    // Canonical coordinates of a module vector (torsion entries reduced).
    std::vector<Int> project(const std::vector<Int>& v) const;
    // Order of the image of v; 0 when it has infinite order.
    Int order(const std::vector<Int>& v) const;
};

// Cokernel of the stacked (g - id) over the module generators.
CoinvariantGroup coinvariants(const EquivariantModule& m);
// Dihedral only: cokernel of  (p, q) -> (s - 1)p - (sr - 1)q.
CoinvariantGroup coinvariants_via_gamma(const EquivariantModule& m);
// Cokernel of the relations for every group element (slow reference).
FGAbelianGroup coinvariants_full_group(const LinkHomology& link, const IntersectionPoset& P, bool twist = true);

// Invariant factors >= 2 in divisor-chain form.
std::vector<Int> torsion_part(const FGAbelianGroup& g);

}  // namespace s3map::equivariant_module
