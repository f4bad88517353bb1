#pragma once

#include "s3map/exactalg.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace s3map::arrangement {

using exactalg::Rat;
using exactalg::RationalMatrix;

struct Alpha {
    std::array<int, 4> a{1, 1, 1, 1};

    int n() const { return a[0] + a[1] + a[2] + a[3]; }
    int operator[](int i) const { return a[i]; }
    bool valid() const;
    std::string to_string() const;  // "1,1,1,2"
    bool operator==(const Alpha&) const = default;
    auto operator<=>(const Alpha&) const = default;
};

// Parses "a,b,c,d"; throws std::invalid_argument on malformed or non-positive parts.
Alpha parse_alpha(const std::string& s);
// All compositions of n into four positive parts, lexicographic.
std::vector<Alpha> compositions(int n);

enum class GroupKind { Cyclic, Dihedral };
std::string to_string(GroupKind k);
GroupKind parse_group(const std::string& s);

// s^shift r^reflected acting on coordinates of R^n.
struct GroupElement {
    int shift = 0;
    bool reflected = false;
    bool operator==(const GroupElement&) const = default;
    auto operator<=>(const GroupElement&) const = default;
};

struct GroupSpec {
    GroupKind kind = GroupKind::Cyclic;
    int n = 4;

    int order() const { return kind == GroupKind::Cyclic ? n : 2 * n; }
    std::vector<GroupElement> elements() const;
    std::vector<GroupElement> generators() const;  // {s} or {s, r}
    GroupElement mul(const GroupElement& x, const GroupElement& y) const;
    GroupElement inv(const GroupElement& x) const;
    GroupElement s() const { return {1 % n, false}; }
    GroupElement r() const { return {0, true}; }
    std::size_t index(const GroupElement& g) const;  // position in elements()
};

// Image index of coordinate i under g.
std::vector<int> permutation(const GroupElement& g, int n);
int det_ambient(const GroupElement& g, int n);

std::vector<Rat> act(const GroupElement& g, const std::vector<Rat>& v);

// A linear subspace of R^n stored by its canonical rref basis.
class Subspace {
public:
    Subspace() = default;
    Subspace(int n, RationalMatrix rows);  // canonicalizes
    static Subspace zero(int n) { return Subspace(n, RationalMatrix(0, n)); }

    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(basis_.rows()); }
    const RationalMatrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    // Rows spanning the orthogonal complement in R^n.
    const RationalMatrix& perp() const;

    bool contains(const std::vector<Rat>& v) const;
    bool contains(const Subspace& s) const;
    Subspace intersect(const Subspace& o) const;

    bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }
    // dimension first, then lexicographic on basis entries
    bool operator<(const Subspace& o) const;
    std::string to_string() const;

private:
    int n_ = 0;
    RationalMatrix basis_;
    std::vector<std::size_t> pivots_;
    mutable std::shared_ptr<const RationalMatrix> perp_;  // computed on first use
};

Subspace act(const GroupElement& g, const Subspace& s);

Subspace build_L(const Alpha& alpha);

struct Arrangement {
    Alpha alpha;
    GroupSpec group;
    std::vector<Subspace> maximal;  // sorted
};

Arrangement orbit_arrangement(const Subspace& L, const Alpha& alpha, const GroupSpec& group);

using Mask = std::uint64_t;

struct IntersectionPoset {
    Alpha alpha;
    GroupSpec group;
    std::vector<Subspace> elements;      // sorted by (dim, basis)
    std::vector<Mask> support;           // maximal elements containing each element
    std::vector<std::size_t> maximal;    // element indices of the maximal subspaces
    std::vector<std::vector<int>> above; // strictly larger subspaces, ascending index
    std::vector<std::vector<int>> covers;
    std::vector<std::vector<int>> action;  // per group element (GroupSpec::elements order)
    std::size_t L_index = 0;

    int n() const { return group.n; }
    int dim(std::size_t p) const { return elements[p].dim(); }
    std::size_t size() const { return elements.size(); }
    const std::vector<int>& perm(const GroupElement& g) const { return action[group.index(g)]; }
    int find(const Subspace& s) const;  // -1 if absent
    // Intersection of the maximal subspaces in m; -1 for the empty mask.
    int closure(Mask m) const;
    std::map<int, int> count_by_dim() const;
};

IntersectionPoset intersection_poset(const Arrangement& arr);
// Convenience: build_L + orbit + poset.
IntersectionPoset make_poset(const Alpha& alpha, GroupKind kind);

// Graphviz rendering of the Hasse diagram.
std::string hasse_dot(const IntersectionPoset& P);

}  // namespace s3map::arrangement
