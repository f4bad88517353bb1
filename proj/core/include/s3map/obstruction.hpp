#pragma once

#include "s3map/arrangement.hpp"
#include "s3map/equivariant_module.hpp"
#include "s3map/exactalg.hpp"
#include "s3map/poset_topology.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3map::obstruction {

using arrangement::Alpha;
using arrangement::GroupElement;
using arrangement::GroupKind;
using arrangement::IntersectionPoset;
using arrangement::Subspace;
using equivariant_module::CoinvariantGroup;
using exactalg::FGAbelianGroup;
using exactalg::Int;
using exactalg::IntegerMatrix;
using exactalg::Rat;
using poset_topology::LinkHomology;

struct InconsistentSingularSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotGeneralPosition : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedStratum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Generalized quaternion group Q_4n and the cellular resolution.

// eps^i j^delta, i mod 2n.
struct QuaternionElement {
    int i = 0;
    int delta = 0;
    bool operator==(const QuaternionElement&) const = default;
    auto operator<=>(const QuaternionElement&) const = default;
};

struct QuaternionGroup {
    int n = 1;

    int order() const { return 4 * n; }
    QuaternionElement eps(int k = 1) const;
    QuaternionElement j() const { return {0, 1}; }
    QuaternionElement mul(const QuaternionElement& x, const QuaternionElement& y) const;
    QuaternionElement inv(const QuaternionElement& x) const;
    std::vector<QuaternionElement> elements() const;
    std::size_t index(const QuaternionElement& x) const;  // position in elements()
    // Image in the dihedral quotient acting on W_n (eps^n = j^2 acts trivially).
    GroupElement to_dihedral(const QuaternionElement& x) const;
};

// Element of the integral group ring.
using GroupRingElement = std::map<QuaternionElement, long>;

struct CellularComplex {
    int n = 1;
    QuaternionGroup group;
    // cells[k]: names of the free generators in dimension k.
    std::array<std::vector<std::string>, 4> cells;
    // boundary[k][c]: d of cell c in dimension k as ring coefficients on the
    // cells of dimension k-1 (k = 1..3).
    std::array<std::vector<std::vector<GroupRingElement>>, 4> boundary;

    // Integer matrix of d_k on the Z-basis {g . cell}.
    IntegerMatrix matrix(int k) const;
    bool boundary_squared_zero() const;
    // H_0..H_3 of the underlying Z-complex.
    std::vector<FGAbelianGroup> homology() const;
    std::string describe() const;
};

CellularComplex build_cell_complex(int n);
std::string to_string(const GroupRingElement& x, int n);

// ---------------------------------------------------------------------------
// Join sphere and test map.

struct Vertex {
    bool w = false;  // false: v_i = eps^i a, true: w_i = eps^i j a
    int i = 0;       // mod 2n
    bool operator==(const Vertex&) const = default;
    auto operator<=>(const Vertex&) const = default;
};

struct JoinSphere {
    int n = 1;
    Vertex act(const QuaternionElement& g, const Vertex& x) const;
    // The 3-simplex [v_i, v_{i+1}; w_j, w_{j+1}].
    std::array<Vertex, 4> simplex(int i, int j) const;
};

// u_k = e_k - (1/n) sum e_r, 1-based with u_0 = u_n.
std::vector<Rat> u(int n, int k);
// h(v_i) = u_{(i mod n)+1}, h(w_i) = u_{i mod n}.
std::vector<Rat> test_map(int n, const Vertex& x);

// ---------------------------------------------------------------------------
// Singular simplices of the test map against L.

struct SingularSimplex {
    int index = 0;  // 1..16
    std::array<Vertex, 4> vertices;
    int tau = 0;   // 1 or 2
    int sign = 0;  // intersection sign of the reference table
};

struct SingularSet {
    std::vector<SingularSimplex> theta;
    std::array<int, 4> tau1{}, tau2{};  // u-indices
    std::vector<Rat> y1, y2;
};

SingularSet singular_simplices(const Alpha& alpha);

// Signs I(h(theta_i), L): +1 for i <= 8, -1 otherwise.
int intersection_sign(int theta);
// Factor picked up when translating a singular simplex by g.
int sign_transport(const GroupElement& g, int n);

// ---------------------------------------------------------------------------
// Singular points on the fundamental cell.

struct XRecord {
    std::string label;  // "x11" .. "x42"
    int sigma = 0;      // 1..4
    int simplex = 0;    // i of [v_i, v_{i+1}; w_0, w_1], mod n
    std::array<Rat, 4> lambda;
    GroupElement word;  // the x-point lies on word . L
    int theta = 0;      // the singular simplex it is a translate of
    int base = 0;       // 1 for y1, 2 for y2
    int sign = 0;       // det(word) * intersection_sign(theta)
};

std::vector<XRecord> x_records(const Alpha& alpha);

struct CellSingularities {
    std::array<int, 4> sigma{};                // simplex index of sigma_1..sigma_4
    std::vector<XRecord> x;                    // x11..x42
    std::vector<std::vector<int>> sigma_classes;  // coincidences among sigma_1..4 (1-based)
    std::vector<std::vector<std::string>> x_classes;
};

CellSingularities cell_singularities(const Alpha& alpha, GroupKind kind);

struct GeneralPositionReport {
    std::vector<std::string> relations;  // subspace identities used, e.g. "s^5 L = r s^3 L"
};

// Throws NotGeneralPosition when coinciding x-points lie on distinct subspaces.
GeneralPositionReport verify_general_position(const Alpha& alpha, GroupKind kind);

// ---------------------------------------------------------------------------
// Point classes.

// Equivariant generic points, one per maximal element (empty when none found).
struct GenericPoints {
    std::vector<std::vector<Rat>> point;  // indexed by poset element
};

GenericPoints generic_points(const IntersectionPoset& P);

// Coordinates of [[y]] in the dual basis of the link generators; y lies on the
// maximal element K. nullopt when a deep-stratum pairing is ambiguous.
std::optional<std::vector<Int>> try_point_class(const IntersectionPoset& P, const LinkHomology& link,
                                                const GenericPoints& gen, const std::vector<Rat>& y,
                                                std::size_t K);
// Same; throws UnsupportedStratum instead of returning nullopt.
std::vector<Int> point_class_vector(const IntersectionPoset& P, const LinkHomology& link,
                                    const GenericPoints& gen, const std::vector<Rat>& y, std::size_t K);

// Sign pattern of y against the codimension-one strata of K (a chamber label).
std::vector<int> chamber(const IntersectionPoset& P, const GenericPoints& gen, const std::vector<Rat>& y,
                         std::size_t K);

struct CellPoint {
    int simplex = 0;
    std::array<Rat, 4> lambda;
    std::size_t stratum = 0;  // maximal element containing h(x)
    int sign = 0;             // intersection sign against the ambient orientation
    std::vector<Rat> y;       // h(x)
};

// All transversal intersections of h on the fundamental cell with the arrangement.
std::vector<CellPoint> cell_points(const IntersectionPoset& P);

// ---------------------------------------------------------------------------
// Obstruction class and closed forms.

enum class Verdict { Zero, Nonzero, Unsupported };
std::string to_string(Verdict v);

struct ObstructionClass {
    std::array<Int, 2> raw{};        // coefficients of [[y1]], [[y2]] under the reference sign rule
    std::array<Int, 2> geometric{};  // same, from measured signs and the twisted identification gy ~ y
    std::vector<Int> vector;     // coordinates in the dual basis (empty if unsupported)
    std::vector<Int> image;      // canonical coinvariant coordinates
    Int order = 0;               // order of the image (0 = infinite or unknown)
    Verdict verdict = Verdict::Unsupported;
    std::vector<CellPoint> points;
    std::vector<std::string> labels;  // chosen x-label per point
};

ObstructionClass obstruction_class(const IntersectionPoset& P, const LinkHomology& link,
                                   const CoinvariantGroup& coinv);

struct ClosedForm {
    std::string label;  // case label, e.g. "B.4"
    std::array<Int, 2> coeff{};
};

ClosedForm closed_form_cocycle(const Alpha& alpha, GroupKind kind);

struct CocycleComparison {
    ClosedForm formula;
    std::vector<std::array<Int, 2>> enumerated;  // achievable label choices
    bool match = false;
};

// Enumerates the singular points on the cell, applies the reference sign rule
// and compares with the closed form up to one global sign.
CocycleComparison compare_closed_form(const IntersectionPoset& P);

}  // namespace s3map::obstruction
