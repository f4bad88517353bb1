#include "s3map/equivariant_module.hpp"

#include <algorithm>
#include <stdexcept>

namespace s3map::equivariant_module {

using exactalg::Rat;

int transport_sign(const GroupElement& g, const RationalMatrix& source, const RationalMatrix& target) {
    const std::size_t k = source.rows();
    if (target.rows() != k) throw std::invalid_argument("transport_sign: dimension mismatch");
    if (k == 0) return 1;
    const int n = static_cast<int>(source.cols());
    // Solve  g(source_i) = sum_t M(i,t) target_t  through the rref of target.
    auto rp = exactalg::rref_pivots(target);
    // target = T * R with R the rref; coordinates against R are read at pivots
    RationalMatrix gs(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        auto v = arrangement::act(g, source.row(i));
        for (int j = 0; j < n; ++j) gs(i, j) = v[j];
    }
    RationalMatrix A(k, k), T(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            A(i, t) = gs(i, rp.pivots[t]);
            T(i, t) = target(i, rp.pivots[t]);
        }
    const Rat d = exactalg::determinant(A) / exactalg::determinant(T);
    if (d == 0) throw std::logic_error("transport_sign: g does not map onto the target");
    return sgn(d);
}

int stratum_sign(const GroupElement& g, const Subspace& p) {
    const Subspace gp = arrangement::act(g, p);
    return transport_sign(g, p.basis(), gp.basis());
}

IntegerMatrix induced_action(const LinkHomology& link, const IntersectionPoset& P, const GroupElement& g) {
    IntegerMatrix M(link.rank, link.rank);
    const auto& perm = P.perm(g);
    for (const auto& S : link.summands) {
        if (S.homology.cycles.empty()) continue;
        const std::size_t q = static_cast<std::size_t>(perm[S.element]);
        const int sign = stratum_sign(g, P.elements[S.element]);
        const std::size_t target = link.summands[q].offset;
        for (std::size_t i = 0; i < S.homology.cycles.size(); ++i) {
            auto img = poset_topology::map_cycle(perm, S.homology.cycles[i]);
            auto c = link.coordinates(P, q, img);
            for (std::size_t t = 0; t < c.size(); ++t)
                if (c[t] != 0) M(target + t, S.offset + i) = sign * c[t];
        }
    }
    return M;
}

const IntegerMatrix& EquivariantModule::of(const GroupElement& g) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i] == g) return action[i];
    throw std::invalid_argument("EquivariantModule::of: not a generator");
}

EquivariantModule link_module(const LinkHomology& link, const IntersectionPoset& P) {
    EquivariantModule m;
    m.group = P.group;
    m.rank = link.rank;
    m.generators = P.group.generators();
    for (const auto& g : m.generators) m.action.push_back(induced_action(link, P, g));
    return m;
}

IntegerMatrix dual_action(const LinkHomology& link, const IntersectionPoset& P, const GroupElement& g, bool twist) {
    IntegerMatrix M = induced_action(link, P, P.group.inv(g)).transpose();
    if (twist && arrangement::det_ambient(g, P.n()) < 0)
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = -M(i, j);
    return M;
}

EquivariantModule dualize(const LinkHomology& link, const IntersectionPoset& P, bool twist) {
    EquivariantModule m;
    m.group = P.group;
    m.rank = link.rank;
    m.generators = P.group.generators();
    m.twisted = twist;
    for (const auto& g : m.generators) m.action.push_back(dual_action(link, P, g, twist));
    return m;
}

EquivariantModule apply_twist(const EquivariantModule& m) {
    EquivariantModule t = m;
    t.twisted = !m.twisted;
    for (std::size_t k = 0; k < t.generators.size(); ++k) {
        if (arrangement::det_ambient(t.generators[k], t.group.n) > 0) continue;
        auto& A = t.action[k];
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = -A(i, j);
    }
    return t;
}

namespace {

// Appends the columns of (A - I).
void append_relations(std::vector<std::vector<Int>>& cols, const IntegerMatrix& A, Int scale = 1) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
        std::vector<Int> c(A.rows());
        for (std::size_t i = 0; i < A.rows(); ++i) c[i] = scale * (A(i, j) - (i == j ? 1 : 0));
        cols.push_back(std::move(c));
    }
}

CoinvariantGroup cokernel_with_projection(std::size_t rank, const std::vector<std::vector<Int>>& cols) {
    CoinvariantGroup out;
    if (rank == 0) return out;
    IntegerMatrix R(rank, std::max<std::size_t>(cols.size(), 1));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rank; ++i) R(i, j) = cols[j][i];
    auto snf = exactalg::smith_normal_form(R);
    std::vector<std::size_t> free_rows;
    std::vector<std::pair<Int, std::size_t>> tors_rows;
    for (std::size_t i = 0; i < rank; ++i) {
        const Int d = i < R.cols() ? Int(abs(snf.D(i, i))) : Int(0);
        if (d == 0) free_rows.push_back(i);
        else if (d > 1) tors_rows.push_back({d, i});
    }
    std::stable_sort(tors_rows.begin(), tors_rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out.group.rank = free_rows.size();
    for (auto& [d, i] : tors_rows) out.group.torsion.push_back(d);
    out.projection = IntegerMatrix(free_rows.size() + tors_rows.size(), rank);
    std::size_t r = 0;
    for (std::size_t i : free_rows) {
        for (std::size_t j = 0; j < rank; ++j) out.projection(r, j) = snf.U(i, j);
        ++r;
    }
    for (auto& [d, i] : tors_rows) {
        for (std::size_t j = 0; j < rank; ++j) out.projection(r, j) = snf.U(i, j);
        ++r;
    }
    return out;
}

}  // namespace

std::vector<Int> CoinvariantGroup::project(const std::vector<Int>& v) const {
    std::vector<Int> y(projection.rows());
    for (std::size_t i = 0; i < projection.rows(); ++i) {
        for (std::size_t j = 0; j < projection.cols(); ++j) y[i] += projection(i, j) * v.at(j);
        if (i >= group.rank) {
            const Int& d = group.torsion[i - group.rank];
            y[i] %= d;
            if (y[i] < 0) y[i] += d;
        }
    }
    return y;
}

Int CoinvariantGroup::order(const std::vector<Int>& v) const {
    auto y = project(v);
    for (std::size_t i = 0; i < group.rank; ++i)
        if (y[i] != 0) return 0;
    Int o = 1;
    for (std::size_t t = 0; t < group.torsion.size(); ++t) {
        const Int& d = group.torsion[t];
        Int g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), y[group.rank + t].get_mpz_t());
        const Int ord = d / g;
        mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), ord.get_mpz_t());
    }
    return o;
}

CoinvariantGroup coinvariants(const EquivariantModule& m) {
    std::vector<std::vector<Int>> cols;
    for (const auto& A : m.action) append_relations(cols, A);
    return cokernel_with_projection(m.rank, cols);
}

CoinvariantGroup coinvariants_via_gamma(const EquivariantModule& m) {
    if (m.group.kind != arrangement::GroupKind::Dihedral)
        throw std::invalid_argument("coinvariants_via_gamma: dihedral group required");
    const GroupSpec& G = m.group;
    const IntegerMatrix& S = m.of(G.s());
    const IntegerMatrix& Rf = m.of(G.r());
    IntegerMatrix SR = S * Rf;  // the action is a homomorphism, so s r acts as S R
    std::vector<std::vector<Int>> cols;
    append_relations(cols, S);
    append_relations(cols, SR, -1);
    return cokernel_with_projection(m.rank, cols);
}

FGAbelianGroup coinvariants_full_group(const LinkHomology& link, const IntersectionPoset& P, bool twist) {
    std::vector<std::vector<Int>> cols;
    for (const auto& g : P.group.elements()) append_relations(cols, dual_action(link, P, g, twist));
    return cokernel_with_projection(link.rank, cols).group;
}

std::vector<Int> torsion_part(const FGAbelianGroup& g) {
    if (g.torsion.empty()) return {};
    IntegerMatrix D(g.torsion.size(), g.torsion.size());
    for (std::size_t i = 0; i < g.torsion.size(); ++i) D(i, i) = g.torsion[i];
    std::vector<Int> out;
    for (auto& d : exactalg::smith_diagonal(D))
        if (abs(d) > 1) out.push_back(abs(d));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace s3map::equivariant_module
