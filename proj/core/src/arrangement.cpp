#include "s3map/arrangement.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace s3map::arrangement {

bool Alpha::valid() const {
    return std::all_of(a.begin(), a.end(), [](int x) { return x >= 1; });
}

std::string Alpha::to_string() const {
    std::ostringstream os;
    os << a[0] << ',' << a[1] << ',' << a[2] << ',' << a[3];
    return os.str();
}

Alpha parse_alpha(const std::string& s) {
    Alpha al;
    std::stringstream ss(s);
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',')) {
        if (k >= 4) throw std::invalid_argument("alpha needs exactly four parts");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("alpha part is not an integer: '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("alpha part is not an integer: '" + tok + "'");
        if (v < 1) throw std::invalid_argument("alpha parts must be positive");
        al.a[k++] = v;
    }
    if (k != 4) throw std::invalid_argument("alpha needs exactly four parts");
    if (al.n() > 62) throw std::invalid_argument("n too large");
    return al;
}

std::vector<Alpha> compositions(int n) {
    std::vector<Alpha> out;
    for (int a = 1; a < n; ++a)
        for (int b = 1; a + b < n; ++b)
            for (int c = 1; a + b + c < n; ++c) out.push_back(Alpha{{a, b, c, n - a - b - c}});
    return out;
}

std::string to_string(GroupKind k) { return k == GroupKind::Cyclic ? "cyclic" : "dihedral"; }

GroupKind parse_group(const std::string& s) {
    if (s == "cyclic") return GroupKind::Cyclic;
    if (s == "dihedral") return GroupKind::Dihedral;
    throw std::invalid_argument("group must be cyclic or dihedral");
}

std::vector<GroupElement> GroupSpec::elements() const {
    std::vector<GroupElement> out;
    for (int r = 0; r < (kind == GroupKind::Dihedral ? 2 : 1); ++r)
        for (int a = 0; a < n; ++a) out.push_back({a, r == 1});
    return out;
}

std::vector<GroupElement> GroupSpec::generators() const {
    if (kind == GroupKind::Cyclic) return {s()};
    return {s(), r()};
}

GroupElement GroupSpec::mul(const GroupElement& x, const GroupElement& y) const {
    // r s^b = s^{-b} r
    int b = x.reflected ? -y.shift : y.shift;
    return {((x.shift + b) % n + n) % n, x.reflected != y.reflected};
}

GroupElement GroupSpec::inv(const GroupElement& x) const {
    if (x.reflected) return x;
    return {(n - x.shift) % n, false};
}

std::size_t GroupSpec::index(const GroupElement& g) const {
    return static_cast<std::size_t>((g.reflected ? n : 0) + g.shift);
}

std::vector<int> permutation(const GroupElement& g, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = (((g.reflected ? n - 1 - i : i) + g.shift) % n + n) % n;
    return p;
}

int det_ambient(const GroupElement& g, int n) {
    auto p = permutation(g, n);
    std::vector<bool> seen(n, false);
    int sign = 1;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

std::vector<Rat> act(const GroupElement& g, const std::vector<Rat>& v) {
    const int n = static_cast<int>(v.size());
    auto p = permutation(g, n);
    std::vector<Rat> out(n);
    for (int i = 0; i < n; ++i) out[p[i]] = v[i];
    return out;
}

Subspace::Subspace(int n, RationalMatrix rows) : n_(n) {
    auto rr = exactalg::rref_pivots(rows);
    basis_ = std::move(rr.basis);
    pivots_ = std::move(rr.pivots);
}

const RationalMatrix& Subspace::perp() const {
    if (!perp_) perp_ = std::make_shared<const RationalMatrix>(exactalg::kernel(basis_.rows() ? basis_ : RationalMatrix(0, n_)));
    return *perp_;
}

bool Subspace::contains(const std::vector<Rat>& v) const {
    const auto& P = perp();
    for (std::size_t i = 0; i < P.rows(); ++i) {
        Rat s = 0;
        for (int j = 0; j < n_; ++j)
            if (P(i, j) != 0) s += P(i, j) * v[j];
        if (s != 0) return false;
    }
    return true;
}

bool Subspace::contains(const Subspace& s) const {
    if (s.dim() > dim()) return false;
    for (std::size_t i = 0; i < s.basis_.rows(); ++i)
        if (!contains(s.basis_.row(i))) return false;
    return true;
}

Subspace Subspace::intersect(const Subspace& o) const {
    const auto &A = perp(), &B = o.perp();
    RationalMatrix st(A.rows() + B.rows(), n_);
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (int j = 0; j < n_; ++j) st(i, j) = A(i, j);
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (int j = 0; j < n_; ++j) st(A.rows() + i, j) = B(i, j);
    return Subspace(n_, exactalg::kernel(st));
}

bool Subspace::operator<(const Subspace& o) const {
    if (dim() != o.dim()) return dim() < o.dim();
    for (std::size_t i = 0; i < basis_.rows(); ++i)
        for (int j = 0; j < n_; ++j)
            if (basis_(i, j) != o.basis_(i, j)) return basis_(i, j) < o.basis_(i, j);
    return false;
}

std::string Subspace::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        os << (i ? ";" : "") << "(";
        for (int j = 0; j < n_; ++j) os << (j ? "," : "") << basis_(i, j).get_str();
        os << ")";
    }
    os << "]";
    return os.str();
}

Subspace act(const GroupElement& g, const Subspace& s) {
    const int n = s.ambient();
    auto p = permutation(g, n);
    RationalMatrix m(s.dim(), n);
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < n; ++j) m(i, p[j]) = s.basis()(i, j);
    return Subspace(n, std::move(m));
}

Subspace build_L(const Alpha& alpha) {
    const int n = alpha.n();
    RationalMatrix eq(4, n);
    int start = 0;
    for (int k = 0; k < 4; ++k) {
        for (int i = start; i < start + alpha[k]; ++i) eq(k, i) = 1;
        start += alpha[k];
    }
    return Subspace(n, exactalg::kernel(eq));
}

Arrangement orbit_arrangement(const Subspace& L, const Alpha& alpha, const GroupSpec& group) {
    Arrangement arr{alpha, group, {}};
    for (const auto& g : group.elements()) {
        Subspace s = act(g, L);
        if (std::find(arr.maximal.begin(), arr.maximal.end(), s) == arr.maximal.end())
            arr.maximal.push_back(std::move(s));
    }
    std::sort(arr.maximal.begin(), arr.maximal.end());
    return arr;
}

int IntersectionPoset::find(const Subspace& s) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), s);
    if (it == elements.end() || !(*it == s)) return -1;
    return static_cast<int>(it - elements.begin());
}

int IntersectionPoset::closure(Mask m) const {
    if (m == 0) return -1;
    // the largest element whose support covers m
    for (std::size_t i = elements.size(); i-- > 0;)
        if ((support[i] & m) == m) return static_cast<int>(i);
    return -1;
}

std::map<int, int> IntersectionPoset::count_by_dim() const {
    std::map<int, int> c;
    for (const auto& e : elements) ++c[e.dim()];
    return c;
}

namespace {

using IVec = std::vector<std::int64_t>;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer basis entry overflow");
    return r;
}

void make_primitive(IVec& v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    if (g > 1)
        for (auto& x : v) x /= g;
}

// Integer basis of {x : a x = 0} by integer Gauss-Jordan elimination.
std::vector<IVec> int_kernel(std::vector<IVec> a, int cols) {
    std::vector<int> piv;
    std::size_t r = 0;
    for (int c = 0; c < cols && r < a.size(); ++c) {
        std::size_t k = r;
        while (k < a.size() && a[k][c] == 0) ++k;
        if (k == a.size()) continue;
        std::swap(a[r], a[k]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const std::int64_t x = a[r][c], y = a[i][c];
            for (int j = 0; j < cols; ++j) a[i][j] = checked_mul(x, a[i][j]) - checked_mul(y, a[r][j]);
            make_primitive(a[i]);
        }
        piv.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<IVec> out;
    for (int f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::int64_t L = 1;
        for (std::size_t i = 0; i < piv.size(); ++i)
            if (a[i][f] != 0) L = std::lcm(L, std::abs(a[i][piv[i]]));
        IVec x(cols, 0);
        x[f] = L;
        for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -checked_mul(a[i][f], L / a[i][piv[i]]);
        make_primitive(x);
        out.push_back(std::move(x));
    }
    return out;
}

std::int64_t block_sum(const IVec& v, Mask block) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (block >> i & 1) s += v[i];
    return s;
}

}  // namespace

IntersectionPoset intersection_poset(const Arrangement& arr) {
    const auto& maxs = arr.maximal;
    const std::size_t m = maxs.size();
    const int n = arr.group.n;
    if (m > 64 || n > 64) throw std::length_error("arrangement too large");

    // orbit representatives: g(hL) = (gh)L
    const auto G = arr.group.elements();
    const Subspace L = build_L(arr.alpha);
    std::vector<int> orbit_pos(G.size());
    for (std::size_t h = 0; h < G.size(); ++h) {
        Subspace img = act(G[h], L);
        auto it = std::lower_bound(maxs.begin(), maxs.end(), img);
        if (it == maxs.end() || !(*it == img)) throw std::logic_error("orbit element missing from arrangement");
        orbit_pos[h] = static_cast<int>(it - maxs.begin());
    }
    std::vector<std::size_t> rep(m, G.size());
    for (std::size_t h = 0; h < G.size(); ++h)
        if (rep[orbit_pos[h]] == G.size()) rep[orbit_pos[h]] = h;

    // g L is cut out by the four permuted block sums of L
    std::vector<std::array<Mask, 4>> blocks(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto p = permutation(G[rep[j]], n);
        int start = 0;
        for (int k = 0; k < 4; ++k) {
            Mask b = 0;
            for (int i = start; i < start + arr.alpha[k]; ++i) b |= Mask(1) << p[i];
            blocks[j][k] = b;
            start += arr.alpha[k];
        }
    }
    auto support_of = [&](const std::vector<IVec>& basis) {
        Mask k = 0;
        for (std::size_t j = 0; j < m; ++j) {
            bool in = true;
            for (const auto& v : basis) {
                for (Mask b : blocks[j])
                    if (block_sum(v, b) != 0) {
                        in = false;
                        break;
                    }
                if (!in) break;
            }
            if (in) k |= Mask(1) << j;
        }
        return k;
    };
    auto cut = [&](const std::vector<IVec>& basis, std::size_t j) {
        std::vector<IVec> sys(4, IVec(basis.size()));
        for (int b = 0; b < 4; ++b)
            for (std::size_t k = 0; k < basis.size(); ++k) sys[b][k] = block_sum(basis[k], blocks[j][b]);
        std::vector<IVec> out;
        for (const auto& c : int_kernel(sys, static_cast<int>(basis.size()))) {
            IVec x(n, 0);
            for (std::size_t k = 0; k < basis.size(); ++k)
                if (c[k] != 0)
                    for (int i = 0; i < n; ++i) x[i] += checked_mul(c[k], basis[k][i]);
            make_primitive(x);
            out.push_back(std::move(x));
        }
        return out;
    };

    // An element is the intersection of the maximal subspaces containing it,
    // so its support mask identifies it.
    std::unordered_map<Mask, std::vector<IVec>> seen;
    std::deque<Mask> frontier;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<IVec> sys;
        for (Mask b : blocks[j]) {
            IVec row(n, 0);
            for (int i = 0; i < n; ++i) row[i] = b >> i & 1;
            sys.push_back(std::move(row));
        }
        auto basis = int_kernel(sys, n);
        Mask k = support_of(basis);
        if (seen.emplace(k, std::move(basis)).second) frontier.push_back(k);
    }
    while (!frontier.empty()) {
        Mask k = frontier.front();
        frontier.pop_front();
        for (std::size_t j = 0; j < m; ++j) {
            if (k >> j & 1) continue;
            auto basis = cut(seen.at(k), j);
            Mask ks = support_of(basis);
            if (!seen.count(ks)) {
                seen.emplace(ks, std::move(basis));
                frontier.push_back(ks);
            }
        }
    }
    std::vector<std::pair<Subspace, Mask>> items;
    items.reserve(seen.size());
    for (const auto& [k, basis] : seen) {
        RationalMatrix rows(basis.size(), n);
        for (std::size_t r = 0; r < basis.size(); ++r)
            for (int i = 0; i < n; ++i)
                if (basis[r][i] != 0) rows(r, i) = Rat(static_cast<long>(basis[r][i]));
        items.emplace_back(Subspace(n, std::move(rows)), k);
    }
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return items[x].first < items[y].first; });

    IntersectionPoset P;
    P.alpha = arr.alpha;
    P.group = arr.group;
    std::unordered_map<Mask, int> by_mask;
    for (std::size_t i = 0; i < order.size(); ++i) {
        P.elements.push_back(std::move(items[order[i]].first));
        P.support.push_back(items[order[i]].second);
        by_mask[items[order[i]].second] = static_cast<int>(i);
    }
    const std::size_t N = P.elements.size();
    for (std::size_t i = 0; i < m; ++i) P.maximal.push_back(by_mask.at(Mask(1) << i));

    // q strictly contains p iff support(q) is a proper subset of support(p)
    P.above.assign(N, {});
    for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = p + 1; q < N; ++q)
            if ((P.support[q] & ~P.support[p]) == 0 && P.support[q] != P.support[p])
                P.above[p].push_back(static_cast<int>(q));
    P.covers.assign(N, {});
    // above[p] is in ascending dimension, so q is a cover iff no cover found
    // so far lies strictly inside it
    for (std::size_t p = 0; p < N; ++p)
        for (int q : P.above[p]) {
            bool cover = true;
            for (int c : P.covers[p])
                if ((P.support[q] & ~P.support[c]) == 0) {
                    cover = false;
                    break;
                }
            if (cover) P.covers[p].push_back(q);
        }

    for (const auto& g : G) {
        std::vector<int> mp(m);
        for (std::size_t i = 0; i < m; ++i) mp[i] = orbit_pos[arr.group.index(arr.group.mul(g, G[rep[i]]))];
        std::vector<int> perm(N);
        for (std::size_t p = 0; p < N; ++p) {
            Mask k = P.support[p], img = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (k >> i & 1) img |= Mask(1) << mp[i];
            perm[p] = by_mask.at(img);
        }
        P.action.push_back(std::move(perm));
    }
    P.L_index = static_cast<std::size_t>(P.find(L));
    return P;
}

IntersectionPoset make_poset(const Alpha& alpha, GroupKind kind) {
    GroupSpec g{kind, alpha.n()};
    return intersection_poset(orbit_arrangement(build_L(alpha), alpha, g));
}

std::string hasse_dot(const IntersectionPoset& P) {
    std::ostringstream os;
    os << "digraph poset {\n  rankdir=BT;\n";
    for (std::size_t p = 0; p < P.size(); ++p)
        os << "  p" << p << " [label=\"p" << p << "\\ndim " << P.dim(p) << "\"];\n";
    for (std::size_t p = 0; p < P.size(); ++p)
        for (int q : P.covers[p]) os << "  p" << p << " -> p" << q << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace s3map::arrangement
