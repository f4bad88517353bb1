#include "s3map/obstruction.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace s3map::obstruction {

using arrangement::GroupSpec;
using exactalg::RationalMatrix;
using Vec = std::vector<Rat>;

namespace {

int mod(long a, long m) { return static_cast<int>(((a % m) + m) % m); }

Vec sub(const Vec& a, const Vec& b) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Rat dot(const Vec& a, const Vec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Coordinates of a vector of W_n in the basis e_1-e_2, ..., e_{n-1}-e_n.
Vec wcoords(const Vec& x) {
    Vec out;
    Rat s = 0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        s += x[k];
        out.push_back(s);
    }
    return out;
}

// Sign of the frame (n-1 vectors of W_n) against the fixed orientation of W_n.
int orient_sign(const std::vector<Vec>& frame) {
    const std::size_t m = frame.size();
    RationalMatrix M(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec w = wcoords(frame[i]);
        for (std::size_t j = 0; j < m; ++j) M(i, j) = w[j];
    }
    return sgn(exactalg::determinant(M));
}

// Solves sum_k c_k rows_k = v; nullopt if v is not in the span.
std::optional<Vec> coords_in(const RationalMatrix& rows, const Vec& v) {
    const std::size_t m = rows.rows(), n = rows.cols();
    RationalMatrix A(n, m + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) A(i, k) = rows(k, i);
        A(i, m) = v[i];
    }
    auto r = exactalg::rref_pivots(A);
    Vec c(m);
    for (std::size_t t = 0; t < r.pivots.size(); ++t) {
        if (r.pivots[t] == m) return std::nullopt;
        c[r.pivots[t]] = r.basis(t, m);
    }
    return c;
}

RationalMatrix append_row(const RationalMatrix& rows, const Vec& v) {
    RationalMatrix out(rows.rows() + 1, rows.cols());
    for (std::size_t i = 0; i < rows.rows(); ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j) out(i, j) = rows(i, j);
    for (std::size_t j = 0; j < rows.cols(); ++j) out(rows.rows(), j) = v[j];
    return out;
}

enum class Solve { None, Unique, Degenerate };

// Barycentric lambda with sum lambda_k U_k in K.
Solve solve_point(const std::vector<Vec>& U, const Subspace& K, std::array<Rat, 4>& lam) {
    const RationalMatrix& perp = K.perp();
    RationalMatrix A(perp.rows() + 1, 5);
    for (std::size_t r = 0; r < perp.rows(); ++r) {
        Vec c = perp.row(r);
        for (int k = 0; k < 4; ++k) A(r, k) = dot(c, U[k]);
    }
    for (int k = 0; k < 5; ++k) A(perp.rows(), k) = 1;
    auto r = exactalg::rref_pivots(A);
    for (auto p : r.pivots)
        if (p == 4) return Solve::None;
    if (r.pivots.size() < 4) return Solve::Degenerate;
    for (std::size_t t = 0; t < 4; ++t) lam[r.pivots[t]] = r.basis(t, 4);
    return Solve::Unique;
}

Vec combine(const std::array<Rat, 4>& lam, const std::vector<Vec>& U) {
    Vec y(U[0].size());
    for (int k = 0; k < 4; ++k)
        for (std::size_t j = 0; j < y.size(); ++j) y[j] += lam[k] * U[k][j];
    return y;
}

GroupSpec dihedral(int n) { return GroupSpec{GroupKind::Dihedral, n}; }

std::string word_string(const GroupElement& g) {
    std::string s;
    if (g.reflected) s += "r";
    if (g.shift) s += (s.empty() ? "" : " ") + std::string("s^") + std::to_string(g.shift);
    return s.empty() ? "id" : s;
}

int pow_sign(long e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------------------

QuaternionElement QuaternionGroup::eps(int k) const { return {mod(k, 2 * n), 0}; }

QuaternionElement QuaternionGroup::mul(const QuaternionElement& x, const QuaternionElement& y) const {
    // eps^a j^d eps^b j^e = eps^(a + (-1)^d b) j^(d+e), with j^2 = eps^n.
    int i = x.i + (x.delta ? -y.i : y.i);
    int d = x.delta + y.delta;
    if (d == 2) {
        i += n;
        d = 0;
    }
    return {mod(i, 2 * n), d};
}

QuaternionElement QuaternionGroup::inv(const QuaternionElement& x) const {
    if (!x.delta) return {mod(-x.i, 2 * n), 0};
    // (eps^i j)^-1 = j^-1 eps^-i = eps^n j eps^-i = eps^(n+i) j
    return {mod(n + x.i, 2 * n), 1};
}

std::vector<QuaternionElement> QuaternionGroup::elements() const {
    std::vector<QuaternionElement> out;
    for (int d = 0; d < 2; ++d)
        for (int i = 0; i < 2 * n; ++i) out.push_back({i, d});
    return out;
}

std::size_t QuaternionGroup::index(const QuaternionElement& x) const {
    return static_cast<std::size_t>(x.delta * 2 * n + x.i);
}

GroupElement QuaternionGroup::to_dihedral(const QuaternionElement& x) const {
    return GroupElement{mod(x.i, n), x.delta == 1};
}

std::string to_string(const GroupRingElement& x, int n) {
    std::string out;
    for (const auto& [g, c] : x) {
        if (c == 0) continue;
        std::string name;
        if (g.i) name += g.i == 1 ? "eps" : "eps^" + std::to_string(mod(g.i, 2 * n));
        if (g.delta) name += "j";
        const long a = std::abs(c);
        std::string term = name.empty() ? std::to_string(a) : (a == 1 ? name : std::to_string(a) + name);
        if (out.empty()) out = (c < 0 ? "-" : "") + term;
        else out += (c < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

CellularComplex build_cell_complex(int n) {
    if (n < 1) throw std::invalid_argument("build_cell_complex: n must be >= 1");
    CellularComplex C;
    C.n = n;
    C.group = QuaternionGroup{n};
    const auto& G = C.group;
    const QuaternionElement one{0, 0}, e = G.eps(1), j = G.j(), ej = G.mul(e, j);
    auto ring = [](std::initializer_list<std::pair<QuaternionElement, long>> terms) {
        GroupRingElement r;
        for (auto& [g, c] : terms) r[g] += c;
        return r;
    };
    GroupRingElement N;
    for (int k = 0; k < n; ++k) N[G.eps(k)] += 1;

    C.cells = {std::vector<std::string>{"a"}, {"b", "b'"}, {"c", "c'"}, {"e"}};
    C.boundary[1] = {{ring({{e, 1}, {one, -1}})},    // d b  = (eps - 1) a
                     {ring({{j, 1}, {one, -1}})}};   // d b' = (j - 1) a
    C.boundary[2] = {{N, ring({{j, -1}, {one, -1}})},                      // d c  = N b - (j + 1) b'
                     {ring({{ej, 1}, {one, 1}}), ring({{e, 1}, {one, -1}})}};  // d c' = (eps j + 1) b + (eps - 1) b'
    C.boundary[3] = {{ring({{e, 1}, {one, -1}}), ring({{ej, -1}, {one, 1}})}};  // d e = (eps - 1) c - (eps j - 1) c'
    return C;
}

IntegerMatrix CellularComplex::matrix(int k) const {
    const std::size_t order = static_cast<std::size_t>(group.order());
    if (k < 1 || k > 3) return IntegerMatrix(0, 0);
    const auto& bd = boundary[k];
    IntegerMatrix M(cells[k - 1].size() * order, cells[k].size() * order);
    const auto els = group.elements();
    for (std::size_t c = 0; c < bd.size(); ++c)
        for (std::size_t g = 0; g < order; ++g)
            for (std::size_t t = 0; t < bd[c].size(); ++t)
                for (const auto& [h, coef] : bd[c][t]) {
                    // g . (h t) = (g h) t
                    const std::size_t row = t * order + group.index(group.mul(els[g], h));
                    M(row, c * order + g) += coef;
                }
    return M;
}

bool CellularComplex::boundary_squared_zero() const {
    for (int k = 2; k <= 3; ++k)
        if (!(matrix(k - 1) * matrix(k)).is_zero()) return false;
    return true;
}

std::vector<FGAbelianGroup> CellularComplex::homology() const {
    const std::size_t order = static_cast<std::size_t>(group.order());
    // Nonzero Smith invariants of d_k; d_0 and d_4 are zero.
    std::array<std::vector<Int>, 5> inv;
    for (int k = 1; k <= 3; ++k)
        for (auto& x : exactalg::smith_diagonal(matrix(k)))
            if (x != 0) inv[k].push_back(abs(x));
    std::vector<FGAbelianGroup> out;
    for (int k = 0; k <= 3; ++k) {
        FGAbelianGroup h;
        h.rank = cells[k].size() * order - inv[k].size() - inv[k + 1].size();
        for (const auto& x : inv[k + 1])
            if (x > 1) h.torsion.push_back(x);
        std::sort(h.torsion.begin(), h.torsion.end());
        out.push_back(h);
    }
    return out;
}

std::string CellularComplex::describe() const {
    std::ostringstream os;
    for (int k = 3; k >= 1; --k)
        for (std::size_t c = 0; c < cells[k].size(); ++c) {
            os << "d " << cells[k][c] << " =";
            bool first = true;
            for (std::size_t t = 0; t < boundary[k][c].size(); ++t) {
                if (boundary[k][c][t].empty()) continue;
                os << (first ? " " : " + ") << "(" << to_string(boundary[k][c][t], n) << ") "
                   << cells[k - 1][t];
                first = false;
            }
            os << "\n";
        }
    return os.str();
}

// ---------------------------------------------------------------------------

Vertex JoinSphere::act(const QuaternionElement& g, const Vertex& x) const {
    // g = eps^i j^d. j v_k = w_{-k}, j w_k = v_{n-k}; eps shifts indices.
    Vertex y = x;
    if (g.delta) y = x.w ? Vertex{false, mod(n - x.i, 2 * n)} : Vertex{true, mod(-x.i, 2 * n)};
    y.i = mod(y.i + g.i, 2 * n);
    return y;
}

std::array<Vertex, 4> JoinSphere::simplex(int i, int j) const {
    return {Vertex{false, mod(i, 2 * n)}, Vertex{false, mod(i + 1, 2 * n)}, Vertex{true, mod(j, 2 * n)},
            Vertex{true, mod(j + 1, 2 * n)}};
}

Vec u(int n, int k) {
    k = mod(k, n);
    if (k == 0) k = n;
    Vec v(n, Rat(-1, n));
    v[k - 1] += 1;
    for (auto& x : v) x.canonicalize();
    return v;
}

Vec test_map(int n, const Vertex& x) { return x.w ? u(n, mod(x.i, n)) : u(n, mod(x.i, n) + 1); }

int intersection_sign(int theta) {
    if (theta < 1 || theta > 16) throw std::out_of_range("intersection_sign: theta index in 1..16");
    return theta <= 8 ? 1 : -1;
}

int sign_transport(const GroupElement& g, int n) { return arrangement::det_ambient(g, n); }

SingularSet singular_simplices(const Alpha& alpha) {
    const int n = alpha.n();
    const int P = alpha[0], Q = alpha[0] + alpha[1], R = Q + alpha[2];
    const JoinSphere S{n};
    SingularSet out;
    const int starts[16][2] = {{P - 1, R},     {n + P - 1, R},     {P - 1, n + R},     {n + P - 1, n + R},
                               {R - 1, P},     {n + R - 1, P},     {R - 1, n + P},     {n + R - 1, n + P},
                               {Q - 1, n},     {n + Q - 1, n},     {Q - 1, 0},         {n + Q - 1, 0},
                               {n - 1, Q},     {2 * n - 1, Q},     {n - 1, n + Q},     {2 * n - 1, n + Q}};
    auto norm = [n](int k) {
        k = mod(k, n);
        return k == 0 ? n : k;
    };
    out.tau1 = {norm(P), norm(P + 1), norm(R), norm(R + 1)};
    out.tau2 = {norm(Q), norm(Q + 1), n, 1};
    const Subspace L = arrangement::build_L(alpha);

    auto u_index = [&](const Vertex& x) { return x.w ? norm(x.i) : norm(x.i + 1); };
    for (int t = 0; t < 16; ++t) {
        SingularSimplex s;
        s.index = t + 1;
        s.vertices = S.simplex(starts[t][0], starts[t][1]);
        s.tau = t < 8 ? 1 : 2;
        s.sign = intersection_sign(s.index);
        std::multiset<int> img, want;
        for (auto& v : s.vertices) img.insert(u_index(v));
        for (int k : (s.tau == 1 ? out.tau1 : out.tau2)) want.insert(k);
        if (img != want)
            throw InconsistentSingularSet("theta_" + std::to_string(s.index) + " does not map onto tau_" +
                                          std::to_string(s.tau));
        out.theta.push_back(s);
    }

    auto point = [&](const std::array<int, 4>& idx, const std::array<int, 4>& w) {
        Vec y(n);
        for (int k = 0; k < 4; ++k) {
            Vec uk = u(n, idx[k]);
            for (int j = 0; j < n; ++j) y[j] += Rat(w[k], n) * uk[j];
        }
        for (auto& x : y) x.canonicalize();
        return y;
    };
    out.y1 = point(out.tau1, {alpha[0], alpha[1], alpha[2], alpha[3]});
    out.y2 = point(out.tau2, {alpha[1], alpha[2], alpha[3], alpha[0]});
    if (!L.contains(out.y1) || !L.contains(out.y2))
        throw InconsistentSingularSet("y1 or y2 is not on L");

    // Only tau1 and tau2 among the 3-simplices of h(P_2n * P_2n), i.e. the joins
    // [u_i, u_i+1; u_j, u_j+1] of two disjoint cyclic edges, meet L.
    std::set<std::multiset<int>> hits;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const std::set<int> idx{norm(i), norm(i + 1), norm(j), norm(j + 1)};
            if (idx.size() < 4) continue;
            std::vector<Vec> U;
            for (int k : idx) U.push_back(u(n, k));
            std::array<Rat, 4> lam;
            auto st = solve_point(U, L, lam);
            if (st == Solve::None) continue;
            if (st == Solve::Degenerate) throw InconsistentSingularSet("degenerate face meets L");
            if (std::any_of(lam.begin(), lam.end(), [](const Rat& x) { return x < 0; })) continue;
            hits.insert(std::multiset<int>(idx.begin(), idx.end()));
        }
    std::set<std::multiset<int>> want{{out.tau1.begin(), out.tau1.end()}, {out.tau2.begin(), out.tau2.end()}};
    if (hits != want) throw InconsistentSingularSet("faces meeting L differ from {tau1, tau2}");
    return out;
}

// ---------------------------------------------------------------------------

std::vector<XRecord> x_records(const Alpha& alpha) {
    const int a1 = alpha[0], a2 = alpha[1], a3 = alpha[2], a4 = alpha[3];
    const int n = alpha.n(), Q = a1 + a2, R = Q + a3;
    const GroupSpec D = dihedral(n);
    auto eps = [n](int k) { return GroupElement{mod(k, n), false}; };
    const GroupElement j{0, true};
    struct Row {
        const char* label;
        int sigma;
        std::array<int, 4> w;
        GroupElement word;
        int theta;
    };
    const Row rows[8] = {
        {"x11", 1, {a1, a2, a3, a4}, eps(-R), 2},        {"x12", 1, {a4, a3, a2, a1}, D.mul(j, eps(-a1)), 1},
        {"x21", 2, {a3, a4, a1, a2}, eps(-a1), 5},       {"x22", 2, {a2, a1, a4, a3}, D.mul(j, eps(-R)), 7},
        {"x31", 3, {a2, a3, a4, a1}, eps(0), 11},        {"x32", 3, {a1, a4, a3, a2}, D.mul(j, eps(-Q)), 9},
        {"x41", 4, {a4, a1, a2, a3}, eps(-Q), 13},       {"x42", 4, {a3, a2, a1, a4}, j, 14},
    };
    const int sigma_start[5] = {0, a1 + a4 - 1, a2 + a3 - 1, a1 + a2 - 1, a3 + a4 - 1};
    std::vector<XRecord> out;
    for (const auto& r : rows) {
        XRecord x;
        x.label = r.label;
        x.sigma = r.sigma;
        x.simplex = mod(sigma_start[r.sigma], n);
        for (int k = 0; k < 4; ++k) x.lambda[k] = Rat(r.w[k], n), x.lambda[k].canonicalize();
        x.word = r.word;
        x.theta = r.theta;
        x.base = r.theta <= 8 ? 1 : 2;
        x.sign = arrangement::det_ambient(r.word, n) * intersection_sign(r.theta);
        out.push_back(x);
    }
    return out;
}

CellSingularities cell_singularities(const Alpha& alpha, GroupKind kind) {
    (void)kind;  // the x-point list is the same for both groups
    CellSingularities cs;
    cs.x = x_records(alpha);
    const int n = alpha.n();
    cs.sigma = {mod(alpha[0] + alpha[3] - 1, n), mod(alpha[1] + alpha[2] - 1, n), mod(alpha[0] + alpha[1] - 1, n),
                mod(alpha[2] + alpha[3] - 1, n)};
    std::vector<bool> used(4, false);
    for (int i = 0; i < 4; ++i) {
        if (used[i]) continue;
        std::vector<int> cls;
        for (int k = i; k < 4; ++k)
            if (cs.sigma[k] == cs.sigma[i]) cls.push_back(k + 1), used[k] = true;
        cs.sigma_classes.push_back(cls);
    }
    std::vector<bool> seen(cs.x.size(), false);
    for (std::size_t i = 0; i < cs.x.size(); ++i) {
        if (seen[i]) continue;
        std::vector<std::string> cls;
        for (std::size_t k = i; k < cs.x.size(); ++k)
            if (cs.x[k].simplex == cs.x[i].simplex && cs.x[k].lambda == cs.x[i].lambda)
                cls.push_back(cs.x[k].label), seen[k] = true;
        cs.x_classes.push_back(cls);
    }
    // Every x-point maps into the claimed translate of L.
    const Subspace L = arrangement::build_L(alpha);
    const JoinSphere S{n};
    for (const auto& x : cs.x) {
        auto verts = S.simplex(x.simplex, 0);
        std::vector<Vec> U;
        for (auto& v : verts) U.push_back(test_map(n, v));
        const Vec y = combine(x.lambda, U);
        if (!arrangement::act(x.word, L).contains(y))
            throw InconsistentSingularSet(x.label + " is not on its translate of L");
    }
    return cs;
}

GeneralPositionReport verify_general_position(const Alpha& alpha, GroupKind kind) {
    const auto cs = cell_singularities(alpha, kind);
    const Subspace L = arrangement::build_L(alpha);
    const int n = alpha.n();
    const GroupSpec G{kind, n};
    auto in_group = [&](const GroupElement& g) { return kind == GroupKind::Dihedral || !g.reflected; };
    GeneralPositionReport rep;
    for (const auto& cls : cs.x_classes) {
        std::vector<const XRecord*> members;
        for (const auto& label : cls)
            for (const auto& x : cs.x)
                if (x.label == label) members.push_back(&x);
        const XRecord* first = nullptr;
        Subspace S0;
        for (const auto* x : members) {
            // In the cyclic case only shift translates belong to the arrangement.
            if (!in_group(x->word)) continue;
            const Subspace S = arrangement::act(x->word, L);
            if (!first) {
                first = x;
                S0 = S;
                continue;
            }
            if (!(S == S0))
                throw NotGeneralPosition(first->label + " and " + x->label + " coincide on distinct subspaces");
            if (!(x->word == first->word))
                rep.relations.push_back(word_string(first->word) + " L = " + word_string(x->word) + " L");
        }
        // Distinct x-classes on distinct points: each point must lie on one arrangement member.
        if (first) {
            const JoinSphere Sph{n};
            auto verts = Sph.simplex(first->simplex, 0);
            std::vector<Vec> U;
            for (auto& v : verts) U.push_back(test_map(n, v));
            const Vec y = combine(first->lambda, U);
            std::set<Subspace> through;
            for (const auto& g : G.elements()) {
                Subspace gL = arrangement::act(g, L);
                if (gL.contains(y)) through.insert(gL);
            }
            const std::size_t hits = through.size();
            if (hits != 1)
                throw NotGeneralPosition(first->label + " lies on " + std::to_string(hits) + " arrangement members");
        }
    }
    std::sort(rep.relations.begin(), rep.relations.end());
    rep.relations.erase(std::unique(rep.relations.begin(), rep.relations.end()), rep.relations.end());
    return rep;
}

// ---------------------------------------------------------------------------

GenericPoints generic_points(const IntersectionPoset& P) {
    const int n = P.n();
    GenericPoints gen;
    gen.point.assign(P.size(), {});
    const auto els = P.group.elements();
    const int ts[] = {10007, 10009, 10037, 10039, 10061};
    for (std::size_t k0 : P.maximal) {
        if (!gen.point[k0].empty()) continue;
        const Subspace& K = P.elements[k0];
        Vec c0;
        if (K.dim() > 0) {
            std::vector<std::size_t> below;
            for (std::size_t q = 0; q < P.size(); ++q)
                if (std::binary_search(P.above[q].begin(), P.above[q].end(), static_cast<int>(k0))) below.push_back(q);
            const RationalMatrix& B = K.basis();
            const std::size_t m = B.rows();
            RationalMatrix gram(m, m + 1);
            for (int t : ts) {
                Vec d(n);
                Int p = 1;
                for (int i = 0; i < n; ++i, p *= t) d[i] = Rat(p);
                for (std::size_t a = 0; a < m; ++a) {
                    for (std::size_t b = 0; b < m; ++b) gram(a, b) = dot(B.row(a), B.row(b));
                    gram(a, m) = dot(B.row(a), d);
                }
                auto r = exactalg::rref_pivots(gram);
                Vec pi(n);
                for (std::size_t a = 0; a < m; ++a)
                    for (int i = 0; i < n; ++i) pi[i] += r.basis(a, m) * B(a, i);
                Vec cand(n);
                for (const auto& g : els) {
                    if (P.perm(g)[k0] != static_cast<int>(k0)) continue;
                    Vec gv = arrangement::act(g, pi);
                    for (int i = 0; i < n; ++i) cand[i] += gv[i];
                }
                if (is_zero(cand)) continue;
                bool ok = true;
                for (auto q : below)
                    if (P.elements[q].contains(cand)) ok = false;
                if (ok) {
                    c0 = cand;
                    break;
                }
            }
        }
        for (const auto& g : els) {
            const std::size_t kk = static_cast<std::size_t>(P.perm(g)[k0]);
            Vec v = c0.empty() ? Vec{} : arrangement::act(g, c0);
            if (!gen.point[kk].empty() && gen.point[kk] != v)
                throw std::logic_error("generic_points: orbit transport is inconsistent");
            gen.point[kk] = v;
        }
    }
    return gen;
}

namespace {

Rat chain_coefficient(const poset_topology::Cycle& z, const poset_topology::Chain& c) {
    auto it = std::lower_bound(z.begin(), z.end(), c, [](const auto& t, const auto& key) { return t.first < key; });
    return it != z.end() && it->first == c ? Rat(it->second) : Rat(0);
}

// Side of y relative to p inside K, measured along the generic point of K.
std::optional<Rat> side(const IntersectionPoset& P, const GenericPoints& gen, const Vec& y, std::size_t p,
                        std::size_t K) {
    const Vec& cK = gen.point[K];
    if (cK.empty()) return std::nullopt;
    auto co = coords_in(append_row(P.elements[p].basis(), cK), y);
    if (!co) throw std::logic_error("point is not on the expected stratum");
    return co->back();
}

}  // namespace

std::optional<std::vector<Int>> try_point_class(const IntersectionPoset& P, const LinkHomology& link,
                                                const GenericPoints& gen, const Vec& y, std::size_t K) {
    const int n = P.n();
    std::vector<Int> out;
    out.reserve(link.rank);
    for (const auto& [p, i] : link.index) {
        const auto& z = link.summands[p].homology.cycles[i];
        const int dp = P.dim(p);
        if (dp == n - 4) {
            out.push_back(p == K ? 1 : 0);
        } else if (dp == n - 5) {
            const Rat lam = chain_coefficient(z, {static_cast<int>(K)});
            if (lam == 0) {
                out.push_back(0);
                continue;
            }
            auto gamma = side(P, gen, y, p, K);
            if (!gamma) return std::nullopt;
            if (*gamma == 0) throw NotGeneralPosition("point lies on a codimension-one stratum");
            if (*gamma < 0) {
                out.push_back(0);
                continue;
            }
            const RationalMatrix frame = append_row(P.elements[p].basis(), gen.point[K]);
            const RationalMatrix& BK = P.elements[K].basis();
            RationalMatrix M(frame.rows(), BK.rows());
            for (std::size_t r = 0; r < frame.rows(); ++r) {
                auto c = coords_in(BK, frame.row(r));
                for (std::size_t t = 0; t < BK.rows(); ++t) M(r, t) = (*c)[t];
            }
            out.push_back(Int(lam.get_num()) * sgn(exactalg::determinant(M)));
        } else {
            for (const auto& [chain, coef] : z)
                if (!chain.empty() && chain.back() == static_cast<int>(K)) return std::nullopt;
            out.push_back(0);
        }
    }
    return out;
}

std::vector<Int> point_class_vector(const IntersectionPoset& P, const LinkHomology& link, const GenericPoints& gen,
                                    const Vec& y, std::size_t K) {
    auto v = try_point_class(P, link, gen, y, K);
    if (!v) throw UnsupportedStratum("point class pairs with a deep stratum");
    return *v;
}

std::vector<int> chamber(const IntersectionPoset& P, const GenericPoints& gen, const Vec& y, std::size_t K) {
    std::vector<int> out;
    const int n = P.n();
    for (std::size_t p = 0; p < P.size(); ++p) {
        if (P.dim(p) != n - 5) continue;
        if (!std::binary_search(P.above[p].begin(), P.above[p].end(), static_cast<int>(K))) continue;
        auto g = side(P, gen, y, p, K);
        out.push_back(g ? sgn(*g) : 0);
    }
    return out;
}

std::vector<CellPoint> cell_points(const IntersectionPoset& P) {
    const int n = P.n();
    const JoinSphere S{n};
    std::vector<CellPoint> pts;
    for (int i = 0; i < n; ++i) {
        std::vector<Vec> U;
        for (auto& v : S.simplex(i, 0)) U.push_back(test_map(n, v));
        std::vector<CellPoint> here;
        for (std::size_t K : P.maximal) {
            std::array<Rat, 4> lam;
            const auto st = solve_point(U, P.elements[K], lam);
            if (st == Solve::None) continue;
            if (st == Solve::Degenerate)
                throw NotGeneralPosition("simplex " + std::to_string(i) + " meets a stratum in a positive-dimensional set");
            if (std::any_of(lam.begin(), lam.end(), [](const Rat& x) { return x < 0; })) continue;
            if (std::any_of(lam.begin(), lam.end(), [](const Rat& x) { return x == 0; }))
                throw NotGeneralPosition("simplex " + std::to_string(i) + " meets a stratum on its boundary");
            CellPoint c;
            c.simplex = i;
            c.lambda = lam;
            c.stratum = K;
            c.y = combine(lam, U);
            std::vector<Vec> frame{sub(U[1], U[0]), sub(U[2], U[0]), sub(U[3], U[0])};
            const auto& B = P.elements[K].basis();
            for (std::size_t r = 0; r < B.rows(); ++r) frame.push_back(B.row(r));
            c.sign = orient_sign(frame);
            if (c.sign == 0) throw NotGeneralPosition("non-transversal intersection");
            for (const auto& o : here)
                if (o.lambda == c.lambda) throw NotGeneralPosition("a singular point lies on two strata");
            here.push_back(c);
        }
        pts.insert(pts.end(), here.begin(), here.end());
    }
    return pts;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Zero: return "Zero";
        case Verdict::Nonzero: return "Nonzero";
        default: return "Unsupported";
    }
}

namespace {

// Labels matching a point; cyclic runs prefer shift words.
std::vector<const XRecord*> labels_for(const CellPoint& c, const std::vector<XRecord>& recs,
                                       const IntersectionPoset& P, const Subspace& L, bool admissible_only) {
    std::vector<const XRecord*> labs, adm;
    for (const auto& r : recs)
        if (r.simplex == c.simplex && r.lambda == c.lambda) {
            if (!(arrangement::act(r.word, L) == P.elements[c.stratum]))
                throw InconsistentSingularSet(r.label + " lies on a different stratum than enumerated");
            labs.push_back(&r);
            if (P.group.kind == GroupKind::Dihedral || !r.word.reflected) adm.push_back(&r);
        }
    if (labs.empty()) throw InconsistentSingularSet("enumerated singular point has no x-label");
    return admissible_only && !adm.empty() ? adm : labs;
}

}  // namespace

ObstructionClass obstruction_class(const IntersectionPoset& P, const LinkHomology& link,
                                   const CoinvariantGroup& coinv) {
    const int n = P.n();
    const Subspace& L = P.elements[P.L_index];
    const auto recs = x_records(P.alpha);
    const auto gen = generic_points(P);
    ObstructionClass oc;
    oc.points = cell_points(P);
    std::vector<Int> o(link.rank);
    bool unsupported = false;
    for (const auto& c : oc.points) {
        const XRecord* r = labels_for(c, recs, P, L, true).front();
        oc.labels.push_back(r->label);
        const int ts = equivariant_module::transport_sign(r->word, L.basis(), P.elements[c.stratum].basis());
        oc.raw[r->base - 1] += r->sign;
        oc.geometric[r->base - 1] += -c.sign * arrangement::det_ambient(r->word, n) * ts;
        auto pc = try_point_class(P, link, gen, c.y, c.stratum);
        if (!pc) {
            unsupported = true;
            continue;
        }
        for (std::size_t k = 0; k < o.size(); ++k) o[k] += c.sign * (*pc)[k];
    }
    if (unsupported) {
        oc.verdict = Verdict::Unsupported;
        return oc;
    }
    oc.vector = o;
    oc.image = coinv.project(o);
    oc.order = coinv.order(o);
    oc.verdict = oc.order == 1 ? Verdict::Zero : Verdict::Nonzero;
    return oc;
}

ClosedForm closed_form_cocycle(const Alpha& alpha, GroupKind kind) {
    const long a1 = alpha[0], a2 = alpha[1], a3 = alpha[2], a4 = alpha[3];
    const long n = alpha.n(), Q = a1 + a2, R = Q + a3, c2 = n * (n - 1) / 2;
    const int s = pow_sign((n + 1) * R), t = pow_sign((n + 1) * a1), u_ = pow_sign((n + 1) * Q), c = pow_sign(c2);
    auto cf = [](const char* l, long x, long y) { return ClosedForm{l, {Int(x), Int(y)}}; };
    if (kind == GroupKind::Cyclic) {
        if (a1 == a2 && a2 == a3 && a3 == a4) return cf("A", pow_sign(a1), 0);
        if (a1 == a3 && a2 == a4) return cf("B", pow_sign(a1) + pow_sign(a2), 0);
        if (a1 == a2 && a2 == a3 && a4 == 2 * a1) return cf("D", 2, -2);
        return cf("C", t + s, -(u_ + 1));
    }
    if (a1 == a2 && a2 == a3 && a3 == a4) return cf("A", 0, 1);
    if (a2 == a4 && a1 != a3) return cf("B.1", s * (1 + c) + t * (1 + c), 0);
    if (a2 == a4 && a1 == a3) return cf("B.2", s + pow_sign((n + 1) * a1 + c2), 0);
    if (a1 == a3 && a2 != a4) return cf("B.3", s * (1 + c) + t * (1 + c), 0);
    if (a1 == a2 && a3 == a4) return cf("B.4", s + pow_sign((n + 1) * a1 + c2), -(u_ + 1) * (1 + c));
    if (a2 == a3 && a1 == a4) return cf("B.5", (s + t) * (1 + c), -(1 + u_));
    return cf("B.6", (s + t) * (1 + c), -(u_ + 1) * (1 + c));
}

CocycleComparison compare_closed_form(const IntersectionPoset& P) {
    const Subspace& L = P.elements[P.L_index];
    const auto recs = x_records(P.alpha);
    CocycleComparison cmp;
    cmp.formula = closed_form_cocycle(P.alpha, P.group.kind);
    std::set<std::array<Int, 2>> sums{{Int(0), Int(0)}};
    for (const auto& c : cell_points(P)) {
        std::set<std::array<Int, 2>> opts;
        for (const auto* r : labels_for(c, recs, P, L, true)) {
            std::array<Int, 2> v{Int(0), Int(0)};
            v[r->base - 1] = r->sign;
            opts.insert(v);
        }
        std::set<std::array<Int, 2>> next;
        for (const auto& s : sums)
            for (const auto& o : opts) next.insert({s[0] + o[0], s[1] + o[1]});
        sums = std::move(next);
    }
    cmp.enumerated.assign(sums.begin(), sums.end());
    const auto& f = cmp.formula.coeff;
    const std::array<Int, 2> neg{Int(-f[0]), Int(-f[1])};
    cmp.match = sums.count(f) || sums.count(neg);
    return cmp;
}

}  // namespace s3map::obstruction
