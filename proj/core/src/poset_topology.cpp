#include "s3map/poset_topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace s3map::poset_topology {

using arrangement::GroupElement;
using arrangement::Mask;
using exactalg::Rat;
using exactalg::RationalMatrix;

long OrderComplex::find(const Chain& s) const {
    if (s.empty()) return 0;
    const int k = static_cast<int>(s.size()) - 1;
    if (k > dim()) return -1;
    const auto& v = simplices[k];
    auto it = std::lower_bound(v.begin(), v.end(), s);
    return it != v.end() && *it == s ? static_cast<long>(it - v.begin()) : -1;
}

namespace {

bool strictly_contains(const IntersectionPoset& P, int w, int v) {
    // w ⊋ v  iff  supp(w) ⊊ supp(v)
    const Mask sw = P.support[w], sv = P.support[v];
    return sw != sv && (sw & sv) == sw;
}

}  // namespace

OrderComplex order_complex_on(const IntersectionPoset& P, std::vector<int> vertices) {
    std::sort(vertices.begin(), vertices.end());
    OrderComplex c;
    c.vertices = vertices;
    const std::size_t m = vertices.size();
    // succ[i]: positions j > i whose element strictly contains vertex i
    std::vector<std::vector<int>> succ(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (strictly_contains(P, vertices[j], vertices[i])) succ[i].push_back(static_cast<int>(j));

    Chain cur;
    auto dfs = [&](auto&& self, int i) -> void {
        cur.push_back(vertices[i]);
        const std::size_t k = cur.size() - 1;
        if (c.simplices.size() <= k) c.simplices.resize(k + 1);
        c.simplices[k].push_back(cur);
        for (int j : succ[i]) self(self, j);
        cur.pop_back();
    };
    for (std::size_t i = 0; i < m; ++i) dfs(dfs, static_cast<int>(i));
    // DFS emits each length in lexicographic order already
    return c;
}

OrderComplex order_complex(const IntersectionPoset& P, std::size_t p) {
    return order_complex_on(P, P.above[p]);
}

IntegerMatrix SparseMatrix::to_dense() const {
    IntegerMatrix d(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (auto [i, v] : col[j]) d(i, j) = static_cast<long>(v);
    return d;
}

ChainComplex chain_complex(const OrderComplex& c) {
    ChainComplex cc;
    for (int k = 0; k <= c.dim(); ++k) {
        SparseMatrix d;
        d.rows = c.count(k - 1);
        d.cols = c.count(k);
        d.col.resize(d.cols);
        for (std::size_t j = 0; j < d.cols; ++j) {
            const Chain& s = c.simplices[k][j];
            if (k == 0) {
                d.col[j].push_back({0, 1});
                continue;
            }
            Chain face(s.size() - 1);
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                for (std::size_t t = 0, u = 0; t < s.size(); ++t)
                    if (t != drop) face[u++] = s[t];
                const long r = c.find(face);
                d.col[j].push_back({static_cast<int>(r), drop % 2 ? -1 : 1});
            }
            std::sort(d.col[j].begin(), d.col[j].end());
        }
        cc.boundary.push_back(std::move(d));
    }
    return cc;
}

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}

using SparseCol = std::vector<std::pair<int, std::int64_t>>;

// a - f*b on sorted sparse columns
SparseCol axpy(const SparseCol& a, std::int64_t f, const SparseCol& b) {
    SparseCol out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back({b[j].first, checked_mul(-f, b[j].second)});
            ++j;
        } else {
            auto v = checked_sub(a[i].second, checked_mul(f, b[j].second));
            if (v != 0) out.push_back({a[i].first, v});
            ++i, ++j;
        }
    }
    return out;
}

}  // namespace

namespace {

using SparseRow = std::vector<std::pair<int, Int>>;

struct Elimination {
    std::vector<Int> diag;           // nonzero invariants, ascending
    std::vector<SparseRow> kernel;   // Z-basis of the integer kernel when tracked
};

// Pivots on unit entries with column operations (optionally mirrored onto a
// record of the original columns), then finishes the remainder densely.
Elimination eliminate(const SparseMatrix& m, bool track) {
    std::vector<SparseCol> col = m.col;
    std::vector<SparseCol> T;
    if (track) {
        T.resize(m.cols);
        for (std::size_t j = 0; j < m.cols; ++j) T[j] = {{static_cast<int>(j), 1}};
    }
    std::vector<char> col_alive(m.cols, 1), row_alive(m.rows, 1);
    std::vector<std::vector<int>> row_cols(m.rows);  // may hold stale entries
    for (std::size_t j = 0; j < m.cols; ++j)
        for (auto [i, v] : col[j]) row_cols[i].push_back(static_cast<int>(j));

    std::size_t units = 0;
    try {
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<int> order(m.cols);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int x, int y) { return col[x].size() < col[y].size(); });
            for (int j : order) {
                if (!col_alive[j] || col[j].empty()) continue;
                int best = -1;
                std::size_t best_len = 0;
                std::int64_t pv = 0;
                for (auto [i, v] : col[j])
                    if ((v == 1 || v == -1) && (best < 0 || row_cols[i].size() < best_len))
                        best = i, best_len = row_cols[i].size(), pv = v;
                if (best < 0) continue;
                // clear row `best` from every other column, then drop row and column
                std::vector<int> others;
                for (int k : row_cols[best])
                    if (k != j && col_alive[k]) others.push_back(k);
                std::sort(others.begin(), others.end());
                others.erase(std::unique(others.begin(), others.end()), others.end());
                for (int k : others) {
                    std::int64_t ck = 0;
                    for (auto [i, v] : col[k])
                        if (i == best) ck = v;
                    if (ck == 0) continue;
                    SparseCol nc = axpy(col[k], ck * pv, col[j]);
                    if (track) {
                        SparseCol nt = axpy(T[k], ck * pv, T[j]);
                        T[k] = std::move(nt);
                    }
                    for (auto [i, v] : nc) row_cols[i].push_back(k);
                    col[k] = std::move(nc);
                }
                col_alive[j] = 0;
                col[j].clear();
                row_alive[best] = 0;
                ++units;
                progress = true;
            }
            for (std::size_t i = 0; i < m.rows; ++i) {
                auto& rc = row_cols[i];
                if (!row_alive[i]) {
                    rc.clear();
                    continue;
                }
                std::sort(rc.begin(), rc.end());
                rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
                rc.erase(std::remove_if(rc.begin(), rc.end(), [&](int k) { return !col_alive[k]; }), rc.end());
            }
        }
    } catch (const Overflow&) {
        // every completed step was unimodular; the remainder is finished densely
    }

    Elimination out;
    out.diag.assign(units, Int(1));
    std::vector<int> rmap(m.rows, -1);
    std::size_t nr = 0;
    for (std::size_t i = 0; i < m.rows; ++i)
        if (row_alive[i]) rmap[i] = static_cast<int>(nr++);
    std::vector<int> cs;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (!col_alive[j]) continue;
        if (!col[j].empty()) {
            cs.push_back(static_cast<int>(j));
        } else if (track) {
            SparseRow r;
            for (auto [i, v] : T[j]) r.push_back({i, Int(static_cast<long>(v))});
            out.kernel.push_back(std::move(r));
        }
    }
    if (!cs.empty()) {
        IntegerMatrix rest(nr, cs.size());
        for (std::size_t t = 0; t < cs.size(); ++t)
            for (auto [i, v] : col[cs[t]]) rest(rmap[i], t) = static_cast<long>(v);
        if (track) {
            auto snf = exactalg::smith_normal_form(rest);
            std::size_t r = 0;
            while (r < std::min(snf.D.rows(), snf.D.cols()) && snf.D(r, r) != 0) {
                out.diag.push_back(abs(snf.D(r, r)));
                ++r;
            }
            for (std::size_t t = r; t < cs.size(); ++t) {
                std::map<int, Int> acc;
                for (std::size_t s2 = 0; s2 < cs.size(); ++s2) {
                    if (snf.V(s2, t) == 0) continue;
                    for (auto [i, v] : T[cs[s2]]) acc[i] += snf.V(s2, t) * Int(static_cast<long>(v));
                }
                SparseRow row;
                for (auto& [i, v] : acc)
                    if (v != 0) row.push_back({i, v});
                out.kernel.push_back(std::move(row));
            }
        } else {
            for (auto& d : exactalg::smith_diagonal(rest))
                if (d != 0) out.diag.push_back(abs(d));
        }
    }
    std::sort(out.diag.begin(), out.diag.end());
    return out;
}

// Row-reduces a few sparse integer rows over Q. Returns false when the reduced
// rows are not integral; otherwise rows become the reduced basis and pivots
// their leading columns.
bool sparse_rref(std::vector<SparseRow>& rows, std::vector<std::size_t>& pivots) {
    std::vector<std::map<int, Rat>> R;
    for (const auto& r : rows) {
        std::map<int, Rat> m;
        for (const auto& [i, v] : r) m[i] = Rat(v);
        R.push_back(std::move(m));
    }
    std::vector<std::map<int, Rat>> done;
    std::vector<int> piv;
    while (!R.empty()) {
        // pick the row with the leftmost leading column
        std::size_t b = R.size();
        for (std::size_t t = 0; t < R.size(); ++t) {
            if (R[t].empty()) continue;
            if (b == R.size() || R[t].begin()->first < R[b].begin()->first) b = t;
        }
        if (b == R.size()) break;
        std::map<int, Rat> row = std::move(R[b]);
        R.erase(R.begin() + static_cast<long>(b));
        const int c = row.begin()->first;
        const Rat lead = row.begin()->second;
        for (auto& [i, v] : row) v /= lead;
        auto clear = [&](std::map<int, Rat>& other) {
            auto it = other.find(c);
            if (it == other.end()) return;
            const Rat f = it->second;
            for (const auto& [i, v] : row) {
                Rat& x = other[i];
                x -= f * v;
                if (x == 0) other.erase(i);
            }
        };
        for (auto& o : R) clear(o);
        for (auto& o : done) clear(o);
        done.push_back(std::move(row));
        piv.push_back(c);
    }
    // order by pivot column
    std::vector<std::size_t> ord(done.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) { return piv[x] < piv[y]; });
    std::vector<SparseRow> out;
    pivots.clear();
    for (std::size_t t : ord) {
        SparseRow r;
        for (const auto& [i, v] : done[t]) {
            if (v.get_den() != 1) return false;
            r.push_back({i, v.get_num()});
        }
        out.push_back(std::move(r));
        pivots.push_back(static_cast<std::size_t>(piv[t]));
    }
    rows = std::move(out);
    return true;
}

}  // namespace

std::vector<Int> sparse_smith_diagonal(const SparseMatrix& m) { return eliminate(m, false).diag; }

namespace {

std::size_t nonzero_count(const std::vector<Int>& d) {
    return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](const Int& x) { return x != 0; }));
}

// Z-basis of the integer kernel in reduced form: each row is 1 at its unit
// column and every other row vanishes there.
std::vector<SparseRow> integer_kernel(const SparseMatrix& d, std::vector<std::size_t>& unit_cols) {
    Elimination e = eliminate(d, true);
    std::vector<SparseRow> K = std::move(e.kernel);
    if (!sparse_rref(K, unit_cols))
        throw std::logic_error("kernel lattice has no reduced integral basis");
    return K;
}

Cycle to_cycle(const std::vector<Chain>& basis, const SparseRow& row) {
    Cycle z;
    for (const auto& [j, v] : row) z.push_back({basis[j], v});
    std::sort(z.begin(), z.end());
    return z;
}

IntegerMatrix unimodular_inverse(const IntegerMatrix& U) {
    const std::size_t n = U.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = U(i, j);
        aug(i, n + i) = 1;
    }
    RationalMatrix R = exactalg::rref(aug);
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = R(i, n + j);
    return exactalg::to_integer(inv);
}

}  // namespace

HomologyBasis reduced_homology(const OrderComplex& c, int degree, bool with_cycles) {
    if (degree < -1) throw std::invalid_argument("reduced_homology: degree < -1");
    HomologyBasis h;
    h.degree = degree;
    if (degree == -1) {
        if (c.empty()) {
            h.group = {1, {}};
            if (with_cycles) h.cycles.push_back({{Chain{}, Int(1)}});
        }
        return h;
    }
    if (degree > c.dim()) return h;

    ChainComplex cc = chain_complex(c);
    const SparseMatrix& dk = cc.boundary[degree];
    const bool top = degree == c.dim();
    std::vector<Int> below = sparse_smith_diagonal(dk);
    std::vector<Int> above;
    if (!top) above = sparse_smith_diagonal(cc.boundary[degree + 1]);
    const std::size_t rk = nonzero_count(below), rk1 = nonzero_count(above);
    h.group.rank = c.count(degree) - rk - rk1;
    for (auto& d : above)
        if (d > 1) h.group.torsion.push_back(d);
    if (!with_cycles || h.group.rank == 0) return h;

    const auto& basis = c.simplices[degree];
    std::vector<std::size_t> unit_cols;
    std::vector<SparseRow> K = integer_kernel(dk, unit_cols);
    if (top) {
        for (const auto& row : K) h.cycles.push_back(to_cycle(basis, row));
        return h;
    }
    // Boundaries in kernel coordinates: read off at the unit columns.
    const SparseMatrix& dk1 = cc.boundary[degree + 1];
    std::vector<long> where(c.count(degree), -1);
    for (std::size_t t = 0; t < unit_cols.size(); ++t) where[unit_cols[t]] = static_cast<long>(t);
    IntegerMatrix X(K.size(), dk1.cols);
    for (std::size_t j = 0; j < dk1.cols; ++j)
        for (auto [i, v] : dk1.col[j])
            if (where[i] >= 0) X(where[i], j) = static_cast<long>(v);
    auto snf = exactalg::smith_normal_form(X);
    std::size_t r = 0;
    while (r < std::min(snf.D.rows(), snf.D.cols()) && snf.D(r, r) != 0) ++r;
    IntegerMatrix Ui = unimodular_inverse(snf.U);
    // new kernel basis (U^{-1})^T K; the rows past the image span the free part
    for (std::size_t t = r; t < K.size(); ++t) {
        std::map<int, Int> acc;
        for (std::size_t s2 = 0; s2 < K.size(); ++s2)
            if (Ui(s2, t) != 0)
                for (const auto& [j, v] : K[s2]) acc[j] += Ui(s2, t) * v;
        SparseRow row;
        for (auto& [j, v] : acc)
            if (v != 0) row.push_back({j, v});
        h.cycles.push_back(to_cycle(basis, row));
    }
    return h;
}

std::vector<FGAbelianGroup> reduced_homology_all(const OrderComplex& c) {
    std::vector<FGAbelianGroup> out;
    out.push_back(reduced_homology(c, -1, false).group);
    if (c.empty()) return out;
    ChainComplex cc = chain_complex(c);
    std::vector<std::vector<Int>> diag;
    for (const auto& d : cc.boundary) diag.push_back(sparse_smith_diagonal(d));
    for (int k = 0; k <= c.dim(); ++k) {
        FGAbelianGroup g;
        const std::size_t rk1 = k + 1 <= c.dim() ? nonzero_count(diag[k + 1]) : 0;
        g.rank = c.count(k) - nonzero_count(diag[k]) - rk1;
        if (k + 1 <= c.dim())
            for (auto& d : diag[k + 1])
                if (d > 1) g.torsion.push_back(d);
        out.push_back(g);
    }
    return out;
}

namespace {

std::vector<GroupElement> stabilizer(const IntersectionPoset& P, std::size_t p) {
    std::vector<GroupElement> out;
    for (const auto& g : P.group.elements())
        if (P.perm(g)[p] == static_cast<int>(p)) out.push_back(g);
    return out;
}

// Weak-point test. The part of the alive set strictly above (or below) y is
// contractible when some c in it makes w -> join(w, c) (or meet(w, c)) a map into
// that part; then id <= f >= const c. Unique covers are the special case c = cover.
class WeakPoints {
public:
    WeakPoints(const IntersectionPoset& P, std::size_t p, const std::vector<int>& pool)
        : P_(P), p_(static_cast<int>(p)), pool_(pool) {}

    bool removable(int y, const std::vector<char>& alive) {
        const Mask sy = P_.support[y];
        up_.clear();
        down_.clear();
        for (int w : pool_) {
            if (!alive[w] || w == y) continue;
            const Mask sw = P_.support[w];
            if ((sw & sy) == sw) up_.push_back(w);
            else if ((sw & sy) == sy) down_.push_back(w);
        }
        return conical(up_, alive, true) || conical(down_, alive, false);
    }

private:
    int closure(Mask m) {
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        return cache_[m] = P_.closure(m);
    }

    bool conical(const std::vector<int>& part, const std::vector<char>& alive, bool up) {
        if (part.empty()) return false;
        // the most extreme elements are the likeliest cone points
        for (std::size_t t = 0; t < part.size(); ++t) {
            const int c = up ? part[part.size() - 1 - t] : part[t];
            const Mask sc = P_.support[c];
            bool ok = true;
            for (int w : part) {
                const Mask sw = P_.support[w];
                const Mask m = up ? (sw & sc) : (sw | sc);
                if (m == 0) {
                    ok = false;
                    break;
                }
                const int e = closure(m);
                if (e < 0 || e == p_ || !alive[e]) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
        return false;
    }

    const IntersectionPoset& P_;
    int p_;
    const std::vector<int>& pool_;
    std::vector<int> up_, down_;
    std::unordered_map<Mask, int> cache_;
};

}  // namespace

std::vector<int> prune_quillen_vertices(const IntersectionPoset& P, std::size_t p) {
    const std::vector<int>& pool = P.above[p];
    std::vector<char> alive(P.size(), 0);
    for (int v : pool) alive[v] = 1;
    const auto stab = stabilizer(P, p);
    WeakPoints weak(P, p, pool);

    bool changed = true;
    while (changed) {
        changed = false;
        for (int x : pool) {
            if (!alive[x]) continue;
            std::set<int> orbit;
            for (const auto& g : stab) orbit.insert(P.perm(g)[x]);
            std::vector<int> removed;
            bool ok = true;
            for (int y : orbit) {
                if (!weak.removable(y, alive)) {
                    ok = false;
                    break;
                }
                alive[y] = 0;
                removed.push_back(y);
            }
            if (!ok) {
                for (int y : removed) alive[y] = 1;
                continue;
            }
            changed = true;
        }
    }
    std::vector<int> out;
    for (int v : pool)
        if (alive[v]) out.push_back(v);
    return out;
}

OrderComplex prune_quillen(const IntersectionPoset& P, std::size_t p) {
    return order_complex_on(P, prune_quillen_vertices(P, p));
}

Cycle map_cycle(const std::vector<int>& perm, const Cycle& z) {
    Cycle out;
    out.reserve(z.size());
    for (const auto& [s, c] : z) {
        Chain t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) t[i] = perm[s[i]];
        out.push_back({std::move(t), c});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Int> LinkHomology::coordinates(const IntersectionPoset& P, std::size_t p, const Cycle& z) const {
    const Summand& S = summands.at(p);
    const std::size_t k = S.homology.cycles.size();
    std::vector<Int> coords(k);
    if (k == 0) {
        if (!z.empty()) throw GeneratorTransportFailure("nonzero cycle on a zero summand");
        return coords;
    }
    const Cycle back = map_cycle(P.perm(P.group.inv(S.from_rep)), z);
    const RepData& rd = rep_data.at(S.rep);
    std::map<Chain, Int> val;
    for (const auto& [s, c] : back) {
        if (!std::binary_search(rd.top.begin(), rd.top.end(), s))
            throw GeneratorTransportFailure("cycle leaves the generator complex");
        val[s] += c;
    }
    const auto& gens = summands.at(S.rep).homology.cycles;
    for (std::size_t i = 0; i < k; ++i) {
        auto it = val.find(rd.top[rd.pivot[i]]);
        coords[i] = it == val.end() ? Int(0) : it->second;
    }
    std::map<Chain, Int> check;
    for (std::size_t i = 0; i < k; ++i)
        if (coords[i] != 0)
            for (const auto& [s, c] : gens[i]) check[s] += coords[i] * c;
    for (auto it = check.begin(); it != check.end();)
        it = it->second == 0 ? check.erase(it) : std::next(it);
    for (auto it = val.begin(); it != val.end();)
        it = it->second == 0 ? val.erase(it) : std::next(it);
    if (check != val) throw GeneratorTransportFailure("cycle is not an integer combination of generators");
    return coords;
}

namespace {

// Chains with d+1 elements on the given vertices and their boundary into the
// chains with d elements that occur as faces.
struct TopBoundary {
    std::vector<Chain> top;
    SparseMatrix boundary;
};

TopBoundary top_boundary(const IntersectionPoset& P, std::vector<int> vertices, int d) {
    std::sort(vertices.begin(), vertices.end());
    const std::size_t m = vertices.size();
    std::vector<std::vector<int>> succ(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (strictly_contains(P, vertices[j], vertices[i])) succ[i].push_back(static_cast<int>(j));
    // height[i]: elements in the longest chain starting at i
    std::vector<int> height(m, 1);
    for (std::size_t i = m; i-- > 0;)
        for (int j : succ[i]) height[i] = std::max(height[i], height[j] + 1);

    TopBoundary tb;
    const int len = d + 1;
    Chain cur;
    auto dfs = [&](auto&& self, int i) -> void {
        cur.push_back(vertices[i]);
        if (static_cast<int>(cur.size()) == len) {
            tb.top.push_back(cur);
        } else {
            for (int j : succ[i])
                if (static_cast<int>(cur.size()) + height[j] >= len) self(self, j);
        }
        cur.pop_back();
    };
    for (std::size_t i = 0; i < m; ++i)
        if (height[i] >= len) dfs(dfs, static_cast<int>(i));

    std::vector<Chain> faces;
    if (d == 0) {
        faces.push_back(Chain{});
    } else {
        for (const auto& t : tb.top)
            for (std::size_t drop = 0; drop < t.size(); ++drop) {
                Chain f;
                for (std::size_t u = 0; u < t.size(); ++u)
                    if (u != drop) f.push_back(t[u]);
                faces.push_back(std::move(f));
            }
        std::sort(faces.begin(), faces.end());
        faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    }
    SparseMatrix& B = tb.boundary;
    B.rows = faces.size();
    B.cols = tb.top.size();
    B.col.resize(B.cols);
    for (std::size_t j = 0; j < B.cols; ++j) {
        const Chain& t = tb.top[j];
        if (d == 0) {
            B.col[j].push_back({0, 1});
            continue;
        }
        Chain f(t.size() - 1);
        for (std::size_t drop = 0; drop < t.size(); ++drop) {
            for (std::size_t u = 0, w = 0; u < t.size(); ++u)
                if (u != drop) f[w++] = t[u];
            const auto it = std::lower_bound(faces.begin(), faces.end(), f);
            B.col[j].push_back({static_cast<int>(it - faces.begin()), drop % 2 ? -1 : 1});
        }
        std::sort(B.col[j].begin(), B.col[j].end());
    }
    return tb;
}

}  // namespace

LinkHomology zz_link_homology(const IntersectionPoset& P, const LinkOptions& opt) {
    const int n = P.n();
    const auto elems = P.group.elements();
    LinkHomology L;
    L.summands.resize(P.size());
    L.rep_data.resize(P.size());
    std::vector<char> done(P.size(), 0);

    for (std::size_t p = 0; p < P.size(); ++p) {
        if (done[p]) continue;
        const int d = n - 5 - P.dim(p);
        Summand& S = L.summands[p];
        S.element = p;
        S.degree = d;
        S.rep = p;
        S.from_rep = GroupElement{0, false};
        auto& rd = L.rep_data[p];
        if (d == -1) {
            S.homology = reduced_homology(OrderComplex{}, -1);
            rd.top = {Chain{}};
            rd.pivot = {0};
        } else {
            const std::vector<int> verts = opt.prune ? prune_quillen_vertices(P, p) : P.above[p];
            TopBoundary tb = top_boundary(P, verts, d);
            S.homology.degree = d;
            rd.top = tb.top;
            const std::size_t rank = tb.top.size() - nonzero_count(sparse_smith_diagonal(tb.boundary));
            if (rank > 0) {
                std::vector<std::size_t> unit_cols;
                std::vector<SparseRow> K = integer_kernel(tb.boundary, unit_cols);
                if (K.size() != rank) throw std::logic_error("kernel basis size disagrees with rank");
                rd.pivot = unit_cols;
                for (const auto& row : K) S.homology.cycles.push_back(to_cycle(rd.top, row));
            }
            S.homology.group.rank = rank;
            if (n <= opt.shadow_check_max_n && opt.prune) {
                // top degree of the full complex: no torsion is possible, but the
                // claim is checked on the unpruned boundary anyway
                TopBoundary full = top_boundary(P, P.above[p], d);
                auto diag = sparse_smith_diagonal(full.boundary);
                FGAbelianGroup g{full.top.size() - nonzero_count(diag), {}};
                if (g != S.homology.group)
                    throw std::logic_error("pruned and unpruned homology differ at element " + std::to_string(p));
            }
        }
        done[p] = 1;
        for (const auto& g : elems) {
            const std::size_t q = static_cast<std::size_t>(P.perm(g)[p]);
            if (done[q]) continue;
            done[q] = 1;
            Summand& T = L.summands[q];
            T.element = q;
            T.degree = d;
            T.rep = p;
            T.from_rep = g;
            T.homology.degree = d;
            T.homology.group = S.homology.group;
            for (const auto& z : S.homology.cycles) T.homology.cycles.push_back(map_cycle(P.perm(g), z));
        }
    }
    for (auto& S : L.summands) {
        S.offset = L.rank;
        for (std::size_t i = 0; i < S.homology.cycles.size(); ++i) L.index.push_back({S.element, i});
        L.rank += S.homology.cycles.size();
    }
    return L;
}

}  // namespace s3map::poset_topology
