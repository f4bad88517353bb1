#include "s3map/exactalg.hpp"

#include <algorithm>
#include <cstdint>
#include <type_traits>
#include <sstream>
#include <stdexcept>

namespace s3map::exactalg {

std::string FGAbelianGroup::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " + ";
        first = false;
    };
    if (rank > 0) {
        sep();
        os << "Z";
        if (rank > 1) os << "^" << rank;
    }
    for (const auto& d : torsion) {
        sep();
        os << "Z_" << d.get_str();
    }
    if (first) os << "0";
    return os.str();
}

namespace {

struct Overflow {};

// Reduced int64 fraction; any result that does not fit raises Overflow and the
// caller retries with GMP rationals.
struct SmallRat {
    std::int64_t p = 0, q = 1;

    static SmallRat make(__int128 a, __int128 b) {
        if (b < 0) {
            a = -a;
            b = -b;
        }
        __int128 x = a < 0 ? -a : a, y = b;
        while (y) {
            __int128 t = x % y;
            x = y;
            y = t;
        }
        if (x > 1) {
            a /= x;
            b /= x;
        }
        constexpr __int128 lim = INT64_MAX;
        if (a > lim || a < -lim || b > lim) throw Overflow{};
        return {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
    }
    bool zero() const { return p == 0; }
    SmallRat operator-(const SmallRat& o) const {
        return make(static_cast<__int128>(p) * o.q - static_cast<__int128>(o.p) * q, static_cast<__int128>(q) * o.q);
    }
    SmallRat operator*(const SmallRat& o) const {
        return make(static_cast<__int128>(p) * o.p, static_cast<__int128>(q) * o.q);
    }
    SmallRat operator/(const SmallRat& o) const {
        return make(static_cast<__int128>(p) * o.q, static_cast<__int128>(q) * o.p);
    }
};

template <class T>
bool is_zero(const T& x) {
    if constexpr (std::is_same_v<T, SmallRat>)
        return x.zero();
    else
        return x == 0;
}

template <class T>
std::size_t rref_in_place(std::vector<T>& m, std::size_t R, std::size_t C, std::vector<std::size_t>& piv) {
    auto at = [&](std::size_t i, std::size_t j) -> T& { return m[i * C + j]; };
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t k = r;
        while (k < R && is_zero(at(k, c))) ++k;
        if (k == R) continue;
        if (k != r)
            for (std::size_t j = 0; j < C; ++j) std::swap(at(r, j), at(k, j));
        T p = at(r, c);
        for (std::size_t j = c; j < C; ++j) at(r, j) = at(r, j) / p;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || is_zero(at(i, c))) continue;
            T f = at(i, c);
            for (std::size_t j = c; j < C; ++j)
                if (!is_zero(at(r, j))) at(i, j) = at(i, j) - f * at(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return r;
}

bool try_small(const RationalMatrix& in, std::vector<SmallRat>& out) {
    out.resize(in.rows() * in.cols());
    for (std::size_t i = 0; i < in.rows(); ++i)
        for (std::size_t j = 0; j < in.cols(); ++j) {
            const Rat& x = in(i, j);
            if (!x.get_num().fits_slong_p() || !x.get_den().fits_slong_p()) return false;
            out[i * in.cols() + j] = {x.get_num().get_si(), x.get_den().get_si()};
        }
    return true;
}

}  // namespace

RrefResult rref_pivots(const RationalMatrix& in) {
    const std::size_t R = in.rows(), C = in.cols();
    std::vector<SmallRat> sm;
    if (try_small(in, sm)) {
        try {
            std::vector<std::size_t> piv;
            std::size_t r = rref_in_place(sm, R, C, piv);
            RationalMatrix out(r, C);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < C; ++j) {
                    const auto& x = sm[i * C + j];
                    if (x.p != 0) out(i, j) = Rat(Int(static_cast<long>(x.p)), Int(static_cast<long>(x.q)));
                }
            return {std::move(out), std::move(piv)};
        } catch (const Overflow&) {
        }
    }
    std::vector<Rat> m(R * C);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) m[i * C + j] = in(i, j);
    std::vector<std::size_t> piv;
    std::size_t r = rref_in_place(m, R, C, piv);
    RationalMatrix out(r, C);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < C; ++j) out(i, j) = m[i * C + j];
    return {std::move(out), std::move(piv)};
}

RationalMatrix rref(const RationalMatrix& m) { return rref_pivots(m).basis; }

std::size_t rank(const RationalMatrix& m) { return rref_pivots(m).pivots.size(); }

RationalMatrix kernel(const RationalMatrix& m) {
    auto [R, piv] = rref_pivots(m);
    const std::size_t C = m.cols();
    std::vector<bool> is_piv(C, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::vector<Rat>> vecs;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rat> v(C, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -R(i, f);
        vecs.push_back(std::move(v));
    }
    if (vecs.empty()) return RationalMatrix(0, C);
    return rref(RationalMatrix::from_rows(vecs, C));
}

Rat determinant(RationalMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t k = c;
        while (k < n && m(k, c) == 0) ++k;
        if (k == n) return 0;
        if (k != c) {
            m.swap_rows(c, k);
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

Int determinant(const IntegerMatrix& m) {
    Rat d = determinant(to_rational(m));
    return d.get_num();
}

IntegerMatrix to_integer(const RationalMatrix& m) {
    IntegerMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) throw std::domain_error("to_integer: non-integral entry");
            out(i, j) = m(i, j).get_num();
        }
    return out;
}

RationalMatrix to_rational(const IntegerMatrix& m) {
    RationalMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

namespace {

// Row/column operations on the working matrix, mirrored into U (rows) and V
// (columns) when tracking is on.
struct SnfWork {
    IntegerMatrix A, U, V;
    bool track;

    void row_axpy(std::size_t dst, std::size_t src, const Int& q) {  // row dst -= q*row src
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (A(src, j) != 0) A(dst, j) -= q * A(src, j);
        if (track)
            for (std::size_t j = 0; j < U.cols(); ++j)
                if (U(src, j) != 0) U(dst, j) -= q * U(src, j);
    }
    void col_axpy(std::size_t dst, std::size_t src, const Int& q) {  // col dst -= q*col src
        for (std::size_t i = 0; i < A.rows(); ++i)
            if (A(i, src) != 0) A(i, dst) -= q * A(i, src);
        if (track)
            for (std::size_t i = 0; i < V.rows(); ++i)
                if (V(i, src) != 0) V(i, dst) -= q * V(i, src);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        A.swap_rows(a, b);
        if (track) U.swap_rows(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        A.swap_cols(a, b);
        if (track) V.swap_cols(a, b);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < A.cols(); ++j) A(r, j) = -A(r, j);
        if (track)
            for (std::size_t j = 0; j < U.cols(); ++j) U(r, j) = -U(r, j);
    }

    void run() {
        const std::size_t R = A.rows(), C = A.cols();
        for (std::size_t t = 0; t < std::min(R, C); ++t) {
            // minimal-absolute-value pivot in the trailing block
            std::size_t bi = R, bj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (A(i, j) != 0 && (bi == R || abs(A(i, j)) < abs(A(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == R) break;
            swap_rows(t, bi);
            swap_cols(t, bj);
            for (;;) {
                bool clean = true;
                for (std::size_t i = t + 1; i < R; ++i) {
                    if (A(i, t) == 0) continue;
                    Int q = A(i, t) / A(t, t);
                    if (q != 0) row_axpy(i, t, q);
                    if (A(i, t) != 0) clean = false;
                }
                for (std::size_t j = t + 1; j < C; ++j) {
                    if (A(t, j) == 0) continue;
                    Int q = A(t, j) / A(t, t);
                    if (q != 0) col_axpy(j, t, q);
                    if (A(t, j) != 0) clean = false;
                }
                if (!clean) {
                    std::size_t br = t, bc = t;
                    for (std::size_t i = t + 1; i < R; ++i)
                        if (A(i, t) != 0 && abs(A(i, t)) < abs(A(br, t))) br = i;
                    for (std::size_t j = t + 1; j < C; ++j)
                        if (A(t, j) != 0 && abs(A(t, j)) < abs(A(t, bc))) bc = j;
                    if (br != t && (bc == t || abs(A(br, t)) <= abs(A(t, bc))))
                        swap_rows(t, br);
                    else if (bc != t)
                        swap_cols(t, bc);
                    continue;
                }
                std::size_t bad = R;
                for (std::size_t i = t + 1; i < R && bad == R; ++i)
                    for (std::size_t j = t + 1; j < C; ++j)
                        if (A(i, j) % A(t, t) != 0) {
                            bad = i;
                            break;
                        }
                if (bad == R) break;
                row_axpy(t, bad, Int(-1));
            }
            if (A(t, t) < 0) negate_row(t);
        }
    }
};

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m) {
    SnfWork w{m, IntegerMatrix::identity(m.rows()), IntegerMatrix::identity(m.cols()), true};
    w.run();
    return {std::move(w.U), std::move(w.A), std::move(w.V)};
}

std::vector<Int> smith_diagonal(const IntegerMatrix& m) {
    SnfWork w{m, IntegerMatrix(), IntegerMatrix(), false};
    w.run();
    std::vector<Int> d;
    for (std::size_t t = 0; t < std::min(m.rows(), m.cols()); ++t) d.push_back(w.A(t, t));
    return d;
}

FGAbelianGroup group_from_diagonal(std::size_t rows, const std::vector<Int>& diag) {
    FGAbelianGroup g;
    std::size_t nonzero = 0;
    for (const auto& d : diag) {
        if (d == 0) continue;
        ++nonzero;
        if (abs(d) > 1) g.torsion.push_back(abs(d));
    }
    std::sort(g.torsion.begin(), g.torsion.end());
    g.rank = rows - nonzero;
    return g;
}

FGAbelianGroup cokernel(const IntegerMatrix& m) {
    if (m.rows() == 0) return {};
    if (m.cols() == 0) return {m.rows(), {}};
    return group_from_diagonal(m.rows(), smith_diagonal(m));
}

}  // namespace s3map::exactalg
