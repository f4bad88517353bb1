#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace s3map::exactalg {

using Int = mpz_class;
using Rat = mpq_class;

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, T(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        return m;
    }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(std::size_t j, std::size_t k) {
        if (j == k) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RationalMatrix = Matrix<Rat>;
using IntegerMatrix = Matrix<Int>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

// Finitely generated abelian group Z^rank + Z/d1 + ... with d1 | d2 | ...
struct FGAbelianGroup {
    std::size_t rank = 0;
    std::vector<Int> torsion;

    bool operator==(const FGAbelianGroup&) const = default;
    bool trivial() const { return rank == 0 && torsion.empty(); }
    std::string to_string() const;
};

struct RrefResult {
    RationalMatrix basis;             // nonzero rows only
    std::vector<std::size_t> pivots;  // pivot column per row
};

RrefResult rref_pivots(const RationalMatrix& m);
RationalMatrix rref(const RationalMatrix& m);
RationalMatrix kernel(const RationalMatrix& m);
std::size_t rank(const RationalMatrix& m);
Rat determinant(RationalMatrix m);

struct SmithForm {
    IntegerMatrix U, D, V;  // U * m * V == D
};

SmithForm smith_normal_form(const IntegerMatrix& m);
// Diagonal only; skips the transforms.
std::vector<Int> smith_diagonal(const IntegerMatrix& m);

// Z^rows / column span.
FGAbelianGroup cokernel(const IntegerMatrix& m);
FGAbelianGroup group_from_diagonal(std::size_t rows, const std::vector<Int>& diag);

Int determinant(const IntegerMatrix& m);
IntegerMatrix to_integer(const RationalMatrix& m);  // throws if not integral
RationalMatrix to_rational(const IntegerMatrix& m);

}  // namespace s3map::exactalg
