#pragma once

#include "jkit/scalar.hpp"

namespace jkit {

// Dense matrix of scalars; all linear algebra is exact over the fraction
// field, so rank/nullspace results are generic (and pointwise exact when the
// entries are point values).
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Scalar> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Scalar& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Scalar& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n);

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat transpose() const;
    bool is_zero() const;
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    std::string str() const;
};

struct InverseResult {
    Mat inverse;
    Scalar det;
};

// Exact inverse; throws SingularMatrix when the determinant is identically
// zero.  The determinant is returned for nonvanishing analysis.
InverseResult mat_inverse(const Mat& m);

Scalar mat_det(const Mat& m);

// Generic rank over the fraction field.
int mat_rank(const Mat& m);

// Reduced row echelon form; pivot column indices appended to *pivots.
Mat mat_rref(Mat m, std::vector<int>* pivots = nullptr);

// Basis of the right nullspace.
std::vector<std::vector<Scalar>> mat_nullspace(const Mat& m);

}  // namespace jkit
