#include "jkit/matrix.hpp"

namespace jkit {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols != o.rows) throw Error("matrix dimension mismatch");
    Mat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const Scalar& x = at(i, k);
            if (x.is_zero()) continue;
            for (int j = 0; j < o.cols; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + x * o.at(k, j);
            }
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows != o.rows || cols != o.cols) throw Error("matrix dimension mismatch");
    Mat r(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows != o.rows || cols != o.cols) throw Error("matrix dimension mismatch");
    Mat r(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool Mat::is_zero() const {
    for (const auto& s : a)
        if (!s.is_zero()) return false;
    return true;
}

std::string Mat::str() const {
    std::string out;
    for (int i = 0; i < rows; ++i) {
        out += "[ ";
        for (int j = 0; j < cols; ++j) {
            if (j) out += ", ";
            out += at(i, j).str();
        }
        out += " ]\n";
    }
    return out;
}

namespace {

std::size_t complexity(const Scalar& s) {
    return s.num().terms.size() + s.den().terms.size();
}

// Picks the simplest nonzero pivot in column c among rows >= r.
int find_pivot(const Mat& m, int r, int c) {
    int best = -1;
    std::size_t best_cx = 0;
    for (int i = r; i < m.rows; ++i) {
        if (m.at(i, c).is_zero()) continue;
        std::size_t cx = complexity(m.at(i, c));
        if (best < 0 || cx < best_cx) {
            best = i;
            best_cx = cx;
        }
    }
    return best;
}

}  // namespace

InverseResult mat_inverse(const Mat& m) {
    if (m.rows != m.cols) throw Error("inverse of a non-square matrix");
    int n = m.rows;
    Mat w = m, inv = Mat::identity(n);
    Scalar det(1);
    for (int c = 0; c < n; ++c) {
        int p = find_pivot(w, c, c);
        if (p < 0) throw SingularMatrix("matrix is singular: determinant is identically zero");
        if (p != c) {
            for (int j = 0; j < n; ++j) {
                std::swap(w.at(p, j), w.at(c, j));
                std::swap(inv.at(p, j), inv.at(c, j));
            }
            det = -det;
        }
        Scalar piv = w.at(c, c);
        det = det * piv;
        for (int j = 0; j < n; ++j) {
            w.at(c, j) = w.at(c, j) / piv;
            inv.at(c, j) = inv.at(c, j) / piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || w.at(i, c).is_zero()) continue;
            Scalar f = w.at(i, c);
            for (int j = 0; j < n; ++j) {
                w.at(i, j) = w.at(i, j) - f * w.at(c, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(c, j);
            }
        }
    }
    return {inv, det};
}

Scalar mat_det(const Mat& m) {
    if (m.rows != m.cols) throw Error("determinant of a non-square matrix");
    int n = m.rows;
    Mat w = m;
    Scalar det(1);
    for (int c = 0; c < n; ++c) {
        int p = find_pivot(w, c, c);
        if (p < 0) return Scalar();
        if (p != c) {
            for (int j = c; j < n; ++j) std::swap(w.at(p, j), w.at(c, j));
            det = -det;
        }
        Scalar piv = w.at(c, c);
        det = det * piv;
        for (int i = c + 1; i < n; ++i) {
            if (w.at(i, c).is_zero()) continue;
            Scalar f = w.at(i, c) / piv;
            for (int j = c; j < n; ++j) w.at(i, j) = w.at(i, j) - f * w.at(c, j);
        }
    }
    return det;
}

Mat mat_rref(Mat m, std::vector<int>* pivots) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = find_pivot(m, r, c);
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
        Scalar piv = m.at(r, c);
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = m.at(r, j) / piv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    return m;
}

int mat_rank(const Mat& m) {
    std::vector<int> pivots;
    mat_rref(m, &pivots);
    return static_cast<int>(pivots.size());
}

std::vector<std::vector<Scalar>> mat_nullspace(const Mat& m) {
    std::vector<int> pivots;
    Mat r = mat_rref(m, &pivots);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols), false);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int c = 0; c < m.cols; ++c) {
        if (is_pivot[static_cast<std::size_t>(c)]) continue;
        std::vector<Scalar> v(static_cast<std::size_t>(m.cols));
        v[static_cast<std::size_t>(c)] = Scalar(1);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[static_cast<std::size_t>(pivots[k])] = -r.at(static_cast<int>(k), c);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace jkit
