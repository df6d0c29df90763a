#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/taylor.hpp"

namespace finsler {

// Dense containers sized for manifold dimensions (n <= 8 or so). Generic over
// the scalar so the same tensor assembly runs on doubles and AD scalars.

template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t r, std::size_t c, const T& fill = T(0.0))
        : rows_(r), cols_(c), a_(r * c, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
        return m;
    }

    const std::vector<T>& data() const { return a_; }
    std::vector<T>& data() { return a_; }

private:
    std::size_t rows_, cols_;
    std::vector<T> a_;
};

// Cube tensor, all extents equal.
template <class T>
class Tensor3 {
public:
    Tensor3() : n_(0) {}
    explicit Tensor3(std::size_t n) : n_(n), a_(n * n * n, T(0.0)) {}
    std::size_t extent() const { return n_; }
    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return a_[(i * n_ + j) * n_ + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return a_[(i * n_ + j) * n_ + k];
    }
    const std::vector<T>& data() const { return a_; }

private:
    std::size_t n_;
    std::vector<T> a_;
};

template <class T>
class Tensor4 {
public:
    Tensor4() : n_(0) {}
    explicit Tensor4(std::size_t n) : n_(n), a_(n * n * n * n, T(0.0)) {}
    std::size_t extent() const { return n_; }
    T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return a_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return a_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    const std::vector<T>& data() const { return a_; }

private:
    std::size_t n_;
    std::vector<T> a_;
};

using Mat = Matrix<double>;
using T3 = Tensor3<double>;
using T4 = Tensor4<double>;

// Gauss-Jordan inverse with partial pivoting on the leading value component.
// Works over AD scalars; throws when the matrix is numerically singular.
template <class T>
Matrix<T> inverse(Matrix<T> a) {
    const std::size_t n = a.rows();
    Matrix<T> inv = Matrix<T>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(ad::scalar_value(a(col, col)));
        for (std::size_t r = col + 1; r < n; ++r) {
            double cand = std::fabs(ad::scalar_value(a(r, col)));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best == 0.0)
            throw Error(ErrorCode::NotPositiveDefinite, "singular matrix in inverse");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        T d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            T f = a(r, col);
            if (ad::scalar_value(f) == 0.0 && f.directions() == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - f * a(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

// double specialization avoids the .directions() probe above
template <>
inline Matrix<double> inverse(Matrix<double> a) {
    const std::size_t n = a.rows();
    Matrix<double> inv = Matrix<double>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a(r, col)) > best) {
                best = std::fabs(a(r, col));
                piv = r;
            }
        }
        if (best == 0.0)
            throw Error(ErrorCode::NotPositiveDefinite, "singular matrix in inverse");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        double d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, const std::vector<T>& v) {
    std::vector<T> out(m.rows(), T(0.0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] = out[i] + m(i, j) * v[j];
    return out;
}

inline std::vector<double> solve(Mat a, std::vector<double> b) {
    Mat inv_a = inverse(std::move(a));
    return mat_vec(inv_a, b);
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps. Used for the
// positive-definiteness bound (lambda_min > tol * lambda_max).
inline std::vector<double> symmetric_eigenvalues(Mat a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    return ev;
}

inline bool positive_definite(const Mat& a, double ratio = 1e-10) {
    std::vector<double> ev = symmetric_eigenvalues(a);
    double lo = ev.front(), hi = ev.front();
    for (double e : ev) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return lo > ratio * std::max(hi, 0.0) && hi > 0.0;
}

} // namespace finsler
