#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

struct TangentSample {
    std::vector<double> x;
    std::vector<double> y;
};

struct CotangentSample {
    std::vector<double> x;
    std::vector<double> xi;
};

enum class Variance { Up, Down };

// Dense tensor with per-slot variance metadata, evaluated at one sample.
struct TensorValue {
    std::vector<Variance> variance; // one entry per slot; empty = scalar
    std::size_t extent = 0;         // every slot runs 0..extent-1
    std::vector<double> data;       // row-major
    TangentSample sample;

    double at(std::initializer_list<std::size_t> idx) const {
        std::size_t flat = 0;
        for (std::size_t i : idx) flat = flat * extent + i;
        return data[flat];
    }
};

enum class Family { Riemannian, Randers, Generic };

const char* family_name(Family f);

// Symbolic description of a Finsler manifold: dimension, metric family with
// coefficient expressions, and a positive measure density. Immutable once
// built; evaluation over any scalar algebra happens through the templates
// below.
class ManifoldSpec {
public:
    static ManifoldSpec riemannian(int n, std::vector<SyntaxTree> a, SyntaxTree measure);
    static ManifoldSpec randers(int n, std::vector<SyntaxTree> a, std::vector<SyntaxTree> b,
                                SyntaxTree measure);
    static ManifoldSpec generic(int n, SyntaxTree f, SyntaxTree measure);

    int dimension() const { return n_; }
    Family family() const { return family_; }

    const SyntaxTree& a_tree(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const SyntaxTree& b_tree(std::size_t i) const { return b_[i]; }
    const SyntaxTree& f_tree() const { return *f_; }
    const SyntaxTree& measure_tree() const { return measure_; }

private:
    int n_ = 0;
    Family family_ = Family::Riemannian;
    std::vector<SyntaxTree> a_; // n*n, row-major (riemannian/randers)
    std::vector<SyntaxTree> b_; // n (randers)
    std::optional<SyntaxTree> f_; // F(x,y) in 2n variables (generic)
    SyntaxTree measure_;
};

// ---------------------------------------------------------------------------
// Family evaluation over a generic scalar algebra T.

template <class T>
Matrix<T> eval_a(const ManifoldSpec& spec, std::span<const T> x) {
    const std::size_t n = static_cast<std::size_t>(spec.dimension());
    Matrix<T> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = evaluate(spec.a_tree(i, j), x);
    return a;
}

template <class T>
std::vector<T> eval_b(const ManifoldSpec& spec, std::span<const T> x) {
    const std::size_t n = static_cast<std::size_t>(spec.dimension());
    std::vector<T> b(n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) b[i] = evaluate(spec.b_tree(i), x);
    return b;
}

template <class T>
T eval_sigma(const ManifoldSpec& spec, std::span<const T> x) {
    return evaluate(spec.measure_tree(), x);
}

// F(x,y). For the generic family the tree takes 2n inputs (x then y).
template <class T>
T eval_F(const ManifoldSpec& spec, std::span<const T> x, std::span<const T> y) {
    using namespace ad;
    const std::size_t n = static_cast<std::size_t>(spec.dimension());
    switch (spec.family()) {
    case Family::Riemannian:
    case Family::Randers: {
        Matrix<T> a = eval_a(spec, x);
        T quad(0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) quad = quad + a(i, j) * y[i] * y[j];
        T alpha = sqrt(quad);
        if (spec.family() == Family::Riemannian) return alpha;
        std::vector<T> b = eval_b(spec, x);
        T beta(0.0);
        for (std::size_t i = 0; i < n; ++i) beta = beta + b[i] * y[i];
        return alpha + beta;
    }
    case Family::Generic: {
        std::vector<T> xy(2 * n, T(0.0));
        for (std::size_t i = 0; i < n; ++i) xy[i] = x[i];
        for (std::size_t i = 0; i < n; ++i) xy[n + i] = y[i];
        return evaluate(spec.f_tree(), std::span<const T>(xy));
    }
    }
    throw Error(ErrorCode::DomainError, "unknown family");
}

template <class T>
T eval_F2(const ManifoldSpec& spec, std::span<const T> x, std::span<const T> y) {
    T f = eval_F(spec, x, y);
    return f * f;
}

} // namespace finsler
