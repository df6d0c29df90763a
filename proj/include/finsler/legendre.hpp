#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finsler/manifold.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Dual data of a randers metric at a point:
//   a*^{ij} = ((1-b^2) a^{ij} + b^i b^j) / (1-b^2)^2
//   b*^i    = -b^i / (1-b^2),           b^i = a^{ij} b_j, b = ||beta||_a.
// The dual norm is again of the same type and satisfies ||beta*||_{a*} = b.
struct RandersDualData {
    Mat a_star;
    std::vector<double> b_star;
    double b = 0.0;
};

RandersDualData randers_dual_data(const ManifoldSpec& spec, std::span<const double> x);

// Co-norm F*(x, xi). Closed form for riemannian/randers; for the generic
// family the supremum of xi(y)/F(x,y) is taken by projected gradient ascent
// on the unit indicatrix, started from the inverse-transform solution.
double dual_norm(const ManifoldSpec& spec, const CotangentSample& cot);

// Supremum path regardless of family (cross-check oracle for closed forms).
double dual_norm_sup(const ManifoldSpec& spec, const CotangentSample& cot);

// xi_i = g_ij(x,y) y^j; maps y = 0 to xi = 0 and preserves the norm.
CotangentSample legendre(const ManifoldSpec& spec, const TangentSample& sample);

// Unique y with g_y(y,.) = xi; closed form for riemannian/randers, damped
// Newton on the strictly convex potential 1/2 F^2(y) - xi(y) otherwise.
TangentSample legendre_inverse(const ManifoldSpec& spec, const CotangentSample& cot);

// Newton path regardless of family (cross-check against the closed forms).
TangentSample legendre_inverse_newton(const ManifoldSpec& spec, const CotangentSample& cot);

// g*^{kl}(x,xi) = 1/2 [F*^2]_{xi_k xi_l}; equals the inverse of g at the
// inverse-transformed point.
Mat dual_fundamental_matrix(const ManifoldSpec& spec, const CotangentSample& cot);
TensorValue dual_fundamental_tensor(const ManifoldSpec& spec, const CotangentSample& cot);

// Second path: AD of the closed-form F*^2 (riemannian/randers only).
Mat dual_fundamental_matrix_ad(const ManifoldSpec& spec, const CotangentSample& cot);

// ---------------------------------------------------------------------------
// Scalar-generic closed forms (riemannian/randers); the Laplacian pipeline
// differentiates through these in x.

template <class S>
struct RandersDualT {
    Matrix<S> a_star;
    std::vector<S> b_star;
    S beta2; // ||beta||_a^2
};

template <class S>
RandersDualT<S> randers_dual_at(const ManifoldSpec& spec, std::span<const S> x) {
    const std::size_t n = x.size();
    Matrix<S> a = eval_a(spec, x);
    std::vector<S> b = eval_b(spec, x);
    Matrix<S> ainv = inverse(a);
    std::vector<S> braise = mat_vec(ainv, b);
    S beta2(0.0);
    for (std::size_t i = 0; i < n; ++i) beta2 = beta2 + braise[i] * b[i];
    if (!(ad::scalar_value(beta2) < 1.0))
        throw Error(ErrorCode::StrongConvexityViolated,
                    "randers 1-form has ||beta||_a >= 1 at the requested point");
    S om = S(1.0) - beta2;
    RandersDualT<S> d;
    d.beta2 = beta2;
    d.a_star = Matrix<S>(n, n);
    d.b_star.assign(n, S(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        d.b_star[i] = -braise[i] / om;
        for (std::size_t j = 0; j < n; ++j)
            d.a_star(i, j) = (om * ainv(i, j) + braise[i] * braise[j]) / (om * om);
    }
    return d;
}

// F*(x, xi) for the closed-form families, any scalar algebra.
template <class S>
S dual_norm_t(const ManifoldSpec& spec, std::span<const S> x, std::span<const S> xi) {
    using namespace ad;
    const std::size_t n = x.size();
    if (spec.family() == Family::Riemannian) {
        Matrix<S> ainv = inverse(eval_a(spec, x));
        S quad(0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) quad = quad + ainv(i, j) * xi[i] * xi[j];
        return sqrt(quad);
    }
    if (spec.family() == Family::Randers) {
        RandersDualT<S> d = randers_dual_at(spec, x);
        S quad(0.0), beta(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            beta = beta + d.b_star[i] * xi[i];
            for (std::size_t j = 0; j < n; ++j) quad = quad + d.a_star(i, j) * xi[i] * xi[j];
        }
        return sqrt(quad) + beta;
    }
    throw Error(ErrorCode::FamilyMismatch, "closed-form dual norm needs riemannian or randers");
}

// y^i = F*(x,xi) ( a*^{il} xi_l / alpha* + b*^i ) for randers; a^{-1} xi for
// riemannian. Returns the raised vector.
template <class S>
std::vector<S> raise_covector_t(const ManifoldSpec& spec, std::span<const S> x,
                                std::span<const S> xi) {
    using namespace ad;
    const std::size_t n = x.size();
    if (spec.family() == Family::Riemannian) {
        Matrix<S> ainv = inverse(eval_a(spec, x));
        std::vector<S> xiv(xi.begin(), xi.end());
        return mat_vec(ainv, xiv);
    }
    if (spec.family() == Family::Randers) {
        RandersDualT<S> d = randers_dual_at(spec, x);
        S quad(0.0), beta(0.0);
        std::vector<S> araise(n, S(0.0));
        for (std::size_t i = 0; i < n; ++i) {
            beta = beta + d.b_star[i] * xi[i];
            for (std::size_t j = 0; j < n; ++j) araise[i] = araise[i] + d.a_star(i, j) * xi[j];
        }
        for (std::size_t i = 0; i < n; ++i) quad = quad + araise[i] * xi[i];
        S alpha_star = sqrt(quad);
        S fstar = alpha_star + beta;
        std::vector<S> y(n, S(0.0));
        for (std::size_t i = 0; i < n; ++i)
            y[i] = fstar * (araise[i] / alpha_star + d.b_star[i]);
        return y;
    }
    throw Error(ErrorCode::FamilyMismatch, "closed-form raise needs riemannian or randers");
}

} // namespace finsler
