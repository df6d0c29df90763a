#pragma once

#include <span>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/manifold.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Connection data at one tangent sample, generic over the scalar so the same
// assembly yields plain values (S = double) or values with first x/y
// derivatives attached (S = ad::Dual, directions 0..n-1 = x, n..2n-1 = y).
//
// Everything is read off one order-3 expansion of F^2 in the 2n variables
// (x, y):
//   g_ij    = 1/2 F2_{y^i y^j}
//   C_ijk   = 1/4 F2_{y^i y^j y^k}
//   G^i     = 1/4 g^{il} ( F2_{x^k y^l} y^k - F2_{x^l} )
//   N^i_j   = dG^i/dy^j                     (expanded analytically below)
//   Gamma^i_jk = 1/2 g^{il} ( dg_lj/dx~^k + dg_lk/dx~^j - dg_jk/dx~^l )
// where dx~ is the horizontal derivative d/dx^k - N^r_k d/dy^r.
template <class S>
struct ConnectionCoeffs {
    Matrix<S> g, ginv;
    std::vector<S> spray; // G^i
    Matrix<S> nonlinear;  // N^i_j
    Tensor3<S> gamma;     // Gamma^i_{jk}, symmetric in (j,k)
    Tensor3<S> cartan;    // C_ijk
    Tensor3<S> dg_dx;     // (k,i,j) = dg_ij/dx^k at fixed y
    S f2;
};

template <class S>
ConnectionCoeffs<S> connection_at(const ManifoldSpec& spec, std::span<const S> x,
                                  std::span<const S> y) {
    using T = ad::Taylor<S>;
    const std::size_t n = x.size();
    const std::size_t m = 2 * n;

    std::vector<T> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], m, 3, i);
    for (std::size_t i = 0; i < n; ++i) ty[i] = T::variable(y[i], m, 3, n + i);
    T f2 = eval_F2<T>(spec, tx, ty);

    ConnectionCoeffs<S> c;
    c.f2 = f2.value();
    c.g = Matrix<S>(n, n);
    c.cartan = Tensor3<S>(n);
    c.dg_dx = Tensor3<S>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            c.g(i, j) = S(0.5) * f2.deriv2(n + i, n + j);
            for (std::size_t k = 0; k < n; ++k) {
                c.cartan(i, j, k) = S(0.25) * f2.deriv3(n + i, n + j, n + k);
                c.dg_dx(k, i, j) = S(0.5) * f2.deriv3(k, n + i, n + j);
            }
        }
    c.ginv = inverse(c.g);

    std::vector<S> rhs(n, S(0.0));
    for (std::size_t l = 0; l < n; ++l) {
        S acc = -f2.deriv(l);
        for (std::size_t k = 0; k < n; ++k) acc = acc + f2.deriv2(k, n + l) * y[k];
        rhs[l] = acc;
    }
    c.spray.assign(n, S(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        S acc(0.0);
        for (std::size_t l = 0; l < n; ++l) acc = acc + c.ginv(i, l) * rhs[l];
        c.spray[i] = S(0.25) * acc;
    }

    // N^i_j: differentiate the spray contraction in y.
    //   d(g^{il})/dy^j = -2 g^{ia} C_{abj} g^{bl}
    //   d(rhs_l)/dy^j  = F2_{x^k y^l y^j} y^k + F2_{x^j y^l} - F2_{x^l y^j}
    c.nonlinear = Matrix<S>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            S acc(0.0);
            for (std::size_t l = 0; l < n; ++l) {
                S dginv(0.0);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        dginv = dginv + c.ginv(i, a) * c.cartan(a, b, j) * c.ginv(b, l);
                S drhs = f2.deriv2(j, n + l) - f2.deriv2(l, n + j);
                for (std::size_t k = 0; k < n; ++k)
                    drhs = drhs + f2.deriv3(k, n + l, n + j) * y[k];
                acc = acc + c.ginv(i, l) * drhs - S(2.0) * dginv * rhs[l];
            }
            c.nonlinear(i, j) = S(0.25) * acc;
        }
    }

    // Chern coefficients from horizontal metric derivatives.
    Tensor3<S> hg(n); // (k,i,j) = dg_ij/dx~^k
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                S acc = c.dg_dx(k, i, j);
                for (std::size_t r = 0; r < n; ++r)
                    acc = acc - c.nonlinear(r, k) * S(2.0) * c.cartan(i, j, r);
                hg(k, i, j) = acc;
            }
    c.gamma = Tensor3<S>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                S acc(0.0);
                for (std::size_t l = 0; l < n; ++l)
                    acc = acc + c.ginv(i, l) * (hg(k, l, j) + hg(j, l, k) - hg(l, j, k));
                c.gamma(i, j, k) = S(0.5) * acc;
            }
    return c;
}

// Plain evaluation at a sample.
ConnectionCoeffs<double> connection_eval(const ManifoldSpec& spec, const TangentSample& sample);

// Evaluation with first derivatives in x (directions 0..n-1) and y
// (directions n..2n-1) attached to every coefficient.
ConnectionCoeffs<ad::Dual> connection_jet(const ManifoldSpec& spec, const TangentSample& sample);

std::vector<double> spray_coefficients(const ManifoldSpec& spec, const TangentSample& sample);
Mat nonlinear_connection(const ManifoldSpec& spec, const TangentSample& sample);
T3 chern_coefficients(const ManifoldSpec& spec, const TangentSample& sample);

// V^i_{|j} = dV^i/dx^j + V^m Gamma^i_{mj}
Mat horizontal_covariant_vector(const ManifoldSpec& spec, const VectorField& field,
                                const TangentSample& sample);

// V^i_{|j|k}, including the horizontal derivative acting through the
// y-dependence of Gamma. Index order (i, j, k).
T3 second_horizontal_covariant(const ManifoldSpec& spec, const VectorField& field,
                               const TangentSample& sample);

struct CurvatureEval {
    T4 riemann;   // (j,i,k,m) = R_j{}^i{}_{km}; antisymmetric in (k,m)
    T4 landsberg; // (k,i,j,l) = P_k{}^i{}_{jl} = dGamma^i_{kj}/dy^l
};

CurvatureEval curvature_eval(const ManifoldSpec& spec, const TangentSample& sample);

T4 riemann_curvature(const ManifoldSpec& spec, const TangentSample& sample);
T4 landsberg_P(const ManifoldSpec& spec, const TangentSample& sample);

} // namespace finsler
