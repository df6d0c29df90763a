#pragma once

#include <optional>
#include <span>
#include <vector>

#include "finsler/connection.hpp"
#include "finsler/fields.hpp"
#include "finsler/legendre.hpp"
#include "finsler/manifold.hpp"

namespace finsler {

struct GradientResult {
    std::vector<double> grad; // components of the gradient vector
    double norm = 0.0;        // F(x, grad)
    double dual = 0.0;        // F*(x, df)
    bool critical = false;    // df(x) = 0, gradient defined as 0
    // randers-only diagnostics of the closed-form path
    std::optional<double> A;               // sqrt((1-b^2)|da f|_a^2 + <bs, da f>^2)
    std::optional<double> beta_pairing;    // <beta#, grad_a f>
    std::optional<double> alpha_grad_norm; // |grad_a f|_a
};

// Gradient as the inverse transform of df. Riemannian and randers specs use
// their closed forms (the randers one driven by the A-quantity above); the
// generic family solves the inverse transform.
GradientResult gradient(const ManifoldSpec& spec, const ScalarField& f,
                        std::span<const double> x);

// Alternative path through legendre_inverse, for cross-checking the formulas.
std::vector<double> gradient_via_inverse(const ManifoldSpec& spec, const ScalarField& f,
                                         std::span<const double> x);

struct GradientEstimate {
    double lhs; // F(x, grad f)
    double rhs; // alpha(x, grad_a f) / (1 - b)
};

GradientEstimate gradient_estimate(const ManifoldSpec& spec, const ScalarField& f,
                                   std::span<const double> x);

// div(X) = dX^i/dx^i + (X^i / sigma) dsigma/dx^i
double divergence(const ManifoldSpec& spec, const VectorField& field,
                  std::span<const double> x);

// Gradient vector field with its x-Jacobian and the total x-derivative of
// F(x, grad f(x)). Closed-form families differentiate straight through the
// formulas; the generic family differentiates the inverse-transform solution
// implicitly through g.
struct RaisedGradientJet {
    std::vector<double> y;     // grad components
    Mat dy_dx;                 // (i,k) = d(grad^i)/dx^k
    double f = 0.0;            // F(x, grad)
    std::vector<double> df_dx; // total d/dx^k of F(x, grad(x))
};

RaisedGradientJet raised_gradient_jet(const ManifoldSpec& spec, const ScalarField& f,
                                      std::span<const double> x);

// div(grad f) with respect to the measure density.
double laplacian(const ManifoldSpec& spec, const ScalarField& f, std::span<const double> x);

// div(F^{p-2}(x, grad f) grad f); p = 2 dispatches to laplacian exactly.
double p_laplacian(const ManifoldSpec& spec, const ScalarField& f, std::span<const double> x,
                   double p);

// D^2 f(y) = (d2f/dx^i dx^j - df/dx^m Gamma^m_ij(x,y)) y^i y^j
double hessian_geodesic(const ManifoldSpec& spec, const ScalarField& f,
                        const TangentSample& sample);

// Hess(u)_ij = u_{|i|j}(x, grad u): second partials corrected by the Chern
// coefficients at reference vector grad u.
Mat hessian_matrix(const ManifoldSpec& spec, const ScalarField& u, std::span<const double> x);

// Same matrix recovered from the metric's Lie derivative along the lifted
// gradient field, minus the Cartan correction term. The correction vanishes
// identically on riemannian specs.
struct HessianViaLie {
    Mat hessian;
    Mat correction; // (grad^m u) u_{|r|m} C^r_ij
};
HessianViaLie hessian_via_lie(const ManifoldSpec& spec, const ScalarField& u,
                              std::span<const double> x);

} // namespace finsler
