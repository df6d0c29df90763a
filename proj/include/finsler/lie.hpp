#pragma once

#include <memory>
#include <span>
#include <vector>

#include "finsler/connection.hpp"
#include "finsler/fields.hpp"
#include "finsler/manifold.hpp"

namespace finsler {

// Complete lift of a base vector field to the tangent bundle:
// horizontal part V^i(x), vertical part y^m dV^i/dx^m.
struct CompleteLift {
    std::vector<double> horizontal;
    std::vector<double> vertical;
};

CompleteLift complete_lift(const VectorField& field, const TangentSample& sample);

// Lie derivative of the fundamental tensor along the lifted field:
//   (L g)_ij = V_{j|i} + V_{i|j} + 2 y^m V^l_{|m} C_{lij}
Mat lie_metric(const ManifoldSpec& spec, const VectorField& field, const TangentSample& sample);

// Core used by both tree fields and gradient fields: only the pointwise value
// and Jacobian of the field enter.
Mat lie_metric_core(const ConnectionCoeffs<double>& conn, const std::vector<double>& value,
                    const Mat& jacobian, const std::vector<double>& y);

// L F = F^{-1} V_{0|0}; the direct path differentiates F along the lift.
double lie_finsler(const ManifoldSpec& spec, const VectorField& field,
                   const TangentSample& sample);
double lie_finsler_direct(const ManifoldSpec& spec, const VectorField& field,
                          const TangentSample& sample);

// Lie derivative of the Chern coefficients, by two independent assemblies:
//   expansion: second derivatives of V, Gamma derivatives and the
//              y-derivative tensor P contracted directly;
//   covariant: curvature term R V plus the second horizontal covariant
//              derivative of V plus the P contraction.
// Their agreement is a theorem, which the property suites exercise.
struct LieChernEval {
    T3 expansion; // (i,j,k)
    T3 covariant; // (i,j,k)
};

LieChernEval lie_chern(const ManifoldSpec& spec, const VectorField& field,
                       const TangentSample& sample);

// Lie derivative of the spray coefficients, three ways: the bracket of the
// lift with the spray, the contraction -y^i y^j (L Gamma)^k_ij, and the
// curvature form -(R^k_m V^m + V^k_{|0|0}).
struct LieSprayEval {
    std::vector<double> bracket;
    std::vector<double> contraction;
    std::vector<double> curvature;
};

LieSprayEval lie_spray(const ManifoldSpec& spec, const VectorField& field,
                       const TangentSample& sample);

// ---------------------------------------------------------------------------
// General tensor fields on the pulled-back bundle. Components may depend on
// (x, y); evaluation happens over dual numbers seeded in x (directions
// 0..n-1) and y (directions n..2n-1), which is all the Lie formula consumes.

class TensorField {
public:
    virtual ~TensorField() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<Variance> variance() const = 0;
    virtual void eval(std::span<const ad::Dual> x, std::span<const ad::Dual> y,
                      std::vector<ad::Dual>& out) const = 0;
};

// Components given as expression trees in 2n variables (x1..xn, then y).
class TreeTensorField final : public TensorField {
public:
    TreeTensorField(std::size_t n, std::vector<Variance> variance,
                    std::vector<SyntaxTree> components);
    std::size_t dimension() const override { return n_; }
    std::vector<Variance> variance() const override { return variance_; }
    void eval(std::span<const ad::Dual> x, std::span<const ad::Dual> y,
              std::vector<ad::Dual>& out) const override;

private:
    std::size_t n_;
    std::vector<Variance> variance_;
    std::vector<SyntaxTree> comps_;
};

// The fundamental tensor g_ij(x,y) as a (0,2) field.
class MetricTensorField final : public TensorField {
public:
    explicit MetricTensorField(const ManifoldSpec& spec) : spec_(&spec) {}
    std::size_t dimension() const override;
    std::vector<Variance> variance() const override { return {Variance::Down, Variance::Down}; }
    void eval(std::span<const ad::Dual> x, std::span<const ad::Dual> y,
              std::vector<ad::Dual>& out) const override;

private:
    const ManifoldSpec* spec_;
};

// The canonical section, components y^i.
class CanonicalSectionField final : public TensorField {
public:
    explicit CanonicalSectionField(std::size_t n) : n_(n) {}
    std::size_t dimension() const override { return n_; }
    std::vector<Variance> variance() const override { return {Variance::Up}; }
    void eval(std::span<const ad::Dual> x, std::span<const ad::Dual> y,
              std::vector<ad::Dual>& out) const override;

private:
    std::size_t n_;
};

// The lowered canonical section, components y_k = g_kj y^j.
class LoweredCanonicalField final : public TensorField {
public:
    explicit LoweredCanonicalField(const ManifoldSpec& spec) : spec_(&spec) {}
    std::size_t dimension() const override;
    std::vector<Variance> variance() const override { return {Variance::Down}; }
    void eval(std::span<const ad::Dual> x, std::span<const ad::Dual> y,
              std::vector<ad::Dual>& out) const override;

private:
    const ManifoldSpec* spec_;
};

// Lie derivative of a general (0,k) or (1,k) tensor field, k <= 2;
// the (1,k) case requires the contravariant slot first.
TensorValue lie_tensor(const ManifoldSpec& spec, const VectorField& field,
                       const TensorField& tensor, const TangentSample& sample);

} // namespace finsler
