#pragma once

#include <span>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

// Scalar function f(x) on the base manifold, given as one expression tree.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(SyntaxTree tree) : tree_(std::move(tree)) {} // NOLINT

    int dimension() const { return tree_.dimension(); }
    const SyntaxTree& tree() const { return tree_; }

    double value(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const; // df_i
    Mat hessian(std::span<const double> x) const;                  // d2f/dx^i dx^j

    template <class T>
    T value_t(std::span<const T> x) const {
        return evaluate(tree_, x);
    }

private:
    SyntaxTree tree_;
};

// Vector field V = V^i d/dx^i on the base manifold, one tree per component.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(std::vector<SyntaxTree> components)
        : comps_(std::move(components)) {}

    std::size_t dimension() const { return comps_.size(); }
    const SyntaxTree& component(std::size_t i) const { return comps_[i]; }

    std::vector<double> value(std::span<const double> x) const;
    Mat jacobian(std::span<const double> x) const; // (i,j) = dV^i/dx^j

    template <class T>
    std::vector<T> value_t(std::span<const T> x) const {
        std::vector<T> v;
        v.reserve(comps_.size());
        for (const auto& c : comps_) v.push_back(evaluate(c, x));
        return v;
    }

private:
    std::vector<SyntaxTree> comps_;
};

// Pointwise data of a vector field: value, Jacobian, and second derivatives.
// The Lie-derivative and Hessian formulas only ever consume these, so fields
// that are not expression trees (gradient fields in particular) plug in here.
struct VectorFieldJet {
    std::vector<double> value; // V^i
    Mat jacobian;              // (i,j)   = dV^i/dx^j
    T3 second;                 // (i,j,k) = d2V^i/dx^j dx^k
};

VectorFieldJet field_jet(const VectorField& field, std::span<const double> x);

} // namespace finsler
