#include "finsler/fields.hpp"

namespace finsler {

using ad::Taylor;

double ScalarField::value(std::span<const double> x) const {
    return evaluate(tree_, x);
}

std::vector<double> ScalarField::gradient(std::span<const double> x) const {
    const std::size_t n = x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 1, i);
    T v = evaluate(tree_, std::span<const T>(tx));
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = v.deriv(i);
    return g;
}

Mat ScalarField::hessian(std::span<const double> x) const {
    const std::size_t n = x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 2, i);
    T v = evaluate(tree_, std::span<const T>(tx));
    Mat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = v.deriv2(i, j);
    return h;
}

std::vector<double> VectorField::value(std::span<const double> x) const {
    std::vector<double> v;
    v.reserve(comps_.size());
    for (const auto& c : comps_) v.push_back(evaluate(c, x));
    return v;
}

Mat VectorField::jacobian(std::span<const double> x) const {
    const std::size_t n = x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 1, i);
    Mat jac(comps_.size(), n);
    for (std::size_t c = 0; c < comps_.size(); ++c) {
        T v = evaluate(comps_[c], std::span<const T>(tx));
        for (std::size_t j = 0; j < n; ++j) jac(c, j) = v.deriv(j);
    }
    return jac;
}

VectorFieldJet field_jet(const VectorField& field, std::span<const double> x) {
    const std::size_t n = x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 2, i);
    VectorFieldJet jet;
    jet.value.assign(field.dimension(), 0.0);
    jet.jacobian = Mat(field.dimension(), n);
    jet.second = T3(n);
    for (std::size_t c = 0; c < field.dimension(); ++c) {
        T v = evaluate(field.component(c), std::span<const T>(tx));
        jet.value[c] = ad::scalar_value(v);
        for (std::size_t j = 0; j < n; ++j) {
            jet.jacobian(c, j) = v.deriv(j);
            for (std::size_t k = 0; k < n; ++k) jet.second(c, j, k) = v.deriv2(j, k);
        }
    }
    return jet;
}

} // namespace finsler
