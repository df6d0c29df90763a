#include "finsler/connection.hpp"

namespace finsler {

using ad::Dual;

ConnectionCoeffs<double> connection_eval(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    return connection_at<double>(spec, sample.x, sample.y);
}

ConnectionCoeffs<Dual> connection_jet(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    const std::size_t n = sample.x.size();
    std::vector<Dual> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Dual(sample.x[i], 2 * n, i);
    for (std::size_t i = 0; i < n; ++i) y[i] = Dual(sample.y[i], 2 * n, n + i);
    return connection_at<Dual>(spec, x, y);
}

std::vector<double> spray_coefficients(const ManifoldSpec& spec, const TangentSample& sample) {
    return connection_eval(spec, sample).spray;
}

Mat nonlinear_connection(const ManifoldSpec& spec, const TangentSample& sample) {
    return connection_eval(spec, sample).nonlinear;
}

T3 chern_coefficients(const ManifoldSpec& spec, const TangentSample& sample) {
    return connection_eval(spec, sample).gamma;
}

Mat horizontal_covariant_vector(const ManifoldSpec& spec, const VectorField& field,
                                const TangentSample& sample) {
    ConnectionCoeffs<double> c = connection_eval(spec, sample);
    const std::size_t n = sample.x.size();
    std::vector<double> v = field.value(sample.x);
    Mat jac = field.jacobian(sample.x);
    Mat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = jac(i, j);
            for (std::size_t m = 0; m < n; ++m) acc += v[m] * c.gamma(i, m, j);
            out(i, j) = acc;
        }
    return out;
}

T3 second_horizontal_covariant(const ManifoldSpec& spec, const VectorField& field,
                               const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    ConnectionCoeffs<Dual> cj = connection_jet(spec, sample);
    VectorFieldJet v = field_jet(field, sample.x);

    auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) {
        return cj.gamma(i, j, k).value();
    };
    auto nval = [&](std::size_t i, std::size_t j) { return cj.nonlinear(i, j).value(); };
    // horizontal derivative of Gamma: dGamma/dx^k - N^r_k dGamma/dy^r
    auto hgamma = [&](std::size_t i, std::size_t j, std::size_t l, std::size_t k) {
        double acc = cj.gamma(i, j, l).deriv(k);
        for (std::size_t r = 0; r < n; ++r)
            acc -= nval(r, k) * cj.gamma(i, j, l).deriv(n + r);
        return acc;
    };

    Mat cov1(n, n); // V^i_{|j}
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = v.jacobian(i, j);
            for (std::size_t m = 0; m < n; ++m) acc += v.value[m] * gamma(i, m, j);
            cov1(i, j) = acc;
        }

    T3 out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double acc = v.second(i, j, k); // d2 V^i / dx^k dx^j
                for (std::size_t m = 0; m < n; ++m) {
                    acc += v.jacobian(m, k) * gamma(i, m, j);
                    acc += v.value[m] * hgamma(i, m, j, k);
                    acc += cov1(m, j) * gamma(i, m, k);
                    acc -= cov1(i, m) * gamma(m, j, k);
                }
                out(i, j, k) = acc;
            }
    return out;
}

CurvatureEval curvature_eval(const ManifoldSpec& spec, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    ConnectionCoeffs<Dual> cj = connection_jet(spec, sample);

    auto nval = [&](std::size_t i, std::size_t j) { return cj.nonlinear(i, j).value(); };
    // delta Gamma^i_{jl} / delta x^k
    auto hgamma = [&](std::size_t i, std::size_t j, std::size_t l, std::size_t k) {
        double acc = cj.gamma(i, j, l).deriv(k);
        for (std::size_t r = 0; r < n; ++r)
            acc -= nval(r, k) * cj.gamma(i, j, l).deriv(n + r);
        return acc;
    };
    auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) {
        return cj.gamma(i, j, k).value();
    };

    CurvatureEval ev;
    ev.landsberg = T4(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    ev.landsberg(k, i, j, l) = cj.gamma(i, k, j).deriv(n + l);

    ev.riemann = T4(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t m = 0; m < n; ++m) {
                    double acc = hgamma(i, m, j, k) - hgamma(i, j, k, m);
                    for (std::size_t l = 0; l < n; ++l)
                        acc += gamma(l, j, m) * gamma(i, k, l) - gamma(i, l, m) * gamma(l, j, k);
                    ev.riemann(j, i, k, m) = acc;
                }
    return ev;
}

T4 riemann_curvature(const ManifoldSpec& spec, const TangentSample& sample) {
    return curvature_eval(spec, sample).riemann;
}

T4 landsberg_P(const ManifoldSpec& spec, const TangentSample& sample) {
    return curvature_eval(spec, sample).landsberg;
}

} // namespace finsler
