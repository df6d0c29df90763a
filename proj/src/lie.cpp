#include "finsler/lie.hpp"

#include <cmath>

#include "finsler/metric.hpp"

namespace finsler {

using ad::Dual;
using ad::Taylor;

CompleteLift complete_lift(const VectorField& field, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    CompleteLift lift;
    lift.horizontal = field.value(sample.x);
    Mat jac = field.jacobian(sample.x);
    lift.vertical.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < n; ++m) lift.vertical[i] += sample.y[m] * jac(i, m);
    return lift;
}

Mat lie_metric_core(const ConnectionCoeffs<double>& conn, const std::vector<double>& value,
                    const Mat& jacobian, const std::vector<double>& y) {
    const std::size_t n = value.size();
    Mat cov(n, n); // V^l_{|m}
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) {
            double acc = jacobian(l, m);
            for (std::size_t a = 0; a < n; ++a) acc += value[a] * conn.gamma(l, a, m);
            cov(l, m) = acc;
        }
    Mat covlow(n, n); // V_{i|j} = g_{im} V^m_{|j}
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n; ++m) acc += conn.g(i, m) * cov(m, j);
            covlow(i, j) = acc;
        }
    Mat lie(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = covlow(j, i) + covlow(i, j);
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t l = 0; l < n; ++l)
                    acc += 2.0 * y[m] * cov(l, m) * conn.cartan(l, i, j);
            lie(i, j) = acc;
        }
    return lie;
}

Mat lie_metric(const ManifoldSpec& spec, const VectorField& field, const TangentSample& sample) {
    ConnectionCoeffs<double> conn = connection_eval(spec, sample);
    return lie_metric_core(conn, field.value(sample.x), field.jacobian(sample.x), sample.y);
}

double lie_finsler(const ManifoldSpec& spec, const VectorField& field,
                   const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    ConnectionCoeffs<double> conn = connection_eval(spec, sample);
    std::vector<double> v = field.value(sample.x);
    Mat jac = field.jacobian(sample.x);
    double f = std::sqrt(conn.f2);
    double acc = 0.0; // V_{i|j} y^i y^j
    for (std::size_t m = 0; m < n; ++m) {
        double covm = 0.0; // V^m_{|j} y^j
        for (std::size_t j = 0; j < n; ++j) {
            double c = jac(m, j);
            for (std::size_t a = 0; a < n; ++a) c += v[a] * conn.gamma(m, a, j);
            covm += c * sample.y[j];
        }
        double ym = 0.0; // g_{im} y^i
        for (std::size_t i = 0; i < n; ++i) ym += conn.g(i, m) * sample.y[i];
        acc += ym * covm;
    }
    return acc / f;
}

double lie_finsler_direct(const ManifoldSpec& spec, const VectorField& field,
                          const TangentSample& sample) {
    require_nonzero_y(sample);
    const std::size_t n = sample.x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(sample.x[i], 2 * n, 1, i);
    for (std::size_t i = 0; i < n; ++i) ty[i] = T::variable(sample.y[i], 2 * n, 1, n + i);
    T f = eval_F<T>(spec, tx, ty);
    std::vector<double> v = field.value(sample.x);
    Mat jac = field.jacobian(sample.x);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += v[i] * f.deriv(i);
        double vert = 0.0;
        for (std::size_t m = 0; m < n; ++m) vert += sample.y[m] * jac(i, m);
        acc += vert * f.deriv(n + i);
    }
    return acc;
}

namespace {

// V^i_{|j|k} assembled from an existing connection jet.
T3 second_cov_from(const ConnectionCoeffs<Dual>& cj, const VectorFieldJet& v,
                   std::span<const double> /*y*/) {
    const std::size_t n = v.value.size();
    auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) {
        return cj.gamma(i, j, k).value();
    };
    auto nval = [&](std::size_t i, std::size_t j) { return cj.nonlinear(i, j).value(); };
    auto hgamma = [&](std::size_t i, std::size_t j, std::size_t l, std::size_t k) {
        double acc = cj.gamma(i, j, l).deriv(k);
        for (std::size_t r = 0; r < n; ++r)
            acc -= nval(r, k) * cj.gamma(i, j, l).deriv(n + r);
        return acc;
    };
    Mat cov1(n, n);
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
                double acc = v.second(i, j, k);
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

T4 riemann_from(const ConnectionCoeffs<Dual>& cj) {
    const std::size_t n = cj.g.rows();
    auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) {
        return cj.gamma(i, j, k).value();
    };
    auto nval = [&](std::size_t i, std::size_t j) { return cj.nonlinear(i, j).value(); };
    auto hgamma = [&](std::size_t i, std::size_t j, std::size_t l, std::size_t k) {
        double acc = cj.gamma(i, j, l).deriv(k);
        for (std::size_t r = 0; r < n; ++r)
            acc -= nval(r, k) * cj.gamma(i, j, l).deriv(n + r);
        return acc;
    };
    T4 riem(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t m = 0; m < n; ++m) {
                    double acc = hgamma(i, m, j, k) - hgamma(i, j, k, m);
                    for (std::size_t l = 0; l < n; ++l)
                        acc += gamma(l, j, m) * gamma(i, k, l) - gamma(i, l, m) * gamma(l, j, k);
                    riem(j, i, k, m) = acc;
                }
    return riem;
}

} // namespace

LieChernEval lie_chern(const ManifoldSpec& spec, const VectorField& field,
                       const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    ConnectionCoeffs<Dual> cj = connection_jet(spec, sample);
    VectorFieldJet v = field_jet(field, sample.x);

    auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) {
        return cj.gamma(i, j, k).value();
    };
    auto dgamma_dx = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return cj.gamma(i, j, k).deriv(l);
    };
    auto pten = [&](std::size_t k, std::size_t i, std::size_t j, std::size_t l) {
        return cj.gamma(i, k, j).deriv(n + l); // P_k ^i _{jl}
    };

    LieChernEval ev;
    ev.expansion = T3(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double acc = v.second(i, j, k);
                for (std::size_t l = 0; l < n; ++l) {
                    acc += gamma(i, l, j) * v.jacobian(l, k);
                    acc += gamma(i, k, l) * v.jacobian(l, j);
                    acc -= gamma(l, k, j) * v.jacobian(i, l);
                    acc += v.value[l] * dgamma_dx(i, k, j, l);
                }
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t l = 0; l < n; ++l)
                        acc += sample.y[s] * v.jacobian(l, s) * pten(k, i, j, l);
                ev.expansion(i, j, k) = acc;
            }

    T3 cov2 = second_cov_from(cj, v, sample.y);
    T4 riem = riemann_from(cj);
    Mat cov1(n, n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) {
            double acc = v.jacobian(l, m);
            for (std::size_t a = 0; a < n; ++a) acc += v.value[a] * gamma(l, a, m);
            cov1(l, m) = acc;
        }

    ev.covariant = T3(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double acc = cov2(i, j, k);
                for (std::size_t m = 0; m < n; ++m) acc += riem(j, i, m, k) * v.value[m];
                for (std::size_t m = 0; m < n; ++m)
                    for (std::size_t l = 0; l < n; ++l)
                        acc += sample.y[m] * cov1(l, m) * pten(j, i, k, l);
                ev.covariant(i, j, k) = acc;
            }
    return ev;
}

LieSprayEval lie_spray(const ManifoldSpec& spec, const VectorField& field,
                       const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    ConnectionCoeffs<Dual> cj = connection_jet(spec, sample);
    VectorFieldJet v = field_jet(field, sample.x);

    LieSprayEval ev;
    ev.bracket.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            acc -= 2.0 * v.value[a] * cj.spray[k].deriv(a);
            acc += 2.0 * cj.spray[a].value() * v.jacobian(k, a);
            double vert = 0.0;
            for (std::size_t m = 0; m < n; ++m) vert += sample.y[m] * v.jacobian(a, m);
            acc -= 2.0 * vert * cj.nonlinear(k, a).value();
            for (std::size_t m = 0; m < n; ++m)
                acc -= sample.y[a] * sample.y[m] * v.second(k, a, m);
        }
        ev.bracket[k] = acc;
    }

    LieChernEval chern = lie_chern(spec, field, sample);
    ev.contraction.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                acc -= sample.y[i] * sample.y[j] * chern.expansion(k, i, j);
        ev.contraction[k] = acc;
    }

    T3 cov2 = second_cov_from(cj, v, sample.y);
    T4 riem = riemann_from(cj);
    ev.curvature.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            double r2 = 0.0; // R^k_m = y^j y^c R_j ^k _{mc}
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t c = 0; c < n; ++c)
                    r2 += sample.y[j] * sample.y[c] * riem(j, k, m, c);
            acc += r2 * v.value[m];
        }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < n; ++c)
                acc += cov2(k, j, c) * sample.y[j] * sample.y[c];
        ev.curvature[k] = -acc;
    }
    return ev;
}

// ---------------------------------------------------------------------------

TreeTensorField::TreeTensorField(std::size_t n, std::vector<Variance> variance,
                                 std::vector<SyntaxTree> components)
    : n_(n), variance_(std::move(variance)), comps_(std::move(components)) {
    std::size_t expect = 1;
    for (std::size_t i = 0; i < variance_.size(); ++i) expect *= n_;
    if (comps_.size() != expect)
        throw Error(ErrorCode::SpecSchema, "tensor component count does not match rank");
}

void TreeTensorField::eval(std::span<const Dual> x, std::span<const Dual> y,
                           std::vector<Dual>& out) const {
    std::vector<Dual> xy(2 * n_);
    for (std::size_t i = 0; i < n_; ++i) xy[i] = x[i];
    for (std::size_t i = 0; i < n_; ++i) xy[n_ + i] = y[i];
    out.resize(comps_.size());
    for (std::size_t c = 0; c < comps_.size(); ++c)
        out[c] = evaluate(comps_[c], std::span<const Dual>(xy));
}

std::size_t MetricTensorField::dimension() const {
    return static_cast<std::size_t>(spec_->dimension());
}

void MetricTensorField::eval(std::span<const Dual> x, std::span<const Dual> y,
                             std::vector<Dual>& out) const {
    const std::size_t n = x.size();
    using T = Taylor<Dual>;
    std::vector<T> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::constant(x[i], n, 2);
    for (std::size_t i = 0; i < n; ++i) ty[i] = T::variable(y[i], n, 2, i);
    T f2 = eval_F2<T>(*spec_, tx, ty);
    out.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = Dual(0.5) * f2.deriv2(i, j);
}

void CanonicalSectionField::eval(std::span<const Dual> /*x*/, std::span<const Dual> y,
                                 std::vector<Dual>& out) const {
    out.assign(y.begin(), y.end());
}

std::size_t LoweredCanonicalField::dimension() const {
    return static_cast<std::size_t>(spec_->dimension());
}

void LoweredCanonicalField::eval(std::span<const Dual> x, std::span<const Dual> y,
                                 std::vector<Dual>& out) const {
    const std::size_t n = x.size();
    using T = Taylor<Dual>;
    std::vector<T> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::constant(x[i], n, 2);
    for (std::size_t i = 0; i < n; ++i) ty[i] = T::variable(y[i], n, 2, i);
    T f2 = eval_F2<T>(*spec_, tx, ty);
    out.assign(n, Dual(0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            out[k] = out[k] + Dual(0.5) * f2.deriv2(k, j) * y[j];
}

TensorValue lie_tensor(const ManifoldSpec& spec, const VectorField& field,
                       const TensorField& tensor, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    std::vector<Variance> var = tensor.variance();
    const std::size_t rank = var.size();

    bool supported = rank <= 3;
    for (std::size_t s = 0; s < rank; ++s)
        if (var[s] == Variance::Up && s != 0) supported = false;
    std::size_t down = 0;
    for (auto v : var)
        if (v == Variance::Down) ++down;
    if (down > 2) supported = false;
    if (!supported)
        throw Error(ErrorCode::UnsupportedVariance,
                    "supported tensor types: (0,k) and (1,k) with k <= 2, contravariant slot first");

    require_nonzero_y(sample);
    ConnectionCoeffs<double> conn = connection_at<double>(spec, sample.x, sample.y);
    std::vector<double> v = field.value(sample.x);
    Mat vjac = field.jacobian(sample.x);
    Mat cov(n, n); // V^l_{|m}
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) {
            double acc = vjac(l, m);
            for (std::size_t a = 0; a < n; ++a) acc += v[a] * conn.gamma(l, a, m);
            cov(l, m) = acc;
        }

    std::vector<Dual> dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) dx[i] = Dual(sample.x[i], 2 * n, i);
    for (std::size_t i = 0; i < n; ++i) dy[i] = Dual(sample.y[i], 2 * n, n + i);
    std::vector<Dual> comps;
    tensor.eval(dx, dy, comps);

    std::size_t count = 1;
    for (std::size_t s = 0; s < rank; ++s) count *= n;
    if (comps.size() != count)
        throw Error(ErrorCode::SpecSchema, "tensor evaluation returned wrong component count");

    auto decode = [&](std::size_t flat, std::vector<std::size_t>& idx) {
        for (std::size_t s = rank; s-- > 0;) {
            idx[s] = flat % n;
            flat /= n;
        }
    };
    auto encode = [&](const std::vector<std::size_t>& idx) {
        std::size_t flat = 0;
        for (std::size_t s = 0; s < rank; ++s) flat = flat * n + idx[s];
        return flat;
    };

    // horizontal covariant derivative of the components: delta/dx^m plus
    // Gamma corrections per slot
    auto cov_deriv = [&](std::size_t flat, std::size_t m, const std::vector<std::size_t>& idx) {
        double acc = comps[flat].deriv(m);
        for (std::size_t r = 0; r < n; ++r)
            acc -= conn.nonlinear(r, m) * comps[flat].deriv(n + r);
        std::vector<std::size_t> alt(idx);
        for (std::size_t s = 0; s < rank; ++s) {
            for (std::size_t l = 0; l < n; ++l) {
                alt = idx;
                alt[s] = l;
                double t = comps[encode(alt)].value();
                if (var[s] == Variance::Up)
                    acc += t * conn.gamma(idx[s], l, m);
                else
                    acc -= t * conn.gamma(l, idx[s], m);
            }
        }
        return acc;
    };

    TensorValue out;
    out.variance = var;
    out.extent = n;
    out.sample = sample;
    out.data.assign(count, 0.0);

    std::vector<std::size_t> idx(rank), alt(rank);
    for (std::size_t flat = 0; flat < count; ++flat) {
        decode(flat, idx);
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) acc += v[m] * cov_deriv(flat, m, idx);
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t l = 0; l < n; ++l)
                acc += sample.y[m] * cov(l, m) * comps[flat].deriv(n + l);
        for (std::size_t s = 0; s < rank; ++s) {
            for (std::size_t m = 0; m < n; ++m) {
                alt = idx;
                alt[s] = m;
                double t = comps[encode(alt)].value();
                if (var[s] == Variance::Up)
                    acc -= t * cov(idx[s], m);
                else
                    acc += t * cov(m, idx[s]);
            }
        }
        out.data[flat] = acc;
    }
    return out;
}

} // namespace finsler
