#include "finsler/calculus.hpp"

#include <cmath>

#include "finsler/lie.hpp"

namespace finsler {

using ad::Dual;
using ad::Taylor;

namespace {

bool all_zero(std::span<const double> v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

// df over an arbitrary scalar algebra: partials of f at an S-valued point.
template <class S>
std::vector<S> differential_t(const ScalarField& f, std::span<const S> x) {
    using T = Taylor<S>;
    const std::size_t n = x.size();
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 1, i);
    T v = evaluate(f.tree(), std::span<const T>(tx));
    std::vector<S> df(n, S(0.0));
    for (std::size_t i = 0; i < n; ++i) df[i] = v.deriv(i);
    return df;
}

std::vector<double> sigma_log_gradient(const ManifoldSpec& spec, std::span<const double> x) {
    const std::size_t n = x.size();
    using T = Taylor<double>;
    std::vector<T> tx(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::variable(x[i], n, 1, i);
    T s = eval_sigma<T>(spec, tx);
    double sv = ad::scalar_value(s);
    if (!(sv > 0.0))
        throw Error(ErrorCode::DomainError, "measure density must be positive");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = s.deriv(i) / sv;
    return g;
}

} // namespace

GradientResult gradient(const ManifoldSpec& spec, const ScalarField& f,
                        std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> df = f.gradient(x);
    GradientResult res;
    if (all_zero(df)) {
        res.grad.assign(n, 0.0);
        res.critical = true;
        if (spec.family() == Family::Randers) {
            res.A = 0.0;
            res.beta_pairing = 0.0;
            res.alpha_grad_norm = 0.0;
        }
        return res;
    }
    CotangentSample cot{std::vector<double>(x.begin(), x.end()), df};
    switch (spec.family()) {
    case Family::Riemannian: {
        Mat ainv = inverse(eval_a<double>(spec, x));
        res.grad = mat_vec(ainv, df);
        break;
    }
    case Family::Randers: {
        Mat ainv = inverse(eval_a<double>(spec, x));
        std::vector<double> b = eval_b<double>(spec, x);
        std::vector<double> grad_a = mat_vec(ainv, df); // grad of f w.r.t. alpha
        std::vector<double> bsharp = mat_vec(ainv, b);
        double b2 = 0.0, pairing = 0.0, ga2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            b2 += bsharp[i] * b[i];
            pairing += bsharp[i] * df[i];
            ga2 += grad_a[i] * df[i];
        }
        if (!(b2 < 1.0))
            throw Error(ErrorCode::StrongConvexityViolated,
                        "randers 1-form has ||beta||_a >= 1 at the requested point");
        double A = std::sqrt((1.0 - b2) * ga2 + pairing * pairing);
        double c1 = (A - pairing) / (A * (1.0 - b2));
        double c2 = (A - pairing) * (A - pairing) / (A * (1.0 - b2) * (1.0 - b2));
        res.grad.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) res.grad[i] = c1 * grad_a[i] - c2 * bsharp[i];
        res.A = A;
        res.beta_pairing = pairing;
        res.alpha_grad_norm = std::sqrt(ga2);
        break;
    }
    case Family::Generic:
        res.grad = legendre_inverse_newton(spec, cot).y;
        break;
    }
    res.norm = finsler_norm(spec, {cot.x, res.grad});
    res.dual = dual_norm(spec, cot);
    return res;
}

std::vector<double> gradient_via_inverse(const ManifoldSpec& spec, const ScalarField& f,
                                         std::span<const double> x) {
    std::vector<double> df = f.gradient(x);
    if (all_zero(df)) return std::vector<double>(x.size(), 0.0);
    CotangentSample cot{std::vector<double>(x.begin(), x.end()), df};
    return legendre_inverse(spec, cot).y;
}

GradientEstimate gradient_estimate(const ManifoldSpec& spec, const ScalarField& f,
                                   std::span<const double> x) {
    if (spec.family() != Family::Randers)
        throw Error(ErrorCode::FamilyMismatch, "gradient estimate requires a randers spec");
    GradientResult g = gradient(spec, f, x);
    RandersDualData d = randers_dual_data(spec, x);
    GradientEstimate est;
    est.lhs = g.norm;
    est.rhs = (g.critical ? 0.0 : *g.alpha_grad_norm) / (1.0 - d.b);
    return est;
}

double divergence(const ManifoldSpec& spec, const VectorField& field,
                  std::span<const double> x) {
    const std::size_t n = x.size();
    Mat jac = field.jacobian(x);
    std::vector<double> v = field.value(x);
    std::vector<double> dlog_sigma = sigma_log_gradient(spec, x);
    double div = 0.0;
    for (std::size_t i = 0; i < n; ++i) div += jac(i, i) + v[i] * dlog_sigma[i];
    return div;
}

RaisedGradientJet raised_gradient_jet(const ManifoldSpec& spec, const ScalarField& f,
                                      std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> df0 = f.gradient(x);
    if (all_zero(df0))
        throw Error(ErrorCode::DegenerateGradient,
                    "df = 0: pointwise operator undefined at a critical point");

    RaisedGradientJet jet;
    jet.y.assign(n, 0.0);
    jet.dy_dx = Mat(n, n);
    jet.df_dx.assign(n, 0.0);

    if (spec.family() != Family::Generic) {
        // one pass of dual numbers straight through the closed forms
        std::vector<Dual> xd(n);
        for (std::size_t i = 0; i < n; ++i) xd[i] = Dual(x[i], n, i);
        std::vector<Dual> df = differential_t<Dual>(f, xd);
        std::vector<Dual> y = raise_covector_t<Dual>(spec, xd, df);
        Dual fn = eval_F<Dual>(spec, xd, y);
        jet.f = fn.value();
        for (std::size_t i = 0; i < n; ++i) {
            jet.y[i] = y[i].value();
            jet.df_dx[i] = fn.deriv(i);
            for (std::size_t k = 0; k < n; ++k) jet.dy_dx(i, k) = y[i].deriv(k);
        }
        return jet;
    }

    // generic family: differentiate the inverse-transform solution implicitly
    CotangentSample cot{std::vector<double>(x.begin(), x.end()), df0};
    TangentSample ts = legendre_inverse_newton(spec, cot);
    ConnectionCoeffs<double> conn = connection_at<double>(spec, ts.x, ts.y);
    Mat d2f = f.hessian(x);
    jet.y = ts.y;
    jet.f = eval_F<double>(spec, ts.x, ts.y);
    // g dY/dx^k = d2f(.,k) - (dg/dx^k) y
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> rhs(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] = d2f(i, k);
            for (std::size_t j = 0; j < n; ++j) rhs[i] -= conn.dg_dx(k, i, j) * ts.y[j];
        }
        std::vector<double> dyk = mat_vec(conn.ginv, rhs);
        for (std::size_t i = 0; i < n; ++i) jet.dy_dx(i, k) = dyk[i];
    }
    // dF/dx^k = F_x^k + (df_j / F) dY^j/dx^k
    std::vector<Taylor<double>> tx(n), ty(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = Taylor<double>::variable(x[i], n, 1, i);
    for (std::size_t i = 0; i < n; ++i) ty[i] = Taylor<double>::constant(ts.y[i], n, 1);
    Taylor<double> ft = eval_F<Taylor<double>>(spec, tx, ty);
    for (std::size_t k = 0; k < n; ++k) {
        double total = ft.deriv(k);
        for (std::size_t j = 0; j < n; ++j) total += (df0[j] / jet.f) * jet.dy_dx(j, k);
        jet.df_dx[k] = total;
    }
    return jet;
}

double laplacian(const ManifoldSpec& spec, const ScalarField& f, std::span<const double> x) {
    const std::size_t n = x.size();
    RaisedGradientJet jet = raised_gradient_jet(spec, f, x);
    std::vector<double> dlog_sigma = sigma_log_gradient(spec, x);
    double div = 0.0;
    for (std::size_t i = 0; i < n; ++i) div += jet.dy_dx(i, i) + jet.y[i] * dlog_sigma[i];
    return div;
}

double p_laplacian(const ManifoldSpec& spec, const ScalarField& f, std::span<const double> x,
                   double p) {
    if (!(p > 1.0))
        throw Error(ErrorCode::DomainError, "p-laplacian requires p > 1");
    if (p == 2.0) return laplacian(spec, f, x);
    const std::size_t n = x.size();
    RaisedGradientJet jet = raised_gradient_jet(spec, f, x);
    std::vector<double> dlog_sigma = sigma_log_gradient(spec, x);
    double w = std::pow(jet.f, p - 2.0);
    double wp = (p - 2.0) * std::pow(jet.f, p - 3.0);
    double div = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        div += wp * jet.df_dx[k] * jet.y[k] + w * jet.dy_dx(k, k);
        div += w * jet.y[k] * dlog_sigma[k];
    }
    return div;
}

double hessian_geodesic(const ManifoldSpec& spec, const ScalarField& f,
                        const TangentSample& sample) {
    require_nonzero_y(sample);
    const std::size_t n = sample.x.size();
    Mat d2f = f.hessian(sample.x);
    std::vector<double> df = f.gradient(sample.x);
    T3 gamma = chern_coefficients(spec, sample);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double term = d2f(i, j);
            for (std::size_t m = 0; m < n; ++m) term -= df[m] * gamma(m, i, j);
            acc += term * sample.y[i] * sample.y[j];
        }
    return acc;
}

Mat hessian_matrix(const ManifoldSpec& spec, const ScalarField& u, std::span<const double> x) {
    const std::size_t n = x.size();
    GradientResult g = gradient(spec, u, x);
    if (g.critical)
        throw Error(ErrorCode::DegenerateGradient,
                    "du = 0: Hessian reference vector undefined at a critical point");
    TangentSample ref{std::vector<double>(x.begin(), x.end()), g.grad};
    Mat d2u = u.hessian(x);
    std::vector<double> du = u.gradient(x);
    T3 gamma = chern_coefficients(spec, ref);
    Mat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double term = d2u(i, j);
            for (std::size_t m = 0; m < n; ++m) term -= du[m] * gamma(m, i, j);
            h(i, j) = term;
        }
    return h;
}

HessianViaLie hessian_via_lie(const ManifoldSpec& spec, const ScalarField& u,
                              std::span<const double> x) {
    const std::size_t n = x.size();
    RaisedGradientJet jet = raised_gradient_jet(spec, u, x);
    TangentSample ref{std::vector<double>(x.begin(), x.end()), jet.y};
    ConnectionCoeffs<double> conn = connection_eval(spec, ref);

    // Lie derivative of g along the lifted gradient field, at (x, grad u)
    Mat lie_g = lie_metric_core(conn, jet.y, jet.dy_dx, ref.y);

    Mat d2u = u.hessian(x);
    std::vector<double> du = u.gradient(x);
    Mat ucov2(n, n); // u_{|r|m}(x, grad u)
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t m = 0; m < n; ++m) {
            double term = d2u(r, m);
            for (std::size_t a = 0; a < n; ++a) term -= du[a] * conn.gamma(a, r, m);
            ucov2(r, m) = term;
        }

    HessianViaLie out;
    out.correction = Mat(n, n);
    out.hessian = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double corr = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double c_up = 0.0; // C^r_ij
                for (std::size_t s = 0; s < n; ++s)
                    c_up += conn.ginv(r, s) * conn.cartan(s, i, j);
                double contraction = 0.0;
                for (std::size_t m = 0; m < n; ++m) contraction += jet.y[m] * ucov2(r, m);
                corr += contraction * c_up;
            }
            out.correction(i, j) = corr;
            out.hessian(i, j) = 0.5 * lie_g(i, j) - corr;
        }
    return out;
}

} // namespace finsler
