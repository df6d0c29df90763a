#include "finsler/legendre.hpp"

#include <cmath>

#include "finsler/rng.hpp"

namespace finsler {

using ad::Taylor;

namespace {

bool all_zero(std::span<const double> v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double euclid_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> lower_with_g(const ManifoldSpec& spec, const TangentSample& s) {
    Mat g = fundamental_matrix(spec, s);
    std::vector<double> xi(s.y.size(), 0.0);
    for (std::size_t i = 0; i < s.y.size(); ++i)
        for (std::size_t j = 0; j < s.y.size(); ++j) xi[i] += g(i, j) * s.y[j];
    return xi;
}

// Newton iteration for g_y(y,.) = xi on a normalized target. The residual's
// Jacobian is g itself, and the iteration is Newton on the strictly convex
// potential 1/2 F^2(x,y) - xi(y), so a backtracking step is globally safe.
struct NewtonResult {
    std::vector<double> y;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

NewtonResult newton_raise(const ManifoldSpec& spec, std::span<const double> x,
                          std::span<const double> xi_target, std::vector<double> y0,
                          int max_iters) {
    const std::size_t n = xi_target.size();
    NewtonResult res;
    res.y = std::move(y0);

    auto potential = [&](const std::vector<double>& y) {
        double f = eval_F<double>(spec, x, y);
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += xi_target[i] * y[i];
        return 0.5 * f * f - dot;
    };

    const double tol = 1e-12 * (1.0 + inf_norm(xi_target));
    double e_cur = potential(res.y);
    for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
        TangentSample s{std::vector<double>(x.begin(), x.end()), res.y};
        if (all_zero(s.y)) break; // invalid iterate, caller retries
        Mat g = fundamental_matrix(spec, s);
        std::vector<double> r(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) r[i] += g(i, j) * res.y[j];
            r[i] -= xi_target[i];
        }
        res.residual = inf_norm(r);
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
        std::vector<double> step = solve(g, rhs);
        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-12) {
            std::vector<double> cand(n);
            for (std::size_t i = 0; i < n; ++i) cand[i] = res.y[i] + t * step[i];
            if (!all_zero(cand)) {
                double e_new;
                try {
                    e_new = potential(cand);
                } catch (const Error&) {
                    t *= 0.5;
                    continue;
                }
                if (e_new <= e_cur + 1e-14 * std::fabs(e_cur)) {
                    res.y = std::move(cand);
                    e_cur = e_new;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    return res;
}

} // namespace

RandersDualData randers_dual_data(const ManifoldSpec& spec, std::span<const double> x) {
    if (spec.family() != Family::Randers)
        throw Error(ErrorCode::FamilyMismatch, "randers dual data requires a randers spec");
    RandersDualT<double> d = randers_dual_at<double>(spec, x);
    RandersDualData out;
    out.a_star = std::move(d.a_star);
    out.b_star = std::move(d.b_star);
    out.b = std::sqrt(d.beta2);
    return out;
}

CotangentSample legendre(const ManifoldSpec& spec, const TangentSample& sample) {
    CotangentSample cot;
    cot.x = sample.x;
    if (all_zero(sample.y)) {
        cot.xi.assign(sample.y.size(), 0.0);
        return cot;
    }
    switch (spec.family()) {
    case Family::Riemannian: {
        Mat a = eval_a<double>(spec, sample.x);
        cot.xi.assign(sample.y.size(), 0.0);
        for (std::size_t i = 0; i < sample.y.size(); ++i)
            for (std::size_t j = 0; j < sample.y.size(); ++j)
                cot.xi[i] += a(i, j) * sample.y[j];
        return cot;
    }
    case Family::Randers: {
        // xi_i = F (a_ij y^j / alpha + b_i)
        const std::size_t n = sample.y.size();
        Mat a = eval_a<double>(spec, sample.x);
        std::vector<double> b = eval_b<double>(spec, sample.x);
        double quad = 0.0;
        std::vector<double> ay(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) ay[i] += a(i, j) * sample.y[j];
            quad += ay[i] * sample.y[i];
        }
        double alpha = std::sqrt(quad);
        double beta = 0.0;
        for (std::size_t i = 0; i < n; ++i) beta += b[i] * sample.y[i];
        double f = alpha + beta;
        cot.xi.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) cot.xi[i] = f * (ay[i] / alpha + b[i]);
        return cot;
    }
    case Family::Generic:
        cot.xi = lower_with_g(spec, sample);
        return cot;
    }
    throw Error(ErrorCode::DomainError, "unknown family");
}

TangentSample legendre_inverse_newton(const ManifoldSpec& spec, const CotangentSample& cot) {
    TangentSample out;
    out.x = cot.x;
    const std::size_t n = cot.xi.size();
    if (all_zero(cot.xi)) {
        out.y.assign(n, 0.0);
        return out;
    }
    // normalize the target; the transform is 1-homogeneous, rescale at the end
    const double scale = euclid_norm(cot.xi);
    std::vector<double> xin(n);
    for (std::size_t i = 0; i < n; ++i) xin[i] = cot.xi[i] / scale;

    std::vector<double> y0;
    if (spec.family() == Family::Generic) {
        y0 = xin; // coordinate raise
    } else {
        Mat ainv = inverse(eval_a<double>(spec, cot.x));
        y0 = mat_vec(ainv, xin);
    }

    NewtonResult res = newton_raise(spec, cot.x, xin, y0, 50);
    if (!res.converged) {
        SplitMix64 rng(split_stream(0xf1e57a11, 0));
        for (int attempt = 0; attempt < 8 && !res.converged; ++attempt) {
            std::vector<double> start(n);
            double norm2 = 0.0;
            for (auto& v : start) {
                v = rng.uniform(-1.0, 1.0);
                norm2 += v * v;
            }
            if (norm2 == 0.0) continue;
            for (auto& v : start) v /= std::sqrt(norm2);
            res = newton_raise(spec, cot.x, xin, start, 50);
        }
    }
    if (!res.converged)
        throw Error(ErrorCode::ConvergenceFailure,
                    "inverse transform did not converge (last residual " +
                        std::to_string(res.residual) + ")");
    out.y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = res.y[i] * scale;
    return out;
}

TangentSample legendre_inverse(const ManifoldSpec& spec, const CotangentSample& cot) {
    TangentSample out;
    out.x = cot.x;
    const std::size_t n = cot.xi.size();
    if (all_zero(cot.xi)) {
        out.y.assign(n, 0.0);
        return out;
    }
    if (spec.family() == Family::Generic) return legendre_inverse_newton(spec, cot);
    out.y = raise_covector_t<double>(spec, cot.x, cot.xi);
    return out;
}

double dual_norm_sup(const ManifoldSpec& spec, const CotangentSample& cot) {
    const std::size_t n = cot.xi.size();
    if (all_zero(cot.xi)) return 0.0;

    TangentSample start = legendre_inverse_newton(spec, cot);
    double f = eval_F<double>(spec, start.x, start.y);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = start.y[i] / f;

    auto pair_with = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += cot.xi[i] * v[i];
        return s;
    };
    auto normalize_f = [&](std::vector<double> v) {
        double fv = eval_F<double>(spec, cot.x, v);
        for (auto& c : v) c /= fv;
        return v;
    };

    double val = pair_with(u);
    const double tol = 1e-9 * (1.0 + inf_norm(cot.xi));
    for (int iter = 0; iter < 100; ++iter) {
        // gradient of xi(u) projected onto the tangent plane of {F = 1}
        using T = Taylor<double>;
        std::vector<T> tx(n), tu(n);
        for (std::size_t i = 0; i < n; ++i) tx[i] = T::constant(cot.x[i], n, 1);
        for (std::size_t i = 0; i < n; ++i) tu[i] = T::variable(u[i], n, 1, i);
        T ft = eval_F<T>(spec, tx, tu);
        std::vector<double> df(n);
        double df2 = 0.0, xi_df = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            df[i] = ft.deriv(i);
            df2 += df[i] * df[i];
            xi_df += cot.xi[i] * df[i];
        }
        std::vector<double> dir(n);
        double dnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dir[i] = cot.xi[i] - (xi_df / df2) * df[i];
            dnorm = std::max(dnorm, std::fabs(dir[i]));
        }
        if (dnorm <= tol) break;
        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-14) {
            std::vector<double> cand(n);
            for (std::size_t i = 0; i < n; ++i) cand[i] = u[i] + t * dir[i];
            if (!all_zero(cand)) {
                std::vector<double> cu = normalize_f(std::move(cand));
                double cv = pair_with(cu);
                if (cv > val + 1e-16) {
                    u = std::move(cu);
                    val = cv;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    return val;
}

double dual_norm(const ManifoldSpec& spec, const CotangentSample& cot) {
    if (all_zero(cot.xi)) return 0.0;
    if (spec.family() == Family::Generic) return dual_norm_sup(spec, cot);
    return dual_norm_t<double>(spec, cot.x, cot.xi);
}

Mat dual_fundamental_matrix(const ManifoldSpec& spec, const CotangentSample& cot) {
    const std::size_t n = cot.xi.size();
    if (all_zero(cot.xi))
        throw Error(ErrorCode::DegenerateInput, "dual tensor requested at xi = 0");
    switch (spec.family()) {
    case Family::Riemannian:
        return inverse(eval_a<double>(spec, cot.x));
    case Family::Randers: {
        RandersDualT<double> d = randers_dual_at<double>(spec, cot.x);
        std::vector<double> xir(n, 0.0); // xi^i = a*^{ij} xi_j
        double quad = 0.0, beta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            beta += d.b_star[i] * cot.xi[i];
            for (std::size_t j = 0; j < n; ++j) xir[i] += d.a_star(i, j) * cot.xi[j];
        }
        for (std::size_t i = 0; i < n; ++i) quad += xir[i] * cot.xi[i];
        double astar = std::sqrt(quad);
        double fstar = astar + beta;
        Mat g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double term = (fstar / astar) * (d.a_star(i, j) + d.b_star[i] * d.b_star[j]);
                term += (fstar / (astar * astar)) * (xir[i] * d.b_star[j] + xir[j] * d.b_star[i]);
                term -= (beta / astar) * (xir[i] / astar + d.b_star[i]) *
                        (xir[j] / astar + d.b_star[j]);
                g(i, j) = term;
            }
        return g;
    }
    case Family::Generic: {
        TangentSample ts = legendre_inverse_newton(spec, cot);
        return inverse(fundamental_matrix(spec, ts));
    }
    }
    throw Error(ErrorCode::DomainError, "unknown family");
}

TensorValue dual_fundamental_tensor(const ManifoldSpec& spec, const CotangentSample& cot) {
    Mat g = dual_fundamental_matrix(spec, cot);
    if (!positive_definite(g))
        throw Error(ErrorCode::NotPositiveDefinite, "dual fundamental tensor not positive definite");
    TensorValue t;
    t.variance = {Variance::Up, Variance::Up};
    t.extent = g.rows();
    t.data = g.data();
    t.sample.x = cot.x;
    t.sample.y = cot.xi;
    return t;
}

Mat dual_fundamental_matrix_ad(const ManifoldSpec& spec, const CotangentSample& cot) {
    if (spec.family() == Family::Generic)
        throw Error(ErrorCode::FamilyMismatch,
                    "AD dual tensor path needs a closed-form family (riemannian/randers)");
    const std::size_t n = cot.xi.size();
    using T = Taylor<double>;
    std::vector<T> tx(n), txi(n);
    for (std::size_t i = 0; i < n; ++i) tx[i] = T::constant(cot.x[i], n, 2);
    for (std::size_t i = 0; i < n; ++i) txi[i] = T::variable(cot.xi[i], n, 2, i);
    T fs = dual_norm_t<T>(spec, tx, txi);
    T fs2 = fs * fs;
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = 0.5 * fs2.deriv2(i, j);
    return g;
}

} // namespace finsler
