#include "finsler/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/rng.hpp"

namespace finsler {

namespace {

bool covector_zero(const std::vector<double>& xi) {
    for (double v : xi)
        if (v != 0.0) return false;
    return true;
}

} // namespace

GridContext::GridContext(const ManifoldSpec& spec, std::array<int, 2> resolution,
                         std::array<double, 2> periods)
    : spec_(spec), dim_(spec.dimension()), res_(resolution), period_(periods) {
    if (dim_ != 1 && dim_ != 2)
        throw Error(ErrorCode::SpecSchema, "grid supports 1D and 2D manifolds only");
    for (int d = 0; d < dim_; ++d) {
        if (res_[d] < 8)
            throw Error(ErrorCode::SpecSchema, "minimum grid resolution is 8 nodes per axis");
        if (!(period_[d] > 0.0))
            throw Error(ErrorCode::SpecSchema, "grid periods must be positive");
        h_[d] = period_[d] / res_[d];
    }
    if (dim_ == 1) {
        res_[1] = 1;
        h_[1] = 1.0;
    }
    total_ = static_cast<std::size_t>(res_[0]) * static_cast<std::size_t>(dim_ == 2 ? res_[1] : 1);
    vol_ = (dim_ == 2) ? h_[0] * h_[1] : h_[0];

    node_sigma_.resize(total_);
    for (std::size_t p = 0; p < total_; ++p) {
        std::vector<double> x = node_coords(p);
        double s = eval_sigma<double>(spec_, x);
        if (!(s > 0.0))
            throw Error(ErrorCode::DomainError, "measure density must be positive on the grid");
        node_sigma_[p] = s;
        total_measure_ += s * vol_;
    }

    closed_form_ = spec_.family() != Family::Generic;
    for (int d = 0; d < dim_; ++d) {
        face_sigma_[d].resize(total_);
        if (closed_form_) face_dual_[d].resize(total_);
        for (int i = 0; i < res_[0]; ++i) {
            for (int j = 0; j < (dim_ == 2 ? res_[1] : 1); ++j) {
                std::vector<double> xf = face_position(d, i, j);
                std::size_t f = face_index(i, j);
                double s = eval_sigma<double>(spec_, xf);
                if (!(s > 0.0))
                    throw Error(ErrorCode::DomainError, "measure density must be positive on faces");
                face_sigma_[d][f] = s;
                if (!closed_form_) continue;
                FaceClosed fc;
                if (spec_.family() == Family::Riemannian) {
                    Mat ainv = inverse(eval_a<double>(spec_, xf));
                    fc.a_star = ainv.data();
                    fc.b_star.assign(static_cast<std::size_t>(dim_), 0.0);
                } else {
                    RandersDualT<double> d2 = randers_dual_at<double>(spec_, xf);
                    fc.a_star = d2.a_star.data();
                    fc.b_star = d2.b_star;
                }
                face_dual_[d][f] = std::move(fc);
            }
        }
    }
}

std::vector<double> GridContext::node_coords(std::size_t p) const {
    if (dim_ == 1) return {static_cast<double>(p) * h_[0]};
    std::size_t i = p / static_cast<std::size_t>(res_[1]);
    std::size_t j = p % static_cast<std::size_t>(res_[1]);
    return {static_cast<double>(i) * h_[0], static_cast<double>(j) * h_[1]};
}

std::vector<double> GridContext::face_position(int dir, int i, int j) const {
    if (dim_ == 1) return {(static_cast<double>(i) + 0.5) * h_[0]};
    double x0 = static_cast<double>(i) * h_[0];
    double x1 = static_cast<double>(j) * h_[1];
    if (dir == 0) x0 += 0.5 * h_[0];
    else x1 += 0.5 * h_[1];
    return {x0, x1};
}

double GridContext::face_sigma(int dir, int i, int j) const {
    return face_sigma_[dir][face_index(i, j)];
}

double GridContext::inner(const GridFunction& a, const GridFunction& b) const {
    double s = 0.0;
    for (std::size_t p = 0; p < total_; ++p) s += a[p] * b[p] * node_sigma_[p] * vol_;
    return s;
}

double GridContext::mean(const GridFunction& u) const {
    double s = 0.0;
    for (std::size_t p = 0; p < total_; ++p) s += u[p] * node_sigma_[p] * vol_;
    return s / total_measure_;
}

GridFunction GridContext::project_zero_mean(const GridFunction& u) const {
    double m = mean(u);
    GridFunction v(u);
    for (double& x : v) x -= m;
    return v;
}

std::vector<double> GridContext::face_covector(const GridFunction& u, int dir, int i,
                                               int j) const {
    if (dim_ == 1) {
        double d = (u[node_index(i + 1)] - u[node_index(i)]) / h_[0];
        return {d};
    }
    std::vector<double> xi(2, 0.0);
    if (dir == 0) {
        xi[0] = (u[node_index(i + 1, j)] - u[node_index(i, j)]) / h_[0];
        xi[1] = (u[node_index(i, j + 1)] - u[node_index(i, j - 1)] +
                 u[node_index(i + 1, j + 1)] - u[node_index(i + 1, j - 1)]) /
                (4.0 * h_[1]);
    } else {
        xi[1] = (u[node_index(i, j + 1)] - u[node_index(i, j)]) / h_[1];
        xi[0] = (u[node_index(i + 1, j)] - u[node_index(i - 1, j)] +
                 u[node_index(i + 1, j + 1)] - u[node_index(i - 1, j + 1)]) /
                (4.0 * h_[0]);
    }
    return xi;
}

std::vector<double> GridContext::face_velocity(int dir, int i, int j,
                                               const std::vector<double>& xi) const {
    const std::size_t n = static_cast<std::size_t>(dim_);
    if (covector_zero(xi)) return std::vector<double>(n, 0.0);
    if (!closed_form_) {
        CotangentSample cot{face_position(dir, i, j), xi};
        return legendre_inverse_newton(spec_, cot).y;
    }
    const FaceClosed& fc = face_dual_[dir][face_index(i, j)];
    std::vector<double> araise(n, 0.0);
    double quad = 0.0, beta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) araise[a] += fc.a_star[a * n + b] * xi[b];
        beta += fc.b_star[a] * xi[a];
    }
    for (std::size_t a = 0; a < n; ++a) quad += araise[a] * xi[a];
    double astar = std::sqrt(quad);
    double fstar = astar + beta;
    std::vector<double> y(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) y[a] = fstar * (araise[a] / astar + fc.b_star[a]);
    return y;
}

double GridContext::face_fstar2(int dir, int i, int j, const std::vector<double>& xi) const {
    const std::size_t n = static_cast<std::size_t>(dim_);
    if (covector_zero(xi)) return 0.0;
    if (!closed_form_) {
        CotangentSample cot{face_position(dir, i, j), xi};
        TangentSample y = legendre_inverse_newton(spec_, cot);
        double f = eval_F<double>(spec_, y.x, y.y);
        return f * f;
    }
    const FaceClosed& fc = face_dual_[dir][face_index(i, j)];
    double quad = 0.0, beta = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        double ar = 0.0;
        for (std::size_t b = 0; b < n; ++b) ar += fc.a_star[a * n + b] * xi[b];
        quad += ar * xi[a];
        beta += fc.b_star[a] * xi[a];
    }
    double fstar = std::sqrt(quad) + beta;
    return fstar * fstar;
}

double energy(const GridContext& ctx, const GridFunction& u) {
    GridFunction v = ctx.project_zero_mean(u);
    double den = ctx.inner(v, v);
    double scale = 0.0;
    for (double x : u) scale = std::max(scale, std::fabs(x));
    if (!(den > 1e-28 * std::max(1.0, scale * scale)))
        throw Error(ErrorCode::ZeroFunction, "energy of a (mu-a.e.) constant grid function");
    const int nj = ctx.dim() == 2 ? ctx.res(1) : 1;
    double num = 0.0;
    for (int d = 0; d < ctx.dim(); ++d)
        for (int i = 0; i < ctx.res(0); ++i)
            for (int j = 0; j < nj; ++j) {
                std::vector<double> xi = ctx.face_covector(v, d, i, j);
                num += ctx.face_sigma(d, i, j) * ctx.cell_volume() *
                       ctx.face_fstar2(d, i, j, xi);
            }
    num /= ctx.dim();
    return num / den;
}

GridFunction apply_laplacian(const GridContext& ctx, const GridFunction& u) {
    const int dim = ctx.dim();
    const int ni = ctx.res(0);
    const int nj = dim == 2 ? ctx.res(1) : 1;
    const double vol = ctx.cell_volume();
    GridFunction acc(ctx.nodes(), 0.0);

    for (int d = 0; d < dim; ++d) {
        const double hn = ctx.spacing(d);
        for (int i = 0; i < ni; ++i) {
            for (int j = 0; j < nj; ++j) {
                std::vector<double> xi = ctx.face_covector(u, d, i, j);
                if (covector_zero(xi)) continue;
                std::vector<double> y = ctx.face_velocity(d, i, j, xi);
                const double w = ctx.face_sigma(d, i, j) * vol / dim;
                if (dim == 1) {
                    acc[ctx.node_index(i + 1)] += w * y[0] / hn;
                    acc[ctx.node_index(i)] -= w * y[0] / hn;
                    continue;
                }
                const int t = 1 - d;
                const double ht = ctx.spacing(t);
                const double wn = w * y[d] / hn;       // normal part
                const double wt = w * y[t] / (4.0 * ht); // transverse average part
                if (d == 0) {
                    acc[ctx.node_index(i + 1, j)] += wn;
                    acc[ctx.node_index(i, j)] -= wn;
                    acc[ctx.node_index(i, j + 1)] += wt;
                    acc[ctx.node_index(i, j - 1)] -= wt;
                    acc[ctx.node_index(i + 1, j + 1)] += wt;
                    acc[ctx.node_index(i + 1, j - 1)] -= wt;
                } else {
                    acc[ctx.node_index(i, j + 1)] += wn;
                    acc[ctx.node_index(i, j)] -= wn;
                    acc[ctx.node_index(i + 1, j)] += wt;
                    acc[ctx.node_index(i - 1, j)] -= wt;
                    acc[ctx.node_index(i + 1, j + 1)] += wt;
                    acc[ctx.node_index(i - 1, j + 1)] -= wt;
                }
            }
        }
    }
    GridFunction lap(ctx.nodes());
    for (std::size_t p = 0; p < ctx.nodes(); ++p)
        lap[p] = -acc[p] / (ctx.node_sigma(p) * vol);
    return lap;
}

double weak_pairing(const GridContext& ctx, const GridFunction& phi, const GridFunction& u) {
    const int nj = ctx.dim() == 2 ? ctx.res(1) : 1;
    double s = 0.0;
    for (int d = 0; d < ctx.dim(); ++d)
        for (int i = 0; i < ctx.res(0); ++i)
            for (int j = 0; j < nj; ++j) {
                std::vector<double> xi_u = ctx.face_covector(u, d, i, j);
                if (covector_zero(xi_u)) continue;
                std::vector<double> xi_phi = ctx.face_covector(phi, d, i, j);
                std::vector<double> y = ctx.face_velocity(d, i, j, xi_u);
                double dot = 0.0;
                for (std::size_t a = 0; a < y.size(); ++a) dot += xi_phi[a] * y[a];
                s += ctx.face_sigma(d, i, j) * ctx.cell_volume() * dot / ctx.dim();
            }
    return s;
}

EigenResult minimize_rayleigh(const GridContext& ctx, const EigenOptions& options) {
    const std::size_t total = ctx.nodes();
    EigenResult res;

    // lowest nonconstant mode along axis 0, plus seeded noise
    SplitMix64 rng(split_stream(options.seed, 0xe19e));
    GridFunction u(total);
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<double> x = ctx.node_coords(p);
        u[p] = std::sin(2.0 * M_PI * x[0] / ctx.period(0)) + 0.01 * rng.uniform(-1.0, 1.0);
    }
    u = ctx.project_zero_mean(u);
    double nrm = std::sqrt(ctx.inner(u, u));
    for (double& v : u) v /= nrm;

    auto energy_of_unit = [&](const GridFunction& w) {
        const int nj = ctx.dim() == 2 ? ctx.res(1) : 1;
        double num = 0.0;
        for (int d = 0; d < ctx.dim(); ++d)
            for (int i = 0; i < ctx.res(0); ++i)
                for (int j = 0; j < nj; ++j) {
                    std::vector<double> xi = ctx.face_covector(w, d, i, j);
                    num += ctx.face_sigma(d, i, j) * ctx.cell_volume() *
                           ctx.face_fstar2(d, i, j, xi);
                }
        return num / ctx.dim();
    };

    auto retract = [&](GridFunction w) {
        w = ctx.project_zero_mean(w);
        double s = std::sqrt(ctx.inner(w, w));
        for (double& v : w) v /= s;
        return w;
    };

    double lam = energy_of_unit(u);
    double step = 0.1;
    bool stalled = false;

    // descent on the zero-mean unit sphere; Polak-Ribiere direction updates
    // keep the h^-2 stiffness of the flux operator from stalling the plain
    // gradient iteration before the eigenpair residual is resolved
    GridFunction grad_prev, dir;
    double g2_prev = 0.0;

    for (res.iterations = 0; res.iterations < options.max_iters; ++res.iterations) {
        GridFunction lap = apply_laplacian(ctx, u);
        GridFunction grad(total);
        for (std::size_t p = 0; p < total; ++p) grad[p] = -2.0 * lap[p] - 2.0 * lam * u[p];
        grad = ctx.project_zero_mean(grad);
        double g2 = ctx.inner(grad, grad);
        res.residual = 0.5 * std::sqrt(g2);
        if (options.want_trace)
            res.trace.push_back({res.iterations, lam, res.residual, step});
        if (g2 == 0.0) {
            res.converged = true;
            break;
        }

        double beta = 0.0;
        if (!grad_prev.empty() && g2_prev > 0.0) {
            double num = 0.0;
            for (std::size_t p = 0; p < total; ++p)
                num += grad[p] * (grad[p] - grad_prev[p]) * ctx.node_sigma(p) *
                       ctx.cell_volume();
            beta = std::max(0.0, num / g2_prev);
        }
        if (dir.empty()) dir.assign(total, 0.0);
        double gd = 0.0;
        for (std::size_t p = 0; p < total; ++p) {
            dir[p] = -grad[p] + beta * dir[p];
            gd += grad[p] * dir[p] * ctx.node_sigma(p) * ctx.cell_volume();
        }
        if (gd >= 0.0) { // not a descent direction: restart with the gradient
            for (std::size_t p = 0; p < total; ++p) dir[p] = -grad[p];
            gd = -g2;
        }

        double t = std::min(std::max(step * 4.0, 1e-6), 1e3);
        bool accepted = false;
        double lam_new = lam;
        GridFunction cand;
        while (t >= 1e-18) {
            cand.assign(total, 0.0);
            for (std::size_t p = 0; p < total; ++p) cand[p] = u[p] + t * dir[p];
            cand = retract(std::move(cand));
            double e = energy_of_unit(cand);
            if (e <= lam + 1e-4 * t * gd) {
                accepted = true;
                lam_new = e;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        step = t;
        u = std::move(cand);
        grad_prev = std::move(grad);
        g2_prev = g2;
        double rel = std::fabs(lam - lam_new) / std::max(lam_new, 1e-300);
        lam = lam_new;
        if (rel < options.tol) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }

    GridFunction lap = apply_laplacian(ctx, u);
    GridFunction r(total);
    for (std::size_t p = 0; p < total; ++p) r[p] = lap[p] + lam * u[p];
    res.residual = std::sqrt(ctx.inner(r, r));
    res.lambda1 = lam;
    res.u = std::move(u);
    if (stalled) res.converged = true; // no descent direction left at round-off
    return res;
}

Prop31Check prop31_check(const GridContext& ctx, const GridFunction& u) {
    auto q = [&](double lam) {
        double s = 0.0;
        for (std::size_t p = 0; p < ctx.nodes(); ++p) {
            double d = u[p] - lam;
            s += d * d * ctx.measure_weight(p);
        }
        return s;
    };
    double lo = u.empty() ? 0.0 : *std::min_element(u.begin(), u.end());
    double hi = u.empty() ? 0.0 : *std::max_element(u.begin(), u.end());
    double pad = 0.1 * (hi - lo) + 1.0;
    lo -= pad;
    hi += pad;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double qc = q(c), qd = q(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (qc < qd) {
            b = d;
            d = c;
            qd = qc;
            c = b - gr * (b - a);
            qc = q(c);
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + gr * (b - a);
            qd = q(d);
        }
    }
    Prop31Check out;
    out.golden_minimum = q(0.5 * (a + b));
    out.at_mean = q(ctx.mean(u));
    return out;
}

DivergenceCheck divergence_theorem_check(const GridContext& ctx, const VectorField& field) {
    const int dim = ctx.dim();
    const int ni = ctx.res(0);
    const int nj = dim == 2 ? ctx.res(1) : 1;
    const double vol = ctx.cell_volume();

    // flux-form divergence: normal component of X sampled at faces
    std::array<std::vector<double>, 2> flux;
    for (int d = 0; d < dim; ++d) {
        flux[d].assign(ctx.nodes(), 0.0);
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < nj; ++j) {
                std::vector<double> xf = ctx.face_position(d, i, j);
                std::vector<double> xv = field.value(xf);
                flux[d][ctx.node_index(i, j)] =
                    ctx.face_sigma(d, i, j) * xv[static_cast<std::size_t>(d)] * vol /
                    ctx.spacing(d);
            }
    }

    DivergenceCheck out{0.0, 0.0};
    double total = 0.0;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j) {
            std::size_t p = ctx.node_index(i, j);
            double div_w = 0.0; // div(X) * sigma * vol at node
            div_w += flux[0][p] - flux[0][ctx.node_index(i - 1, j)];
            if (dim == 2) div_w += flux[1][p] - flux[1][ctx.node_index(i, j - 1)];
            total += div_w;
            out.scale += std::fabs(div_w);
        }
    out.total = std::fabs(total);
    return out;
}

} // namespace finsler
