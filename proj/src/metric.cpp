#include "finsler/metric.hpp"

#include <cmath>

#include "finsler/rng.hpp"

namespace finsler {

using ad::Taylor;

void require_nonzero_y(const TangentSample& sample) {
    for (double v : sample.y)
        if (v != 0.0) return;
    throw Error(ErrorCode::DegenerateInput, "tensor evaluation requested at y = 0");
}

double finsler_norm(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    return eval_F<double>(spec, sample.x, sample.y);
}

namespace {

// Randers ingredients at a point: alpha, per-direction l_i = a_ij y^j / alpha,
// and s_i = (alpha b_i - beta l_i)/alpha^2. Then
//   g_ij = (F/alpha)(a_ij - l_i l_j) + (l_i + b_i)(l_j + b_j)
//   C_ijk = 1/2 (h_ij s_k + h_ik s_j + h_jk s_i),  h_ij = a_ij - l_i l_j.
struct RandersAt {
    double alpha, beta, f;
    Mat a;
    std::vector<double> b, l, s;
};

RandersAt randers_at(const ManifoldSpec& spec, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    RandersAt r;
    r.a = eval_a<double>(spec, sample.x);
    r.b = spec.family() == Family::Randers ? eval_b<double>(spec, sample.x)
                                           : std::vector<double>(n, 0.0);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) quad += r.a(i, j) * sample.y[i] * sample.y[j];
    if (!(quad > 0.0))
        throw Error(ErrorCode::NotPositiveDefinite, "coefficient matrix not positive on y");
    r.alpha = std::sqrt(quad);
    r.beta = 0.0;
    for (std::size_t i = 0; i < n; ++i) r.beta += r.b[i] * sample.y[i];
    r.f = r.alpha + r.beta;
    r.l.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) r.l[i] += r.a(i, j) * sample.y[j];
        r.l[i] /= r.alpha;
    }
    r.s.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        r.s[i] = (r.alpha * r.b[i] - r.beta * r.l[i]) / (r.alpha * r.alpha);
    return r;
}

Mat fundamental_matrix_ad(const ManifoldSpec& spec, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    using T = Taylor<double>;
    std::vector<T> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = T::constant(sample.x[i], n, 2);
    for (std::size_t i = 0; i < n; ++i) y[i] = T::variable(sample.y[i], n, 2, i);
    T f2 = eval_F2<T>(spec, x, y);
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = 0.5 * f2.deriv2(i, j);
    return g;
}

T3 cartan_cube_ad(const ManifoldSpec& spec, const TangentSample& sample) {
    const std::size_t n = sample.x.size();
    using T = Taylor<double>;
    std::vector<T> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = T::constant(sample.x[i], n, 3);
    for (std::size_t i = 0; i < n; ++i) y[i] = T::variable(sample.y[i], n, 3, i);
    T f2 = eval_F2<T>(spec, x, y);
    T3 c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) c(i, j, k) = 0.25 * f2.deriv3(i, j, k);
    return c;
}

TensorValue wrap_matrix(const Mat& g, const TangentSample& sample) {
    TensorValue t;
    t.variance = {Variance::Down, Variance::Down};
    t.extent = g.rows();
    t.data = g.data();
    t.sample = sample;
    return t;
}

TensorValue wrap_cube(const T3& c, const TangentSample& sample) {
    TensorValue t;
    t.variance = {Variance::Down, Variance::Down, Variance::Down};
    t.extent = c.extent();
    t.data = c.data();
    t.sample = sample;
    return t;
}

void check_positive_definite(const Mat& g) {
    if (!positive_definite(g))
        throw Error(ErrorCode::NotPositiveDefinite,
                    "fundamental tensor is not positive definite at this sample");
}

} // namespace

Mat fundamental_matrix(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    const std::size_t n = sample.x.size();
    switch (spec.family()) {
    case Family::Riemannian:
        return eval_a<double>(spec, sample.x);
    case Family::Randers: {
        RandersAt r = randers_at(spec, sample);
        Mat g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g(i, j) = (r.f / r.alpha) * (r.a(i, j) - r.l[i] * r.l[j]) +
                          (r.l[i] + r.b[i]) * (r.l[j] + r.b[j]);
        return g;
    }
    case Family::Generic:
        return fundamental_matrix_ad(spec, sample);
    }
    throw Error(ErrorCode::DomainError, "unknown family");
}

T3 cartan_cube(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    const std::size_t n = sample.x.size();
    switch (spec.family()) {
    case Family::Riemannian:
        return T3(n); // zero
    case Family::Randers: {
        RandersAt r = randers_at(spec, sample);
        T3 c(n);
        auto h = [&](std::size_t i, std::size_t j) { return r.a(i, j) - r.l[i] * r.l[j]; };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    c(i, j, k) = 0.5 * (h(i, j) * r.s[k] + h(i, k) * r.s[j] + h(j, k) * r.s[i]);
        return c;
    }
    case Family::Generic:
        return cartan_cube_ad(spec, sample);
    }
    throw Error(ErrorCode::DomainError, "unknown family");
}

TensorValue fundamental_tensor(const ManifoldSpec& spec, const TangentSample& sample) {
    Mat g = fundamental_matrix(spec, sample);
    check_positive_definite(g);
    return wrap_matrix(g, sample);
}

TensorValue fundamental_tensor_ad(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    Mat g = fundamental_matrix_ad(spec, sample);
    check_positive_definite(g);
    return wrap_matrix(g, sample);
}

TensorValue cartan_tensor(const ManifoldSpec& spec, const TangentSample& sample) {
    return wrap_cube(cartan_cube(spec, sample), sample);
}

TensorValue cartan_tensor_ad(const ManifoldSpec& spec, const TangentSample& sample) {
    require_nonzero_y(sample);
    return wrap_cube(cartan_cube_ad(spec, sample), sample);
}

// ---------------------------------------------------------------------------

ValidityReport validate_spec(const ManifoldSpec& spec, long sample_count, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(spec.dimension());
    ValidityReport report;
    report.samples = sample_count;
    report.seed = seed;
    SplitMix64 rng(split_stream(seed, 0x76616c69));

    auto record = [&](const char* what, const std::vector<double>& x,
                      const std::vector<double>& y, double measured, std::string detail) {
        report.violations.push_back({what, x, y, measured, std::move(detail)});
    };

    // deterministic y probes catch norms that degenerate on coordinate axes
    std::vector<std::vector<double>> probes;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        probes.push_back(e);
        e[i] = -1.0;
        probes.push_back(e);
    }
    probes.push_back(std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));

    for (long s = 0; s < sample_count; ++s) {
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = rng.uniform(-kSampleBoxHalfWidth, kSampleBoxHalfWidth);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& v : y) {
                v = rng.uniform(-1.0, 1.0);
                norm2 += v * v;
            }
        } while (norm2 < 1e-4);

        try {
            double sigma = eval_sigma<double>(spec, std::span<const double>(x));
            if (!(sigma > 0.0))
                record("measure density must be positive", x, {}, sigma, "sigma(x) <= 0");
        } catch (const Error& e) {
            record("measure density evaluation failed", x, {}, 0.0, e.what());
        }

        if (spec.family() != Family::Generic) {
            Mat a;
            try {
                a = eval_a<double>(spec, std::span<const double>(x));
            } catch (const Error& e) {
                record("coefficient evaluation failed", x, {}, 0.0, e.what());
                continue;
            }
            double asym = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    asym = std::max(asym, std::fabs(a(i, j) - a(j, i)));
                    scale = std::max(scale, std::fabs(a(i, j)));
                }
            if (asym > 1e-12 * std::max(scale, 1.0))
                record("coefficient matrix must be symmetric", x, {}, asym, "");
            else if (!positive_definite(a))
                record("coefficient matrix must be positive definite", x, {}, 0.0, "");
            else if (spec.family() == Family::Randers) {
                std::vector<double> b = eval_b<double>(spec, std::span<const double>(x));
                Mat ainv = inverse(a);
                double beta2 = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) beta2 += ainv(i, j) * b[i] * b[j];
                if (!(beta2 < 1.0))
                    record("randers 1-form must satisfy ||beta||_a < 1", x, {}, std::sqrt(beta2),
                           "");
            }
        } else {
            auto check_g = [&](const std::vector<double>& yy) {
                TangentSample ts{x, yy};
                try {
                    double f = eval_F<double>(spec, ts.x, ts.y);
                    if (!(f > 0.0)) {
                        record("norm must be positive away from y = 0", x, yy, f, "");
                        return;
                    }
                    Mat g = fundamental_matrix_ad(spec, ts);
                    if (!positive_definite(g))
                        record("fundamental tensor must be positive definite", x, yy, 0.0, "");
                } catch (const Error& e) {
                    record("norm evaluation failed", x, yy, 0.0, e.what());
                }
            };
            if (s < static_cast<long>(probes.size()))
                check_g(probes[static_cast<std::size_t>(s)]);
            check_g(y);
        }
    }
    return report;
}

} // namespace finsler
