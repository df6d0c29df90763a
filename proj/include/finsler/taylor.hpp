#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {
namespace ad {

// Forward-mode scalars.
//
// Dual       : value + first-order partials in m directions.
// Taylor<S>  : value + partials up to order 3 in m directions, with
//              coefficients of type S (double, or Dual for one extra
//              derivative level on top of the truncated expansion).
//
// Scalars with an empty direction set act as broadcastable constants, so
// generic code can mix literals and seeded variables freely.
//
// The value component of every operation is computed with exactly the same
// double operations a plain evaluation would use, so evaluating over a
// zero-seeded scalar reproduces the plain result bit for bit.

inline double scalar_value(double x) { return x; }

// Make the plain-double overloads first-class citizens of this namespace so
// generic code can call sin/exp/... unqualified for every scalar type.
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

inline void domain_check(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::DomainError, what);
}

// ---------------------------------------------------------------------------
// Dual: first order only.

class Dual {
public:
    Dual() : v_(0.0) {}
    Dual(double v) : v_(v) {} // NOLINT: implicit by design (constants)
    Dual(double v, std::size_t m, std::size_t direction) : v_(v), d_(m, 0.0) {
        d_[direction] = 1.0;
    }

    static Dual constant(double v, std::size_t m) {
        Dual r(v);
        r.d_.assign(m, 0.0);
        return r;
    }

    double value() const { return v_; }
    std::size_t directions() const { return d_.size(); }
    double deriv(std::size_t i) const { return i < d_.size() ? d_[i] : 0.0; }

    Dual operator-() const {
        Dual r(*this);
        r.v_ = -r.v_;
        for (double& x : r.d_) x = -x;
        return r;
    }

    Dual& operator+=(const Dual& o) {
        broadcast_with(o);
        v_ += o.v_;
        for (std::size_t i = 0; i < o.d_.size(); ++i) d_[i] += o.d_[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        broadcast_with(o);
        v_ -= o.v_;
        for (std::size_t i = 0; i < o.d_.size(); ++i) d_[i] -= o.d_[i];
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }

    friend Dual operator*(const Dual& a, const Dual& b) {
        Dual r;
        r.v_ = a.v_ * b.v_;
        r.d_.assign(std::max(a.d_.size(), b.d_.size()), 0.0);
        for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] += a.d_[i] * b.v_;
        for (std::size_t i = 0; i < b.d_.size(); ++i) r.d_[i] += a.v_ * b.d_[i];
        return r;
    }

    friend Dual operator/(const Dual& a, const Dual& b) {
        domain_check(b.v_ != 0.0, "division by zero");
        Dual r;
        r.v_ = a.v_ / b.v_;
        r.d_.assign(std::max(a.d_.size(), b.d_.size()), 0.0);
        for (std::size_t i = 0; i < a.d_.size(); ++i) r.d_[i] += a.d_[i];
        for (std::size_t i = 0; i < b.d_.size(); ++i) r.d_[i] -= r.v_ * b.d_[i];
        for (double& x : r.d_) x /= b.v_;
        return r;
    }

    // u = phi(f): d(u) = phi'(f.v) df
    friend Dual compose1(const Dual& f, double phi0, double phi1) {
        Dual r;
        r.v_ = phi0;
        r.d_.resize(f.d_.size());
        for (std::size_t i = 0; i < f.d_.size(); ++i) r.d_[i] = phi1 * f.d_[i];
        return r;
    }

private:
    void broadcast_with(const Dual& o) {
        if (d_.size() < o.d_.size()) d_.resize(o.d_.size(), 0.0);
    }

    double v_;
    std::vector<double> d_;
};

inline double scalar_value(const Dual& x) { return x.value(); }

inline Dual sin(const Dual& x) { return compose1(x, std::sin(x.value()), std::cos(x.value())); }
inline Dual cos(const Dual& x) { return compose1(x, std::cos(x.value()), -std::sin(x.value())); }
inline Dual exp(const Dual& x) { return compose1(x, std::exp(x.value()), std::exp(x.value())); }
inline Dual tanh(const Dual& x) {
    double t = std::tanh(x.value());
    return compose1(x, t, 1.0 - t * t);
}
inline Dual log(const Dual& x) {
    domain_check(x.value() > 0.0, "log of non-positive value");
    return compose1(x, std::log(x.value()), 1.0 / x.value());
}
inline Dual sqrt(const Dual& x) {
    domain_check(x.value() >= 0.0, "sqrt of negative value");
    double s = std::sqrt(x.value());
    return compose1(x, s, 0.5 / s);
}

// ---------------------------------------------------------------------------
// Taylor<S>: truncated expansion of order 1, 2 or 3 in m directions.
//
// Storage is dense; the second- and third-order blocks hold all index
// combinations (they stay symmetric because every operation preserves
// symmetry). Sizes here are tiny (m <= 8 in practice).

template <class S>
class Taylor {
public:
    Taylor() : m_(0), v_(S(0.0)) {}
    Taylor(double v) : m_(0), v_(S(v)) {} // NOLINT: implicit constant
    template <class U = S, class = std::enable_if_t<!std::is_same_v<U, double>>>
    Taylor(const S& v) : m_(0), v_(v) {} // NOLINT: implicit constant

    // Seeded variable: d/d(direction) = 1, higher blocks zero.
    static Taylor variable(const S& v, std::size_t m, int order, std::size_t direction) {
        Taylor r;
        r.m_ = m;
        r.v_ = v;
        r.g_.assign(m, S(0.0));
        r.g_[direction] = S(1.0);
        if (order >= 2) r.h_.assign(m * m, S(0.0));
        if (order >= 3) r.t_.assign(m * m * m, S(0.0));
        return r;
    }

    static Taylor constant(const S& v, std::size_t m, int order) {
        Taylor r;
        r.m_ = m;
        r.v_ = v;
        r.g_.assign(m, S(0.0));
        if (order >= 2) r.h_.assign(m * m, S(0.0));
        if (order >= 3) r.t_.assign(m * m * m, S(0.0));
        return r;
    }

    std::size_t directions() const { return m_; }
    int order() const {
        if (!t_.empty()) return 3;
        if (!h_.empty()) return 2;
        if (!g_.empty()) return 1;
        return 0;
    }

    const S& value() const { return v_; }
    S deriv(std::size_t i) const { return i < g_.size() ? g_[i] : S(0.0); }
    S deriv2(std::size_t i, std::size_t j) const {
        return h_.empty() ? S(0.0) : h_[i * m_ + j];
    }
    S deriv3(std::size_t i, std::size_t j, std::size_t k) const {
        return t_.empty() ? S(0.0) : t_[(i * m_ + j) * m_ + k];
    }

    Taylor operator-() const {
        Taylor r(*this);
        r.v_ = -r.v_;
        for (S& x : r.g_) x = -x;
        for (S& x : r.h_) x = -x;
        for (S& x : r.t_) x = -x;
        return r;
    }

    friend Taylor operator+(const Taylor& a, const Taylor& b) {
        Taylor r = shape_union(a, b);
        r.v_ = a.v_ + b.v_;
        add_into(r.g_, a.g_, b.g_, false);
        add_into(r.h_, a.h_, b.h_, false);
        add_into(r.t_, a.t_, b.t_, false);
        return r;
    }

    friend Taylor operator-(const Taylor& a, const Taylor& b) {
        Taylor r = shape_union(a, b);
        r.v_ = a.v_ - b.v_;
        add_into(r.g_, a.g_, b.g_, true);
        add_into(r.h_, a.h_, b.h_, true);
        add_into(r.t_, a.t_, b.t_, true);
        return r;
    }

    friend Taylor operator*(const Taylor& a, const Taylor& b) {
        Taylor r = shape_union(a, b);
        const std::size_t m = r.m_;
        r.v_ = a.v_ * b.v_;
        for (std::size_t i = 0; i < r.g_.size(); ++i)
            r.g_[i] = a.d(i) * b.v_ + a.v_ * b.d(i);
        if (!r.h_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    r.h_[i * m + j] = a.dd(i, j) * b.v_ + a.d(i) * b.d(j) +
                                      a.d(j) * b.d(i) + a.v_ * b.dd(i, j);
        }
        if (!r.t_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t k = 0; k < m; ++k)
                        r.t_[(i * m + j) * m + k] =
                            a.ddd(i, j, k) * b.v_ + a.dd(i, j) * b.d(k) +
                            a.dd(i, k) * b.d(j) + a.dd(j, k) * b.d(i) +
                            a.d(i) * b.dd(j, k) + a.d(j) * b.dd(i, k) +
                            a.d(k) * b.dd(i, j) + a.v_ * b.ddd(i, j, k);
        }
        return r;
    }

    // Direct quotient rules (solved from a = u*b) keep the value component
    // equal to a.v / b.v exactly.
    friend Taylor operator/(const Taylor& a, const Taylor& b) {
        domain_check(scalar_value(b.v_) != 0.0, "division by zero");
        Taylor u = shape_union(a, b);
        const std::size_t m = u.m_;
        u.v_ = a.v_ / b.v_;
        for (std::size_t i = 0; i < u.g_.size(); ++i)
            u.g_[i] = (a.d(i) - u.v_ * b.d(i)) / b.v_;
        if (!u.h_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    u.h_[i * m + j] = (a.dd(i, j) - u.g_[i] * b.d(j) - u.g_[j] * b.d(i) -
                                       u.v_ * b.dd(i, j)) /
                                      b.v_;
        }
        if (!u.t_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t k = 0; k < m; ++k)
                        u.t_[(i * m + j) * m + k] =
                            (a.ddd(i, j, k) - u.h_[i * m + j] * b.d(k) -
                             u.h_[i * m + k] * b.d(j) - u.h_[j * m + k] * b.d(i) -
                             u.g_[i] * b.dd(j, k) - u.g_[j] * b.dd(i, k) -
                             u.g_[k] * b.dd(i, j) - u.v_ * b.ddd(i, j, k)) /
                            b.v_;
        }
        return u;
    }

    // u = phi(f) given phi and its derivatives at f.value().
    friend Taylor compose(const Taylor& f, const S& p0, const S& p1, const S& p2, const S& p3) {
        Taylor u(f);
        const std::size_t m = u.m_;
        u.v_ = p0;
        for (std::size_t i = 0; i < u.g_.size(); ++i) u.g_[i] = p1 * f.g_[i];
        if (!u.h_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    u.h_[i * m + j] = p2 * f.g_[i] * f.g_[j] + p1 * f.h_[i * m + j];
        }
        if (!u.t_.empty()) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    for (std::size_t k = 0; k < m; ++k)
                        u.t_[(i * m + j) * m + k] =
                            p3 * f.g_[i] * f.g_[j] * f.g_[k] +
                            p2 * (f.h_[i * m + j] * f.g_[k] + f.h_[i * m + k] * f.g_[j] +
                                  f.h_[j * m + k] * f.g_[i]) +
                            p1 * f.t_[(i * m + j) * m + k];
        }
        return u;
    }

private:
    // broadcast accessors: missing blocks read as zero
    S d(std::size_t i) const { return i < g_.size() ? g_[i] : S(0.0); }
    S dd(std::size_t i, std::size_t j) const {
        return h_.empty() ? S(0.0) : h_[i * m_ + j];
    }
    S ddd(std::size_t i, std::size_t j, std::size_t k) const {
        return t_.empty() ? S(0.0) : t_[(i * m_ + j) * m_ + k];
    }

    static Taylor shape_union(const Taylor& a, const Taylor& b) {
        const Taylor& big = (a.m_ >= b.m_) ? a : b;
        Taylor r;
        r.m_ = big.m_;
        r.g_.assign(std::max(a.g_.size(), b.g_.size()), S(0.0));
        r.h_.assign(std::max(a.h_.size(), b.h_.size()), S(0.0));
        r.t_.assign(std::max(a.t_.size(), b.t_.size()), S(0.0));
        return r;
    }

    static void add_into(std::vector<S>& out, const std::vector<S>& a,
                         const std::vector<S>& b, bool negate_b) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            S av = i < a.size() ? a[i] : S(0.0);
            S bv = i < b.size() ? b[i] : S(0.0);
            out[i] = negate_b ? av - bv : av + bv;
        }
    }

    std::size_t m_;
    S v_;
    std::vector<S> g_, h_, t_;
};

template <class S>
double scalar_value(const Taylor<S>& x) {
    return scalar_value(x.value());
}

template <class S>
Taylor<S> sin(const Taylor<S>& x) {
    using std::sin;
    using std::cos;
    S s = sin(x.value()), c = cos(x.value());
    return compose(x, s, c, -s, -c);
}
template <class S>
Taylor<S> cos(const Taylor<S>& x) {
    using std::sin;
    using std::cos;
    S c = cos(x.value()), s = sin(x.value());
    return compose(x, c, -s, -c, s);
}
template <class S>
Taylor<S> exp(const Taylor<S>& x) {
    using std::exp;
    S e = exp(x.value());
    return compose(x, e, e, e, e);
}
template <class S>
Taylor<S> tanh(const Taylor<S>& x) {
    using std::tanh;
    S t = tanh(x.value());
    S one(1.0), two(2.0);
    S sech2 = one - t * t;
    // (tanh)'' = -2 t sech^2, (tanh)''' = -2 sech^2 (1 - 3 t^2)
    return compose(x, t, sech2, S(-2.0) * t * sech2, S(-2.0) * sech2 * (one - S(3.0) * t * t));
}
template <class S>
Taylor<S> log(const Taylor<S>& x) {
    using std::log;
    domain_check(scalar_value(x.value()) > 0.0, "log of non-positive value");
    S inv = S(1.0) / x.value();
    S inv2 = inv * inv;
    return compose(x, log(x.value()), inv, -inv2, S(2.0) * inv2 * inv);
}
template <class S>
Taylor<S> sqrt(const Taylor<S>& x) {
    using std::sqrt;
    domain_check(scalar_value(x.value()) >= 0.0, "sqrt of negative value");
    S s = sqrt(x.value());
    S inv = S(0.5) / s;                  // 1/(2 sqrt)
    S d2 = S(-0.5) * inv / x.value();    // -1/(4 x^{3/2})
    S d3 = S(-1.5) * d2 / x.value();     // 3/(8 x^{5/2})
    return compose(x, s, inv, d2, d3);
}

// ---------------------------------------------------------------------------
// Powers. Integer exponents use repeated multiplication so derivatives stay
// exact for negative bases; the same loop runs for every scalar type.

template <class T>
T pow_int(const T& base, int e) {
    if (e == 0) return T(1.0);
    bool neg = e < 0;
    unsigned k = neg ? static_cast<unsigned>(-(long long)e) : static_cast<unsigned>(e);
    T acc = base;
    for (unsigned i = 1; i < k; ++i) acc = acc * base;
    if (neg) {
        domain_check(scalar_value(acc) != 0.0, "zero raised to a negative power");
        return T(1.0) / acc;
    }
    return acc;
}

inline double pow_real(double base, double p) {
    domain_check(base > 0.0, "power of non-positive base with non-integer exponent");
    return std::pow(base, p);
}

inline Dual pow_real(const Dual& base, double p) {
    domain_check(base.value() > 0.0, "power of non-positive base with non-integer exponent");
    return compose1(base, std::pow(base.value(), p), p * std::pow(base.value(), p - 1.0));
}

template <class S>
Taylor<S> pow_real(const Taylor<S>& base, double p) {
    using std::pow;
    domain_check(scalar_value(base.value()) > 0.0,
                 "power of non-positive base with non-integer exponent");
    S v = base.value();
    S p0 = pow(v, S(p));
    S p1 = S(p) * pow(v, S(p - 1.0));
    S p2 = S(p * (p - 1.0)) * pow(v, S(p - 2.0));
    S p3 = S(p * (p - 1.0) * (p - 2.0)) * pow(v, S(p - 3.0));
    return compose(base, p0, p1, p2, p3);
}

inline Dual pow(const Dual& base, const Dual& p) { // NOLINT
    // general power via exp(p log b); used only when the exponent is dynamic
    return exp(p * log(base));
}
template <class S>
Taylor<S> pow(const Taylor<S>& base, const Taylor<S>& p) {
    return exp(p * log(base));
}

} // namespace ad
} // namespace finsler
