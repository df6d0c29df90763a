#include "finsler/manifold.hpp"

namespace finsler {

const char* family_name(Family f) {
    switch (f) {
    case Family::Riemannian: return "riemannian";
    case Family::Randers: return "randers";
    case Family::Generic: return "generic";
    }
    return "?";
}

ManifoldSpec ManifoldSpec::riemannian(int n, std::vector<SyntaxTree> a, SyntaxTree measure) {
    if (a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw Error(ErrorCode::SpecSchema, "riemannian family needs an n-by-n coefficient matrix");
    ManifoldSpec s;
    s.n_ = n;
    s.family_ = Family::Riemannian;
    s.a_ = std::move(a);
    s.measure_ = std::move(measure);
    return s;
}

ManifoldSpec ManifoldSpec::randers(int n, std::vector<SyntaxTree> a, std::vector<SyntaxTree> b,
                                   SyntaxTree measure) {
    if (a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw Error(ErrorCode::SpecSchema, "randers family needs an n-by-n coefficient matrix");
    if (b.size() != static_cast<std::size_t>(n))
        throw Error(ErrorCode::SpecSchema, "randers family needs an n-vector of 1-form coefficients");
    ManifoldSpec s;
    s.n_ = n;
    s.family_ = Family::Randers;
    s.a_ = std::move(a);
    s.b_ = std::move(b);
    s.measure_ = std::move(measure);
    return s;
}

ManifoldSpec ManifoldSpec::generic(int n, SyntaxTree f, SyntaxTree measure) {
    if (f.dimension() != 2 * n)
        throw Error(ErrorCode::SpecSchema,
                    "generic family expression must use 2n variables (x1..xn, x(n+1)..x(2n))");
    ManifoldSpec s;
    s.n_ = n;
    s.family_ = Family::Generic;
    s.f_ = std::move(f);
    s.measure_ = std::move(measure);
    return s;
}

} // namespace finsler
