#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/manifold.hpp"

namespace finsler {

// Norm F(x,y). Positively 1-homogeneous in y; rejects y = 0.
double finsler_norm(const ManifoldSpec& spec, const TangentSample& sample);

// Fundamental tensor g_ij(x,y) = 1/2 d^2(F^2)/dy^i dy^j. Symmetric positive
// definite on valid data; family fast paths for riemannian and randers, AD of
// the F^2 expansion otherwise.
TensorValue fundamental_tensor(const ManifoldSpec& spec, const TangentSample& sample);

// Same quantity, always through the AD path (internal oracle for the fast
// paths; exported for tests and the verify suites).
TensorValue fundamental_tensor_ad(const ManifoldSpec& spec, const TangentSample& sample);

// Cartan tensor C_ijk = 1/4 d^3(F^2)/dy^i dy^j dy^k. Totally symmetric,
// y^i C_ijk = 0.
TensorValue cartan_tensor(const ManifoldSpec& spec, const TangentSample& sample);
TensorValue cartan_tensor_ad(const ManifoldSpec& spec, const TangentSample& sample);

// Plain double matrices for internal consumers.
Mat fundamental_matrix(const ManifoldSpec& spec, const TangentSample& sample);
T3 cartan_cube(const ManifoldSpec& spec, const TangentSample& sample);

struct Violation {
    std::string invariant;
    std::vector<double> witness_x;
    std::vector<double> witness_y; // empty when the check is x-only
    double measured = 0.0;
    std::string detail;
};

struct ValidityReport {
    std::vector<Violation> violations;
    long samples = 0;
    std::uint64_t seed = 0;
    bool ok() const { return violations.empty(); }
};

// Randomized spec validation: symmetry and positive definiteness of the
// coefficient matrix, the strong-convexity bound of the randers 1-form,
// positivity of the measure density, and positive definiteness of g for
// generic norms. Deterministic for a given seed. Violations are data, not
// errors.
ValidityReport validate_spec(const ManifoldSpec& spec, long sample_count, std::uint64_t seed);

// Sampling box shared by validate_spec and the verify suites.
inline constexpr double kSampleBoxHalfWidth = 2.0;

void require_nonzero_y(const TangentSample& sample);

} // namespace finsler
