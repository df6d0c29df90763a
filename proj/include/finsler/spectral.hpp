#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "finsler/fields.hpp"
#include "finsler/legendre.hpp"
#include "finsler/manifold.hpp"

namespace finsler {

using GridFunction = std::vector<double>;

// Periodic 1D/2D grid carrying the discretized dual metric at cell faces and
// the measure weights at nodes.
//
// The discrete energy samples F*(x, du)^2 at faces, with the face covector
// built from the normal difference plus (in 2D) the average of the four
// adjacent transverse differences. The discrete Laplacian is the exact
// variational derivative of that energy, which makes the summation-by-parts
// identity, the divergence theorem, and energy = -<u, lap u> hold to
// round-off rather than to truncation order.
class GridContext {
public:
    GridContext(const ManifoldSpec& spec, std::array<int, 2> resolution,
                std::array<double, 2> periods);

    int dim() const { return dim_; }
    int res(int axis) const { return res_[axis]; }
    double period(int axis) const { return period_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    std::size_t nodes() const { return total_; }
    double cell_volume() const { return vol_; }
    const ManifoldSpec& spec() const { return spec_; }

    std::size_t node_index(int i, int j = 0) const {
        return static_cast<std::size_t>(wrap(i, 0)) * static_cast<std::size_t>(dim_ == 2 ? res_[1] : 1) +
               static_cast<std::size_t>(dim_ == 2 ? wrap(j, 1) : 0);
    }
    std::vector<double> node_coords(std::size_t p) const;
    double node_sigma(std::size_t p) const { return node_sigma_[p]; }
    double measure_weight(std::size_t p) const { return node_sigma_[p] * vol_; }
    double total_measure() const { return total_measure_; }

    // L2(mu) inner product and mean
    double inner(const GridFunction& a, const GridFunction& b) const;
    double mean(const GridFunction& u) const;
    GridFunction project_zero_mean(const GridFunction& u) const;

    // face covector of u at face (dir, i[, j]); components indexed by axis
    std::vector<double> face_covector(const GridFunction& u, int dir, int i, int j = 0) const;
    std::vector<double> face_position(int dir, int i, int j = 0) const;
    double face_sigma(int dir, int i, int j = 0) const;
    // y = g*(x_f, xi) xi at a face (zero covector maps to zero)
    std::vector<double> face_velocity(int dir, int i, int j, const std::vector<double>& xi) const;
    // F*(x_f, xi)^2
    double face_fstar2(int dir, int i, int j, const std::vector<double>& xi) const;

private:
    int wrap(int i, int axis) const {
        int nres = res_[axis];
        int r = i % nres;
        return r < 0 ? r + nres : r;
    }
    std::size_t face_index(int i, int j) const {
        return static_cast<std::size_t>(wrap(i, 0)) * static_cast<std::size_t>(dim_ == 2 ? res_[1] : 1) +
               static_cast<std::size_t>(dim_ == 2 ? wrap(j, 1) : 0);
    }

    ManifoldSpec spec_;
    int dim_;
    std::array<int, 2> res_;
    std::array<double, 2> period_;
    std::array<double, 2> h_;
    std::size_t total_ = 0;
    double vol_ = 0.0;
    std::vector<double> node_sigma_;
    double total_measure_ = 0.0;

    struct FaceClosed {
        std::vector<double> a_star; // n*n row-major
        std::vector<double> b_star; // n
    };
    bool closed_form_ = false;
    std::array<std::vector<double>, 2> face_sigma_;
    std::array<std::vector<FaceClosed>, 2> face_dual_;
};

// Rayleigh quotient of the canonical energy functional; u is projected to
// zero mean first. Throws ZeroFunction when nothing remains.
double energy(const GridContext& ctx, const GridFunction& u);

// Conservative flux-form Laplacian (exact variational derivative of the
// discrete energy).
GridFunction apply_laplacian(const GridContext& ctx, const GridFunction& u);

// The discrete pairing sum of dphi(grad u) d mu that the weak identity
// equates with -sum phi (lap u) d mu.
double weak_pairing(const GridContext& ctx, const GridFunction& phi, const GridFunction& u);

struct EigenOptions {
    long max_iters = 50000;
    double tol = 1e-10; // relative energy stall
    std::uint64_t seed = 0;
    bool want_trace = false;
};

struct EigenTraceRow {
    long iter;
    double energy;
    double residual;
    double step;
};

struct EigenResult {
    double lambda1 = 0.0;
    GridFunction u;
    long iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<EigenTraceRow> trace;
};

// Projected gradient descent on the energy over the zero-mean unit sphere,
// Armijo backtracking, seeded lowest-mode initialization.
EigenResult minimize_rayleigh(const GridContext& ctx, const EigenOptions& options);

struct Prop31Check {
    double golden_minimum; // min over lambda of sum (u - lambda)^2 dmu, by golden section
    double at_mean;        // the same integrand evaluated at lambda = mu-mean of u
};

Prop31Check prop31_check(const GridContext& ctx, const GridFunction& u);

struct DivergenceCheck {
    double total; // | sum div(X) dmu |
    double scale; // sum |div(X)| dmu
};

DivergenceCheck divergence_theorem_check(const GridContext& ctx, const VectorField& field);

} // namespace finsler
