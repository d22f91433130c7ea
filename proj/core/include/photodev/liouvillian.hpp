#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "photodev/model.hpp"

namespace photodev {

using Mat4c = Eigen::Matrix4cd;
using Mat16c = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vec16c = Eigen::Vector<std::complex<double>, 16>;

// One Lindblad channel sqrt(rate) |to><from|. Labels follow the paper's
// channel keys, "<bath>:<to><from>" (e.g. "l:10" fills HOMO from bath l).
struct JumpOperator {
    BathId bath{};
    int from_level = 0;
    int to_level = 0;
    double rate = 0.0;
    std::string label;
};

std::string channel_label(BathId bath, int to_level, int from_level);

// The 8 channels per fermionic bath plus 2 photon channels, in the paper's
// order (10, 01, 32, 23, 20, 02, 31, 13; then 21, 12). Channels with zero
// rate are kept so counting specs always resolve.
std::vector<JumpOperator> build_jump_operators(const SystemSpec& system,
                                               std::span<const BathSpec> baths);

// Dense 16x16 matrix acting on column-vectorized 4x4 density matrices.
struct Superoperator {
    Mat16c matrix = Mat16c::Zero();
};

// Column-stacking vectorization and its inverse.
Vec16c vectorize(const Mat4c& rho);
Mat4c unvectorize(const Vec16c& v);
Mat4c apply(const Superoperator& s, const Mat4c& rho);

// vec(I)^T, the trace functional; a left null vector of any full Liouvillian.
Vec16c trace_functional();

struct Liouvillian {
    Superoperator total;                        // -i[H,.] + sum_alpha D_alpha
    std::array<Superoperator, 3> dissipators;   // indexed by bath_index()
};

Liouvillian build_liouvillian(const SystemSpec& system, std::span<const JumpOperator> jumps);

struct SteadyState {
    Mat4c rho = Mat4c::Zero();
    double residual = 0.0;           // ||L vec(rho)||_2 / sigma_max(L)
    double trace_error = 0.0;        // |tr(rho) - 1|
    double hermiticity_error = 0.0;  // ||rho - rho^dag||_inf
    double min_eigenvalue = 0.0;     // of (rho + rho^dag)/2
    int kernel_dimension = 1;        // singular values below 1e-8*sigma_max
};

// NESS via the bordered system (row 0 of L replaced by the trace functional,
// RHS e_0), dense LU with partial pivoting. Kernel uniqueness is certified
// by the SVD of L: the second-smallest singular value must exceed
// 1e-8*sigma_max, otherwise non_unique_steady_state_error. Certificates
// (residual <= tol, trace within 1e-12, hermiticity within 1e-12, minimum
// eigenvalue >= -1e-10) are enforced; violations throw numerical_error.
SteadyState steady_state(const Superoperator& L, double tol = 1e-11);

}  // namespace photodev
