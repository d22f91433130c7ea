#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "photodev/counting.hpp"
#include "photodev/model.hpp"

namespace photodev {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// One classical transition channel, rate r >= 0 for from -> to. Labels match
// the jump-operator channel keys so counting specs apply to both pictures.
struct Channel {
    BathId bath{};
    int from_level = 0;
    int to_level = 0;
    double rate = 0.0;
    std::string label;
};

// Channel rates recomputed directly from the bath occupations (independent
// of the jump-operator route; the two are cross-checked in tests).
std::vector<Channel> build_channels(const SystemSpec& system, std::span<const BathSpec> baths);

// R_mn = r_mn - delta_mn sum_i r_in; columns sum to zero by construction.
struct RateMatrix {
    BathId bath{};
    Mat4 R = Mat4::Zero();
};

RateMatrix build_rate_matrix(const BathSpec& bath, const SystemSpec& system);

// Null vector of R_total = sum_alpha R^alpha, normalized to a probability
// vector. Kernel must be one-dimensional (second-smallest singular value
// above 1e-8*sigma_max) or non_unique_steady_state_error is thrown.
Vec4 rate_steady_state(const Mat4& R_total);

// j[bath](m,n) = r_mn p_n - r_nm p_m; antisymmetric by construction.
struct ProbabilityCurrents {
    std::array<Mat4, 3> j{Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};

    const Mat4& of(BathId b) const { return j[bath_index(b)]; }
};

ProbabilityCurrents probability_currents(std::span<const RateMatrix> rates, const Vec4& p);

// The four steady-state current conservation sums, one per level; each must
// vanish at the NESS. Returned (not asserted) so callers can report them.
std::array<double, 4> check_conservation_laws(const ProbabilityCurrents& c);

struct GillespieResult {
    double mean_rate = 0.0;       // E[N(t)]/t
    double mean_stderr = 0.0;
    double variance_rate = 0.0;   // Var[N(t)]/t from batch means
    double variance_stderr = 0.0;
    std::uint64_t n_jumps = 0;
    std::uint64_t seed = 0;
    int n_batches = 0;
    double horizon = 0.0;
};

// Exact stochastic simulation of the channel-resolved jump network over a
// time horizon, counting channel firings with the spec's weights. Batch
// means (>= 50 batches) give the variance rate and its standard error.
// Reproducible for a fixed seed; hand-rolled sampling so results do not
// depend on the standard library's distribution implementations.
GillespieResult gillespie_sample(std::span<const Channel> channels, const CountingSpec& counting,
                                 double horizon, std::uint64_t seed, int n_batches = 50);

// Horizon corresponding to ~n_jumps expected jumps at the steady state p.
double gillespie_horizon(std::span<const Channel> channels, const Vec4& p,
                         double n_jumps = 1e6);

}  // namespace photodev
