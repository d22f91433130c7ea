#pragma once

#include <span>

#include "photodev/counting.hpp"
#include "photodev/liouvillian.hpp"

namespace photodev {

// w = +1 on the four filling channels {10, 32, 20, 31}, -1 on the four
// depletion channels {01, 23, 02, 13} of a fermionic bath, so N(t) counts
// particles entering the system from that bath.
CountingSpec counting_spec_particles(BathId bath);

// +1 on the emission channel gamma:12, -1 on absorption gamma:21; the mean
// counting current equals -j^gamma_21.
CountingSpec counting_spec_photons();

struct NoiseReport {
    double I = 0.0;    // average counting current
    double M = 0.0;    // dynamical activity
    double D = 0.0;    // variance growth rate
    double snr = 0.0;  // I^2/D; NaN when D <= 0 (e.g. all-zero weights)
    enum class Method { drazin, quadrature } method = Method::drazin;
    double t_max = 0.0;       // quadrature horizon (quadrature only)
    double tail_bound = 0.0;  // |integrand(t_max)|/gap (quadrature only)
};

// sum_k w_k Tr[L_k rho L_k^dag] = sum_k w_k r_k <from_k|rho|from_k>.
double average_current_fcs(const CountingSpec& spec, std::span<const JumpOperator> jumps,
                           const SteadyState& rho);

// sum_k w_k^2 Tr[L_k rho L_k^dag].
double dynamical_activity(const CountingSpec& spec, std::span<const JumpOperator> jumps,
                          const SteadyState& rho);

// J[.] = sum_k w_k L_k . L_k^dag in vectorized form.
Superoperator counting_superoperator(const CountingSpec& spec,
                                     std::span<const JumpOperator> jumps);

// Noise D = M + 2 Int_0^inf { Tr[J e^{L tau} J[rho]] - I^2 } dtau evaluated
// in closed form: solve the bordered system L x = J[rho] - I rho with
// tr(x) = 0 (a Drazin-inverse action), then D = M - 2 Tr[J[x]].
NoiseReport noise_drazin(const CountingSpec& spec, const Liouvillian& liouvillian,
                         std::span<const JumpOperator> jumps, const SteadyState& rho);

// Same integral by adaptive Gauss-Kronrod quadrature to t_max = 40/gap
// (gap = |largest nonzero real part of the spectrum|); the independent
// oracle for noise_drazin. Throws slow_mixing_error when gap < 1e-10.
NoiseReport noise_quadrature(const CountingSpec& spec, const Liouvillian& liouvillian,
                             std::span<const JumpOperator> jumps, const SteadyState& rho,
                             double t_max = 0.0, double rtol = 1e-9);

// J^2/D; throws invalid_noise_error unless D > 0.
double snr(double J, double D);

}  // namespace photodev
