#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "photodev/liouvillian.hpp"
#include "photodev/model.hpp"
#include "photodev/rate_net.hpp"

namespace photodev {

enum class Regime { solar_cell, photoconductor, equilibrium };
const char* regime_name(Regime r);

// Everything downstream observables need for one parameter point. Both
// solution routes are kept: the vectorized Liouvillian NESS and the
// classical rate network (its channels/matrices double as the cross-check
// oracle and feed the Gillespie sampler).
struct DeviceSolution {
    DeviceParams params;
    double bias = 0.0;  // signed; equals params.V except in conductance stencils
    SystemSpec system;
    std::array<BathSpec, 3> baths;
    std::vector<JumpOperator> jumps;
    Liouvillian liouvillian;
    SteadyState state;
    std::vector<Channel> channels;
    std::array<RateMatrix, 3> rate_matrices;
};

DeviceSolution solve_device(const DeviceParams& p);
DeviceSolution solve_device(const DeviceParams& p, double bias);

// Tr[N_S D_alpha[rho]]; defined for the fermionic baths only (the photon
// bath exchanges no particles).
double particle_current(const BathSpec& bath, const SteadyState& rho, const Superoperator& D_bath);

// Tr[(H_S - mu_alpha N_S) D_alpha[rho]], mu_gamma = 0.
double heat_current(const BathSpec& bath, const SteadyState& rho, const Superoperator& D_bath,
                    const SystemSpec& system);

// Steady-state entropy production -(beta JQ_l + beta JQ_r + beta_gamma JQ_gamma).
double entropy_production_currents(double JQ_l, double JQ_r, double JQ_gamma, double beta,
                                   double beta_gamma);

struct SpohnResult {
    double total = 0.0;
    std::array<double, 3> per_bath{};  // each term is >= 0 (Spohn inequality)
    bool regularized = false;          // rho eigenvalues were clipped at 1e-300
};

// -sum_alpha Tr[D_alpha[rho] (log rho - log omega_alpha)] with grand-canonical
// omega_l, omega_r and omega_gamma = Z^-1 exp(-beta_gamma Pi_1 H Pi_1).
SpohnResult entropy_production_spohn(const SteadyState& rho, const Liouvillian& liouvillian,
                                     const SystemSpec& system, std::span<const BathSpec> baths);

// Q = V J / JQ_gamma; throws undefined_performance_error when
// |JQ_gamma| < 1e-14 (the bias-sweep divergence is reported, not fabricated).
double coefficient_of_performance(double J, double JQ_gamma, double V);

// Q > 1e-12 solar cell, Q < -1e-12 photoconductor, else equilibrium. Where
// Q is undefined (|JQ_gamma| < 1e-14) the sign of J decides instead.
Regime classify_regime(double J, double JQ_gamma, std::optional<double> Q);

struct ThermoReport {
    double J = 0.0;       // J = J_N^l = -J_N^r
    double JQ_l = 0.0;
    double JQ_r = 0.0;
    double JQ_gamma = 0.0;
    double sigma_dot = 0.0;
    double eta_C = 0.0;
    std::optional<double> Q;       // nullopt when |JQ_gamma| < 1e-14
    Regime regime = Regime::equilibrium;
    bool solar_cell_condition = false;  // j^gamma_21 > j^r_H - j^l_L
    double residual = 0.0;              // NESS solve residual
};

// Full observable set with the built-in consistency checks: particle
// conservation and the rate-form identities at 1e-12, the first law at
// 1e-10, the second law at -1e-12, the Q dual form at 1e-10*max(1,|Q|) and
// the entropy production identity sigma = beta JQ_gamma (eta_C - Q) at
// 1e-10. Violations throw numerical_error.
ThermoReport compute_thermo(const DeviceSolution& sol);

struct ConductanceResult {
    double G = 0.0;        // central difference at step h
    double G_fine = 0.0;   // central difference at step h/2
    double h = 0.0;
    bool richardson_ok = true;  // |G - G_fine| <= 1e-6 * max(|G|, |G_fine|)
    double max_residual = 0.0;  // worst NESS residual over the stencil
};

// G = dJ/dV at V=0 by central differences; params.V is ignored. Negative
// bias legs reuse mu_l/r = mu -/+ V/2 with the signed value. A Richardson
// disagreement sets richardson_ok = false (step-size warning), it is not
// an error.
ConductanceResult conductance(const DeviceParams& p, double h = 1e-4);

}  // namespace photodev
