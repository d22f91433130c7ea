#pragma once

#include <array>
#include <string>
#include <vector>

namespace photodev {

// All model parameters. Energies in eV, hbar = 1, so rates Gamma and nu
// carry eV units; beta = 39.2 / beta_gamma = 2 reproduce the room/sun
// temperatures of the reference device. Defaults are the reference device.
struct DeviceParams {
    double eps_H = -1.0;      // HOMO level
    double eps_L = 2.0;       // LUMO level, eps_L > eps_H
    double U = 0.0;           // Coulomb repulsion, >= 0
    double mu = 0.0;          // chemical potential at zero bias
    double V = 0.0;           // bias, >= 0; mu_l = mu - V/2, mu_r = mu + V/2
    double beta = 39.2;       // fermionic inverse temperature
    double beta_gamma = 2.0;  // photon inverse temperature, beta > beta_gamma > 0
    double Gamma = 1.0;       // base coupling rate, > 0
    double z = 1.0;           // coupling symmetry, in [0,1]; z=1 symmetric, z=0 totally asymmetric
    double nu = 0.0;          // photon rate, >= 0
};

// Hard violations throw invalid_parameter_error; the soft operating
// assumption eps_H <= mu <= eps_L only produces a warning string (bias
// sweeps push mu_l, mu_r outside that window on purpose).
std::vector<std::string> validate_params(const DeviceParams& p);

// Fock basis |0>, |1>=HOMO, |2>=LUMO, |3>=doubly occupied.
struct SystemSpec {
    std::array<double, 4> energies;       // E = (0, eps_H, eps_L, eps_H+eps_L+U)
    std::array<int, 4> particle_numbers;  // N = (0, 1, 1, 2)
    // Transition energies used by the jump operators:
    // eps_H, eps_H+U, eps_L, eps_L+U, eps_L-eps_H.
    std::array<double, 5> bohr_frequencies;
};

SystemSpec build_system(const DeviceParams& p);

enum class BathId { l, r, gamma };

constexpr int bath_index(BathId b) { return static_cast<int>(b); }
const char* bath_name(BathId b);

struct BathSpec {
    BathId id{};
    double beta = 0.0;
    double mu = 0.0;       // 0 for the photon bath
    double gamma_H = 0.0;  // coupling to HOMO (fermionic baths)
    double gamma_L = 0.0;  // coupling to LUMO (fermionic baths)
    double nu = 0.0;       // photon rate (gamma bath)
};

// mu_l = mu - V/2, mu_r = mu + V/2; Gamma_H^l = Gamma_L^r = Gamma and
// Gamma_L^l = Gamma_H^r = z*Gamma.
std::array<BathSpec, 3> make_baths(const DeviceParams& p);

// Same, with a signed bias override (conductance evaluates V < 0 by swapping
// mu_l and mu_r through the same formulas). Skips the V >= 0 check.
std::array<BathSpec, 3> make_baths(const DeviceParams& p, double bias);

// [exp(beta(x-mu)) + 1]^-1, stable for |beta(x-mu)| up to 700; saturates to
// exactly 0/1 beyond the clamp.
double fermi_dirac(double x, double beta, double mu);

// 1 - fermi_dirac(x), evaluated as [exp(-beta(x-mu)) + 1]^-1. The subtracted
// form loses all precision once beta(mu-x) > ~37, which zeroes the dark
// device's depletion rates; always use this for hole occupations.
double fermi_dirac_hole(double x, double beta, double mu);

// [exp(beta_gamma*x) - 1]^-1 for x > 0.
double bose_einstein(double x, double beta_gamma);

}  // namespace photodev
