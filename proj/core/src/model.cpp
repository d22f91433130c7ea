#include "photodev/model.hpp"

#include <cmath>
#include <sstream>

#include "photodev/errors.hpp"

namespace photodev {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw invalid_parameter_error(msg);
}

}  // namespace

std::vector<std::string> validate_params(const DeviceParams& p) {
    for (double v : {p.eps_H, p.eps_L, p.U, p.mu, p.V, p.beta, p.beta_gamma, p.Gamma, p.z, p.nu}) {
        require(std::isfinite(v), "non-finite device parameter");
    }
    require(p.eps_L > p.eps_H, "eps_L must exceed eps_H");
    require(p.U >= 0.0, "U must be >= 0");
    require(p.V >= 0.0, "V must be >= 0");
    require(p.z >= 0.0 && p.z <= 1.0, "z must lie in [0,1]");
    require(p.Gamma > 0.0, "Gamma must be > 0");
    require(p.nu >= 0.0, "nu must be >= 0");
    require(p.beta > p.beta_gamma && p.beta_gamma > 0.0, "need beta > beta_gamma > 0");

    std::vector<std::string> warnings;
    if (p.mu < p.eps_H || p.mu > p.eps_L) {
        std::ostringstream os;
        os << "mu = " << p.mu << " outside [eps_H, eps_L] = [" << p.eps_H << ", " << p.eps_L
           << "]; main-text operating assumption violated";
        warnings.push_back(os.str());
    }
    return warnings;
}

SystemSpec build_system(const DeviceParams& p) {
    validate_params(p);
    SystemSpec s;
    s.energies = {0.0, p.eps_H, p.eps_L, p.eps_H + p.eps_L + p.U};
    s.particle_numbers = {0, 1, 1, 2};
    s.bohr_frequencies = {p.eps_H, p.eps_H + p.U, p.eps_L, p.eps_L + p.U, p.eps_L - p.eps_H};
    return s;
}

const char* bath_name(BathId b) {
    switch (b) {
        case BathId::l: return "l";
        case BathId::r: return "r";
        case BathId::gamma: return "gamma";
    }
    return "?";
}

std::array<BathSpec, 3> make_baths(const DeviceParams& p) {
    validate_params(p);
    return make_baths(p, p.V);
}

std::array<BathSpec, 3> make_baths(const DeviceParams& p, double bias) {
    std::array<BathSpec, 3> baths;
    baths[0] = {BathId::l, p.beta, p.mu - bias / 2.0, p.Gamma, p.z * p.Gamma, 0.0};
    baths[1] = {BathId::r, p.beta, p.mu + bias / 2.0, p.z * p.Gamma, p.Gamma, 0.0};
    baths[2] = {BathId::gamma, p.beta_gamma, 0.0, 0.0, 0.0, p.nu};
    return baths;
}

double fermi_dirac(double x, double beta, double mu) {
    if (!std::isfinite(x) || !std::isfinite(beta) || !std::isfinite(mu) || beta <= 0.0) {
        throw invalid_parameter_error("fermi_dirac: non-finite input or beta <= 0");
    }
    const double a = beta * (x - mu);
    if (a > 700.0) return 0.0;
    if (a < -700.0) return 1.0;
    if (a > 0.0) {
        const double e = std::exp(-a);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(a) + 1.0);
}

double fermi_dirac_hole(double x, double beta, double mu) {
    return fermi_dirac(2.0 * mu - x, beta, mu);
}

double bose_einstein(double x, double beta_gamma) {
    if (!std::isfinite(x) || !std::isfinite(beta_gamma)) {
        throw invalid_parameter_error("bose_einstein: non-finite input");
    }
    if (x <= 0.0 || beta_gamma <= 0.0) {
        throw domain_error("bose_einstein: requires x > 0 and beta_gamma > 0");
    }
    const double a = beta_gamma * x;
    return 1.0 / std::expm1(a > 700.0 ? 700.0 : a);
}

}  // namespace photodev
