#include "photodev/thermo.hpp"

#include <cmath>

#include "photodev/errors.hpp"

namespace photodev {

namespace {

constexpr double kPerformanceFloor = 1e-14;  // |JQ_gamma| below this -> Q undefined
constexpr double kRegimeTol = 1e-12;

Mat4c number_operator(const SystemSpec& system) {
    Mat4c n = Mat4c::Zero();
    for (int m = 0; m < 4; ++m) n(m, m) = system.particle_numbers[m];
    return n;
}

Mat4c hamiltonian(const SystemSpec& system) {
    Mat4c h = Mat4c::Zero();
    for (int m = 0; m < 4; ++m) h(m, m) = system.energies[m];
    return h;
}

void check(bool ok, const char* what) {
    if (!ok) throw numerical_error(what);
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::solar_cell: return "solar_cell";
        case Regime::photoconductor: return "photoconductor";
        case Regime::equilibrium: return "equilibrium";
    }
    return "?";
}

DeviceSolution solve_device(const DeviceParams& p) {
    validate_params(p);
    return solve_device(p, p.V);
}

DeviceSolution solve_device(const DeviceParams& p, double bias) {
    DeviceSolution s;
    s.params = p;
    s.bias = bias;
    s.system = build_system(p);
    s.baths = make_baths(p, bias);
    s.jumps = build_jump_operators(s.system, s.baths);
    s.liouvillian = build_liouvillian(s.system, s.jumps);
    s.state = steady_state(s.liouvillian.total);
    s.channels = build_channels(s.system, s.baths);
    for (int b = 0; b < 3; ++b) s.rate_matrices[b] = build_rate_matrix(s.baths[b], s.system);
    return s;
}

double particle_current(const BathSpec& bath, const SteadyState& rho,
                        const Superoperator& D_bath) {
    if (bath.id == BathId::gamma) {
        throw domain_error("particle_current: the photon bath carries no particle current");
    }
    Mat4c n = Mat4c::Zero();
    n(1, 1) = 1.0;
    n(2, 2) = 1.0;
    n(3, 3) = 2.0;
    return (n * apply(D_bath, rho.rho)).trace().real();
}

double heat_current(const BathSpec& bath, const SteadyState& rho, const Superoperator& D_bath,
                    const SystemSpec& system) {
    const Mat4c op = hamiltonian(system) - bath.mu * number_operator(system);
    return (op * apply(D_bath, rho.rho)).trace().real();
}

double entropy_production_currents(double JQ_l, double JQ_r, double JQ_gamma, double beta,
                                   double beta_gamma) {
    return -(beta * JQ_l + beta * JQ_r + beta_gamma * JQ_gamma);
}

SpohnResult entropy_production_spohn(const SteadyState& rho, const Liouvillian& liouvillian,
                                     const SystemSpec& system, std::span<const BathSpec> baths) {
    SpohnResult out;

    Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (rho.rho + rho.rho.adjoint()));
    Eigen::Vector4d ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        if (ev(i) < 1e-300) {
            ev(i) = 1e-300;
            out.regularized = true;
        }
    }
    const Mat4c log_rho =
        es.eigenvectors() * ev.array().log().matrix().asDiagonal() * es.eigenvectors().adjoint();

    for (const BathSpec& bath : baths) {
        // log omega_alpha directly from the exponents; the reference states
        // are diagonal so no matrix logarithm is needed.
        Eigen::Vector4d expo;
        if (bath.id == BathId::gamma) {
            // omega_gamma = Z^-1 exp(-beta_gamma Pi_1 H Pi_1): unit weight on
            // the 0- and 2-particle states.
            expo << 0.0, -bath.beta * system.energies[1], -bath.beta * system.energies[2], 0.0;
        } else {
            for (int m = 0; m < 4; ++m) {
                expo(m) = -bath.beta * (system.energies[m] - bath.mu * system.particle_numbers[m]);
            }
        }
        const double shift = expo.maxCoeff();
        const double log_z = shift + std::log((expo.array() - shift).exp().sum());
        Mat4c log_omega = Mat4c::Zero();
        for (int m = 0; m < 4; ++m) log_omega(m, m) = expo(m) - log_z;

        const Mat4c d_rho = apply(liouvillian.dissipators[bath_index(bath.id)], rho.rho);
        const double term = -((d_rho * (log_rho - log_omega)).trace().real());
        out.per_bath[bath_index(bath.id)] = term;
        out.total += term;
    }
    return out;
}

double coefficient_of_performance(double J, double JQ_gamma, double V) {
    if (std::abs(JQ_gamma) < kPerformanceFloor) {
        throw undefined_performance_error("coefficient of performance undefined: |JQ_gamma| < 1e-14");
    }
    return V * J / JQ_gamma;
}

Regime classify_regime(double J, double JQ_gamma, std::optional<double> Q) {
    const double key = (std::abs(JQ_gamma) < kPerformanceFloor || !Q) ? J : *Q;
    if (key > kRegimeTol) return Regime::solar_cell;
    if (key < -kRegimeTol) return Regime::photoconductor;
    return Regime::equilibrium;
}

ThermoReport compute_thermo(const DeviceSolution& sol) {
    const auto& [bath_l, bath_r, bath_g] = sol.baths;
    const auto& D = sol.liouvillian.dissipators;

    ThermoReport rep;
    rep.residual = sol.state.residual;
    rep.J = particle_current(bath_l, sol.state, D[bath_index(BathId::l)]);
    const double J_r = particle_current(bath_r, sol.state, D[bath_index(BathId::r)]);
    rep.JQ_l = heat_current(bath_l, sol.state, D[bath_index(BathId::l)], sol.system);
    rep.JQ_r = heat_current(bath_r, sol.state, D[bath_index(BathId::r)], sol.system);
    rep.JQ_gamma = heat_current(bath_g, sol.state, D[bath_index(BathId::gamma)], sol.system);

    check(std::abs(rep.J + J_r) <= 1e-12, "particle conservation J_l + J_r = 0 violated");

    // Rate-form cross-checks (Appendix-C style sums over probability currents
    // evaluated at the same populations).
    Vec4 pops;
    for (int m = 0; m < 4; ++m) pops(m) = sol.state.rho(m, m).real();
    const ProbabilityCurrents cur = probability_currents(sol.rate_matrices, pops);
    const Mat4& jl = cur.of(BathId::l);
    const Mat4& jr = cur.of(BathId::r);
    const Mat4& jg = cur.of(BathId::gamma);
    const double J_rate = jl(1, 0) + jl(2, 0) + jl(3, 1) + jl(3, 2);
    const double JQg_rate = (sol.params.eps_L - sol.params.eps_H) * jg(2, 1);
    check(std::abs(rep.J - J_rate) <= 1e-12, "particle current rate form disagrees");
    check(std::abs(rep.JQ_gamma - JQg_rate) <= 1e-12, "photon heat current rate form disagrees");

    // First law at the NESS: (mu_r - mu_l) J = sum_alpha JQ_alpha.
    const double first_law =
        (bath_r.mu - bath_l.mu) * rep.J - (rep.JQ_l + rep.JQ_r + rep.JQ_gamma);
    check(std::abs(first_law) <= 1e-10, "first law residual exceeds 1e-10");

    rep.sigma_dot = entropy_production_currents(rep.JQ_l, rep.JQ_r, rep.JQ_gamma,
                                                sol.params.beta, sol.params.beta_gamma);
    check(rep.sigma_dot >= -1e-12, "second law violated: sigma_dot < -1e-12");

    rep.eta_C = 1.0 - sol.params.beta_gamma / sol.params.beta;

    if (std::abs(rep.JQ_gamma) >= kPerformanceFloor) {
        const double q = coefficient_of_performance(rep.J, rep.JQ_gamma, sol.bias);
        // Appendix-D form; shares the 1/j^gamma_21 divergence, so the
        // comparison is relative once |Q| > 1.
        const double j_rH = jr(1, 0) + jr(3, 2);
        const double j_lL = jl(2, 0) + jl(3, 1);
        const double q_rate =
            sol.bias / (sol.params.eps_L - sol.params.eps_H) * (1.0 - (j_rH - j_lL) / jg(2, 1));
        check(std::abs(q - q_rate) <= 1e-10 * std::max(1.0, std::abs(q)),
              "coefficient of performance dual form disagrees");
        rep.Q = q;

        const double identity = rep.sigma_dot - sol.params.beta * rep.JQ_gamma * (rep.eta_C - q);
        check(std::abs(identity) <= 1e-10, "sigma = beta JQ_gamma (eta_C - Q) identity violated");

        if (rep.JQ_gamma > 0.0 && q > 0.0) {
            check(q <= rep.eta_C + 1e-12, "Carnot bound violated");
        }
        rep.solar_cell_condition = jg(2, 1) > j_rH - j_lL;
    }

    rep.regime = classify_regime(rep.J, rep.JQ_gamma, rep.Q);
    return rep;
}

ConductanceResult conductance(const DeviceParams& p, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw invalid_parameter_error("conductance: step h must be positive and finite");
    }
    DeviceParams base = p;
    base.V = 0.0;
    validate_params(base);

    ConductanceResult r;
    r.h = h;
    auto current = [&](double bias) {
        const DeviceSolution sol = solve_device(base, bias);
        r.max_residual = std::max(r.max_residual, sol.state.residual);
        return particle_current(sol.baths[0], sol.state,
                                sol.liouvillian.dissipators[bath_index(BathId::l)]);
    };
    r.G = (current(h) - current(-h)) / (2.0 * h);
    r.G_fine = (current(h / 2.0) - current(-h / 2.0)) / h;
    r.richardson_ok =
        std::abs(r.G - r.G_fine) <= 1e-6 * std::max(std::abs(r.G), std::abs(r.G_fine));
    return r;
}

}  // namespace photodev
