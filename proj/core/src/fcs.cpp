#include "photodev/fcs.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <functional>
#include <limits>

#include "photodev/errors.hpp"

namespace photodev {

namespace {

// Tr[L_k rho L_k^dag] for L_k = sqrt(r)|to><from| is r * rho_{from,from}.
double channel_flux(const JumpOperator& j, const Mat4c& rho) {
    return j.rate * rho(j.from_level, j.from_level).real();
}

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hw * kKronrodNodes[i]);
        fv[14 - i] = f(c + hw * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    for (int i = 0; i < 8; ++i) {
        kron += kKronrodWeights[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
    }
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 3; ++i) gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return {hw * kron, std::abs(hw * (kron - gauss))};
}

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol, int depth) {
    const PanelResult p = gauss_kronrod(f, a, b);
    if (p.error <= tol || depth >= 48) return p.integral;
    const double c = 0.5 * (a + b);
    return adaptive_quadrature(f, a, c, 0.5 * tol, depth + 1) +
           adaptive_quadrature(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

CountingSpec counting_spec_particles(BathId bath) {
    if (bath == BathId::gamma) {
        throw domain_error("counting_spec_particles: use counting_spec_photons for the photon bath");
    }
    CountingSpec spec;
    spec.bath = bath;
    for (const char* k : {"10", "32", "20", "31"}) {
        spec.weights[std::string(bath_name(bath)) + ":" + k] = 1;
    }
    for (const char* k : {"01", "23", "02", "13"}) {
        spec.weights[std::string(bath_name(bath)) + ":" + k] = -1;
    }
    return spec;
}

CountingSpec counting_spec_photons() {
    CountingSpec spec;
    spec.bath = BathId::gamma;
    spec.weights["gamma:12"] = 1;
    spec.weights["gamma:21"] = -1;
    return spec;
}

double average_current_fcs(const CountingSpec& spec, std::span<const JumpOperator> jumps,
                           const SteadyState& rho) {
    double sum = 0.0;
    for (const JumpOperator& j : jumps) {
        const int w = spec.weight(j.label);
        if (w != 0) sum += w * channel_flux(j, rho.rho);
    }
    return sum;
}

double dynamical_activity(const CountingSpec& spec, std::span<const JumpOperator> jumps,
                          const SteadyState& rho) {
    double sum = 0.0;
    for (const JumpOperator& j : jumps) {
        const int w = spec.weight(j.label);
        if (w != 0) sum += static_cast<double>(w) * w * channel_flux(j, rho.rho);
    }
    return sum;
}

Superoperator counting_superoperator(const CountingSpec& spec,
                                     std::span<const JumpOperator> jumps) {
    Superoperator s;
    for (const JumpOperator& j : jumps) {
        const int w = spec.weight(j.label);
        if (w == 0 || j.rate == 0.0) continue;
        // L (x) L for the real L_k = sqrt(r)|to><from|: a single entry of r
        // at row (to,to), column (from,from) in vectorized indexing.
        const int row = 4 * j.to_level + j.to_level;
        const int col = 4 * j.from_level + j.from_level;
        s.matrix(row, col) += w * j.rate;
    }
    return s;
}

NoiseReport noise_drazin(const CountingSpec& spec, const Liouvillian& liouvillian,
                         std::span<const JumpOperator> jumps, const SteadyState& rho) {
    NoiseReport rep;
    rep.method = NoiseReport::Method::drazin;
    rep.I = average_current_fcs(spec, jumps, rho);
    rep.M = dynamical_activity(spec, jumps, rho);

    const Superoperator jsup = counting_superoperator(spec, jumps);
    const Vec16c vrho = vectorize(rho.rho);
    const Vec16c rhs_full = jsup.matrix * vrho - rep.I * vrho;

    Mat16c A = liouvillian.total.matrix;
    A.row(0) = trace_functional().transpose();
    Vec16c b = rhs_full;
    b(0) = 0.0;
    const Eigen::PartialPivLU<Mat16c> lu(A);
    const Vec16c x = lu.solve(b);
    const double solve_resid = (A * x - b).norm() / std::max(1.0, b.norm());
    if (!std::isfinite(solve_resid) || solve_resid > 1e-8) {
        throw non_unique_steady_state_error(
            2, "noise_drazin: bordered resolvent solve failed (non-unique steady state?)");
    }

    rep.D = rep.M - 2.0 * trace_functional().dot(jsup.matrix * x).real();
    rep.snr = rep.D > 0.0 ? rep.I * rep.I / rep.D : quiet_nan();
    return rep;
}

NoiseReport noise_quadrature(const CountingSpec& spec, const Liouvillian& liouvillian,
                             std::span<const JumpOperator> jumps, const SteadyState& rho,
                             double t_max, double rtol) {
    NoiseReport rep;
    rep.method = NoiseReport::Method::quadrature;
    rep.I = average_current_fcs(spec, jumps, rho);
    rep.M = dynamical_activity(spec, jumps, rho);

    const Mat16c& L = liouvillian.total.matrix;
    Eigen::ComplexEigenSolver<Mat16c> es(L);
    if (es.info() != Eigen::Success) throw numerical_error("noise_quadrature: eigensolve failed");
    const Vec16c lambda = es.eigenvalues();

    // Spectral gap: largest real part after excluding the one eigenvalue
    // closest to zero (the steady-state mode).
    int zero_idx = 0;
    for (int i = 1; i < 16; ++i) {
        if (std::abs(lambda(i)) < std::abs(lambda(zero_idx))) zero_idx = i;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 16; ++i) {
        if (i == zero_idx) continue;
        gap = std::min(gap, -lambda(i).real());
    }
    if (!(gap > 1e-10)) {
        throw slow_mixing_error("noise_quadrature: spectral gap below 1e-10");
    }
    if (t_max <= 0.0) t_max = 40.0 / gap;
    rep.t_max = t_max;

    const Superoperator jsup = counting_superoperator(spec, jumps);
    const Vec16c y = jsup.matrix * vectorize(rho.rho);
    const Vec16c u_left = (trace_functional().transpose() * jsup.matrix).transpose();
    const double at_zero = u_left.dot(y).real() - rep.I * rep.I;

    // Integrand as a sum of 16 complex exponentials via the eigenbasis;
    // fall back to a dense matrix exponential if the basis is too
    // ill-conditioned to reproduce the tau = 0 value.
    const Vec16c row_part = (u_left.transpose() * es.eigenvectors()).transpose();  // (a^T S)_i
    const Vec16c col_part = es.eigenvectors().partialPivLu().solve(y);             // (S^-1 y)_i
    const Vec16c coeff = row_part.cwiseProduct(col_part);
    const double recon = coeff.sum().real() - rep.I * rep.I;
    std::function<double(double)> integrand;
    if (std::abs(recon - at_zero) <= 1e-8 * (std::abs(at_zero) + rep.M + 1e-300)) {
        integrand = [coeff, lambda, I2 = rep.I * rep.I](double t) {
            std::complex<double> s = 0.0;
            for (int i = 0; i < 16; ++i) s += coeff(i) * std::exp(lambda(i) * t);
            return s.real() - I2;
        };
    } else {
        integrand = [L, u_left, y, I2 = rep.I * rep.I](double t) {
            const Mat16c e = (L * t).exp();
            return u_left.dot(e * y).real() - I2;
        };
    }

    const double scale = std::abs(at_zero) + 1e-300;
    const double integral =
        adaptive_quadrature(integrand, 0.0, t_max, rtol * scale * std::min(t_max, 1.0 / gap), 0);
    rep.tail_bound = std::abs(integrand(t_max)) / gap;
    rep.D = rep.M + 2.0 * integral;
    rep.snr = rep.D > 0.0 ? rep.I * rep.I / rep.D : quiet_nan();
    return rep;
}

double snr(double J, double D) {
    if (!(D > 0.0)) throw invalid_noise_error("snr: noise must be positive");
    return J * J / D;
}

}  // namespace photodev
