#include "photodev/liouvillian.hpp"

#include <sstream>

#include "photodev/errors.hpp"

namespace photodev {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Mat4c ket_bra(int to, int from) {
    Mat4c m = Mat4c::Zero();
    m(to, from) = 1.0;
    return m;
}

Mat16c kron(const Mat4c& a, const Mat4c& b) {
    Mat16c k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) k.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return k;
}

// Single-channel dissipator in vectorized form:
// L . L^dag  ->  conj(L) (x) L,   -1/2 {L^dag L, .}  ->  -1/2 (I (x) L^dag L + (L^dag L)^T (x) I).
Mat16c dissipator_term(const Mat4c& L) {
    const Mat4c LdL = L.adjoint() * L;
    const Mat4c id = Mat4c::Identity();
    return kron(L.conjugate(), L) - 0.5 * (kron(id, LdL) + kron(LdL.transpose(), id));
}

}  // namespace

std::string channel_label(BathId bath, int to_level, int from_level) {
    return std::string(bath_name(bath)) + ":" + std::to_string(to_level) +
           std::to_string(from_level);
}

std::vector<JumpOperator> build_jump_operators(const SystemSpec& system,
                                               std::span<const BathSpec> baths) {
    const double eps_H = system.bohr_frequencies[0];
    const double eps_HU = system.bohr_frequencies[1];
    const double eps_L = system.bohr_frequencies[2];
    const double eps_LU = system.bohr_frequencies[3];
    const double optical_gap = system.bohr_frequencies[4];

    std::vector<JumpOperator> jumps;
    jumps.reserve(18);
    auto add = [&](BathId bath, int to, int from, double rate) {
        jumps.push_back({bath, from, to, rate, channel_label(bath, to, from)});
    };

    for (const BathSpec& bath : baths) {
        switch (bath.id) {
            case BathId::l:
            case BathId::r: {
                auto f = [&](double x) { return fermi_dirac(x, bath.beta, bath.mu); };
                auto fh = [&](double x) { return fermi_dirac_hole(x, bath.beta, bath.mu); };
                add(bath.id, 1, 0, bath.gamma_H * f(eps_H));
                add(bath.id, 0, 1, bath.gamma_H * fh(eps_H));
                add(bath.id, 3, 2, bath.gamma_H * f(eps_HU));
                add(bath.id, 2, 3, bath.gamma_H * fh(eps_HU));
                add(bath.id, 2, 0, bath.gamma_L * f(eps_L));
                add(bath.id, 0, 2, bath.gamma_L * fh(eps_L));
                add(bath.id, 3, 1, bath.gamma_L * f(eps_LU));
                add(bath.id, 1, 3, bath.gamma_L * fh(eps_LU));
                break;
            }
            case BathId::gamma: {
                const double n = bose_einstein(optical_gap, bath.beta);
                add(bath.id, 2, 1, bath.nu * n);
                add(bath.id, 1, 2, bath.nu * (1.0 + n));
                break;
            }
            default:
                throw config_error("build_jump_operators: unknown bath id");
        }
    }
    return jumps;
}

Vec16c vectorize(const Mat4c& rho) {
    return Eigen::Map<const Vec16c>(rho.data());  // Eigen stores column-major
}

Mat4c unvectorize(const Vec16c& v) {
    return Eigen::Map<const Mat4c>(v.data());
}

Mat4c apply(const Superoperator& s, const Mat4c& rho) {
    return unvectorize(s.matrix * vectorize(rho));
}

Vec16c trace_functional() {
    return vectorize(Mat4c::Identity());
}

Liouvillian build_liouvillian(const SystemSpec& system, std::span<const JumpOperator> jumps) {
    Liouvillian l;

    Mat4c H = Mat4c::Zero();
    for (int m = 0; m < 4; ++m) H(m, m) = system.energies[m];
    const Mat4c id = Mat4c::Identity();
    l.total.matrix = -kI * (kron(id, H) - kron(H.transpose(), id));

    for (const JumpOperator& j : jumps) {
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
            throw invalid_parameter_error("jump operator rate must be finite and >= 0: " + j.label);
        }
        const Mat4c L = std::sqrt(j.rate) * ket_bra(j.to_level, j.from_level);
        l.dissipators[bath_index(j.bath)].matrix += dissipator_term(L);
    }
    for (const auto& d : l.dissipators) l.total.matrix += d.matrix;
    return l;
}

SteadyState steady_state(const Superoperator& L, double tol) {
    // Kernel certificate from the singular spectrum.
    Eigen::JacobiSVD<Mat16c> svd(L.matrix);
    const auto& sigma = svd.singularValues();
    const double sigma_max = sigma(0);
    int kernel_dim = 0;
    for (int i = 0; i < 16; ++i) {
        if (sigma(i) <= 1e-8 * sigma_max) ++kernel_dim;
    }
    if (kernel_dim != 1) {
        std::ostringstream os;
        os << "steady state kernel dimension " << kernel_dim << " (second-smallest singular value "
           << sigma(14) << " vs sigma_max " << sigma_max << ")";
        throw non_unique_steady_state_error(kernel_dim, os.str());
    }

    Mat16c A = L.matrix;
    A.row(0) = trace_functional().transpose();
    Vec16c b = Vec16c::Zero();
    b(0) = 1.0;
    const Vec16c x = A.partialPivLu().solve(b);

    SteadyState s;
    s.rho = unvectorize(x);
    s.kernel_dimension = kernel_dim;
    s.residual = (L.matrix * x).norm() / sigma_max;
    s.trace_error = std::abs(s.rho.trace() - std::complex<double>(1.0, 0.0));
    s.hermiticity_error = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (s.rho + s.rho.adjoint()));
    s.min_eigenvalue = es.eigenvalues().minCoeff();

    if (s.residual > tol) {
        throw numerical_error("steady state residual " + std::to_string(s.residual) +
                              " exceeds tolerance");
    }
    if (s.trace_error > 1e-12 || s.hermiticity_error > 1e-12 || s.min_eigenvalue < -1e-10) {
        throw numerical_error("steady state certificate violated (trace/hermiticity/positivity)");
    }
    return s;
}

}  // namespace photodev
