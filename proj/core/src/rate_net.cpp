#include "photodev/rate_net.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "photodev/errors.hpp"
#include "photodev/liouvillian.hpp"

namespace photodev {

std::vector<Channel> build_channels(const SystemSpec& system, std::span<const BathSpec> baths) {
    const double eps_H = system.bohr_frequencies[0];
    const double eps_HU = system.bohr_frequencies[1];
    const double eps_L = system.bohr_frequencies[2];
    const double eps_LU = system.bohr_frequencies[3];
    const double optical_gap = system.bohr_frequencies[4];

    std::vector<Channel> ch;
    ch.reserve(18);
    auto add = [&](BathId bath, int to, int from, double rate) {
        ch.push_back({bath, from, to, rate, channel_label(bath, to, from)});
    };
    for (const BathSpec& bath : baths) {
        if (bath.id == BathId::gamma) {
            const double n = bose_einstein(optical_gap, bath.beta);
            add(bath.id, 2, 1, bath.nu * n);
            add(bath.id, 1, 2, bath.nu * (1.0 + n));
            continue;
        }
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
    }
    return ch;
}

RateMatrix build_rate_matrix(const BathSpec& bath, const SystemSpec& system) {
    RateMatrix rm;
    rm.bath = bath.id;
    const std::array<BathSpec, 1> one{bath};
    for (const Channel& c : build_channels(system, one)) {
        rm.R(c.to_level, c.from_level) += c.rate;
        rm.R(c.from_level, c.from_level) -= c.rate;
    }
    return rm;
}

Vec4 rate_steady_state(const Mat4& R_total) {
    Eigen::JacobiSVD<Mat4> svd(R_total, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    int kernel_dim = 0;
    for (int i = 0; i < 4; ++i) {
        if (sigma(i) <= 1e-8 * sigma(0)) ++kernel_dim;
    }
    if (kernel_dim != 1) {
        std::ostringstream os;
        os << "rate matrix kernel dimension " << kernel_dim;
        throw non_unique_steady_state_error(kernel_dim, os.str());
    }
    Vec4 p = svd.matrixV().col(3);
    if (p.sum() < 0.0) p = -p;
    // Roundoff can leave tiny negative entries in the null vector.
    for (int i = 0; i < 4; ++i) {
        if (p(i) < 0.0) {
            if (p(i) < -1e-12) throw numerical_error("rate steady state has a negative population");
            p(i) = 0.0;
        }
    }
    p /= p.sum();
    if ((R_total * p).cwiseAbs().maxCoeff() > 1e-12) {
        throw numerical_error("rate steady state residual exceeds 1e-12");
    }
    return p;
}

ProbabilityCurrents probability_currents(std::span<const RateMatrix> rates, const Vec4& p) {
    ProbabilityCurrents out;
    for (const RateMatrix& rm : rates) {
        Mat4& j = out.j[bath_index(rm.bath)];
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                if (m == n) continue;
                j(m, n) = rm.R(m, n) * p(n) - rm.R(n, m) * p(m);
            }
        }
    }
    return out;
}

std::array<double, 4> check_conservation_laws(const ProbabilityCurrents& c) {
    const Mat4& jl = c.of(BathId::l);
    const Mat4& jr = c.of(BathId::r);
    const Mat4& jg = c.of(BathId::gamma);
    return {
        jl(0, 1) + jl(0, 2) + jr(0, 1) + jr(0, 2),
        jl(1, 0) + jl(1, 3) + jr(1, 0) + jr(1, 3) + jg(1, 2),
        jl(2, 0) + jl(2, 3) + jr(2, 0) + jr(2, 3) + jg(2, 1),
        jl(3, 2) + jl(3, 1) + jr(3, 2) + jr(3, 1),
    };
}

double gillespie_horizon(std::span<const Channel> channels, const Vec4& p, double n_jumps) {
    double activity = 0.0;
    for (const Channel& c : channels) activity += c.rate * p(c.from_level);
    if (activity <= 0.0) throw absorbing_state_error("network has zero total activity");
    return n_jumps / activity;
}

namespace {

// 53-bit uniform in [0,1) from a mt19937_64 draw; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GillespieResult gillespie_sample(std::span<const Channel> channels, const CountingSpec& counting,
                                 double horizon, std::uint64_t seed, int n_batches) {
    if (n_batches < 2) throw invalid_parameter_error("gillespie: need at least 2 batches");
    if (!(horizon > 0.0)) throw invalid_parameter_error("gillespie: horizon must be > 0");

    struct Exit {
        int channel;
        double rate;
    };
    std::array<std::vector<Exit>, 4> exits;
    std::array<double, 4> exit_rate{};
    std::vector<double> weight(channels.size());
    std::vector<int> target(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const Channel& c = channels[i];
        if (c.rate > 0.0) {
            exits[c.from_level].push_back({static_cast<int>(i), c.rate});
            exit_rate[c.from_level] += c.rate;
        }
        weight[i] = counting.weight(c.label);
        target[i] = c.to_level;
    }

    std::mt19937_64 rng(seed);
    int state = 0;
    // A short unrecorded burn-in washes out the choice of initial state.
    auto step = [&](double& t) {
        const double lam = exit_rate[state];
        if (lam <= 0.0) {
            throw absorbing_state_error(std::string("absorbing state ") + std::to_string(state) +
                                        " reached in Gillespie sampling");
        }
        double u = uniform01(rng);
        t += -std::log1p(-u) / lam;
        double pick = uniform01(rng) * lam;
        double acc = 0.0;
        int chosen = exits[state].back().channel;
        for (const Exit& e : exits[state]) {
            acc += e.rate;
            if (pick <= acc) {
                chosen = e.channel;
                break;
            }
        }
        state = target[chosen];
        return chosen;
    };

    const double burn = 0.01 * horizon;
    for (double t = 0.0; t < burn;) step(t);

    const double batch_len = horizon / n_batches;
    std::vector<double> batch_counts(n_batches, 0.0);
    double t = 0.0;
    double count = 0.0;
    std::uint64_t jumps = 0;
    int batch = 0;
    double batch_start_count = 0.0;
    while (batch < n_batches) {
        double t_next = t;
        const int chosen = step(t_next);
        while (batch < n_batches && t_next > (batch + 1) * batch_len) {
            batch_counts[batch] = count - batch_start_count;
            batch_start_count = count;
            ++batch;
        }
        if (batch >= n_batches) break;
        t = t_next;
        count += weight[chosen];
        ++jumps;
    }

    const double mean = std::accumulate(batch_counts.begin(), batch_counts.end(), 0.0) /
                        static_cast<double>(n_batches);
    double ss = 0.0;
    for (double c : batch_counts) ss += (c - mean) * (c - mean);
    const double var_counts = ss / static_cast<double>(n_batches - 1);

    GillespieResult r;
    r.mean_rate = mean / batch_len;
    r.variance_rate = var_counts / batch_len;
    r.mean_stderr = std::sqrt(var_counts / static_cast<double>(n_batches)) / batch_len;
    r.variance_stderr = r.variance_rate * std::sqrt(2.0 / static_cast<double>(n_batches - 1));
    r.n_jumps = jumps;
    r.seed = seed;
    r.n_batches = n_batches;
    r.horizon = horizon;
    return r;
}

}  // namespace photodev
