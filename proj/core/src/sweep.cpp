#include "photodev/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "photodev/errors.hpp"
#include "photodev/fcs.hpp"

namespace photodev {

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::U: return "U";
        case SweepAxis::nu: return "nu";
        case SweepAxis::z: return "z";
        case SweepAxis::V: return "V";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error(where + ": cannot parse number '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) parts.push_back(trim(tok));
    return parts;
}

std::vector<double> parse_grid(const std::string& value, const std::string& where) {
    std::vector<double> grid;
    if (value.find(':') != std::string::npos) {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw config_error(where + ": grid must be start:stop:step");
        grid = make_grid(parse_double(parts[0], where), parse_double(parts[1], where),
                         parse_double(parts[2], where));
    } else {
        for (const auto& tok : split(value, ',')) grid.push_back(parse_double(tok, where));
    }
    if (grid.empty()) throw config_error(where + ": empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if ((grid[i] - grid[i - 1]) * (grid[1] - grid[0]) <= 0.0) {
            throw config_error(where + ": grid must be strictly monotone");
        }
    }
    return grid;
}

const std::set<std::string> kKnownOutputs = {"J",  "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot",
                                             "Q",  "G",    "D",    "SNR"};

void set_key(SweepConfig& cfg, const std::string& key, const std::string& value,
             const std::string& where) {
    auto num = [&] { return parse_double(value, where); };
    if (key == "eps_H") cfg.base.eps_H = num();
    else if (key == "eps_L") cfg.base.eps_L = num();
    else if (key == "U") cfg.base.U = num();
    else if (key == "mu") cfg.base.mu = num();
    else if (key == "V") cfg.base.V = num();
    else if (key == "beta") cfg.base.beta = num();
    else if (key == "beta_gamma") cfg.base.beta_gamma = num();
    else if (key == "Gamma") cfg.base.Gamma = num();
    else if (key == "z") cfg.base.z = num();
    else if (key == "nu") cfg.base.nu = num();
    else if (key == "seed") {
        try {
            std::size_t pos = 0;
            cfg.seed = std::stoull(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw config_error(where + ": cannot parse seed '" + value + "'");
        }
    }
    else if (key == "out") cfg.out_path = value;
    else if (key == "axis") {
        if (value == "U") cfg.axis = SweepAxis::U;
        else if (value == "nu") cfg.axis = SweepAxis::nu;
        else if (value == "z") cfg.axis = SweepAxis::z;
        else if (value == "V") cfg.axis = SweepAxis::V;
        else throw config_error(where + ": axis must be one of U, nu, z, V");
    } else if (key == "grid") {
        cfg.grid = parse_grid(value, where);
    } else if (key == "outputs") {
        cfg.outputs.clear();
        for (const auto& tok : split(value, ',')) {
            if (!kKnownOutputs.count(tok)) {
                throw config_error(where + ": unknown observable '" + tok + "'");
            }
            cfg.outputs.insert(tok);
        }
    } else {
        throw config_error(where + ": unknown key '" + key + "'");
    }
}

DeviceParams with_axis(DeviceParams p, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::U: p.U = value; break;
        case SweepAxis::nu: p.nu = value; break;
        case SweepAxis::z: p.z = value; break;
        case SweepAxis::V: p.V = value; break;
    }
    return p;
}

}  // namespace

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step != 0.0) || !std::isfinite(step)) throw config_error("grid step must be nonzero");
    const double span = (stop - start) / step;
    if (span < -1e-9) throw config_error("grid step sign does not reach stop from start");
    const auto n = static_cast<std::size_t>(std::llround(span));
    if (std::abs(span - static_cast<double>(n)) > 1e-6) {
        throw config_error("grid step does not evenly divide [start, stop]");
    }
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = start + static_cast<double>(i) * step;
    grid.back() = stop;
    return grid;
}

SweepConfig parse_config(std::istream& in, const std::string& origin) {
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw config_error(where + ": expected 'key = value'");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
    validate_params(cfg.base);
    if (cfg.axis) {
        for (double v : cfg.grid) validate_params(with_axis(cfg.base, *cfg.axis, v));
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

void apply_override(SweepConfig& cfg, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got '" + key_value + "'");
    set_key(cfg, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)),
            "--set " + key_value);
    validate_params(cfg.base);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

ResultRow compute_row(const DeviceParams& p, const std::set<std::string>& outputs) {
    ResultRow row;
    row.U = p.U;
    row.nu = p.nu;
    row.z = p.z;
    row.V = p.V;

    const DeviceSolution sol = solve_device(p);
    const ThermoReport rep = compute_thermo(sol);
    row.residual = rep.residual;
    row.regime = rep.regime;
    if (outputs.count("J")) row.J = rep.J;
    if (outputs.count("JQ_l")) row.JQ_l = rep.JQ_l;
    if (outputs.count("JQ_r")) row.JQ_r = rep.JQ_r;
    if (outputs.count("JQ_gamma")) row.JQ_gamma = rep.JQ_gamma;
    if (outputs.count("sigma_dot")) row.sigma_dot = rep.sigma_dot;
    if (outputs.count("Q")) {
        if (rep.Q) row.Q = *rep.Q;
        else row.Q_undefined = true;
    }
    if (outputs.count("D") || outputs.count("SNR")) {
        const NoiseReport nr =
            noise_drazin(counting_spec_particles(BathId::l), sol.liouvillian, sol.jumps, sol.state);
        if (outputs.count("D")) row.D = nr.D;
        if (outputs.count("SNR")) row.SNR = nr.snr;
    }
    if (outputs.count("G")) {
        const ConductanceResult g = conductance(p);
        row.G = g.G;
        row.residual = std::max(row.residual, g.max_residual);
    }
    return row;
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg, int jobs) {
    if (!cfg.axis) throw config_error("sweep requires an axis");
    if (cfg.grid.empty()) throw config_error("sweep requires a grid");
    std::vector<ResultRow> rows(cfg.grid.size());
    parallel_for(cfg.grid.size(), jobs, [&](std::size_t i) {
        rows[i] = compute_row(with_axis(cfg.base, *cfg.axis, cfg.grid[i]), cfg.outputs);
    });
    return rows;
}

namespace {

PresetResult run_points(std::string name, std::string comments, std::vector<DeviceParams> points,
                        const std::set<std::string>& outputs, int jobs) {
    PresetResult res;
    res.name = std::move(name);
    res.comments = std::move(comments);
    res.rows.resize(points.size());
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        res.rows[i] = compute_row(points[i], outputs);
    });
    return res;
}

}  // namespace

PresetResult run_preset(const std::string& name, int jobs) {
    DeviceParams base;  // reference device of the figure captions

    if (name == "fig1b") {
        const std::vector<double> nus = {0.0, 1.0, 10.0};
        const std::vector<double> grid = make_grid(0.0, 2.5, 0.01);

        DeviceParams g0_params = base;
        g0_params.U = 0.0;
        g0_params.nu = 0.0;
        const ConductanceResult g0 = conductance(g0_params);

        std::vector<DeviceParams> points;
        for (double nu : nus) {
            for (double u : grid) {
                DeviceParams p = base;
                p.nu = nu;
                p.U = u;
                p.V = 0.0;
                points.push_back(p);
            }
        }
        PresetResult res;
        res.name = name;
        res.rows.resize(points.size());
        std::atomic<int> warnings{g0.richardson_ok ? 0 : 1};
        parallel_for(points.size(), jobs, [&](std::size_t i) {
            ResultRow row;
            row.U = points[i].U;
            row.nu = points[i].nu;
            row.z = points[i].z;
            row.V = 0.0;
            const ConductanceResult g = conductance(points[i]);
            if (!g.richardson_ok) warnings.fetch_add(1);
            row.G = g.G / g0.G;
            row.residual = g.max_residual;
            row.regime = Regime::equilibrium;  // conductance is the V -> 0 response
            res.rows[i] = row;
        });
        std::ostringstream os;
        os << "# preset: fig1b (conductance vs U for nu in {0,1,10}; z = 1, V -> 0)\n"
           << "# U grid: 0:2.5:0.01\n"
           << "# G column: G/G0, with G0 = conductance at U=0, nu=0, z=1\n"
           << "# G0 = " << format_double(g0.G) << "\n"
           << "# richardson_warnings: " << warnings.load() << "\n";
        res.comments = os.str();
        return res;
    }

    if (name == "fig2") {
        base.V = 1.0;
        std::vector<DeviceParams> points;
        for (double z : {1.0, 0.1}) {
            for (double nu : {25.0, 50.0, 100.0}) {
                for (double u : make_grid(0.0, 2.5, 0.01)) {
                    DeviceParams p = base;
                    p.z = z;
                    p.nu = nu;
                    p.U = u;
                    points.push_back(p);
                }
            }
        }
        return run_points(
            name,
            "# preset: fig2 (entropy production, |Q|, SNR vs U; V = 1)\n"
            "# z in {1, 0.1}, nu in {25, 50, 100}, U grid 0:2.5:0.01\n"
            "# nu values are not printed in the paper; curve identity is not the target\n",
            std::move(points),
            {"J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "Q", "D", "SNR"}, jobs);
    }

    if (name == "fig3") {
        base.V = 1.0;
        base.nu = 100.0;
        std::vector<DeviceParams> points;
        for (double u : {0.0, 0.5, 1.0, 1.5, 2.0}) {
            for (double z : make_grid(0.0, 1.0, 0.005)) {
                DeviceParams p = base;
                p.U = u;
                p.z = z;
                points.push_back(p);
            }
        }
        return run_points(name,
                          "# preset: fig3 (coefficient of performance vs z; V = 1, nu = 100)\n"
                          "# U in {0, 0.5, 1, 1.5, 2}, z grid 0:1:0.005\n",
                          std::move(points), {"J", "JQ_gamma", "sigma_dot", "Q"}, jobs);
    }

    if (name == "bias") {
        base.nu = 50.0;
        std::vector<DeviceParams> points;
        for (double z : {1.0, 0.1}) {
            for (double u : {0.0, 1.0, 2.0}) {
                for (double v : make_grid(0.0, 5.0, 0.02)) {
                    DeviceParams p = base;
                    p.z = z;
                    p.U = u;
                    p.V = v;
                    points.push_back(p);
                }
            }
        }
        return run_points(name,
                          "# preset: bias (J and Q vs V; nu = 50)\n"
                          "# z in {1, 0.1}, U in {0, 1, 2}, V grid 0:5:0.02\n"
                          "# transport regime boundaries: V = 2|eps_H| = 2 and V = 2|eps_L| = 4\n",
                          std::move(points), {"J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "Q"},
                          jobs);
    }

    throw config_error("unknown preset '" + name + "' (expected fig1b, fig2, fig3 or bias)");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

namespace {

void append_field(std::string& line, const std::optional<double>& v) {
    line.push_back(',');
    if (v) line += format_double(*v);
}

}  // namespace

void write_csv(std::span<const ResultRow> rows, std::ostream& out, const std::string& comments) {
    if (rows.empty()) throw invalid_parameter_error("write_csv: no rows");
    out << comments << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        std::string line = format_double(r.U);
        append_field(line, r.nu);
        append_field(line, r.z);
        append_field(line, r.V);
        append_field(line, r.J);
        append_field(line, r.JQ_l);
        append_field(line, r.JQ_r);
        append_field(line, r.JQ_gamma);
        append_field(line, r.sigma_dot);
        line.push_back(',');
        if (r.Q_undefined) line += "undef";
        else if (r.Q) line += format_double(*r.Q);
        append_field(line, r.G);
        append_field(line, r.D);
        append_field(line, r.SNR);
        append_field(line, r.residual);
        line.push_back(',');
        line += regime_name(r.regime);
        out << line << "\n";
    }
}

void write_csv(std::span<const ResultRow> rows, const std::string& path,
               const std::string& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file '" + path + "'");
    write_csv(rows, out, comments);
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace photodev
