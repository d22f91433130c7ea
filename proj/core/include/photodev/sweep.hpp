#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "photodev/model.hpp"
#include "photodev/thermo.hpp"

namespace photodev {

enum class SweepAxis { U, nu, z, V };
const char* axis_name(SweepAxis a);

struct SweepConfig {
    DeviceParams base;
    std::optional<SweepAxis> axis;  // required for `sweep`, unused by point commands
    std::vector<double> grid;       // strictly monotone
    std::set<std::string> outputs = {"J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "Q", "D", "SNR"};
    std::uint64_t seed = 0;
    std::string out_path;
};

// Flat `key = value` text, one per line, '#' comments. Unknown keys are
// rejected with the offending line number; range violations name the field.
// Grid syntax: "start:stop:step" (inclusive) or a comma-separated list.
SweepConfig load_config(const std::string& path);
SweepConfig parse_config(std::istream& in, const std::string& origin);

// One repeatable `--set key=value` override, validated like a config line.
void apply_override(SweepConfig& cfg, const std::string& key_value);

// Inclusive range helper used by configs and presets.
std::vector<double> make_grid(double start, double stop, double step);

struct ResultRow {
    double U = 0.0, nu = 0.0, z = 0.0, V = 0.0;
    std::optional<double> J, JQ_l, JQ_r, JQ_gamma, sigma_dot, Q, G, D, SNR;
    bool Q_undefined = false;  // emit the "undef" sentinel instead of a number
    double residual = 0.0;
    Regime regime = Regime::equilibrium;
};

inline constexpr const char* kCsvHeader =
    "U,nu,z,V,J,JQ_l,JQ_r,JQ_gamma,sigma_dot,Q,G,D,SNR,residual,regime";

// Full observable set for one parameter point, restricted to `outputs`.
ResultRow compute_row(const DeviceParams& p, const std::set<std::string>& outputs);

std::vector<ResultRow> run_sweep(const SweepConfig& cfg, int jobs = 0);

struct PresetResult {
    std::string name;
    std::vector<ResultRow> rows;
    std::string comments;  // '#'-prefixed metadata block for the CSV
};

// fig1b | fig2 | fig3 | bias. jobs = 0 means machine parallelism.
PresetResult run_preset(const std::string& name, int jobs = 0);

// Full-precision scientific notation ("%.16e"), round-trip exact.
std::string format_double(double v);

void write_csv(std::span<const ResultRow> rows, std::ostream& out,
               const std::string& comments = {});
void write_csv(std::span<const ResultRow> rows, const std::string& path,
               const std::string& comments = {});

// Dispatches n independent point evaluations over a worker pool; results are
// indexed, so output order never depends on scheduling. jobs = 0 uses the
// machine's parallelism, jobs = 1 runs serially.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace photodev
