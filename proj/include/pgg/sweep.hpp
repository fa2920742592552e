#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgg/analytics.hpp"
#include "pgg/model.hpp"

namespace pgg {

struct SweepConfig {
    SimParams base;  // r, rho_A and seed are overridden per run
    std::vector<double> r_values;
    std::vector<double> rho_values;
    int replicates = 100;
    std::uint64_t master_seed = 0;
    int parallelism = 1;
    double threshold = kDefaultCriticalThreshold;
    double convergence_fraction = kDefaultConvergenceFraction;
    std::optional<std::string> series_dir;  // per-run time series CSVs when set
};

/// Throws ValidationError if any (r, rho_A) combination would not validate or
/// the grids are empty or not strictly ascending.
SweepConfig validate_sweep_config(const SweepConfig& config);

struct SweepCell {
    double r = 0.0;
    double rho_A = 0.0;
    double mean_p_C = 0.0;
    double sd_p_C = 0.0;
    double mean_p_AC = 0.0;
    double sd_p_AC = 0.0;
    double mean_coop_frequency = 0.0;
    int replicate_count = 0;
    std::vector<ConvergenceStats> replicates;  // in replicate order
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells;  // rho-major, ascending r within each rho
    std::vector<CriticalPoint> critical_points;  // one per rho_A, ascending

    const SweepCell& cell(std::size_t rho_index, std::size_t r_index) const {
        return cells.at(rho_index * config.r_values.size() + r_index);
    }
};

struct SweepProgress {
    std::size_t completed;
    std::size_t total;
    std::size_t rho_index;
    std::size_t r_index;
    int replicate;
};
using ProgressSink = std::function<void(const SweepProgress&)>;

/// A run inside a sweep failed; what() names the cell and replicate.
class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seed of one replicate, an avalanche hash of the full tuple.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t r_index, std::size_t rho_index, int replicate);

/// Runs every replicate of every cell on up to config.parallelism OpenMP
/// threads. The result does not depend on parallelism or completion order.
SweepResult run_sweep(const SweepConfig& config, const ProgressSink& progress = {});

/// Single-threaded reference for run_sweep.
SweepResult run_sweep_serial(const SweepConfig& config, const ProgressSink& progress = {});

/// Mean and sample standard deviation of one field across replicates.
struct MeanSd {
    double mean;
    double sd;
};
MeanSd mean_sd(std::span<const double> values);

}  // namespace pgg
