#include "pgg/sweep.hpp"

#include <cmath>
#include <exception>
#include <filesystem>

#include <omp.h>

#include "pgg/evolution.hpp"
#include "pgg/io.hpp"

namespace pgg {

namespace {

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ValidationError(field, message);
}

bool strictly_ascending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

struct Task {
    std::size_t rho_index;
    std::size_t r_index;
    int replicate;
};

std::vector<Task> enumerate_tasks(const SweepConfig& config) {
    std::vector<Task> tasks;
    tasks.reserve(config.rho_values.size() * config.r_values.size() * static_cast<std::size_t>(config.replicates));
    for (std::size_t rho = 0; rho < config.rho_values.size(); ++rho)
        for (std::size_t r = 0; r < config.r_values.size(); ++r)
            for (int rep = 0; rep < config.replicates; ++rep) tasks.push_back({rho, r, rep});
    return tasks;
}

SimParams params_for(const SweepConfig& config, const Task& task) {
    SimParams p = config.base;
    p.r = config.r_values[task.r_index];
    p.rho_A = config.rho_values[task.rho_index];
    p.seed = derive_seed(config.master_seed, task.r_index, task.rho_index, task.replicate);
    return p;
}

ConvergenceStats run_task(const SweepConfig& config, const Task& task) {
    const SimParams params = params_for(config, task);
    const RunResult run = run_simulation(params, RunOptions{.record_lineage = false});
    if (config.series_dir) {
        const auto file = std::filesystem::path(*config.series_dir) /
                          ("run_rho" + std::to_string(task.rho_index) + "_r" + std::to_string(task.r_index) +
                           "_rep" + std::to_string(task.replicate) + ".csv");
        write_run_csv(run, file);
    }
    return convergence_statistics(run.records, config.convergence_fraction);
}

std::string describe(const SweepConfig& config, const Task& task) {
    return "cell rho_A=" + format_real(config.rho_values[task.rho_index]) +
           " r=" + format_real(config.r_values[task.r_index]) + " replicate=" + std::to_string(task.replicate);
}

// Deterministic reduction over per-task statistics stored in task order.
SweepResult assemble(const SweepConfig& config, const std::vector<ConvergenceStats>& stats) {
    SweepResult result;
    result.config = config;
    const auto reps = static_cast<std::size_t>(config.replicates);
    std::size_t at = 0;
    for (std::size_t rho = 0; rho < config.rho_values.size(); ++rho) {
        ResponseCurve curve;
        for (std::size_t r = 0; r < config.r_values.size(); ++r) {
            SweepCell cell;
            cell.r = config.r_values[r];
            cell.rho_A = config.rho_values[rho];
            cell.replicate_count = config.replicates;
            cell.replicates.assign(stats.begin() + static_cast<std::ptrdiff_t>(at),
                                   stats.begin() + static_cast<std::ptrdiff_t>(at + reps));
            at += reps;

            std::vector<double> pc, pac, coop;
            for (const auto& s : cell.replicates) {
                pc.push_back(s.mean_p_C);
                pac.push_back(s.mean_p_AC);
                coop.push_back(s.coop_frequency);
            }
            const auto c = mean_sd(pc);
            const auto ac = mean_sd(pac);
            cell.mean_p_C = c.mean;
            cell.sd_p_C = c.sd;
            cell.mean_p_AC = ac.mean;
            cell.sd_p_AC = ac.sd;
            cell.mean_coop_frequency = mean_sd(coop).mean;
            curve.points.push_back({cell.r, cell.mean_p_C});
            result.cells.push_back(std::move(cell));
        }
        CriticalPoint cp;
        cp.rho_A = config.rho_values[rho];
        if (curve.points.size() >= 2) cp.r_critical = extract_critical_r(curve, config.threshold);
        result.critical_points.push_back(cp);
    }
    return result;
}

[[noreturn]] void rethrow_for(const SweepConfig& config, const Task& task, const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& e) {
        throw SweepError(describe(config, task) + ": " + e.what());
    }
}

}  // namespace

SweepConfig validate_sweep_config(const SweepConfig& config) {
    require(!config.r_values.empty(), "r_values", "r_values must not be empty");
    require(!config.rho_values.empty(), "rho_values", "rho_values must not be empty");
    require(strictly_ascending(config.r_values), "r_values", "r_values must be strictly ascending");
    require(strictly_ascending(config.rho_values), "rho_values", "rho_values must be strictly ascending");
    require(config.replicates >= 1, "replicates", "replicates must be >= 1");
    require(config.parallelism >= 1, "parallelism", "parallelism must be >= 1");
    require(std::isfinite(config.threshold), "threshold", "threshold must be finite");
    require(config.convergence_fraction > 0.0 && config.convergence_fraction <= 1.0, "convergence_fraction",
            "convergence_fraction out of (0,1]");
    for (double r : config.r_values)
        for (double rho : config.rho_values) {
            SimParams p = config.base;
            p.r = r;
            p.rho_A = rho;
            validate_params(p);
        }
    return config;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t r_index, std::size_t rho_index, int replicate) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ (0x243F6A8885A308D3ULL + static_cast<std::uint64_t>(r_index)));
    h = mix64(h ^ (0x13198A2E03707344ULL + static_cast<std::uint64_t>(rho_index)));
    h = mix64(h ^ (0xA4093822299F31D0ULL + static_cast<std::uint64_t>(static_cast<std::uint32_t>(replicate))));
    return h;
}

MeanSd mean_sd(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

SweepResult run_sweep_serial(const SweepConfig& config, const ProgressSink& progress) {
    const SweepConfig checked = validate_sweep_config(config);
    const auto tasks = enumerate_tasks(checked);
    std::vector<ConvergenceStats> stats(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        try {
            stats[i] = run_task(checked, tasks[i]);
        } catch (...) {
            rethrow_for(checked, tasks[i], std::current_exception());
        }
        if (progress) progress({i + 1, tasks.size(), tasks[i].rho_index, tasks[i].r_index, tasks[i].replicate});
    }
    return assemble(checked, stats);
}

SweepResult run_sweep(const SweepConfig& config, const ProgressSink& progress) {
    const SweepConfig checked = validate_sweep_config(config);
    const auto tasks = enumerate_tasks(checked);
    const auto count = static_cast<std::int64_t>(tasks.size());
    std::vector<ConvergenceStats> stats(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::size_t completed = 0;

#pragma omp parallel for schedule(dynamic, 1) num_threads(checked.parallelism)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto& task = tasks[static_cast<std::size_t>(i)];
        try {
            stats[static_cast<std::size_t>(i)] = run_task(checked, task);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
#pragma omp critical(pgg_sweep_progress)
        {
            ++completed;
            if (progress) progress({completed, tasks.size(), task.rho_index, task.r_index, task.replicate});
        }
    }

    // Lowest failing task wins so the reported cell is deterministic.
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (errors[i]) rethrow_for(checked, tasks[i], errors[i]);
    return assemble(checked, stats);
}

}  // namespace pgg
