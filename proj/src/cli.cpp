#include "pgg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pgg/analytics.hpp"
#include "pgg/evolution.hpp"
#include "pgg/io.hpp"
#include "pgg/sweep.hpp"

namespace pgg::cli {

namespace {

// Config keys that describe a single run; sweeps accept every key.
constexpr std::string_view kRunKeys[] = {
    "policy", "k", "mu", "generations", "grid_width", "grid_height", "games_per_focal",
    "init", "mimic_mode", "fitness_shift",
};

struct FlagSet {
    std::map<std::string, std::string> values;

    void bind(CLI::App& app, std::string_view key, const std::string& help) {
        app.add_option_function<std::string>(
            "--" + std::string(key), [this, k = std::string(key)](const std::string& v) { values[k] = v; }, help);
    }
};

ConfigEntries load_entries(const std::optional<std::string>& config_path) {
    if (!config_path) return {};
    std::ifstream in(*config_path, std::ios::binary);
    if (!in) throw ValidationError("config", "cannot read config file '" + *config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    return parse_config_entries(text.str());
}

// Flags > config file > defaults.
void overlay(ConfigEntries& entries, const FlagSet& flags) {
    for (const auto& [key, value] : flags.values) entries[key] = ConfigEntry{value, 0};
}

std::string or_none(const std::optional<double>& v) { return v ? format_real(*v) : "none"; }

struct Common {
    std::optional<std::string> out;
    std::optional<std::string> config;
    std::optional<std::string> seed;
    std::optional<int> parallelism;

    void bind(CLI::App& app) {
        app.add_option("--out", out, "Output CSV path");
        app.add_option("--config", config, "key=value configuration file");
        app.add_option("--seed", seed, "64-bit seed");
        app.add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
    }
};

int simulate(const Common& common, const FlagSet& flags, const std::optional<std::string>& r,
             const std::optional<std::string>& rho, std::ostream& out) {
    ConfigEntries entries = load_entries(common.config);
    overlay(entries, flags);
    if (r) entries["r_values"] = ConfigEntry{*r, 0};
    if (rho) entries["rho_values"] = ConfigEntry{*rho, 0};
    if (!entries.contains("rho_values")) entries["rho_values"] = ConfigEntry{"0", 0};
    if (!entries.contains("r_values")) throw ValidationError("r", "missing --r");
    if (common.seed) entries["master_seed"] = ConfigEntry{*common.seed, 0};

    // Errors name the run-level flag rather than the sweep list it maps onto.
    SweepConfig cfg;
    try {
        cfg = build_sweep_config(entries);
    } catch (const ConfigError& e) {
        std::string message = e.what();
        if (e.line() == 0) {
            auto rename = [&](const std::string& from, const std::string& to) {
                if (auto at = message.find(from); at != std::string::npos) message.replace(at, from.size(), to);
            };
            rename("--rho_values", "--rho");
            rename("--r_values", "--r");
            rename("rho_values", "rho");
            rename("r_values", "r");
        }
        throw ValidationError(e.field(), message);
    }
    if (cfg.r_values.size() != 1) throw ValidationError("r", "simulate takes a single r");
    if (cfg.rho_values.size() != 1) throw ValidationError("rho_A", "simulate takes a single rho");

    SimParams params = cfg.base;
    params.r = cfg.r_values.front();
    params.rho_A = cfg.rho_values.front();
    params.seed = cfg.master_seed;

    const RunResult run = run_simulation(params);
    if (common.out) write_run_csv(run, std::filesystem::path(*common.out));

    double sum_c = 0.0;
    double sum_ac = 0.0;
    for (const auto& g : run.final_genomes) {
        sum_c += g.p_C;
        sum_ac += g.p_AC;
    }
    const double n = static_cast<double>(run.final_genomes.size());
    const auto pick = static_cast<std::size_t>(mix64(params.seed) % run.final_genomes.size());
    const LodSeries lod = reconstruct_lod(run, pick);
    out << "final_mean_p_C=" << format_real(sum_c / n) << " final_mean_p_AC=" << format_real(sum_ac / n)
        << " generations=" << params.generations;
    if (lod.genomes.size() >= 4) out << " lod_mean_p_C=" << format_real(lod_statistic(lod));
    out << '\n';
    return kExitOk;
}

int sweep(const Common& common, const FlagSet& flags, const std::optional<std::string>& json_path,
          bool show_progress, std::ostream& out, std::ostream& err) {
    ConfigEntries entries = load_entries(common.config);
    overlay(entries, flags);
    if (common.seed) entries["master_seed"] = ConfigEntry{*common.seed, 0};
    if (common.parallelism) entries["parallelism"] = ConfigEntry{std::to_string(*common.parallelism), 0};
    const SweepConfig cfg = build_sweep_config(entries);

    ProgressSink progress;
    if (show_progress)
        progress = [&err](const SweepProgress& p) { err << "progress " << p.completed << '/' << p.total << '\n'; };
    const SweepResult result = run_sweep(cfg, progress);

    if (common.out) write_sweep_csv(result, std::filesystem::path(*common.out));
    if (json_path) write_sweep_json(result, std::filesystem::path(*json_path));
    for (const auto& cp : result.critical_points)
        out << "rho_A=" << format_real(cp.rho_A) << " r_critical=" << or_none(cp.r_critical) << '\n';
    return kExitOk;
}

int predict(int k, const std::string& rho_list, std::ostream& out) {
    if (k < 1) throw ValidationError("k", "--k must be >= 1");
    std::vector<double> rhos;
    try {
        rhos = parse_real_list(rho_list);
    } catch (const std::invalid_argument& e) {
        throw ValidationError("rho", std::string("--rho: ") + e.what());
    }
    for (double rho : rhos)
        if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("rho", "--rho: value " + format_real(rho) + " out of [0,1]");

    const auto bounds = dilemma_bounds(k);
    out << "k,rho_A,r_low,r_high,r_critical\n";
    for (double rho : rhos)
        out << k << ',' << format_real(rho) << ',' << format_fixed(bounds.r_low, 6) << ','
            << format_fixed(bounds.r_high, 6) << ',' << format_fixed(predicted_critical_r(k, rho), 6) << '\n';
    return kExitOk;
}

int critical(const std::string& path, double threshold, std::ostream& out) {
    const auto rows = read_sweep_csv(std::filesystem::path(path));
    if (rows.empty()) throw CsvError("no data rows in '" + path + "'");
    const int k = rows.front().k;
    if (std::any_of(rows.begin(), rows.end(), [k](const SweepCsvRow& row) { return row.k != k; }))
        throw CsvError("rows disagree on k");

    std::map<double, ResponseCurve> curves;
    for (const auto& row : rows) curves[row.rho_A].points.push_back({row.r, row.mean_p_C});

    out << "rho_A,r_observed,r_predicted,abs_error\n";
    for (auto& [rho, curve] : curves) {
        std::sort(curve.points.begin(), curve.points.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.r < b.r; });
        std::optional<double> observed;
        if (curve.points.size() >= 2) {
            try {
                observed = extract_critical_r(curve, threshold);
            } catch (const std::invalid_argument& e) {
                throw CsvError("rho_A=" + format_real(rho) + ": " + e.what());
            }
        }
        if (!(rho >= 0.0 && rho <= 1.0)) throw CsvError("rho_A=" + format_real(rho) + " out of [0,1]");
        const double predicted = predicted_critical_r(k, rho);
        out << format_real(rho) << ',' << or_none(observed) << ',' << format_real(predicted) << ','
            << (observed ? format_real(std::abs(*observed - predicted)) : std::string("none")) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evolutionary public goods game with AI agents in player neighborhoods", "pgg"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one evolutionary simulation");
    Common sim_common;
    sim_common.bind(*sim);
    FlagSet sim_flags;
    for (auto key : kRunKeys) sim_flags.bind(*sim, key, "Run parameter '" + std::string(key) + "'");
    std::optional<std::string> sim_r;
    std::optional<std::string> sim_rho;
    sim->add_option("--r", sim_r, "Synergy factor");
    sim->add_option("--rho", sim_rho, "Agent density in [0,1]");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Replicate battery over an (r, rho_A) grid");
    Common sweep_common;
    sweep_common.bind(*sw);
    FlagSet sweep_flags;
    for (auto key : config_keys())
        if (key != "parallelism") sweep_flags.bind(*sw, key, "Config key '" + std::string(key) + "'");
    std::optional<std::string> json_path;
    bool show_progress = false;
    sw->add_option("--json", json_path, "Also write a JSON mirror of the result");
    sw->add_flag("--progress", show_progress, "Report completed runs on stderr");

    // predict
    auto* pr = app.add_subcommand("predict", "Closed-form dilemma bounds and critical synergy");
    Common predict_common;
    predict_common.bind(*pr);
    int predict_k = kDefaultNeighbors;
    std::string predict_rho = "0,0.25,0.5,0.75,1";
    pr->add_option("--k", predict_k, "Neighbors per group");
    pr->add_option("--rho", predict_rho, "Comma-separated agent densities");

    // critical
    auto* cr = app.add_subcommand("critical", "Observed vs predicted critical r from a sweep CSV");
    Common critical_common;
    critical_common.bind(*cr);
    std::string critical_in;
    double threshold = kDefaultCriticalThreshold;
    cr->add_option("input,--in", critical_in, "Sweep CSV")->required();
    cr->add_option("--threshold", threshold, "Cooperation threshold");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return simulate(sim_common, sim_flags, sim_r, sim_rho, out);
        if (sw->parsed()) return sweep(sweep_common, sweep_flags, json_path, show_progress, out, err);
        if (pr->parsed()) return predict(predict_k, predict_rho, out);
        if (cr->parsed()) return critical(critical_in, threshold, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CsvError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace pgg::cli
