#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pgg/evolution.hpp"
#include "pgg/model.hpp"
#include "pgg/sweep.hpp"

namespace pgg {

/// Shortest round-trippable text at 6 significant digits, '.' decimal point,
/// independent of the global locale.
std::string format_real(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

// --- CSV ------------------------------------------------------------------

inline constexpr std::string_view kRunCsvHeader = "generation,mean_p_C,mean_p_AC,coop_freq";
inline constexpr std::string_view kSweepCsvHeader =
    "policy,k,r,rho_A,replicates,mean_p_C,sd_p_C,mean_p_AC,sd_p_AC,mean_coop_freq,r_critical";

void write_run_csv(const RunResult& run, const std::filesystem::path& path);
void write_run_csv(const RunResult& run, std::ostream& out);

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Same field names as the sweep CSV, plus the configuration.
void write_sweep_json(const SweepResult& result, const std::filesystem::path& path);

/// Malformed CSV input; what() carries the line number.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepCsvRow {
    std::string policy;
    int k = 0;
    double r = 0.0;
    double rho_A = 0.0;
    int replicates = 0;
    double mean_p_C = 0.0;
    double sd_p_C = 0.0;
    double mean_p_AC = 0.0;
    double sd_p_AC = 0.0;
    double mean_coop_freq = 0.0;
    std::optional<double> r_critical;
};

std::vector<SweepCsvRow> read_sweep_csv(std::istream& in);
std::vector<SweepCsvRow> read_sweep_csv(const std::filesystem::path& path);

// --- key=value configuration ---------------------------------------------

/// Configuration problem. line() is 0 for values that came from flags.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string field, int line, const std::string& message)
        : ValidationError(std::move(field), (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Raw key -> value pairs; later assignments of a key replace earlier ones.
using ConfigEntries = std::map<std::string, ConfigEntry, std::less<>>;

/// Every accepted configuration key, in documentation order.
const std::vector<std::string_view>& config_keys();

/// Splits `key=value` lines. '#' starts a comment; blank lines are ignored.
/// Throws ConfigError on malformed lines or unknown keys.
ConfigEntries parse_config_entries(std::string_view text);

/// Typed sweep configuration from raw entries; absent keys take defaults
/// (k=4, mu=0.01, generations=10000, 32x32 grid, games_per_focal=k+1).
SweepConfig build_sweep_config(const ConfigEntries& entries);

SweepConfig parse_config(std::string_view text);

/// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);
double parse_real(std::string_view text);
std::int64_t parse_integer(std::string_view text);
std::uint64_t parse_unsigned(std::string_view text);

}  // namespace pgg
